#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lfmm/detect.hpp"
#include "lfmm/error.hpp"
#include "lfmm/graph.hpp"
#include "lfmm/io.hpp"
#include "lfmm/membership.hpp"
#include "lfmm/parallel.hpp"
#include "lfmm/random.hpp"

namespace lfmm {

inline constexpr double missing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return std::isnan(v); }

/// Gini-Simpson index 1 - sum_j m(j)^2 of a membership row. Rows that do not
/// sum to one (aggregate-normalized rows) are rescaled first; an all-zero row
/// has no diversity value and yields `missing`.
inline double gsi(std::span<const double> row) {
    double total = 0.0;
    for (double v : row) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw InputError("membership entries must be finite and >= 0");
        total += v;
    }
    if (total == 0.0)
        return missing;
    double sq = 0.0;
    for (double v : row) {
        const double p = v / total;
        sq += p * p;
    }
    return 1.0 - sq;
}

inline std::vector<double> gsi_rows(const MembershipMatrix& m) {
    std::vector<double> out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        out[i] = gsi(m.row(i));
    return out;
}

/// Planar position and population of every aggregate set, aligned with the
/// nodes of the aggregated graph.
struct SpatialAttributes {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> population;
    /// Optional per-set self distance; NaN entries fall back to the
    /// nearest-neighbour rule.
    std::vector<double> self_distance;

    std::size_t size() const noexcept { return x.size(); }

    void validate() const {
        if (y.size() != x.size() || population.size() != x.size())
            throw InputError("spatial attribute columns have different lengths");
        if (!self_distance.empty() && self_distance.size() != x.size())
            throw InputError("self distance override has wrong length");
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
                throw InputError("set " + std::to_string(i) + " has non-finite coordinates");
            if (!(population[i] > 0.0) || !std::isfinite(population[i]))
                throw InputError("set " + std::to_string(i) + " must have a positive population");
            if (!self_distance.empty() && !std::isnan(self_distance[i]) && !(self_distance[i] > 0.0))
                throw InputError("self distance override must be > 0");
        }
    }
};

/// Reads `set_id\tx\ty\tpopulation` rows keyed by the aggregated graph's labels.
inline SpatialAttributes load_spatial(std::istream& in, const std::string& source, const WeightedGraph& g) {
    io::Table t(in, source, {"set_id", "x", "y", "population"});
    auto idx = io::label_index(g);
    SpatialAttributes s;
    s.x.assign(g.node_count(), 0.0);
    s.y.assign(g.node_count(), 0.0);
    s.population.assign(g.node_count(), 0.0);
    std::vector<bool> seen(g.node_count(), false);
    for (const auto& row : t.rows()) {
        std::string id(row.fields[0]);
        auto it = idx.find(id);
        if (it == idx.end())
            throw FormatError(source, row.line, "unknown set '" + id + "'");
        if (seen[it->second])
            throw FormatError(source, row.line, "duplicate row for set '" + id + "'");
        seen[it->second] = true;
        s.x[it->second] = t.number(row, 1);
        s.y[it->second] = t.number(row, 2);
        s.population[it->second] = t.number(row, 3);
        if (!(s.population[it->second] > 0.0))
            throw FormatError(source, row.line, "population must be > 0");
    }
    for (NodeIndex i = 0; i < g.node_count(); ++i)
        if (!seen[i])
            throw InputError(source + ": missing row for set '" + g.label(i) + "'");
    return s;
}

/// How beta is estimated when it is not supplied.
enum class GravityFit {
    poisson,  // maximum likelihood under the Poisson sampling model, all pairs
    log_ols,  // least squares in log space over observed cross pairs
};

inline GravityFit parse_gravity_fit(const std::string& s) {
    if (s == "poisson") return GravityFit::poisson;
    if (s == "ols") return GravityFit::log_ols;
    throw InputError("unknown gravity fit '" + s + "' (expected poisson or ols)");
}

struct GravityConfig {
    std::optional<double> beta;  // empty: fit from the observed flows
    GravityFit fit = GravityFit::poisson;
    int samples = 100;
    std::uint64_t seed = 0;
    double self_distance_factor = 0.5;
    double sigma_floor = 1e-12;
    std::size_t jobs = 1;
    bool redetect = false;       // re-run community detection on every sample
    DetectConfig detect{};

    void validate() const {
        if (beta && (!std::isfinite(*beta) || *beta < 0.0))
            throw InputError("gravity exponent must be finite and >= 0");
        if (samples < 2)
            throw InputError("at least two null samples are required");
        if (!(self_distance_factor > 0.0 && self_distance_factor <= 1.0))
            throw InputError("self distance factor must be in (0, 1]");
        if (!(sigma_floor > 0.0))
            throw InputError("sigma floor must be > 0");
    }
};

/// T_xy = kappa p_x p_y / d_xy^beta
struct GravityModel {
    double kappa = 0.0;
    double beta = 0.0;
};

/// Pairwise distances; the diagonal holds the self distance
/// theta * (nearest other set) unless overridden.
inline std::vector<double> distance_matrix(const SpatialAttributes& s, double theta) {
    const auto n = s.size();
    std::vector<double> d(n * n, 0.0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            const double v = std::hypot(s.x[a] - s.x[b], s.y[a] - s.y[b]);
            if (v == 0.0)
                throw DomainError("sets " + std::to_string(a) + " and " + std::to_string(b) +
                                  " are coincident; gravity distances are degenerate");
            d[a * n + b] = d[b * n + a] = v;
        }
    for (std::size_t a = 0; a < n; ++a) {
        if (!s.self_distance.empty() && !std::isnan(s.self_distance[a])) {
            d[a * n + a] = s.self_distance[a];
            continue;
        }
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < n; ++b)
            if (b != a)
                nearest = std::min(nearest, d[a * n + b]);
        if (!std::isfinite(nearest))
            throw DomainError("a single set has no nearest neighbour; supply a self distance");
        d[a * n + a] = theta * nearest;
    }
    return d;
}

/// Expected pair masses over x <= y, stored symmetric (n x n, row-major).
inline std::vector<double> expected_flows(const GravityModel& model, const SpatialAttributes& s,
                                          double theta) {
    const auto n = s.size();
    const auto d = distance_matrix(s, theta);
    std::vector<double> t(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b)
            t[a * n + b] = t[b * n + a] =
                model.kappa * s.population[a] * s.population[b] / std::pow(d[a * n + b], model.beta);
    return t;
}

namespace detail {

// Slope of log w - log(p_x p_y) on log d over cross pairs with w > 0.
inline double log_ols_beta(const WeightedGraph& g, const SpatialAttributes& s, const std::vector<double>& dist) {
    const auto n = s.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (const auto& e : g.edges()) {
        const double lx = std::log(dist[e.u * n + e.v]);
        const double ly = std::log(e.weight) - std::log(s.population[e.u] * s.population[e.v]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    const double mm = static_cast<double>(m);
    const double var = sxx - sx * sx / std::max(mm, 1.0);
    if (m < 2 || !(var > 1e-12 * std::max(1.0, sxx)))
        throw DomainError("gravity exponent is unidentifiable from the observed pair distances; "
                          "supply beta explicitly");
    return -(sxy - sx * sy / mm) / var;
}

// Poisson maximum likelihood over all pairs x <= y, zero and self pairs
// included (observed self mass is d/2). With kappa profiled out the score in
// beta is  mean_w(log d) - mean_T(log d), increasing in beta; it is solved by
// bisection.
inline double poisson_beta(const WeightedGraph& g, const SpatialAttributes& s, const std::vector<double>& dist) {
    const auto n = s.size();
    std::vector<double> log_d, log_pp;
    log_d.reserve(n * (n + 1) / 2);
    log_pp.reserve(n * (n + 1) / 2);
    double w_total = 0.0, w_log_d = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            log_d.push_back(std::log(dist[a * n + b]));
            log_pp.push_back(std::log(s.population[a] * s.population[b]));
            const double w = a == b ? g.diagonal(a) / 2.0 : g.weight(a, b);
            w_total += w;
            w_log_d += w * log_d.back();
        }
    if (!(w_total > 0.0))
        throw DomainError("gravity exponent is unidentifiable on a graph with no mass");
    const double target = w_log_d / w_total;
    auto model_mean = [&](double beta) {
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < log_d.size(); ++k)
            top = std::max(top, log_pp[k] - beta * log_d[k]);
        double u = 0.0, ul = 0.0;
        for (std::size_t k = 0; k < log_d.size(); ++k) {
            const double t = std::exp(log_pp[k] - beta * log_d[k] - top);
            u += t;
            ul += t * log_d[k];
        }
        return ul / u;
    };
    const auto [dmin, dmax] = std::minmax_element(log_d.begin(), log_d.end());
    if (!(*dmax - *dmin > 1e-12))
        throw DomainError("gravity exponent is unidentifiable from the observed pair distances; "
                          "supply beta explicitly");
    auto score = [&](double beta) { return target - model_mean(beta); };
    double lo = -1.0, hi = 4.0;
    for (int i = 0; i < 64 && score(lo) > 0.0; ++i)
        lo -= 2.0 * (hi - lo);
    for (int i = 0; i < 64 && score(hi) < 0.0; ++i)
        hi += 2.0 * (hi - lo);
    if (score(lo) > 0.0 || score(hi) < 0.0)
        throw DomainError("gravity exponent has no finite maximum likelihood estimate; supply beta explicitly");
    while (hi - lo > 1e-12 * std::max(1.0, std::abs(lo))) {
        const double mid = 0.5 * (lo + hi);
        if (score(mid) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

/// Fits beta (unless supplied) and rescales kappa so the expected mass over
/// all pairs including self equals the observed mass sum_x strength(x) / 2.
inline GravityModel fit_gravity(const WeightedGraph& g, const SpatialAttributes& s,
                                std::optional<double> beta = std::nullopt, double theta = 0.5,
                                GravityFit method = GravityFit::poisson) {
    s.validate();
    if (s.size() != g.node_count())
        throw InputError("spatial attributes cover " + std::to_string(s.size()) +
                         " sets but graph has " + std::to_string(g.node_count()));
    const auto n = s.size();
    const auto dist = distance_matrix(s, theta);
    GravityModel model;
    if (beta) {
        model.beta = *beta;
    } else {
        if (n < 3)
            throw DomainError("gravity exponent is unidentifiable with fewer than three sets; "
                              "supply beta explicitly");
        model.beta = method == GravityFit::poisson ? detail::poisson_beta(g, s, dist)
                                                   : detail::log_ols_beta(g, s, dist);
    }
    double observed = 0.0;
    for (NodeIndex i = 0; i < n; ++i)
        observed += strength(g, i);
    observed /= 2.0;
    double unit = 0.0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b)
            unit += s.population[a] * s.population[b] / std::pow(dist[a * n + b], model.beta);
    if (!(unit > 0.0) || !std::isfinite(unit))
        throw DomainError("gravity normalisation is degenerate");
    model.kappa = observed / unit;
    return model;
}

/// Draws a network with independent Poisson pair masses of the given expected
/// flows. A sampled self mass s is stored as diagonal 2 s.
inline WeightedGraph sample_flow_network(std::span<const double> flows, std::size_t n, Rng& rng,
                                         std::vector<std::string> labels = {}) {
    std::vector<Edge> edges;
    std::vector<double> diag(n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            const double mean = flows[a * n + b];
            if (!(mean > 0.0))
                continue;
            std::poisson_distribution<std::int64_t> draw(mean);
            const auto k = static_cast<double>(draw(rng));
            if (k == 0.0)
                continue;
            if (a == b)
                diag[a] = 2.0 * k;
            else
                edges.push_back({a, b, k});
        }
    }
    return WeightedGraph(n, edges, std::move(diag), std::move(labels));
}

struct DiversityRow {
    double gsi = missing;
    double mu = missing;
    double sigma = missing;
    double z = missing;
    double sample_min = missing;
    double sample_max = missing;
    std::size_t valid_samples = 0;
};

struct NullDiversity {
    GravityModel model;
    std::vector<DiversityRow> rows;
};

/// Per-set diversity z-scores against the gravity null model. Each null sample
/// reuses the observed partition (unless cfg.redetect) and its unit-share
/// memberships; mu and sigma are the per-set sample mean and standard deviation.
inline NullDiversity null_diversity(const WeightedGraph& g, const CommunityAssignment& c,
                                    const SpatialAttributes& s, const GravityConfig& cfg) {
    cfg.validate();
    if (c.size() != g.node_count())
        throw InputError("community assignment does not cover the aggregated graph");
    NullDiversity out;
    out.model = fit_gravity(g, s, cfg.beta, cfg.self_distance_factor, cfg.fit);
    const auto flows = expected_flows(out.model, s, cfg.self_distance_factor);
    const auto n = g.node_count();
    const auto k_samples = static_cast<std::size_t>(cfg.samples);

    const auto observed = gsi_rows(normalize_node(raw_membership(g, c)));
    std::vector<double> sampled(k_samples * n, missing);
    parallel_for(cfg.jobs, k_samples, [&](std::size_t k) {
        Rng rng(stream_seed(cfg.seed, 0x9a1f, k));
        const auto sample = sample_flow_network(flows, n, rng);
        CommunityAssignment part = c;
        if (cfg.redetect) {
            DetectConfig dc = cfg.detect;
            dc.seed = stream_seed(cfg.seed, 0xde7, k);
            part = leiden(sample, dc).communities;
        }
        const auto values = gsi_rows(normalize_node(raw_membership(sample, part)));
        std::copy(values.begin(), values.end(), sampled.begin() + static_cast<std::ptrdiff_t>(k * n));
    });

    out.rows.resize(n);
    for (std::size_t x = 0; x < n; ++x) {
        auto& row = out.rows[x];
        row.gsi = observed[x];
        double mean = 0.0, m2 = 0.0;
        std::size_t count = 0;
        for (std::size_t k = 0; k < k_samples; ++k) {
            const double v = sampled[k * n + x];
            if (is_missing(v))
                continue;
            ++count;
            row.sample_min = count == 1 ? v : std::min(row.sample_min, v);
            row.sample_max = count == 1 ? v : std::max(row.sample_max, v);
            const double delta = v - mean;
            mean += delta / static_cast<double>(count);
            m2 += delta * (v - mean);
        }
        row.valid_samples = count;
        if (count < 2)
            continue;
        row.mu = mean;
        row.sigma = std::sqrt(m2 / static_cast<double>(count - 1));
        if (!is_missing(row.gsi))
            row.z = (row.gsi - row.mu) / std::max(row.sigma, cfg.sigma_floor);
    }
    return out;
}

/// `set_id,gsi,mu,sigma,z`, or `set_id,gsi` when no null model was evaluated.
/// Rows are ordered by set label.
inline void write_diversity(std::ostream& out, std::span<const std::string> labels,
                            std::span<const DiversityRow> rows, bool with_null) {
    std::vector<std::size_t> order(labels.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
    out << (with_null ? "set_id,gsi,mu,sigma,z\n" : "set_id,gsi\n");
    for (auto i : order) {
        const auto& r = rows[i];
        out << labels[i] << ',' << format_number(r.gsi);
        if (with_null)
            out << ',' << format_number(r.mu) << ',' << format_number(r.sigma) << ','
                << format_number(r.z);
        out << '\n';
    }
}

} // namespace lfmm
