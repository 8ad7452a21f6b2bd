#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lfmm/aggregation.hpp"
#include "lfmm/detect.hpp"
#include "lfmm/error.hpp"
#include "lfmm/graph.hpp"
#include "lfmm/io.hpp"
#include "lfmm/membership.hpp"
#include "lfmm/parallel.hpp"
#include "lfmm/random.hpp"

namespace lfmm {

/// Planted-partition benchmark with community-aligned aggregate sets.
struct SbmConfig {
    std::size_t nodes = 1000;
    std::size_t communities = 2;
    double mu = 0.05;            // expected fraction of a node's edges leaving its community
    double mean_degree = 20.0;
    std::size_t sets = 50;
    double mixing = 0.2;         // probability of a uniformly random set instead of an aligned one
    std::uint64_t seed = 0;

    double block_size() const { return static_cast<double>(nodes) / static_cast<double>(communities); }

    double p_in() const { return mean_degree * (1.0 - mu) / (block_size() - 1.0); }
    double p_out() const {
        const double outside = static_cast<double>(nodes) - block_size();
        return outside > 0.0 ? mean_degree * mu / outside : 0.0;
    }

    /// Range of mu for which both edge probabilities lie in [0, 1].
    std::pair<double, double> feasible_mu() const {
        const double s = block_size();
        const double outside = static_cast<double>(nodes) - s;
        const double lo = std::max(0.0, 1.0 - (s - 1.0) / mean_degree);
        const double hi = outside > 0.0 ? std::min(1.0, outside / mean_degree) : 0.0;
        return {lo, hi};
    }

    bool feasible() const {
        auto [lo, hi] = feasible_mu();
        return mu >= lo && mu <= hi && block_size() > 1.0;
    }

    void validate() const {
        if (communities == 0 || nodes < communities)
            throw InputError("SBM needs at least one node per community");
        if (sets == 0 || sets % communities != 0)
            throw InputError("number of aggregate sets must be a positive multiple of the community count");
        if (!(mean_degree > 0.0) || mean_degree >= static_cast<double>(nodes))
            throw InputError("mean degree must be in (0, N)");
        if (!(mu >= 0.0 && mu <= 1.0) || !(mixing >= 0.0 && mixing <= 1.0))
            throw InputError("affinity and mixing must lie in [0, 1]");
        if (!feasible()) {
            auto [lo, hi] = feasible_mu();
            throw InputError("infeasible SBM: p_in = " + format_number(p_in()) + ", p_out = " +
                             format_number(p_out()) + "; feasible mu range is [" + format_number(lo) +
                             ", " + format_number(hi) + "]");
        }
    }
};

struct SbmInstance {
    WeightedGraph graph;
    CommunityAssignment planted;
    AggregationMap map;
    /// Planted community each aggregate set is aligned with.
    std::vector<CommunityIndex> set_community;
};

/// Independent unit-weight edges with probability p_in inside and p_out
/// across blocks; each node goes to a uniformly random aligned set with
/// probability 1 - mixing, otherwise to a uniformly random set. Sets left
/// empty are dropped.
inline SbmInstance generate_sbm(const SbmConfig& cfg) {
    cfg.validate();
    Rng rng(stream_seed(cfg.seed, 0x5b3));
    const auto n = cfg.nodes;
    const auto r = cfg.communities;
    std::vector<CommunityIndex> block(n);
    for (std::size_t i = 0; i < n; ++i)
        block[i] = i * r / n;

    const double p_in = cfg.p_in();
    const double p_out = cfg.p_out();
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(cfg.mean_degree * static_cast<double>(n) / 2.0 * 1.1));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double p = block[i] == block[j] ? p_in : p_out;
            if (uniform01(rng) < p)
                edges.push_back({i, j, 1.0});
        }

    const std::size_t per = cfg.sets / r;
    std::vector<std::size_t> raw_set(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (uniform01(rng) < cfg.mixing)
            raw_set[i] = uniform_index(rng, cfg.sets);
        else
            raw_set[i] = block[i] * per + uniform_index(rng, per);
    }
    std::vector<std::size_t> remap(cfg.sets, std::numeric_limits<std::size_t>::max());
    std::vector<std::size_t> used(cfg.sets, 0);
    for (auto s : raw_set)
        ++used[s];
    std::vector<CommunityIndex> set_community;
    std::vector<std::string> set_labels;
    for (std::size_t s = 0; s < cfg.sets; ++s) {
        if (used[s] == 0)
            continue;
        remap[s] = set_community.size();
        set_community.push_back(s / per);
        set_labels.push_back("S" + std::to_string(s));
    }
    for (auto& s : raw_set)
        s = remap[s];

    SbmInstance inst;
    inst.graph = WeightedGraph(n, edges);
    inst.planted = CommunityAssignment(std::move(block), r);
    inst.map = AggregationMap(std::move(raw_set), set_community.size(), std::move(set_labels));
    inst.set_community = std::move(set_community);
    return inst;
}

/// Product-moment correlation.
inline double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw InputError("pearson needs two sequences of equal length >= 2");
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw DomainError("correlation is undefined for a zero-variance sequence");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Normalized mutual information, 2 I(a; b) / (H(a) + H(b)). Two trivial
/// partitions score 1.
inline double nmi(const CommunityAssignment& a, const CommunityAssignment& b) {
    if (a.size() != b.size())
        throw InputError("partitions cover different node counts");
    const auto n = static_cast<double>(a.size());
    const auto ra = a.community_count(), rb = b.community_count();
    std::vector<double> joint(ra * rb, 0.0), pa(ra, 0.0), pb(rb, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        joint[a[i] * rb + b[i]] += 1.0;
        pa[a[i]] += 1.0;
        pb[b[i]] += 1.0;
    }
    auto entropy = [n](const std::vector<double>& counts) {
        double h = 0.0;
        for (double c : counts)
            if (c > 0.0)
                h -= (c / n) * std::log(c / n);
        return h;
    };
    const double ha = entropy(pa), hb = entropy(pb);
    if (ha + hb == 0.0)
        return 1.0;
    double mi = 0.0;
    for (std::size_t x = 0; x < ra; ++x)
        for (std::size_t y = 0; y < rb; ++y) {
            const double c = joint[x * rb + y];
            if (c > 0.0)
                mi += (c / n) * std::log(c * n / (pa[x] * pb[y]));
        }
    return std::clamp(2.0 * mi / (ha + hb), 0.0, 1.0);
}

/// Maps each community of `fine` to the community of `reference` it overlaps
/// most (ties to the lowest index), yielding a partition over reference's labels.
inline CommunityAssignment align_to(const CommunityAssignment& fine, const CommunityAssignment& reference) {
    if (fine.size() != reference.size())
        throw InputError("partitions cover different node counts");
    const auto rf = fine.community_count(), rr = reference.community_count();
    std::vector<std::size_t> overlap(rf * rr, 0);
    for (std::size_t i = 0; i < fine.size(); ++i)
        ++overlap[fine[i] * rr + reference[i]];
    std::vector<CommunityIndex> target(rf, 0);
    for (std::size_t k = 0; k < rf; ++k)
        for (std::size_t j = 1; j < rr; ++j)
            if (overlap[k * rr + j] > overlap[k * rr + target[k]])
                target[k] = j;
    std::vector<CommunityIndex> labels(fine.size());
    std::vector<bool> seen(rr, false);
    for (std::size_t i = 0; i < fine.size(); ++i) {
        labels[i] = target[fine[i]];
        seen[labels[i]] = true;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
        // Some reference community received no fine community; keep the
        // labels but compact so the assignment stays valid.
        return CommunityAssignment::compact(labels);
    }
    return {std::move(labels), rr, reference.names()};
}

enum class Series { blue, orange, green };

inline const char* to_string(Series s) {
    switch (s) {
    case Series::blue: return "blue";
    case Series::orange: return "orange";
    case Series::green: return "green";
    }
    return "?";
}

struct ScatterPoint {
    std::size_t set;
    CommunityIndex community;
    double x;  // individual-level value summed over the set
    double y;  // value computed on the aggregated graph
    Series series;
};

struct ConsistencyResult {
    std::vector<ScatterPoint> points;
    std::vector<std::string> set_labels;
    double r_blue = 0.0;
    double r_orange = 0.0;
    double r_green = 0.0;
    double blue_max_abs = 0.0;
    double max_strength = 0.0;
    /// mean over sets of (aggregate minority share - individual-detection minority share)
    double minority_bias = 0.0;
    std::size_t aggregate_communities = 0;
    std::size_t individual_communities = 0;
    double p_in = 0.0;
    double p_out = 0.0;

    std::vector<double> xs(Series s) const { return pick(s, true); }
    std::vector<double> ys(Series s) const { return pick(s, false); }

private:
    std::vector<double> pick(Series s, bool x) const {
        std::vector<double> out;
        for (const auto& p : points)
            if (p.series == s)
                out.push_back(x ? p.x : p.y);
        return out;
    }
};

namespace detail {

inline double minority_share(std::span<const double> row, CommunityIndex own) {
    double total = 0.0;
    for (double v : row)
        total += v;
    return total > 0.0 ? 1.0 - row[own] / total : std::numeric_limits<double>::quiet_NaN();
}

inline double safe_pearson(std::span<const double> xs, std::span<const double> ys) {
    try {
        return pearson(xs, ys);
    } catch (const DomainError&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

} // namespace detail

/// One replicate of the aggregation-consistency comparison: detection on
/// the aggregated graph, then three (summed individual, aggregate) series.
inline ConsistencyResult run_consistency_experiment(const SbmConfig& cfg, const DetectConfig& detect) {
    const auto inst = generate_sbm(cfg);
    const auto& g = inst.graph;
    const auto& a = inst.map;
    const auto g_agg = aggregate(g, a);

    DetectConfig dc = detect;
    dc.seed = stream_seed(detect.seed, cfg.seed, 1);
    const auto c_agg = leiden(g_agg, dc).communities;
    const auto lifted = lift_communities(c_agg, a);

    const auto fine_raw = raw_membership(g, lifted);
    const auto agg_raw = raw_membership(g_agg, c_agg);
    const auto summed_raw = sum_by_set(fine_raw, a);
    const auto summed_norm = sum_by_set(normalize_node(fine_raw), a);
    const auto agg_norm = normalize_aggregate(agg_raw, a.set_sizes());

    DetectConfig di = detect;
    di.seed = stream_seed(detect.seed, cfg.seed, 2);
    const auto c_ind_raw = leiden(g, di).communities;
    const auto c_ind = align_to(c_ind_raw, lifted);
    const auto summed_truth = sum_by_set(raw_membership(g, c_ind), a);

    ConsistencyResult res;
    res.p_in = cfg.p_in();
    res.p_out = cfg.p_out();
    res.aggregate_communities = c_agg.community_count();
    res.individual_communities = c_ind_raw.community_count();
    for (std::size_t x = 0; x < a.set_count(); ++x)
        res.set_labels.push_back(a.set_label(x));
    for (NodeIndex x = 0; x < g_agg.node_count(); ++x)
        res.max_strength = std::max(res.max_strength, strength(g_agg, x));

    const auto r = c_agg.community_count();
    for (std::size_t x = 0; x < a.set_count(); ++x)
        for (std::size_t k = 0; k < r; ++k) {
            res.points.push_back({x, k, summed_raw(x, k), agg_raw(x, k), Series::blue});
            res.blue_max_abs = std::max(res.blue_max_abs, std::abs(summed_raw(x, k) - agg_raw(x, k)));
        }
    for (std::size_t x = 0; x < a.set_count(); ++x)
        for (std::size_t k = 0; k < r; ++k)
            res.points.push_back({x, k, summed_norm(x, k), agg_norm(x, k), Series::orange});
    const auto rt = c_ind.community_count();
    for (std::size_t x = 0; x < a.set_count(); ++x)
        for (std::size_t k = 0; k < std::min(r, rt); ++k)
            res.points.push_back({x, k, summed_truth(x, k), agg_raw(x, k), Series::green});

    res.r_blue = detail::safe_pearson(res.xs(Series::blue), res.ys(Series::blue));
    res.r_orange = detail::safe_pearson(res.xs(Series::orange), res.ys(Series::orange));
    res.r_green = detail::safe_pearson(res.xs(Series::green), res.ys(Series::green));

    double bias = 0.0;
    std::size_t counted = 0;
    for (std::size_t x = 0; x < a.set_count(); ++x) {
        const auto own = c_agg[x];
        if (own >= rt)
            continue;
        const double agg = detail::minority_share(agg_raw.row(x), own);
        const double truth = detail::minority_share(summed_truth.row(x), own);
        if (std::isnan(agg) || std::isnan(truth))
            continue;
        bias += agg - truth;
        ++counted;
    }
    res.minority_bias = counted ? bias / static_cast<double>(counted) : 0.0;
    return res;
}

/// Replicate r uses SBM seed stream_seed(cfg.seed, r); output order is by replicate.
inline std::vector<ConsistencyResult> run_consistency_replicates(const SbmConfig& cfg,
                                                                 const DetectConfig& detect,
                                                                 std::size_t replicates,
                                                                 std::size_t jobs = 1) {
    std::vector<ConsistencyResult> out(replicates);
    parallel_for(jobs, replicates, [&](std::size_t k) {
        SbmConfig c = cfg;
        c.seed = stream_seed(cfg.seed, 0xc0, k);
        out[k] = run_consistency_experiment(c, detect);
    });
    return out;
}

inline void write_scatter(std::ostream& out, const ConsistencyResult& res) {
    out << "set,community,x,y,series\n";
    for (const auto& p : res.points)
        out << res.set_labels[p.set] << ',' << p.community << ',' << format_number(p.x) << ','
            << format_number(p.y) << ',' << to_string(p.series) << '\n';
}

struct HeatmapResult {
    std::vector<double> mu;
    std::vector<double> mixing;
    /// values[i * mixing.size() + j] for (mu[i], mixing[j]); NaN when infeasible.
    std::vector<double> values;

    double at(std::size_t i, std::size_t j) const { return values[i * mixing.size() + j]; }
};

/// Mean minority share of one instance: each set's unit-share membership
/// outside the planted community its set is aligned with, on the aggregated
/// graph, averaged over sets with nonzero strength.
inline std::pair<double, std::size_t> minority_sum(const SbmInstance& inst) {
    const auto g_agg = aggregate(inst.graph, inst.map);
    const auto c = CommunityAssignment::compact(inst.set_community);
    const auto raw = raw_membership(g_agg, c);
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t x = 0; x < raw.rows(); ++x) {
        const double v = detail::minority_share(raw.row(x), c[x]);
        if (!std::isnan(v)) {
            sum += v;
            ++count;
        }
    }
    return {sum, count};
}

/// Grid sweep over (mu, mixing); each cell pools `replicates` instances.
inline HeatmapResult run_heatmap_experiment(std::span<const double> mu_grid,
                                            std::span<const double> mixing_grid, const SbmConfig& base,
                                            std::size_t replicates, std::size_t jobs = 1) {
    HeatmapResult res;
    res.mu.assign(mu_grid.begin(), mu_grid.end());
    res.mixing.assign(mixing_grid.begin(), mixing_grid.end());
    const auto cells = res.mu.size() * res.mixing.size();
    const auto total_jobs = cells * replicates;
    std::vector<double> sums(total_jobs, 0.0);
    std::vector<std::size_t> counts(total_jobs, 0);
    std::vector<char> infeasible(cells, 0);
    parallel_for(jobs, total_jobs, [&](std::size_t job) {
        const auto cell = job / replicates;
        const auto rep = job % replicates;
        SbmConfig c = base;
        c.mu = res.mu[cell / res.mixing.size()];
        c.mixing = res.mixing[cell % res.mixing.size()];
        c.seed = stream_seed(base.seed, 0x4ea7, cell, rep);
        if (!c.feasible()) {
            infeasible[cell] = 1;  // every replicate of the cell writes the same value
            return;
        }
        auto [s, n] = minority_sum(generate_sbm(c));
        sums[job] = s;
        counts[job] = n;
    });
    res.values.assign(cells, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t cell = 0; cell < cells; ++cell) {
        if (infeasible[cell])
            continue;
        double s = 0.0;
        std::size_t n = 0;
        for (std::size_t rep = 0; rep < replicates; ++rep) {
            s += sums[cell * replicates + rep];
            n += counts[cell * replicates + rep];
        }
        if (n > 0)
            res.values[cell] = s / static_cast<double>(n);
    }
    return res;
}

inline void write_grid(std::ostream& out, const HeatmapResult& res) {
    out << "mu,m,mean_minority\n";
    for (std::size_t i = 0; i < res.mu.size(); ++i)
        for (std::size_t j = 0; j < res.mixing.size(); ++j)
            out << format_number(res.mu[i]) << ',' << format_number(res.mixing[j]) << ','
                << format_number(res.at(i, j)) << '\n';
}

} // namespace lfmm
