#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "lfmm/aggregation.hpp"
#include "lfmm/error.hpp"
#include "lfmm/graph.hpp"
#include "lfmm/io.hpp"

namespace lfmm {

enum class MembershipKind { raw, node_normalized, aggregate_normalized, diffusion };

inline std::string to_string(MembershipKind k) {
    switch (k) {
    case MembershipKind::raw: return "raw";
    case MembershipKind::node_normalized: return "node-normalized";
    case MembershipKind::aggregate_normalized: return "aggregate-normalized";
    case MembershipKind::diffusion: return "diffusion";
    }
    return "unknown";
}

/// n x r nonnegative membership values, row-major.
class MembershipMatrix {
public:
    MembershipMatrix() = default;

    MembershipMatrix(std::size_t rows, std::size_t cols, MembershipKind kind)
        : rows_(rows), cols_(cols), kind_(kind), values_(rows * cols, 0.0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t community_count() const noexcept { return cols_; }
    MembershipKind kind() const noexcept { return kind_; }

    double& operator()(std::size_t i, std::size_t k) { return values_[i * cols_ + k]; }
    double operator()(std::size_t i, std::size_t k) const { return values_[i * cols_ + k]; }

    std::span<const double> row(std::size_t i) const { return {values_.data() + i * cols_, cols_}; }
    std::span<double> row(std::size_t i) { return {values_.data() + i * cols_, cols_}; }

    double row_sum(std::size_t i) const {
        double s = 0.0;
        for (double v : row(i))
            s += v;
        return s;
    }

    const std::vector<double>& values() const noexcept { return values_; }

    /// Rows that were all-zero when normalized (zero-strength nodes).
    const std::vector<NodeIndex>& zero_rows() const noexcept { return zero_rows_; }
    void mark_zero_row(NodeIndex i) { zero_rows_.push_back(i); }

    friend bool operator==(const MembershipMatrix& a, const MembershipMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.kind_ == b.kind_ &&
               a.values_ == b.values_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    MembershipKind kind_ = MembershipKind::raw;
    std::vector<double> values_;
    std::vector<NodeIndex> zero_rows_;
};

namespace detail {

inline void require_cover(const WeightedGraph& g, const CommunityAssignment& c) {
    if (c.size() != g.node_count())
        throw InputError("community assignment covers " + std::to_string(c.size()) +
                         " nodes but graph has " + std::to_string(g.node_count()));
}

} // namespace detail

/// Total membership mass of node i, sum_k M_i(k) = strength(i) - d_i / 2:
/// the diagonal enters memberships at half weight.
inline double membership_mass(const WeightedGraph& g, NodeIndex i) {
    return strength(g, i) - g.diagonal(i) / 2.0;
}

/// M_i(k) = sum_{j in C_k, j != i} w_ij + [c(i) = k] d_i / 2
inline MembershipMatrix raw_membership(const WeightedGraph& g, const CommunityAssignment& c) {
    detail::require_cover(g, c);
    MembershipMatrix m(g.node_count(), c.community_count(), MembershipKind::raw);
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
        for (const auto& nb : g.neighbors(i))
            m(i, c[nb.node]) += nb.weight;
        m(i, c[i]) += g.diagonal(i) / 2.0;
    }
    return m;
}

/// Each nonzero row divided by its sum; zero rows stay zero and are listed.
inline MembershipMatrix normalize_node(const MembershipMatrix& raw) {
    if (raw.kind() != MembershipKind::raw)
        throw InputError("normalize_node expects a raw membership matrix, got " + to_string(raw.kind()));
    MembershipMatrix m(raw.rows(), raw.community_count(), MembershipKind::node_normalized);
    for (std::size_t i = 0; i < raw.rows(); ++i) {
        const double s = raw.row_sum(i);
        if (s > 0.0) {
            for (std::size_t k = 0; k < raw.community_count(); ++k)
                m(i, k) = raw(i, k) / s;
        } else {
            m.mark_zero_row(i);
        }
    }
    return m;
}

/// Row x scaled to sum to |S_x|.
inline MembershipMatrix normalize_aggregate(const MembershipMatrix& raw,
                                            std::span<const std::size_t> set_sizes) {
    if (raw.kind() != MembershipKind::raw)
        throw InputError("normalize_aggregate expects a raw membership matrix, got " +
                         to_string(raw.kind()));
    if (set_sizes.size() != raw.rows())
        throw InputError("set size vector has " + std::to_string(set_sizes.size()) +
                         " entries but membership has " + std::to_string(raw.rows()) + " rows");
    MembershipMatrix m(raw.rows(), raw.community_count(), MembershipKind::aggregate_normalized);
    for (std::size_t x = 0; x < raw.rows(); ++x) {
        const double s = raw.row_sum(x);
        if (s > 0.0) {
            const double size = static_cast<double>(set_sizes[x]);
            for (std::size_t k = 0; k < raw.community_count(); ++k)
                m(x, k) = size * (raw(x, k) / s);
        } else {
            m.mark_zero_row(x);
        }
    }
    return m;
}

/// Modified adjacency A' with off-diagonal w_ij and diagonal d_i / 2.
inline Eigen::SparseMatrix<double, Eigen::RowMajor> membership_adjacency(const WeightedGraph& g) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(2 * g.pair_count() + g.node_count());
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
        for (const auto& nb : g.neighbors(i))
            triplets.emplace_back(static_cast<int>(i), static_cast<int>(nb.node), nb.weight);
        if (g.diagonal(i) > 0.0)
            triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), g.diagonal(i) / 2.0);
    }
    const auto n = static_cast<Eigen::Index>(g.node_count());
    Eigen::SparseMatrix<double, Eigen::RowMajor> a(n, n);
    a.setFromTriplets(triplets.begin(), triplets.end());
    return a;
}

inline Eigen::MatrixXd community_indicator(const CommunityAssignment& c) {
    Eigen::MatrixXd ind = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(c.size()),
                                                static_cast<Eigen::Index>(c.community_count()));
    for (NodeIndex i = 0; i < c.size(); ++i)
        ind(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c[i])) = 1.0;
    return ind;
}

/// Raw membership as the product A' C.
inline MembershipMatrix membership_by_matrix(const WeightedGraph& g, const CommunityAssignment& c) {
    detail::require_cover(g, c);
    const Eigen::MatrixXd product = membership_adjacency(g) * community_indicator(c);
    MembershipMatrix m(g.node_count(), c.community_count(), MembershipKind::raw);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t k = 0; k < m.community_count(); ++k)
            m(i, k) = product(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
    return m;
}

inline constexpr int max_diffusion_steps = 32;

/// m^(t) = P^t C with P = D^{-1} A'. The first step P C is the node-normalized
/// raw membership; later steps apply P to the n x r iterate, never forming P^t.
inline MembershipMatrix diffusion_membership(const WeightedGraph& g, const CommunityAssignment& c,
                                             int steps) {
    detail::require_cover(g, c);
    if (steps < 1 || steps > max_diffusion_steps)
        throw InputError("diffusion step count must be in [1, " + std::to_string(max_diffusion_steps) +
                         "], got " + std::to_string(steps));
    const auto raw = raw_membership(g, c);
    std::vector<double> mass(g.node_count());
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
        mass[i] = raw.row_sum(i);
        if (!(mass[i] > 0.0))
            throw DomainError("node '" + g.label(i) +
                              "' has zero strength; the random walk is undefined there");
    }
    auto first = normalize_node(raw);
    MembershipMatrix m(first.rows(), first.community_count(), MembershipKind::diffusion);
    std::copy(first.values().begin(), first.values().end(), &m(0, 0));
    if (steps == 1)
        return m;

    const auto a = membership_adjacency(g);
    const auto n = static_cast<Eigen::Index>(m.rows());
    const auto r = static_cast<Eigen::Index>(m.community_count());
    Eigen::MatrixXd x(n, r);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < r; ++k)
            x(i, k) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(k));
    for (int s = 1; s < steps; ++s) {
        Eigen::MatrixXd next = a * x;
        for (Eigen::Index i = 0; i < n; ++i)
            next.row(i) /= mass[static_cast<std::size_t>(i)];
        x = std::move(next);
    }
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < r; ++k)
            m(static_cast<std::size_t>(i), static_cast<std::size_t>(k)) = x(i, k);
    return m;
}

/// Both routes of the aggregation-consistency identity for every (set, community).
struct ConservationReport {
    MembershipMatrix direct;  // raw membership on the aggregated graph
    MembershipMatrix summed;  // per-set sums of fine-level raw membership, lifted partition
    double max_abs_discrepancy = 0.0;
    double scale = 0.0;       // largest direct row mass
    std::size_t worst_set = 0;

    double relative_discrepancy() const {
        return scale > 0.0 ? max_abs_discrepancy / scale : max_abs_discrepancy;
    }
};

/// Sums rows of a fine-level membership matrix into aggregate sets.
inline MembershipMatrix sum_by_set(const MembershipMatrix& fine, const AggregationMap& a) {
    if (fine.rows() != a.node_count())
        throw InputError("membership rows do not match aggregation map");
    MembershipMatrix out(a.set_count(), fine.community_count(), fine.kind());
    for (NodeIndex i = 0; i < fine.rows(); ++i)
        for (std::size_t k = 0; k < fine.community_count(); ++k)
            out(a[i], k) += fine(i, k);
    return out;
}

/// Compares the membership of a supplied aggregated graph against the sums
/// over its members' memberships under the lifted partition.
inline ConservationReport conservation_check(const WeightedGraph& fine, const WeightedGraph& aggregated,
                                             const AggregationMap& a,
                                             const CommunityAssignment& c_agg) {
    if (aggregated.node_count() != a.set_count())
        throw InputError("aggregated graph has " + std::to_string(aggregated.node_count()) +
                         " nodes but aggregation map has " + std::to_string(a.set_count()) + " sets");
    ConservationReport rep;
    rep.direct = raw_membership(aggregated, c_agg);
    rep.summed = sum_by_set(raw_membership(fine, lift_communities(c_agg, a)), a);
    for (std::size_t x = 0; x < rep.direct.rows(); ++x) {
        rep.scale = std::max(rep.scale, rep.direct.row_sum(x));
        for (std::size_t k = 0; k < rep.direct.community_count(); ++k) {
            const double d = std::abs(rep.direct(x, k) - rep.summed(x, k));
            if (d > rep.max_abs_discrepancy) {
                rep.max_abs_discrepancy = d;
                rep.worst_set = x;
            }
        }
    }
    return rep;
}

inline ConservationReport conservation_check(const WeightedGraph& fine, const AggregationMap& a,
                                             const CommunityAssignment& c_agg) {
    return conservation_check(fine, aggregate(fine, a), a, c_agg);
}

/// `node,<community_0>,...` with one row per node in label order.
inline void write_membership(std::ostream& out, const WeightedGraph& g, const CommunityAssignment& c,
                             const MembershipMatrix& m) {
    out << "node";
    for (std::size_t k = 0; k < m.community_count(); ++k)
        out << ',' << c.name(k);
    out << '\n';
    for (auto i : io::label_order(g)) {
        out << g.label(i);
        for (double v : m.row(i))
            out << ',' << format_number(v);
        out << '\n';
    }
}

} // namespace lfmm
