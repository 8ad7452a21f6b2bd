#pragma once

#include <string>
#include <vector>

#include "lfmm/error.hpp"
#include "lfmm/graph.hpp"

namespace lfmm {

/// Total, disjoint assignment of fine nodes to aggregate sets.
class AggregationMap {
public:
    AggregationMap() = default;

    AggregationMap(std::vector<std::size_t> assignment, std::size_t set_count,
                   std::vector<std::string> set_labels = {})
        : assignment_(std::move(assignment)), set_sizes_(set_count, 0),
          set_labels_(std::move(set_labels)) {
        for (std::size_t i = 0; i < assignment_.size(); ++i) {
            if (assignment_[i] >= set_count)
                throw InputError("node " + std::to_string(i) + " assigned to set " +
                                 std::to_string(assignment_[i]) + " outside [0, " +
                                 std::to_string(set_count) + ")");
            ++set_sizes_[assignment_[i]];
        }
        for (std::size_t x = 0; x < set_count; ++x)
            if (set_sizes_[x] == 0)
                throw InputError("aggregate set " + set_label(x) + " is empty");
        if (!set_labels_.empty() && set_labels_.size() != set_count)
            throw InputError("set label count does not match set count");
    }

    static AggregationMap identity(std::size_t n) {
        std::vector<std::size_t> a(n);
        for (std::size_t i = 0; i < n; ++i)
            a[i] = i;
        return {std::move(a), n};
    }

    static AggregationMap all_in_one(std::size_t n) { return {std::vector<std::size_t>(n, 0), 1}; }

    std::size_t node_count() const noexcept { return assignment_.size(); }
    std::size_t set_count() const noexcept { return set_sizes_.size(); }
    std::size_t operator[](NodeIndex i) const { return assignment_.at(i); }
    const std::vector<std::size_t>& assignment() const noexcept { return assignment_; }
    const std::vector<std::size_t>& set_sizes() const noexcept { return set_sizes_; }
    const std::vector<std::string>& set_labels() const noexcept { return set_labels_; }

    std::string set_label(std::size_t x) const {
        return set_labels_.empty() ? "set_" + std::to_string(x) : set_labels_.at(x);
    }

    friend bool operator==(const AggregationMap& a, const AggregationMap& b) {
        return a.assignment_ == b.assignment_ && a.set_sizes_ == b.set_sizes_;
    }

private:
    std::vector<std::size_t> assignment_;
    std::vector<std::size_t> set_sizes_;
    std::vector<std::string> set_labels_;
};

/// Collapses g by the partition a.
///
/// Cross-set weights are summed. The diagonal of set x becomes
/// 4 * W_e(S_x) + sum_{i in S_x} d_i, where W_e is the internal pair weight,
/// so that d'_x / 2 equals the summed own-set membership of its members and
/// repeated aggregation composes.
inline WeightedGraph aggregate(const WeightedGraph& g, const AggregationMap& a) {
    if (a.node_count() != g.node_count())
        throw InputError("aggregation map covers " + std::to_string(a.node_count()) +
                         " nodes but graph has " + std::to_string(g.node_count()));
    const std::size_t n_sets = a.set_count();
    std::vector<double> internal(n_sets, 0.0);
    std::vector<double> diag(n_sets, 0.0);
    std::vector<Edge> cross;
    for (NodeIndex i = 0; i < g.node_count(); ++i)
        diag[a[i]] += g.diagonal(i);
    for (const auto& e : g.edges()) {
        const auto x = a[e.u];
        const auto y = a[e.v];
        if (x == y)
            internal[x] += e.weight;
        else
            cross.push_back({x, y, e.weight});
    }
    for (std::size_t x = 0; x < n_sets; ++x)
        diag[x] += 4.0 * internal[x];

    std::vector<std::string> labels(n_sets);
    for (std::size_t x = 0; x < n_sets; ++x)
        labels[x] = a.set_label(x);
    return WeightedGraph(n_sets, cross, std::move(diag), std::move(labels));
}

/// Gives every fine node the community of its aggregate set.
inline CommunityAssignment lift_communities(const CommunityAssignment& c, const AggregationMap& a) {
    if (c.size() != a.set_count())
        throw InputError("community assignment labels " + std::to_string(c.size()) +
                         " sets but aggregation map has " + std::to_string(a.set_count()));
    std::vector<CommunityIndex> labels(a.node_count());
    for (NodeIndex i = 0; i < a.node_count(); ++i)
        labels[i] = c[a[i]];
    return {std::move(labels), c.community_count(), c.names()};
}

/// Node i maps to outer(inner(i)).
inline AggregationMap compose(const AggregationMap& outer, const AggregationMap& inner) {
    if (outer.node_count() != inner.set_count())
        throw InputError("outer map covers " + std::to_string(outer.node_count()) +
                         " sets but inner map produces " + std::to_string(inner.set_count()));
    std::vector<std::size_t> out(inner.node_count());
    for (NodeIndex i = 0; i < inner.node_count(); ++i)
        out[i] = outer[inner[i]];
    return {std::move(out), outer.set_count(), outer.set_labels()};
}

} // namespace lfmm
