#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lfmm/error.hpp"

namespace lfmm {

using NodeIndex = std::size_t;
using CommunityIndex = std::size_t;

struct Edge {
    NodeIndex u;
    NodeIndex v;
    double weight;
};

struct Neighbor {
    NodeIndex node;
    double weight;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Undirected weighted graph with an explicit per-node diagonal mass.
///
/// Off-diagonal pairs are stored once and exposed symmetrically through a
/// sorted adjacency list. The diagonal mass d_i is the self-connection store:
/// a node's own-community membership receives d_i / 2 from it, and it counts
/// fully towards strength(i). Immutable after construction.
class WeightedGraph {
public:
    WeightedGraph() = default;

    /// Builds a graph from an unordered edge list. Rows for the same unordered
    /// pair are summed in input order. Self pairs are rejected; the diagonal
    /// must be passed through `diagonal`.
    WeightedGraph(std::size_t node_count, std::span<const Edge> edges,
                  std::vector<double> diagonal = {},
                  std::vector<std::string> labels = {})
        : node_count_(node_count), diagonal_(std::move(diagonal)), labels_(std::move(labels)) {
        if (node_count_ == 0)
            throw InputError("graph must have at least one node");
        if (diagonal_.empty())
            diagonal_.assign(node_count_, 0.0);
        if (diagonal_.size() != node_count_)
            throw InputError("diagonal size " + std::to_string(diagonal_.size()) +
                             " does not match node count " + std::to_string(node_count_));
        if (!labels_.empty() && labels_.size() != node_count_)
            throw InputError("label count does not match node count");
        for (std::size_t i = 0; i < node_count_; ++i) {
            if (!std::isfinite(diagonal_[i]) || diagonal_[i] < 0.0)
                throw InputError("diagonal mass of node " + label(i) + " must be finite and >= 0");
        }

        std::vector<Edge> canon;
        canon.reserve(edges.size());
        for (const auto& e : edges) {
            if (e.u >= node_count_ || e.v >= node_count_)
                throw InputError("edge endpoint out of range");
            if (e.u == e.v)
                throw InputError("self pair (" + label(e.u) + ", " + label(e.u) +
                                 ") in edge list; store self-connection mass in the diagonal");
            if (!std::isfinite(e.weight) || e.weight <= 0.0)
                throw InputError("edge weight must be finite and > 0");
            canon.push_back(e.u < e.v ? e : Edge{e.v, e.u, e.weight});
        }
        std::stable_sort(canon.begin(), canon.end(), [](const Edge& a, const Edge& b) {
            return a.u != b.u ? a.u < b.u : a.v < b.v;
        });
        std::vector<Edge> merged;
        for (const auto& e : canon) {
            if (!merged.empty() && merged.back().u == e.u && merged.back().v == e.v)
                merged.back().weight += e.weight;
            else
                merged.push_back(e);
        }
        pair_count_ = merged.size();

        std::vector<std::size_t> degree(node_count_, 0);
        for (const auto& e : merged) {
            ++degree[e.u];
            ++degree[e.v];
        }
        offsets_.assign(node_count_ + 1, 0);
        for (std::size_t i = 0; i < node_count_; ++i)
            offsets_[i + 1] = offsets_[i] + degree[i];
        adjacency_.resize(offsets_.back());
        std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
        for (const auto& e : merged) {
            adjacency_[cursor[e.u]++] = {e.v, e.weight};
            adjacency_[cursor[e.v]++] = {e.u, e.weight};
        }
        for (std::size_t i = 0; i < node_count_; ++i) {
            std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
                      adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]),
                      [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
        }
    }

    std::size_t node_count() const noexcept { return node_count_; }
    std::size_t pair_count() const noexcept { return pair_count_; }

    std::span<const Neighbor> neighbors(NodeIndex i) const {
        check(i);
        return {adjacency_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }

    /// w_ij for i != j (0 when absent); the diagonal mass d_i when i == j.
    double weight(NodeIndex i, NodeIndex j) const {
        check(i);
        check(j);
        if (i == j)
            return diagonal_[i];
        auto row = neighbors(i);
        auto it = std::lower_bound(row.begin(), row.end(), j,
                                   [](const Neighbor& n, NodeIndex k) { return n.node < k; });
        return (it != row.end() && it->node == j) ? it->weight : 0.0;
    }

    double diagonal(NodeIndex i) const {
        check(i);
        return diagonal_[i];
    }
    std::span<const double> diagonal() const noexcept { return diagonal_; }

    bool has_labels() const noexcept { return !labels_.empty(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// External identifier of node i, or its decimal index if the graph is unlabeled.
    std::string label(NodeIndex i) const {
        return labels_.empty() ? std::to_string(i) : labels_[i];
    }

    /// Every unordered pair once, ordered by (u, v) with u < v.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(pair_count_);
        for (NodeIndex i = 0; i < node_count_; ++i)
            for (const auto& n : neighbors(i))
                if (n.node > i)
                    out.push_back({i, n.node, n.weight});
        return out;
    }

    friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
        return a.node_count_ == b.node_count_ && a.offsets_ == b.offsets_ &&
               a.adjacency_ == b.adjacency_ && a.diagonal_ == b.diagonal_ &&
               a.labels_ == b.labels_;
    }

private:
    void check(NodeIndex i) const {
        if (i >= node_count_)
            throw std::out_of_range("node index " + std::to_string(i) + " out of range [0, " +
                                    std::to_string(node_count_) + ")");
    }

    std::size_t node_count_ = 0;
    std::size_t pair_count_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<Neighbor> adjacency_;
    std::vector<double> diagonal_;
    std::vector<std::string> labels_;
};

/// d_i + sum_{j != i} w_ij
inline double strength(const WeightedGraph& g, NodeIndex i) {
    double s = g.diagonal(i);
    for (const auto& n : g.neighbors(i))
        s += n.weight;
    return s;
}

inline std::vector<double> strengths(const WeightedGraph& g) {
    std::vector<double> out(g.node_count());
    for (NodeIndex i = 0; i < g.node_count(); ++i)
        out[i] = strength(g, i);
    return out;
}

/// Literal half-edge count inside node i if it were an aggregate of a simple
/// graph under the conservation-exact convention (d = 4 W_e): 2 W_e = d / 2.
/// Diagnostic only; no computation in this library depends on it.
inline double half_edge_count(const WeightedGraph& g, NodeIndex i) { return g.diagonal(i) / 2.0; }

/// Disjoint community label per node; labels are dense in [0, r).
class CommunityAssignment {
public:
    CommunityAssignment() = default;

    CommunityAssignment(std::vector<CommunityIndex> labels, std::size_t community_count,
                        std::vector<std::string> names = {})
        : labels_(std::move(labels)), count_(community_count), names_(std::move(names)) {
        if (count_ == 0 && !labels_.empty())
            throw InputError("community count must be positive");
        std::vector<bool> seen(count_, false);
        for (auto l : labels_) {
            if (l >= count_)
                throw InputError("community label " + std::to_string(l) + " out of range [0, " +
                                 std::to_string(count_) + ")");
            seen[l] = true;
        }
        for (std::size_t k = 0; k < count_; ++k)
            if (!seen[k])
                throw InputError("community " + std::to_string(k) + " has no members");
        if (!names_.empty() && names_.size() != count_)
            throw InputError("community name count does not match community count");
    }

    /// Relabels arbitrary integer labels to [0, r) in order of first appearance.
    static CommunityAssignment compact(std::span<const std::size_t> raw) {
        std::vector<CommunityIndex> out(raw.size());
        std::unordered_map<std::size_t, CommunityIndex> table;
        for (std::size_t i = 0; i < raw.size(); ++i)
            out[i] = table.try_emplace(raw[i], table.size()).first->second;
        return {std::move(out), table.size()};
    }

    std::size_t size() const noexcept { return labels_.size(); }
    std::size_t community_count() const noexcept { return count_; }
    CommunityIndex operator[](NodeIndex i) const { return labels_.at(i); }
    const std::vector<CommunityIndex>& labels() const noexcept { return labels_; }

    const std::vector<std::string>& names() const noexcept { return names_; }
    std::string name(CommunityIndex k) const {
        return names_.empty() ? std::to_string(k) : names_.at(k);
    }

    std::vector<std::size_t> sizes() const {
        std::vector<std::size_t> s(count_, 0);
        for (auto l : labels_)
            ++s[l];
        return s;
    }

    friend bool operator==(const CommunityAssignment& a, const CommunityAssignment& b) {
        return a.labels_ == b.labels_ && a.count_ == b.count_;
    }

private:
    std::vector<CommunityIndex> labels_;
    std::size_t count_ = 0;
    std::vector<std::string> names_;
};

} // namespace lfmm
