#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <numeric>
#include <vector>

#include "lfmm/error.hpp"
#include "lfmm/graph.hpp"
#include "lfmm/random.hpp"

namespace lfmm {

struct DetectConfig {
    double resolution = 1.0;
    std::uint64_t seed = 0;
    int max_passes = 100;

    void validate() const {
        if (!std::isfinite(resolution) || resolution <= 0.0)
            throw InputError("resolution must be finite and > 0");
        if (max_passes < 1)
            throw InputError("max_passes must be >= 1");
    }
};

/// Reichardt-Bornholdt quality against the configuration null model:
///   Q = 1/(2W) sum_k [ 2 W_int(k) - gamma K_k^2 / (2W) ]
/// with 2W = sum_i strength(i), W_int(k) the internal pair weight plus half the
/// members' diagonal mass, and K_k the community strength.
inline double rb_quality(const WeightedGraph& g, const CommunityAssignment& c, double resolution) {
    if (c.size() != g.node_count())
        throw InputError("community assignment does not cover the graph");
    std::vector<double> internal(c.community_count(), 0.0);
    std::vector<double> total(c.community_count(), 0.0);
    double two_w = 0.0;
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
        const double s = strength(g, i);
        two_w += s;
        total[c[i]] += s;
        internal[c[i]] += g.diagonal(i) / 2.0;
        for (const auto& nb : g.neighbors(i))
            if (nb.node > i && c[nb.node] == c[i])
                internal[c[i]] += nb.weight;
    }
    if (!(two_w > 0.0))
        throw DomainError("quality is undefined on a graph with zero total weight");
    double q = 0.0;
    for (std::size_t k = 0; k < internal.size(); ++k)
        q += 2.0 * internal[k] - resolution * total[k] * total[k] / two_w;
    return q / two_w;
}

struct LeidenResult {
    CommunityAssignment communities;
    double quality = 0.0;
    /// Quality of the running partition after each completed pass, starting
    /// with the singleton partition.
    std::vector<double> pass_qualities;
    int passes = 0;
};

namespace detail {

// Working graph for the Leiden passes. Node weights and self weights are
// carried through aggregation so the quality is preserved exactly.
struct LeidenGraph {
    std::vector<std::vector<Neighbor>> adj;
    std::vector<double> self;      // internal weight already inside the node
    std::vector<double> strength;  // K contribution of the node
    double two_w = 0.0;

    std::size_t size() const { return adj.size(); }

    static LeidenGraph from(const WeightedGraph& g) {
        LeidenGraph lg;
        const auto n = g.node_count();
        lg.adj.resize(n);
        lg.self.resize(n);
        lg.strength.resize(n);
        for (NodeIndex i = 0; i < n; ++i) {
            auto nb = g.neighbors(i);
            lg.adj[i].assign(nb.begin(), nb.end());
            lg.self[i] = g.diagonal(i) / 2.0;
            lg.strength[i] = lfmm::strength(g, i);
            lg.two_w += lg.strength[i];
        }
        return lg;
    }

    LeidenGraph collapse(const std::vector<std::size_t>& part, std::size_t count) const {
        LeidenGraph out;
        out.adj.resize(count);
        out.self.assign(count, 0.0);
        out.strength.assign(count, 0.0);
        out.two_w = two_w;
        std::vector<std::vector<Neighbor>> raw(count);
        for (std::size_t v = 0; v < size(); ++v) {
            const auto a = part[v];
            out.self[a] += self[v];
            out.strength[a] += strength[v];
            for (const auto& nb : adj[v]) {
                const auto b = part[nb.node];
                if (a == b) {
                    if (nb.node > v)
                        out.self[a] += nb.weight;
                } else {
                    raw[a].push_back({b, nb.weight});
                }
            }
        }
        for (std::size_t a = 0; a < count; ++a) {
            auto& r = raw[a];
            std::stable_sort(r.begin(), r.end(),
                             [](const Neighbor& x, const Neighbor& y) { return x.node < y.node; });
            for (const auto& nb : r) {
                if (!out.adj[a].empty() && out.adj[a].back().node == nb.node)
                    out.adj[a].back().weight += nb.weight;
                else
                    out.adj[a].push_back(nb);
            }
        }
        return out;
    }
};

inline double quality_of(const LeidenGraph& g, const std::vector<std::size_t>& part,
                         std::size_t count, double gamma) {
    std::vector<double> internal(count, 0.0), total(count, 0.0);
    for (std::size_t v = 0; v < g.size(); ++v) {
        internal[part[v]] += g.self[v];
        total[part[v]] += g.strength[v];
        for (const auto& nb : g.adj[v])
            if (nb.node > v && part[nb.node] == part[v])
                internal[part[v]] += nb.weight;
    }
    double q = 0.0;
    for (std::size_t k = 0; k < count; ++k)
        q += 2.0 * internal[k] - gamma * total[k] * total[k] / g.two_w;
    return q / g.two_w;
}

// Relabels to [0, k) by first appearance; returns k.
inline std::size_t renumber(std::vector<std::size_t>& part) {
    std::vector<std::size_t> map(part.size(), std::numeric_limits<std::size_t>::max());
    std::size_t next = 0;
    for (auto& p : part) {
        if (map[p] == std::numeric_limits<std::size_t>::max())
            map[p] = next++;
        p = map[p];
    }
    return next;
}

class Leiden {
public:
    Leiden(double gamma, Rng& rng) : gamma_(gamma), rng_(rng) {}

    // Queue-based local moving. Returns true if any node changed community.
    bool move_nodes(const LeidenGraph& g, std::vector<std::size_t>& part) {
        const auto n = g.size();
        std::vector<double> total(n, 0.0);
        std::vector<std::size_t> members(n, 0);
        for (std::size_t v = 0; v < n; ++v) {
            total[part[v]] += g.strength[v];
            ++members[part[v]];
        }
        std::vector<std::size_t> empty;
        for (std::size_t k = n; k-- > 0;)
            if (members[k] == 0)
                empty.push_back(k);

        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        shuffle(std::span(order), rng_);
        std::deque<std::size_t> queue(order.begin(), order.end());
        std::vector<bool> queued(n, true);

        std::vector<double> link(n, 0.0);
        std::vector<std::size_t> touched;
        bool changed = false;
        while (!queue.empty()) {
            const auto v = queue.front();
            queue.pop_front();
            queued[v] = false;

            const auto own = part[v];
            const double kv = g.strength[v];
            for (const auto& nb : g.adj[v]) {
                const auto c = part[nb.node];
                if (link[c] == 0.0)
                    touched.push_back(c);
                link[c] += nb.weight;
            }
            total[own] -= kv;
            --members[own];

            auto gain = [&](std::size_t c) { return link[c] - gamma_ * kv * total[c] / g.two_w; };
            std::size_t best = own;
            double best_gain = gain(own);
            const double tol = 1e-13 * (1.0 + std::abs(best_gain) + kv);
            // Ascending scan with strict improvement: ties go to the lowest index.
            std::sort(touched.begin(), touched.end());
            for (auto c : touched) {
                const double gc = gain(c);
                if (c != own && gc > best_gain + tol) {
                    best = c;
                    best_gain = gc;
                }
            }
            if (members[own] > 0 && !empty.empty() && 0.0 > best_gain + tol)
                best = empty.back();

            for (auto c : touched)
                link[c] = 0.0;
            touched.clear();

            if (best != own) {
                if (members[own] == 0)
                    empty.push_back(own);
                if (!empty.empty() && empty.back() == best)
                    empty.pop_back();
                changed = true;
                part[v] = best;
                for (const auto& nb : g.adj[v]) {
                    if (!queued[nb.node] && part[nb.node] != best) {
                        queued[nb.node] = true;
                        queue.push_back(nb.node);
                    }
                }
            }
            total[part[v]] += kv;
            ++members[part[v]];
        }
        return changed;
    }

    // Refines each community of `part` by merging singletons into
    // well-connected subcommunities. Returns the refined partition.
    std::vector<std::size_t> refine(const LeidenGraph& g, const std::vector<std::size_t>& part,
                                    std::size_t count) {
        const auto n = g.size();
        std::vector<std::size_t> refined(n);
        std::iota(refined.begin(), refined.end(), 0);
        std::vector<double> ref_total(g.strength);
        std::vector<std::size_t> ref_size(n, 1);

        std::vector<double> comm_total(count, 0.0);
        std::vector<std::vector<std::size_t>> members(count);
        for (std::size_t v = 0; v < n; ++v) {
            comm_total[part[v]] += g.strength[v];
            members[part[v]].push_back(v);
        }
        // Weight from each node (and refined community) to the rest of its community.
        std::vector<double> ext(n, 0.0);
        for (std::size_t v = 0; v < n; ++v)
            for (const auto& nb : g.adj[v])
                if (part[nb.node] == part[v])
                    ext[v] += nb.weight;
        std::vector<double> ref_ext(ext);

        std::vector<double> link(n, 0.0);
        std::vector<std::size_t> touched, candidates;
        for (std::size_t k = 0; k < count; ++k) {
            auto& nodes = members[k];
            shuffle(std::span(nodes), rng_);
            const double kc = comm_total[k];
            for (auto v : nodes) {
                if (ref_size[refined[v]] != 1)
                    continue;
                const double kv = g.strength[v];
                if (ext[v] < gamma_ * kv * (kc - kv) / g.two_w)
                    continue;
                for (const auto& nb : g.adj[v]) {
                    if (part[nb.node] != k)
                        continue;
                    const auto r = refined[nb.node];
                    if (link[r] == 0.0)
                        touched.push_back(r);
                    link[r] += nb.weight;
                }
                std::sort(touched.begin(), touched.end());
                candidates.clear();
                for (auto r : touched) {
                    if (r == refined[v])
                        continue;
                    const double kr = ref_total[r];
                    const bool well_connected = ref_ext[r] >= gamma_ * kr * (kc - kr) / g.two_w;
                    const double delta = link[r] - gamma_ * kv * kr / g.two_w;
                    if (well_connected && delta >= 0.0)
                        candidates.push_back(r);
                }
                if (!candidates.empty()) {
                    const auto target = candidates[uniform_index(rng_, candidates.size())];
                    const auto src = refined[v];
                    ref_ext[target] = ref_ext[target] + ext[v] - 2.0 * link[target];
                    ref_total[target] += kv;
                    ++ref_size[target];
                    ref_total[src] = 0.0;
                    ref_size[src] = 0;
                    refined[v] = target;
                }
                for (auto r : touched)
                    link[r] = 0.0;
                touched.clear();
            }
        }
        return refined;
    }

private:
    double gamma_;
    Rng& rng_;
};

// Splits every community into its connected components (components are
// visited in node order, so the result is deterministic).
inline std::vector<std::size_t> split_disconnected(const WeightedGraph& g,
                                                   const std::vector<std::size_t>& part) {
    const auto n = g.node_count();
    std::vector<std::size_t> out(n, std::numeric_limits<std::size_t>::max());
    std::size_t next = 0;
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < n; ++s) {
        if (out[s] != std::numeric_limits<std::size_t>::max())
            continue;
        out[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            for (const auto& nb : g.neighbors(v)) {
                if (part[nb.node] == part[s] && out[nb.node] == std::numeric_limits<std::size_t>::max()) {
                    out[nb.node] = next;
                    stack.push_back(nb.node);
                }
            }
        }
        ++next;
    }
    return out;
}

} // namespace detail

/// Leiden optimisation of rb_quality. Deterministic for a given (graph,
/// config); every returned community induces a connected subgraph.
inline LeidenResult leiden(const WeightedGraph& g, const DetectConfig& cfg = {}) {
    cfg.validate();
    LeidenResult result;
    const auto n = g.node_count();
    if (n == 1) {
        result.communities = CommunityAssignment({0}, 1);
        result.quality = strength(g, 0) > 0.0 ? rb_quality(g, result.communities, cfg.resolution) : 0.0;
        result.pass_qualities = {result.quality};
        return result;
    }
    auto work = detail::LeidenGraph::from(g);
    if (!(work.two_w > 0.0)) {
        // No weight anywhere: every node is its own community.
        std::vector<std::size_t> labels(n);
        std::iota(labels.begin(), labels.end(), 0);
        result.communities = CommunityAssignment(std::move(labels), n);
        return result;
    }

    Rng rng(stream_seed(cfg.seed, 0x1e1de4));
    detail::Leiden engine(cfg.resolution, rng);

    // membership[v] = node of `work` that original node v currently sits in.
    std::vector<std::size_t> membership(n);
    std::iota(membership.begin(), membership.end(), 0);
    std::vector<std::size_t> part(n);
    std::iota(part.begin(), part.end(), 0);

    result.pass_qualities.push_back(detail::quality_of(work, part, n, cfg.resolution));
    for (int pass = 0; pass < cfg.max_passes; ++pass) {
        engine.move_nodes(work, part);
        auto count = detail::renumber(part);
        result.passes = pass + 1;
        result.pass_qualities.push_back(detail::quality_of(work, part, count, cfg.resolution));
        if (count == work.size())
            break;

        auto refined = engine.refine(work, part, count);
        auto refined_count = detail::renumber(refined);
        if (refined_count == work.size()) {
            // Refinement made no merges; collapse by the partition itself.
            refined = part;
            refined_count = count;
        }
        std::vector<std::size_t> next_part(refined_count);
        for (std::size_t v = 0; v < work.size(); ++v)
            next_part[refined[v]] = part[v];
        work = work.collapse(refined, refined_count);
        for (auto& m : membership)
            m = refined[m];
        part = std::move(next_part);
    }

    std::vector<std::size_t> flat(n);
    for (std::size_t v = 0; v < n; ++v)
        flat[v] = part[membership[v]];
    flat = detail::split_disconnected(g, flat);
    const auto r = detail::renumber(flat);
    result.communities = CommunityAssignment(std::move(flat), r);
    result.quality = rb_quality(g, result.communities, cfg.resolution);
    return result;
}

} // namespace lfmm
