#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "anonet/anonymity.hpp"
#include "anonet/graph.hpp"
#include "anonet/rng.hpp"

namespace anonet {

// What one baseline run did: the deleted edges in deletion order and the
// unique-node count sampled before any deletion and then after every batch.
struct BaselineTrace {
    std::vector<EdgeId> deleted;
    std::vector<std::uint32_t> uniqueness_curve;
    std::uint64_t seed = 0;
};

inline std::int64_t uniqueness_reduction(const BaselineTrace& trace) {
    return static_cast<std::int64_t>(trace.uniqueness_curve.front()) -
           static_cast<std::int64_t>(trace.uniqueness_curve.back());
}

namespace detail {

inline std::uint32_t deletion_batch_size(std::uint32_t gamma, std::uint32_t batches) {
    return (gamma + batches - 1) / batches;
}

inline void check_baseline_args(const Graph& g, std::uint32_t gamma, std::uint32_t batches) {
    if (gamma > g.edge_count())
        throw std::invalid_argument("baseline: gamma exceeds the edge count");
    if (batches < 1) throw std::invalid_argument("baseline: batches must be >= 1");
}

// Unique nodes whose state the deletion of e = {v, w} would change: the two
// endpoints plus every common neighbor both of whose triangle edges are still
// alive. unique_stale is the V_u snapshot of the last batch boundary; the
// adjacency is read live through the view's deletion mask.
inline std::uint32_t affected_unique_score(const Graph& g, const AnonymityView& view,
                                           const std::vector<std::uint8_t>& unique_stale,
                                           EdgeId e) {
    const auto [v, w] = g.edge(e);
    std::uint32_t score = unique_stale[v] + unique_stale[w];
    const auto vn = g.neighbors(v);
    const auto ve = g.incident_edges(v);
    const auto wn = g.neighbors(w);
    const auto we = g.incident_edges(w);
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < vn.size() && j < wn.size()) {
        if (vn[i] == wn[j]) {
            if (unique_stale[vn[i]] && !view.is_deleted(ve[i]) && !view.is_deleted(we[j])) ++score;
            ++i;
            ++j;
        } else if (vn[i] < wn[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return score;
}

}  // namespace detail

// Random edge sampling: gamma edges drawn uniformly without replacement and
// deleted in ceil(gamma/batches)-sized batches, sampling |V_u| after each
// batch (final partial batch allowed).
inline BaselineTrace edge_sampling(const Graph& g, std::uint32_t gamma, std::uint32_t batches,
                                   std::uint64_t seed) {
    detail::check_baseline_args(g, gamma, batches);
    Rng rng(seed);
    BaselineTrace trace;
    trace.seed = seed;

    AnonymityView view(g);
    trace.uniqueness_curve.push_back(view.unique_count());

    // Partial Fisher-Yates shuffle: the first gamma slots end up holding a
    // uniform sample without replacement, already in deletion order.
    const std::uint32_t m = g.edge_count();
    std::vector<EdgeId> ids(m);
    for (EdgeId e = 0; e < m; ++e) ids[e] = e;
    for (std::uint32_t i = 0; i < gamma; ++i) {
        const std::uint32_t j = i + rng.below_u32(m - i);
        std::swap(ids[i], ids[j]);
    }

    const std::uint32_t chunk = detail::deletion_batch_size(gamma, batches);
    for (std::uint32_t i = 0; i < gamma; ++i) {
        view.delete_edge(ids[i]);
        trace.deleted.push_back(ids[i]);
        if ((i + 1) % chunk == 0 || i + 1 == gamma)
            trace.uniqueness_curve.push_back(view.unique_count());
    }
    return trace;
}

// Greedy heuristic: every remaining edge is scored by how many unique nodes
// its deletion would affect, and a maximum-score edge is deleted (ties broken
// uniformly at random). The unique-node set V_u is refreshed only at batch
// boundaries; common neighbors are always read from the live adjacency, so
// earlier in-batch deletions do influence the scores.
inline BaselineTrace unique_affect_greedy(const Graph& g, std::uint32_t gamma,
                                          std::uint32_t batches, std::uint64_t seed) {
    detail::check_baseline_args(g, gamma, batches);
    Rng rng(seed);
    BaselineTrace trace;
    trace.seed = seed;

    AnonymityView view(g);
    trace.uniqueness_curve.push_back(view.unique_count());

    const std::uint32_t n = g.node_count();
    const std::uint32_t m = g.edge_count();
    std::vector<std::uint8_t> unique_stale(n);
    auto refresh_stale = [&] {
        for (NodeId v = 0; v < n; ++v) unique_stale[v] = view.is_unique(v) ? 1 : 0;
    };
    refresh_stale();

    const std::uint32_t chunk = detail::deletion_batch_size(gamma, batches);
    std::vector<EdgeId> ties;
    for (std::uint32_t del = 0; del < gamma; ++del) {
        std::uint32_t best_score = 0;
        ties.clear();
        for (EdgeId e = 0; e < m; ++e) {
            if (view.is_deleted(e)) continue;
            const std::uint32_t score = detail::affected_unique_score(g, view, unique_stale, e);
            if (ties.empty() || score > best_score) {
                best_score = score;
                ties.assign(1, e);
            } else if (score == best_score) {
                ties.push_back(e);
            }
        }
        const EdgeId pick = ties[rng.below_u32(static_cast<std::uint32_t>(ties.size()))];
        view.delete_edge(pick);
        trace.deleted.push_back(pick);
        if ((del + 1) % chunk == 0 || del + 1 == gamma) {
            trace.uniqueness_curve.push_back(view.unique_count());
            refresh_stale();
        }
    }
    return trace;
}

}  // namespace anonet
