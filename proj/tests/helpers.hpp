#pragma once

// Small generators shared by the test suites. Kept header-only and
// deterministic: every graph is a pure function of its arguments.

#include <vector>

#include "anonet/graph.hpp"
#include "anonet/rng.hpp"

namespace testutil {

inline anonet::Graph er_graph(anonet::NodeId n, double p, std::uint64_t seed) {
    anonet::Rng rng(anonet::derive_seed(seed, 0xE3));
    std::vector<anonet::Edge> edges;
    for (anonet::NodeId u = 0; u < n; ++u)
        for (anonet::NodeId v = u + 1; v < n; ++v)
            if (rng.bernoulli(p)) edges.emplace_back(u, v);
    return anonet::Graph::from_edges(n, std::move(edges));
}

// Adjacency matrix view, for brute-force oracles.
inline std::vector<std::vector<bool>> dense_adjacency(const anonet::Graph& g) {
    std::vector<std::vector<bool>> adj(g.node_count(),
                                       std::vector<bool>(g.node_count(), false));
    for (const auto& [u, v] : g.edges()) {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    return adj;
}

}  // namespace testutil
