#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace anonet {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;  // always stored as (min, max)

// Simple undirected graph, immutable after construction.
//
// Edges are kept in lexicographic (u, v) order and indexed 0..m-1; this
// ordering is the canonical bit <-> edge mapping every deletion bitstring
// relies on, so it must be stable across runs. Adjacency is CSR with a
// parallel array of edge ids, which lets edge-level bookkeeping (deleted
// flags) be consulted while walking neighborhoods.
class Graph {
public:
    Graph() = default;

    // `pairs` may be unordered within each pair; self-loops and duplicates
    // are rejected. Node ids must be < node_count.
    static Graph from_edges(NodeId node_count, std::vector<Edge> pairs) {
        for (auto& [u, v] : pairs) {
            if (u == v) throw std::invalid_argument("graph: self-loop not allowed");
            if (u > v) std::swap(u, v);
            if (v >= node_count) throw std::invalid_argument("graph: node id out of range");
        }
        std::sort(pairs.begin(), pairs.end());
        if (std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end())
            throw std::invalid_argument("graph: duplicate edge");
        return Graph(node_count, std::move(pairs));
    }

    NodeId node_count() const { return n_; }
    EdgeId edge_count() const { return static_cast<EdgeId>(edges_.size()); }

    const std::vector<Edge>& edges() const { return edges_; }
    Edge edge(EdgeId e) const { return edges_[e]; }

    std::span<const NodeId> neighbors(NodeId v) const {
        return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
    }
    // Edge ids parallel to neighbors(v).
    std::span<const EdgeId> incident_edges(NodeId v) const {
        return {adj_edge_.data() + offsets_[v], adj_edge_.data() + offsets_[v + 1]};
    }

    NodeId degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

    bool has_edge(NodeId v, NodeId w) const { return find_edge(v, w).has_value(); }

    // Index of edge {v, w} in canonical order, if present.
    std::optional<EdgeId> find_edge(NodeId v, NodeId w) const {
        if (v == w) return std::nullopt;
        Edge key{std::min(v, w), std::max(v, w)};
        auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
        if (it == edges_.end() || *it != key) return std::nullopt;
        return static_cast<EdgeId>(it - edges_.begin());
    }

private:
    Graph(NodeId n, std::vector<Edge> sorted_edges)
        : n_(n), edges_(std::move(sorted_edges)) {
        offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
        for (const auto& [u, v] : edges_) {
            ++offsets_[u + 1];
            ++offsets_[v + 1];
        }
        for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
        adj_.resize(2 * edges_.size());
        adj_edge_.resize(2 * edges_.size());
        std::vector<NodeId> cursor(offsets_.begin(), offsets_.end() - 1);
        // Scanning edges in lexicographic order fills every adjacency list in
        // ascending neighbor order: a node sees all smaller neighbors first
        // (as high endpoint), then all larger ones (as low endpoint).
        for (EdgeId e = 0; e < edges_.size(); ++e) {
            const auto [u, v] = edges_[e];
            adj_[cursor[u]] = v;
            adj_edge_[cursor[u]++] = e;
            adj_[cursor[v]] = u;
            adj_edge_[cursor[v]++] = e;
        }
    }

    NodeId n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::uint32_t> offsets_;
    std::vector<NodeId> adj_;
    std::vector<EdgeId> adj_edge_;
};

// ---------------------------------------------------------------------------
// Loading

struct LoadedGraph {
    Graph graph;
    std::vector<std::string> labels;  // internal id -> original token
};

// Reads a whitespace- or comma-separated edge list. Lines starting with '#'
// or '%' are comments; blank lines are ignored. The first two tokens of each
// line are node identifiers (arbitrary strings, mapped densely to 0..n-1 in
// first-seen order); extra columns such as weights or timestamps are ignored.
// Self-loops are dropped and duplicate/reversed edges merged.
inline LoadedGraph load_edge_list(std::istream& in) {
    std::unordered_map<std::string, NodeId> ids;
    std::vector<std::string> labels;
    std::vector<Edge> edges;
    auto intern = [&](const std::string& tok) {
        auto [it, fresh] = ids.emplace(tok, static_cast<NodeId>(labels.size()));
        if (fresh) labels.push_back(tok);
        return it->second;
    };

    std::string line;
    std::size_t lineno = 0;
    bool saw_data = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::string a, b;
        std::size_t i = 0, found = 0;
        auto is_sep = [](char ch) {
            return ch == ' ' || ch == '\t' || ch == ',' || ch == '\r' || ch == '\n';
        };
        while (i < line.size() && found < 2) {
            while (i < line.size() && is_sep(line[i])) ++i;
            if (i >= line.size()) break;
            std::size_t start = i;
            while (i < line.size() && !is_sep(line[i])) ++i;
            (found == 0 ? a : b) = line.substr(start, i - start);
            ++found;
        }
        if (found == 0) continue;  // blank line
        if (a[0] == '#' || a[0] == '%') continue;
        if (found < 2)
            throw std::runtime_error("edge list: line " + std::to_string(lineno) +
                                     ": expected two node tokens");
        saw_data = true;
        NodeId u = intern(a), v = intern(b);
        if (u == v) continue;
        edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    if (!saw_data) throw std::runtime_error("edge list: no edges found");
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return {Graph::from_edges(static_cast<NodeId>(labels.size()), std::move(edges)), std::move(labels)};
}

// ---------------------------------------------------------------------------
// Elementary queries

inline std::vector<NodeId> common_neighbors(const Graph& g, NodeId v, NodeId w) {
    auto a = g.neighbors(v), b = g.neighbors(w);
    std::vector<NodeId> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// Triangles through every node at once. For each edge (u, v) every common
// neighbor c closes the triangle {u, v, c}; over the three edges of a
// triangle each corner is counted exactly once.
inline std::vector<std::uint32_t> triangle_counts(const Graph& g) {
    std::vector<std::uint32_t> tri(g.node_count(), 0);
    for (const auto& [u, v] : g.edges()) {
        auto a = g.neighbors(u), b = g.neighbors(v);
        auto i = a.begin();
        auto j = b.begin();
        while (i != a.end() && j != b.end()) {
            if (*i < *j) ++i;
            else if (*j < *i) ++j;
            else { ++tri[*i]; ++i; ++j; }
        }
    }
    return tri;
}

inline std::uint32_t triangle_count(const Graph& g, NodeId v) {
    std::uint32_t twice = 0;
    for (NodeId u : g.neighbors(v))
        twice += static_cast<std::uint32_t>(common_neighbors(g, v, u).size());
    return twice / 2;  // each triangle at v is seen from both incident edges
}

// Derived graph with the edges whose bit is 1 removed. Nodes are kept, so
// deletion can strand isolated nodes; surviving edges keep their relative
// order but get fresh indices.
template <typename BitAt>
inline Graph delete_edges_if(const Graph& g, EdgeId nbits, BitAt&& bit_at) {
    if (nbits != g.edge_count())
        throw std::invalid_argument("delete_edges: bitstring length != edge count");
    std::vector<Edge> kept;
    kept.reserve(g.edge_count());
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        if (!bit_at(e)) kept.push_back(g.edge(e));
    return Graph::from_edges(g.node_count(), std::move(kept));
}

inline Graph delete_edges(const Graph& g, const std::vector<bool>& bits) {
    return delete_edges_if(g, static_cast<EdgeId>(bits.size()),
                           [&](EdgeId e) { return bits[e]; });
}

// ---------------------------------------------------------------------------
// Components

struct ComponentLabeling {
    std::vector<std::uint32_t> label;  // per node
    std::vector<std::uint32_t> size;   // per component id

    std::uint32_t count() const { return static_cast<std::uint32_t>(size.size()); }
    std::uint32_t largest_size() const {
        return size.empty() ? 0 : *std::max_element(size.begin(), size.end());
    }
    double largest_fraction(NodeId n) const {
        return n == 0 ? 0.0 : static_cast<double>(largest_size()) / n;
    }
};

inline ComponentLabeling connected_components(const Graph& g) {
    const NodeId n = g.node_count();
    ComponentLabeling out;
    out.label.assign(n, UINT32_MAX);
    std::vector<NodeId> queue;
    for (NodeId s = 0; s < n; ++s) {
        if (out.label[s] != UINT32_MAX) continue;
        const std::uint32_t id = out.count();
        out.size.push_back(0);
        queue.assign(1, s);
        out.label[s] = id;
        while (!queue.empty()) {
            NodeId v = queue.back();
            queue.pop_back();
            ++out.size[id];
            for (NodeId w : g.neighbors(v)) {
                if (out.label[w] == UINT32_MAX) {
                    out.label[w] = id;
                    queue.push_back(w);
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Clustering

inline double local_clustering(const Graph& g, NodeId v) {
    const std::uint64_t d = g.degree(v);
    if (d < 2) return 0.0;  // the ratio is undefined there; see average below
    return static_cast<double>(triangle_count(g, v)) / (0.5 * d * (d - 1));
}

// Mean of the node clustering coefficient over all nodes (nodes with degree
// < 2 contribute 0).
inline double average_clustering(const Graph& g) {
    if (g.node_count() == 0) throw std::invalid_argument("average_clustering: empty graph");
    const auto tri = triangle_counts(g);
    double sum = 0.0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const std::uint64_t d = g.degree(v);
        if (d >= 2) sum += static_cast<double>(tri[v]) / (0.5 * d * (d - 1));
    }
    return sum / g.node_count();
}

// ---------------------------------------------------------------------------
// Distances

// BFS levels from src; unreachable nodes get -1.
inline std::vector<std::int32_t> bfs_distances(const Graph& g, NodeId src) {
    std::vector<std::int32_t> dist(g.node_count(), -1);
    std::vector<NodeId> frontier{src}, next;
    dist[src] = 0;
    std::int32_t level = 0;
    while (!frontier.empty()) {
        ++level;
        next.clear();
        for (NodeId v : frontier)
            for (NodeId w : g.neighbors(v))
                if (dist[w] < 0) {
                    dist[w] = level;
                    next.push_back(w);
                }
        frontier.swap(next);
    }
    return dist;
}

struct DistanceStats {
    double average = 0.0;       // over unordered finite-distance pairs
    std::uint32_t diameter = 0; // largest finite distance
    std::uint64_t finite_pairs = 0;
};

// All-pairs BFS. Pairs in different components are ignored; sums stay in
// 64-bit integers until the final division.
inline DistanceStats distance_stats(const Graph& g) {
    std::uint64_t total = 0, pairs = 0;
    std::uint32_t diameter = 0;
    for (NodeId s = 0; s < g.node_count(); ++s) {
        auto dist = bfs_distances(g, s);
        for (NodeId t = s + 1; t < g.node_count(); ++t) {
            if (dist[t] < 0) continue;
            total += static_cast<std::uint64_t>(dist[t]);
            diameter = std::max(diameter, static_cast<std::uint32_t>(dist[t]));
            ++pairs;
        }
    }
    if (pairs == 0) throw std::runtime_error("distance_stats: no finite-distance pair");
    return {static_cast<double>(total) / static_cast<double>(pairs), diameter, pairs};
}

inline double average_distance(const Graph& g) { return distance_stats(g).average; }

}  // namespace anonet
