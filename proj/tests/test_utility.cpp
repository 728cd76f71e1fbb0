#include "anonet/utility.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace anonet;
using testutil::dense_adjacency;
using testutil::er_graph;

namespace {

// Betweenness oracle straight from the definition: distance matrix by
// Floyd-Warshall, per-source path counts by a DP over distances, then the
// explicit pair sum bc(w) = sum over s<t of sigma_st(w) / sigma_st.
std::vector<double> betweenness_by_definition(const Graph& g) {
    const NodeId n = g.node_count();
    const auto adj = dense_adjacency(g);
    constexpr int kInf = 1 << 20;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
    for (NodeId i = 0; i < n; ++i) d[i][i] = 0;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = 0; j < n; ++j)
            if (adj[i][j]) d[i][j] = 1;
    for (NodeId k = 0; k < n; ++k)
        for (NodeId i = 0; i < n; ++i)
            for (NodeId j = 0; j < n; ++j)
                d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);

    // sigma[s][v]: number of shortest s-v paths, filled in distance order
    std::vector<std::vector<double>> sigma(n, std::vector<double>(n, 0.0));
    for (NodeId s = 0; s < n; ++s) {
        sigma[s][s] = 1.0;
        std::vector<NodeId> by_dist(n);
        for (NodeId v = 0; v < n; ++v) by_dist[v] = v;
        std::sort(by_dist.begin(), by_dist.end(),
                  [&](NodeId a, NodeId b) { return d[s][a] < d[s][b]; });
        for (const NodeId v : by_dist) {
            if (v == s || d[s][v] >= kInf) continue;
            for (NodeId u = 0; u < n; ++u)
                if (adj[u][v] && d[s][u] + 1 == d[s][v]) sigma[s][v] += sigma[s][u];
        }
    }

    std::vector<double> bc(n, 0.0);
    for (NodeId s = 0; s < n; ++s)
        for (NodeId t = s + 1; t < n; ++t) {
            if (d[s][t] >= kInf || sigma[s][t] == 0.0) continue;
            for (NodeId w = 0; w < n; ++w) {
                if (w == s || w == t) continue;
                if (d[s][w] + d[w][t] == d[s][t])
                    bc[w] += sigma[s][w] * sigma[w][t] / sigma[s][t];
            }
        }
    return bc;
}

// All set partitions of {0..n-1} as restricted growth strings.
std::vector<std::vector<std::uint32_t>> all_partitions(std::uint32_t n) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::uint32_t> a(n, 0);
    while (true) {
        out.push_back(a);
        // next restricted growth string
        std::int64_t i = n - 1;
        while (i > 0) {
            std::uint32_t maxprefix = 0;
            for (std::int64_t j = 0; j < i; ++j) maxprefix = std::max(maxprefix, a[j]);
            if (a[i] <= maxprefix) break;
            --i;
        }
        if (i == 0) return out;
        ++a[i];
        for (std::uint32_t j = i + 1; j < n; ++j) a[j] = 0;
    }
}

// Two triangles joined by a bridge: the classic two-community graph.
Graph two_triangles() {
    return Graph::from_edges(6, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {4, 5}});
}

}  // namespace

TEST_CASE("betweenness on hand-solved graphs") {
    const Graph path = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
    const auto bp = betweenness(path);
    REQUIRE(bp[0] == 0.0);
    REQUIRE(bp[1] == Catch::Approx(2.0));
    REQUIRE(bp[2] == Catch::Approx(2.0));
    REQUIRE(bp[3] == 0.0);

    const Graph star = Graph::from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    const auto bs = betweenness(star);
    REQUIRE(bs[0] == Catch::Approx(6.0));  // all C(4,2) leaf pairs
    for (int v = 1; v < 5; ++v) REQUIRE(bs[v] == 0.0);

    std::vector<Edge> ring;
    for (NodeId i = 0; i < 5; ++i)
        ring.emplace_back(std::min<NodeId>(i, (i + 1) % 5), std::max<NodeId>(i, (i + 1) % 5));
    const auto bc = betweenness(Graph::from_edges(5, ring));
    for (int v = 0; v < 5; ++v) REQUIRE(bc[v] == Catch::Approx(1.0));
}

TEST_CASE("betweenness matches the definitional oracle") {
    for (std::uint64_t s = 0; s < 80; ++s) {
        const NodeId n = 10 + static_cast<NodeId>(s % 16);
        const Graph g = er_graph(n, 0.25, s + 300);  // often disconnected
        const auto fast = betweenness(g);
        const auto oracle = betweenness_by_definition(g);
        for (NodeId v = 0; v < n; ++v)
            REQUIRE(fast[v] == Catch::Approx(oracle[v]).margin(1e-9));
    }
}

TEST_CASE("top-k overlap") {
    REQUIRE(topk_overlap({3, 2, 1}, {3, 2, 1}, 2) == 1.0);
    REQUIRE(topk_overlap({10, 9, 0, 0}, {0, 0, 10, 9}, 2) == 0.0);
    // ties break toward the lower id
    REQUIRE(topk_overlap({5, 5, 5, 1}, {5, 5, 5, 9}, 2) == Catch::Approx(0.5));
    // k larger than n compares the full rankings
    REQUIRE(topk_overlap({1, 2}, {2, 1}, 100) == 1.0);
    REQUIRE_THROWS_AS(topk_overlap({1}, {1, 2}, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(topk_overlap({}, {}, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(topk_overlap({1}, {1}, 0), std::invalid_argument);
}

TEST_CASE("canonicalize renames to first-seen order") {
    Partition p;
    p.label = {2, 2, 0, 1, 0};
    canonicalize(p);
    REQUIRE(p.label == std::vector<std::uint32_t>{0, 0, 1, 2, 1});
    REQUIRE(p.community_count() == 3);
}

TEST_CASE("modularity hand values") {
    const Graph g = two_triangles();
    Partition split;
    split.label = {0, 0, 0, 1, 1, 1};
    REQUIRE(modularity(g, split) == Catch::Approx(6.0 / 7.0 - 0.5));
    Partition whole;
    whole.label = {0, 0, 0, 0, 0, 0};
    REQUIRE(modularity(g, whole) == Catch::Approx(0.0).margin(1e-15));
    Partition bad;
    bad.label = {0, 0};
    REQUIRE_THROWS_AS(modularity(g, bad), std::invalid_argument);
}

TEST_CASE("louvain and consensus find the exhaustively best split") {
    const Graph g = two_triangles();
    const auto partitions = all_partitions(6);
    REQUIRE(partitions.size() == 203);  // Bell(6)

    double best_q = -1.0;
    Partition best;
    for (const auto& labels : partitions) {
        Partition p;
        p.label = labels;
        const double q = modularity(g, p);
        if (q > best_q) {
            best_q = q;
            best = p;
        }
    }
    canonicalize(best);
    REQUIRE(best.label == std::vector<std::uint32_t>{0, 0, 0, 1, 1, 1});

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(seed);
        const Partition got = louvain(g, rng);
        REQUIRE(got.label == best.label);
    }
    Rng crng(5);
    const Partition cons = consensus_partition(g, 25, crng);
    REQUIRE(cons.label == best.label);
}

TEST_CASE("louvain output is a dense canonical labeling and deterministic") {
    const Graph g = er_graph(40, 0.15, 9);
    Rng r1(11), r2(11), r3(12);
    const Partition a = louvain(g, r1);
    const Partition b = louvain(g, r2);
    REQUIRE(a.label == b.label);
    REQUIRE(a.label.size() == g.node_count());
    // labels are 0..k-1 in first-seen order
    std::uint32_t seen = 0;
    for (const auto l : a.label) {
        REQUIRE(l <= seen);
        if (l == seen) ++seen;
    }
    REQUIRE(seen == a.community_count());
    // a different stream may find a different local optimum, but must still
    // produce a valid labeling
    const Partition c = louvain(g, r3);
    REQUIRE(c.label.size() == g.node_count());
}

TEST_CASE("weighted louvain splits weighted cliques") {
    // two heavy pairs connected by a feather-light bridge
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> edges{
        {0, 1, 10.0}, {2, 3, 10.0}, {1, 2, 0.1}};
    Rng rng(3);
    const Partition p = louvain_weighted(4, edges, rng);
    REQUIRE(p.label[0] == p.label[1]);
    REQUIRE(p.label[2] == p.label[3]);
    REQUIRE(p.label[0] != p.label[2]);

    SECTION("non-positive weights are ignored") {
        edges.push_back({0, 3, 0.0});
        edges.push_back({0, 2, -5.0});
        Rng rng2(3);
        REQUIRE(louvain_weighted(4, edges, rng2).label == p.label);
    }
}

TEST_CASE("nmi properties") {
    SECTION("hand value") {
        Partition p, q;
        p.label = {0, 0, 1, 1};
        q.label = {0, 0, 1, 2};
        REQUIRE(nmi(p, q) == Catch::Approx(0.8));
        REQUIRE(nmi(q, p) == Catch::Approx(0.8));
    }
    SECTION("independence gives zero") {
        Partition p, q;
        p.label = {0, 0, 1, 1};
        q.label = {0, 1, 0, 1};
        REQUIRE(nmi(p, q) == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("single-community against a real split is zero") {
        Partition p, q;
        p.label = {0, 0, 0, 0};
        q.label = {0, 0, 1, 1};
        REQUIRE(nmi(p, q) == 0.0);
        // two flat partitions carry no information but are the same partition
        Partition r;
        r.label = {0, 0, 0, 0};
        REQUIRE(nmi(p, r) == 1.0);
    }
    SECTION("identity, symmetry, relabeling on random pairs") {
        Rng rng(2718);
        for (int t = 0; t < 100; ++t) {
            const std::uint32_t n = 10 + rng.below_u32(30);
            Partition p, q;
            const std::uint32_t kp = 1 + rng.below_u32(5), kq = 1 + rng.below_u32(5);
            for (std::uint32_t v = 0; v < n; ++v) {
                p.label.push_back(rng.below_u32(kp));
                q.label.push_back(rng.below_u32(kq));
            }
            canonicalize(p);
            canonicalize(q);
            REQUIRE(nmi(p, p) == 1.0);
            const double pq = nmi(p, q);
            REQUIRE(pq >= 0.0);
            REQUIRE(pq <= 1.0);
            REQUIRE(nmi(q, p) == Catch::Approx(pq).margin(1e-12));
            // renaming communities changes nothing
            Partition shuffled = p;
            const std::uint32_t k = p.community_count();
            for (auto& l : shuffled.label) l = (l + 1) % k;
            REQUIRE(nmi(shuffled, q) == Catch::Approx(pq).margin(1e-12));
        }
    }
    SECTION("errors") {
        Partition p, q;
        p.label = {0, 1};
        q.label = {0};
        REQUIRE_THROWS_AS(nmi(p, q), std::invalid_argument);
        REQUIRE_THROWS_AS(nmi(Partition{}, Partition{}), std::invalid_argument);
    }
}

TEST_CASE("consensus is deterministic and honors unanimity") {
    const Graph g = two_triangles();
    Rng a(7), b(7);
    const Partition pa = consensus_partition(g, 10, a);
    const Partition pb = consensus_partition(g, 10, b);
    REQUIRE(pa.label == pb.label);
    Rng bad(1);
    REQUIRE_THROWS_AS(consensus_partition(g, 0, bad), std::invalid_argument);
}

TEST_CASE("utility report: identity comparison is exact") {
    const Graph g = er_graph(25, 0.2, 1234);
    const std::vector<bool> none(g.edge_count(), false);
    const UtilityReport r = utility_report(g, none, 42, 20);
    REQUIRE(r.frac_deleted == 0.0);
    REQUIRE(r.delta_clustering == 0.0);
    REQUIRE(r.delta_avg_distance == 0.0);
    REQUIRE(r.delta_lcc_frac == 0.0);
    REQUIRE(r.betweenness_top100_overlap == 1.0);
    REQUIRE(r.community_nmi == 1.0);
}

TEST_CASE("utility report: bridge deletion on the two-triangle graph") {
    const Graph g = two_triangles();
    std::vector<bool> del(g.edge_count(), false);
    del[*g.find_edge(2, 3)] = true;
    const UtilityReport r = utility_report(g, del, 9, 15);
    REQUIRE(r.frac_deleted == Catch::Approx(1.0 / 7.0));
    REQUIRE(r.delta_lcc_frac == Catch::Approx(0.5 - 1.0));
    REQUIRE(r.delta_clustering == Catch::Approx(1.0 - 7.0 / 9.0));
    // the communities survive the split intact
    REQUIRE(r.community_nmi == Catch::Approx(1.0));
}

TEST_CASE("utility report: deleting everything") {
    const Graph g = two_triangles();
    const std::vector<bool> all(g.edge_count(), true);
    const UtilityReport r = utility_report(g, all, 5, 10);
    REQUIRE(r.frac_deleted == 1.0);
    REQUIRE(std::isnan(r.delta_avg_distance));
    REQUIRE(r.delta_lcc_frac == Catch::Approx(1.0 / 6.0 - 1.0));
}

TEST_CASE("distances cannot shrink while the component structure survives") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Graph g = er_graph(18, 0.3, s + 900);
        if (g.edge_count() < 10) continue;
        // delete a few edges, keep only trials that preserve the components
        std::vector<bool> del(g.edge_count(), false);
        Rng rng(s);
        for (int k = 0; k < 3; ++k) del[rng.below_u32(g.edge_count())] = true;
        const Graph anon = delete_edges(g, del);
        if (connected_components(anon).label != connected_components(g).label) continue;
        const UtilityReport r = utility_report(g, del, 1, 5);
        REQUIRE(r.delta_avg_distance >= 0.0);
    }
}
