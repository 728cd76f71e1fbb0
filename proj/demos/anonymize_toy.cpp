// End-to-end tour on a small synthetic network: measure uniqueness, spend a
// 10% deletion budget with each algorithm, then look at what the best GA
// solution did to the graph's utility.

#include <cstdio>

#include "anonet/anonymity.hpp"
#include "anonet/baselines.hpp"
#include "anonet/evolution.hpp"
#include "anonet/graph.hpp"
#include "anonet/rng.hpp"
#include "anonet/utility.hpp"

using namespace anonet;

// Two communities of 8 nodes joined by a couple of bridges, plus some random
// chords so most degree/triangle states start out unique.
static Graph make_toy(std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Edge> edges;
    auto add = [&](NodeId a, NodeId b) {
        if (a != b) edges.emplace_back(std::min(a, b), std::max(a, b));
    };
    for (NodeId base : {NodeId{0}, NodeId{8}})
        for (NodeId i = 0; i < 8; ++i)
            for (NodeId j = i + 1; j < 8; ++j)
                if (rng.bernoulli(0.55)) add(base + i, base + j);
    add(0, 8);
    add(3, 12);
    for (int k = 0; k < 6; ++k)
        add(static_cast<NodeId>(rng.below(16)), static_cast<NodeId>(rng.below(16)));
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return Graph::from_edges(16, edges);
}

int main() {
    const Graph g = make_toy(7);
    const AnonymityView view(g);
    std::printf("toy graph: %u nodes, %u edges, |V_u| = %u (U = %.2f)\n", g.node_count(),
                g.edge_count(), view.unique_count(), view.uniqueness());

    const std::uint32_t gamma = budget(g.edge_count(), 0.10);
    std::printf("deletion budget: %u edges (10%%)\n\n", gamma);

    GaConfig cfg;
    cfg.mu = 20;
    cfg.lambda = 30;
    cfg.crossover = CrossoverMode::Uniform;
    cfg.gamma_frac = 0.10;
    cfg.seed = 1;

    RunResult ga = run_ga(g, cfg);
    std::printf("ga   : |V_u| %u -> %u in %u generations (%u deletions)\n", view.unique_count(),
                ga.best_unique, ga.generations, ga.best_bits.count());

    cfg.uniqueness_aware = true;
    RunResult uga = run_ga(g, cfg);
    std::printf("uga  : |V_u| %u -> %u in %u generations (%u deletions)\n", view.unique_count(),
                uga.best_unique, uga.generations, uga.best_bits.count());

    const BaselineTrace es = edge_sampling(g, gamma, 10, 1);
    std::printf("es   : |V_u| %u -> %u\n", es.uniqueness_curve.front(),
                es.uniqueness_curve.back());

    const BaselineTrace ua = unique_affect_greedy(g, gamma, 10, 1);
    std::printf("ua   : |V_u| %u -> %u\n", ua.uniqueness_curve.front(),
                ua.uniqueness_curve.back());

    std::vector<bool> mask(g.edge_count(), false);
    ga.best_bits.for_each_one([&](std::uint32_t e) { mask[e] = true; });
    const UtilityReport r = utility_report(g, mask, 99, 25);
    std::printf("\nutility of the ga solution:\n");
    std::printf("  deleted fraction      %.4f\n", r.frac_deleted);
    std::printf("  clustering delta      %.4f\n", r.delta_clustering);
    std::printf("  avg distance delta    %.4f\n", r.delta_avg_distance);
    std::printf("  lcc fraction delta    %.4f\n", r.delta_lcc_frac);
    std::printf("  betweenness overlap   %.2f\n", r.betweenness_top100_overlap);
    std::printf("  community nmi         %.3f\n", r.community_nmi);
    return 0;
}
