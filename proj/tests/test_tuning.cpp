#include "anonet/tuning.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <set>
#include <sstream>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace anonet;
using testutil::er_graph;

namespace {

// A cheap stand-in grid so halving structure tests stay fast: tiny
// populations, uniform crossover, distinct mutation rates per entry.
std::vector<GaConfig> tiny_grid(std::uint32_t size) {
    std::vector<GaConfig> grid;
    for (std::uint32_t i = 0; i < size; ++i) {
        GaConfig cfg;
        cfg.mu = 6;
        cfg.lambda = 8;
        cfg.tau = 40;
        cfg.tournament_t = 2;
        cfg.gamma_frac = 0.1;
        cfg.crossover = CrossoverMode::Uniform;
        cfg.p_init = 0.05 * static_cast<double>(i % 3);
        cfg.alpha0 = 0.001 * static_cast<double>(i % 10 + 1);
        cfg.eta = (i % 2) ? 0.001 : 0.0;
        grid.push_back(cfg);
    }
    return grid;
}

std::string csv_of(const HalvingTrace& trace) {
    std::ostringstream out;
    write_halving_csv(trace, out);
    return out.str();
}

}  // namespace

TEST_CASE("hyperparameter grid enumerates 432 configurations") {
    const auto grid = enumerate_grid();
    REQUIRE(grid.size() == 432);
    for (const auto& cfg : grid) {
        REQUIRE(cfg.mu == 100);
        REQUIRE(cfg.lambda == 150);
        REQUIRE(cfg.tau == 40);
        REQUIRE(cfg.tournament_t == 5);
        REQUIRE(cfg.gamma_frac == 0.05);
        REQUIRE_FALSE(cfg.uniqueness_aware);
        REQUIRE_NOTHROW(cfg.validate());
    }

    // axis order: p_init, crossover, alpha0, eta, parental, environmental,
    // innermost last; spot-check the decode arithmetic
    REQUIRE(grid[0].p_init == 0.0025);
    REQUIRE(grid[0].crossover == CrossoverMode::CPoint);
    REQUIRE(grid[0].c == 10);
    REQUIRE(grid[0].alpha0 == 0.0001);
    REQUIRE(grid[0].eta == 0.0);
    REQUIRE(grid[0].parental == SelectionMode::Roulette);
    REQUIRE(grid[0].environmental == SelectionMode::Roulette);

    REQUIRE(grid[2].environmental == SelectionMode::MuPlusLambda);
    REQUIRE(grid[3].parental == SelectionMode::Tournament);
    REQUIRE(grid[6].eta == 0.00001);
    REQUIRE(grid[18].alpha0 == 0.0005);
    REQUIRE(grid[36].c == 25);
    REQUIRE(grid[108].crossover == CrossoverMode::Uniform);
    REQUIRE(grid[108].c == 25);  // uniform rows keep the placeholder c
    REQUIRE(grid[144].p_init == 0.005);
    REQUIRE(grid[288].p_init == 0.02);

    const auto& last = grid[431];
    REQUIRE(last.p_init == 0.02);
    REQUIRE(last.crossover == CrossoverMode::Uniform);
    REQUIRE(last.alpha0 == 0.0005);
    REQUIRE(last.eta == 0.000025);
    REQUIRE(last.parental == SelectionMode::Tournament);
    REQUIRE(last.environmental == SelectionMode::MuPlusLambda);

    // ids are distinct settings: no two rows share the whole tuple
    std::set<std::tuple<double, int, std::uint32_t, double, double, int, int>> seen;
    for (const auto& cfg : grid)
        seen.insert({cfg.p_init, static_cast<int>(cfg.crossover), cfg.c, cfg.alpha0, cfg.eta,
                     static_cast<int>(cfg.parental), static_cast<int>(cfg.environmental)});
    REQUIRE(seen.size() == 432);
}

TEST_CASE("halving keeps 50, 25, 13, 7") {
    const Graph g = er_graph(14, 0.3, 404);
    REQUIRE(g.edge_count() >= 15);
    const auto grid = tiny_grid(64);
    const HalvingTrace trace = successive_halving(g, grid, 50, 2, 99);

    REQUIRE(trace.sampled.size() == 50);
    REQUIRE(std::is_sorted(trace.sampled.begin(), trace.sampled.end()));
    REQUIRE(std::set<std::uint32_t>(trace.sampled.begin(), trace.sampled.end()).size() == 50);

    REQUIRE(trace.survivors.size() == 3);
    REQUIRE(trace.survivors[0].size() == 25);
    REQUIRE(trace.survivors[1].size() == 13);
    REQUIRE(trace.survivors[2].size() == 7);

    // each round keeps a subset of the previous roster
    auto subset_of = [](const std::vector<std::uint32_t>& small,
                        const std::vector<std::uint32_t>& big) {
        const std::set<std::uint32_t> pool(big.begin(), big.end());
        return std::all_of(small.begin(), small.end(),
                           [&](std::uint32_t id) { return pool.count(id) > 0; });
    };
    REQUIRE(subset_of(trace.survivors[0], trace.sampled));
    REQUIRE(subset_of(trace.survivors[1], trace.survivors[0]));
    REQUIRE(subset_of(trace.survivors[2], trace.survivors[1]));

    // curve bookkeeping: initial point plus epoch_gens per epoch survived
    for (const std::uint32_t id : trace.sampled) {
        const auto& curve = trace.curves.at(id);
        std::size_t epochs = 1;
        for (const auto& round : trace.survivors)
            if (std::count(round.begin(), round.end(), id)) ++epochs;
        if (epochs > 3) epochs = 3;  // final survivors ran every epoch
        REQUIRE(curve.size() == 1 + epochs * trace.epoch_gens);
        REQUIRE(std::is_sorted(curve.rbegin(), curve.rend()));  // non-increasing
    }
}

TEST_CASE("halving is deterministic and thread-count independent") {
    const Graph g = er_graph(14, 0.3, 404);
    const auto grid = tiny_grid(32);
    const HalvingTrace serial = successive_halving(g, grid, 20, 2, 7, {}, 1);
    const HalvingTrace again = successive_halving(g, grid, 20, 2, 7, {}, 1);
    const HalvingTrace parallel = successive_halving(g, grid, 20, 2, 7, {}, 4);

    REQUIRE(serial.sampled == again.sampled);
    REQUIRE(serial.survivors == again.survivors);
    REQUIRE(csv_of(serial) == csv_of(again));
    REQUIRE(csv_of(serial) == csv_of(parallel));

    const HalvingTrace other = successive_halving(g, grid, 20, 2, 8, {}, 1);
    REQUIRE(csv_of(serial) != csv_of(other));
}

TEST_CASE("halving csv layout") {
    const Graph g = er_graph(14, 0.3, 404);
    const auto grid = tiny_grid(16);
    const HalvingTrace trace = successive_halving(g, grid, 10, 3, 5);
    // 10 -> 5 -> 3: two halvings reach the <= 8 cutoff after the first
    REQUIRE(trace.survivors[0].size() == 5);

    std::istringstream in(csv_of(trace));
    std::string line;
    REQUIRE(std::getline(in, line));
    REQUIRE(line == "epoch,config_id,generation,best_f");

    std::size_t rows = 0;
    std::size_t epoch0 = 0;
    while (std::getline(in, line)) {
        ++rows;
        unsigned epoch, id, gen;
        long long best;
        REQUIRE(std::sscanf(line.c_str(), "%u,%u,%u,%lld", &epoch, &id, &gen, &best) == 4);
        if (epoch == 0) {
            ++epoch0;
            REQUIRE(gen == 0);
            REQUIRE(best == trace.curves.at(id).front());
        } else {
            // generation indexes fall inside the epoch's window
            REQUIRE(gen >= (epoch - 1) * trace.epoch_gens + 1);
            REQUIRE(gen <= epoch * trace.epoch_gens);
            REQUIRE(best == trace.curves.at(id)[gen]);
        }
    }
    const std::size_t epochs = trace.survivors.size();
    std::size_t expected = trace.sampled.size();  // epoch-0 block
    std::size_t roster = trace.sampled.size();
    for (std::size_t e = 0; e < epochs; ++e) {
        expected += roster * trace.epoch_gens;
        roster = trace.survivors[e].size();
    }
    REQUIRE(epoch0 == trace.sampled.size());
    REQUIRE(rows == expected);
}

TEST_CASE("pinned configurations join the sample") {
    const Graph g = er_graph(14, 0.3, 404);
    const auto grid = tiny_grid(16);
    const HalvingTrace trace = successive_halving(g, grid, 3, 1, 11, {15, 0});
    REQUIRE(trace.sampled.size() >= 3);
    REQUIRE(trace.sampled.size() <= 5);
    REQUIRE(std::count(trace.sampled.begin(), trace.sampled.end(), 15) == 1);
    REQUIRE(std::count(trace.sampled.begin(), trace.sampled.end(), 0) == 1);
    REQUIRE(std::set<std::uint32_t>(trace.sampled.begin(), trace.sampled.end()).size() ==
            trace.sampled.size());
}

TEST_CASE("a single sampled configuration still runs one epoch") {
    const Graph g = er_graph(14, 0.3, 404);
    const HalvingTrace trace = successive_halving(g, tiny_grid(4), 1, 2, 3);
    REQUIRE(trace.sampled.size() == 1);
    REQUIRE(trace.survivors.size() == 1);
    REQUIRE(trace.survivors[0] == trace.sampled);
    REQUIRE(trace.curves.at(trace.sampled[0]).size() == 3);
}

TEST_CASE("engines that reach zero coast on a flat curve") {
    // two disjoint edges: every node has state (degree 1, no triangles), so
    // nobody is unique and the empty deletion already scores zero
    const Graph g = Graph::from_edges(4, {{0, 1}, {2, 3}});
    auto grid = tiny_grid(1);
    grid[0].p_init = 0.0;
    const HalvingTrace trace = successive_halving(g, grid, 1, 4, 2);
    const auto& curve = trace.curves.at(trace.sampled[0]);
    REQUIRE(curve == std::vector<std::int64_t>(5, 0));
}

TEST_CASE("halving argument validation") {
    const Graph g = er_graph(14, 0.3, 404);
    const auto grid = tiny_grid(8);
    REQUIRE_THROWS_AS(successive_halving(g, {}, 1, 1, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(successive_halving(g, grid, 0, 1, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(successive_halving(g, grid, 9, 1, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(successive_halving(g, grid, 2, 0, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(successive_halving(g, grid, 2, 1, 0, {8}), std::invalid_argument);
}

TEST_CASE("parallel_for_each visits every item exactly once") {
    std::vector<std::uint32_t> items;
    for (std::uint32_t i = 0; i < 200; ++i) items.push_back(i);
    std::vector<std::atomic<int>> hits(200);
    for (auto& h : hits) h = 0;

    detail::parallel_for_each(items, 8, [&](std::uint32_t i) { hits[i].fetch_add(1); });
    for (const auto& h : hits) REQUIRE(h.load() == 1);

    // serial fallback path
    detail::parallel_for_each(items, 1, [&](std::uint32_t i) { hits[i].fetch_add(1); });
    for (const auto& h : hits) REQUIRE(h.load() == 2);

    // more workers than items is fine
    detail::parallel_for_each({3u, 4u}, 16, [&](std::uint32_t i) { hits[i].fetch_add(1); });
    REQUIRE(hits[3].load() == 3);
    REQUIRE(hits[4].load() == 3);

    SECTION("worker exceptions are rethrown") {
        REQUIRE_THROWS_AS(detail::parallel_for_each(
                              items, 4,
                              [&](std::uint32_t i) {
                                  if (i == 71) throw std::runtime_error("boom");
                              }),
                          std::runtime_error);
    }
}
