#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "anonet/evolution.hpp"
#include "anonet/graph.hpp"
#include "anonet/rng.hpp"

namespace anonet {

// The full hyperparameter grid: 3 initial densities x 4 crossover operators x
// 2 mutation rates x 3 decay rates x 2 parental x 3 environmental selection
// modes = 432 configurations, enumerated with the first-listed axis outermost
// and values in the order written here, so config ids are stable.
inline std::vector<GaConfig> enumerate_grid() {
    constexpr double kPInit[] = {0.0025, 0.005, 0.02};
    struct CrossoverChoice {
        CrossoverMode mode;
        std::uint32_t c;
    };
    constexpr CrossoverChoice kCrossover[] = {{CrossoverMode::CPoint, 10},
                                              {CrossoverMode::CPoint, 25},
                                              {CrossoverMode::CPoint, 100},
                                              {CrossoverMode::Uniform, 25}};
    constexpr double kAlpha0[] = {0.0001, 0.0005};
    constexpr double kEta[] = {0.0, 0.00001, 0.000025};
    constexpr SelectionMode kParental[] = {SelectionMode::Roulette, SelectionMode::Tournament};
    constexpr SelectionMode kEnvironmental[] = {SelectionMode::Roulette, SelectionMode::Tournament,
                                                SelectionMode::MuPlusLambda};

    std::vector<GaConfig> grid;
    grid.reserve(432);
    for (const double p_init : kPInit) {
        for (const auto& xo : kCrossover) {
            for (const double alpha0 : kAlpha0) {
                for (const double eta : kEta) {
                    for (const SelectionMode parental : kParental) {
                        for (const SelectionMode environmental : kEnvironmental) {
                            GaConfig cfg;
                            cfg.mu = 100;
                            cfg.lambda = 150;
                            cfg.tau = 40;
                            cfg.gamma_frac = 0.05;
                            cfg.tournament_t = 5;
                            cfg.p_init = p_init;
                            cfg.crossover = xo.mode;
                            cfg.c = xo.c;
                            cfg.alpha0 = alpha0;
                            cfg.eta = eta;
                            cfg.parental = parental;
                            cfg.environmental = environmental;
                            grid.push_back(cfg);
                        }
                    }
                }
            }
        }
    }
    return grid;
}

// What a halving search did: the initial roster, the ranked survivor sets
// after each epoch, and every configuration's best-objective curve indexed by
// generation.
struct HalvingTrace {
    std::vector<std::uint32_t> sampled;
    std::vector<std::vector<std::uint32_t>> survivors;
    std::unordered_map<std::uint32_t, std::vector<std::int64_t>> curves;
    std::uint32_t epoch_gens = 0;
    std::uint64_t seed = 0;
};

namespace detail {

// Runs fn(item) for every item, spreading work over up to `jobs` threads via
// an atomic cursor. The first exception wins and is rethrown after join.
template <typename Fn>
void parallel_for_each(const std::vector<std::uint32_t>& items, std::uint32_t jobs, Fn&& fn) {
    if (jobs <= 1 || items.size() <= 1) {
        for (const std::uint32_t item : items) fn(item);
        return;
    }
    const auto workers = std::min<std::uint32_t>(jobs, static_cast<std::uint32_t>(items.size()));
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::uint32_t w = 0; w < workers; ++w) {
        threads.emplace_back([&] {
            while (true) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= items.size()) break;
                try {
                    fn(items[i]);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

// Successive halving: sample `sample` grid entries uniformly without
// replacement (plus any pinned ids), advance every surviving engine by
// epoch_gens generations, rank by (best_f, fewer deletions, config id), keep
// the better ceil(half), and repeat until at most 8 remain. Engines are
// resumed across epochs, never restarted, so later epochs build on all
// generations run so far. Engines that already reached objective 0 coast with
// a flat curve instead of stepping; the stagnation limit is not applied while
// halving drives the loop manually.
inline HalvingTrace successive_halving(const Graph& g, const std::vector<GaConfig>& grid,
                                       std::uint32_t sample, std::uint32_t epoch_gens,
                                       std::uint64_t seed,
                                       const std::vector<std::uint32_t>& pinned = {},
                                       std::uint32_t jobs = 1) {
    if (grid.empty()) throw std::invalid_argument("halving: grid is empty");
    if (sample < 1 || sample > grid.size())
        throw std::invalid_argument("halving: sample must be in [1, |grid|]");
    if (epoch_gens < 1) throw std::invalid_argument("halving: epoch_gens must be >= 1");
    for (const std::uint32_t id : pinned) {
        if (id >= grid.size()) throw std::invalid_argument("halving: pinned config id out of range");
    }
    if (jobs < 1) jobs = 1;

    HalvingTrace trace;
    trace.epoch_gens = epoch_gens;
    trace.seed = seed;

    Rng rng(derive_seed(seed, 0));
    std::vector<std::uint32_t> ids(grid.size());
    for (std::uint32_t i = 0; i < ids.size(); ++i) ids[i] = i;
    for (std::uint32_t i = 0; i < sample; ++i) {
        const std::uint32_t j = i + rng.below_u32(static_cast<std::uint32_t>(ids.size()) - i);
        std::swap(ids[i], ids[j]);
    }
    ids.resize(sample);
    std::unordered_set<std::uint32_t> roster(ids.begin(), ids.end());
    for (const std::uint32_t id : pinned) {
        if (roster.insert(id).second) ids.push_back(id);
    }
    std::sort(ids.begin(), ids.end());
    trace.sampled = ids;

    std::unordered_map<std::uint32_t, GaEngine> engines;
    engines.reserve(ids.size());
    for (const std::uint32_t id : ids) {
        GaConfig cfg = grid[id];
        cfg.seed = derive_seed(seed, 1, id);
        const auto it = engines.emplace(id, GaEngine(g, cfg)).first;
        trace.curves.emplace(id, std::vector<std::int64_t>{it->second.best_f()});
    }

    std::vector<std::uint32_t> active = ids;
    while (true) {
        detail::parallel_for_each(active, jobs, [&](std::uint32_t id) {
            GaEngine& engine = engines.at(id);
            auto& curve = trace.curves.at(id);
            for (std::uint32_t k = 0; k < epoch_gens; ++k) {
                if (engine.best_f() == 0) {
                    curve.push_back(0);
                } else {
                    engine.step();
                    curve.push_back(engine.best_f());
                }
            }
        });

        std::sort(active.begin(), active.end(), [&](std::uint32_t a, std::uint32_t b) {
            const GaEngine& ea = engines.at(a);
            const GaEngine& eb = engines.at(b);
            if (ea.best_f() != eb.best_f()) return ea.best_f() < eb.best_f();
            if (ea.best().ones() != eb.best().ones()) return ea.best().ones() < eb.best().ones();
            return a < b;
        });
        active.resize((active.size() + 1) / 2);
        trace.survivors.push_back(active);

        const std::unordered_set<std::uint32_t> keep(active.begin(), active.end());
        for (auto it = engines.begin(); it != engines.end();) {
            it = keep.count(it->first) ? std::next(it) : engines.erase(it);
        }
        if (active.size() <= 8) break;
    }
    return trace;
}

// One row per (epoch, config, generation). Epoch 0 carries the initial
// evaluation of every sampled configuration; epoch e >= 1 carries generations
// (e-1)*epoch_gens+1 .. e*epoch_gens for the configurations that ran in it.
inline void write_halving_csv(const HalvingTrace& trace, std::ostream& out) {
    out << "epoch,config_id,generation,best_f\n";
    for (const std::uint32_t id : trace.sampled)
        out << "0," << id << ",0," << trace.curves.at(id)[0] << "\n";
    for (std::size_t epoch = 1; epoch <= trace.survivors.size(); ++epoch) {
        std::vector<std::uint32_t> roster =
            epoch == 1 ? trace.sampled : trace.survivors[epoch - 2];
        std::sort(roster.begin(), roster.end());
        for (const std::uint32_t id : roster) {
            const auto& curve = trace.curves.at(id);
            const std::size_t lo = (epoch - 1) * trace.epoch_gens + 1;
            for (std::size_t gen = lo; gen < lo + trace.epoch_gens; ++gen)
                out << epoch << "," << id << "," << gen << "," << curve[gen] << "\n";
        }
    }
}

}  // namespace anonet
