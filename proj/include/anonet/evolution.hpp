#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "anonet/anonymity.hpp"
#include "anonet/bitstring.hpp"
#include "anonet/graph.hpp"
#include "anonet/rng.hpp"

namespace anonet {

// Edge deletion budget: floor keeps the constraint conservative when the
// fraction of m is not integral.
inline std::uint32_t budget(std::uint32_t edge_count, double frac) {
    if (frac < 0.0 || frac > 1.0) throw std::invalid_argument("budget: frac must be in [0, 1]");
    const auto g = static_cast<std::uint32_t>(std::floor(frac * static_cast<double>(edge_count)));
    return std::min(g, edge_count);
}

// f(B) = |V_u(G'_B)| plus the number of deletions beyond the budget.
inline std::int64_t objective_value(std::uint32_t unique, std::uint32_t ones, std::uint32_t gamma) {
    const std::int64_t over = static_cast<std::int64_t>(ones) - static_cast<std::int64_t>(gamma);
    return static_cast<std::int64_t>(unique) + (over > 0 ? over : 0);
}

// One candidate solution: bit e set means edge e is deleted. The objective is
// cached so that individuals surviving selection unchanged are never priced
// twice.
struct Individual {
    Bitstring bits;
    std::optional<std::int64_t> cached_f;

    std::uint32_t ones() const { return bits.count(); }
};

// Prices individuals against a private copy of the baseline anonymity state.
// Deletions are applied as deltas and rolled back through a journal, so an
// evaluation costs O(affected nodes), not a fresh triangle count. begin(),
// extend() and finish() expose the speculative state directly; the
// uniqueness-aware mutation uses them to read E_u and, when possible, the
// mutated objective from a single pass.
class Evaluator {
public:
    explicit Evaluator(const Graph& g) : view_(g) {}

    struct Result {
        std::int64_t f;
        std::uint32_t unique;
    };

    Result evaluate(const Bitstring& bits, std::uint32_t gamma) {
        begin(bits);
        const std::uint32_t u = view_.unique_count();
        finish();
        return {objective_value(u, bits.count(), gamma), u};
    }

    void begin(const Bitstring& bits) {
        bits.for_each_one([&](std::uint32_t e) { view_.delete_edge(e, &journal_); });
    }

    void extend(EdgeId e) { view_.delete_edge(e, &journal_); }

    void finish() { view_.rollback(journal_); }

    const AnonymityView& view() const { return view_; }

private:
    AnonymityView view_;
    ViewJournal journal_;
};

// Convenience form for callers that price a single bitstring; the search loop
// goes through a long-lived Evaluator instead.
inline std::int64_t objective(const Graph& g, const Bitstring& bits, std::uint32_t gamma) {
    if (bits.size() != g.edge_count())
        throw std::invalid_argument("objective: bitstring length must equal the edge count");
    Evaluator eval(g);
    return eval.evaluate(bits, gamma).f;
}

inline std::vector<Individual> initialize_population(std::uint32_t edge_count, std::uint32_t mu,
                                                     double p_init, Rng& rng) {
    std::vector<Individual> pop(mu);
    for (auto& ind : pop) {
        ind.bits = Bitstring(edge_count);
        sample_bernoulli_indices(rng, edge_count, p_init,
                                 [&](std::uint32_t i) { ind.bits.flip(i); });
    }
    return pop;
}

// Fitness-proportionate selection for a minimization problem: the weight of
// individual j is max_f - f_j. When every objective is equal the weights all
// vanish and the distribution is undefined, so selection falls back to
// uniform; otherwise the worst individual really does get probability zero.
inline std::vector<std::uint32_t> roulette_select(const std::vector<std::int64_t>& fs,
                                                  std::uint32_t count, Rng& rng) {
    if (fs.empty()) throw std::invalid_argument("roulette_select: empty candidate set");
    const std::int64_t max_f = *std::max_element(fs.begin(), fs.end());
    std::vector<double> cumulative(fs.size());
    double total = 0.0;
    std::size_t last_weighted = 0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const auto weight = static_cast<double>(max_f - fs[i]);
        if (weight > 0.0) last_weighted = i;
        total += weight;
        cumulative[i] = total;
    }

    std::vector<std::uint32_t> picks;
    picks.reserve(count);
    if (total <= 0.0) {
        for (std::uint32_t k = 0; k < count; ++k)
            picks.push_back(rng.below_u32(static_cast<std::uint32_t>(fs.size())));
        return picks;
    }
    for (std::uint32_t k = 0; k < count; ++k) {
        const double u = rng.next_double() * total;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        // u can only reach total through rounding; clamp to the last individual
        // that actually carries weight.
        const std::size_t idx =
            it == cumulative.end() ? last_weighted : static_cast<std::size_t>(it - cumulative.begin());
        picks.push_back(static_cast<std::uint32_t>(idx));
    }
    return picks;
}

// Each pick runs one tournament: t uniform draws with replacement, winner is
// the candidate with the lowest objective, ties broken by fewer deletions and
// then by lower index.
inline std::vector<std::uint32_t> tournament_select(const std::vector<std::int64_t>& fs,
                                                    const std::vector<std::uint32_t>& ones,
                                                    std::uint32_t count, std::uint32_t t, Rng& rng) {
    if (fs.empty()) throw std::invalid_argument("tournament_select: empty candidate set");
    if (fs.size() != ones.size())
        throw std::invalid_argument("tournament_select: fs and ones must have equal length");
    if (t < 1) throw std::invalid_argument("tournament_select: t must be >= 1");

    const auto size = static_cast<std::uint32_t>(fs.size());
    auto beats = [&](std::uint32_t a, std::uint32_t b) {
        if (fs[a] != fs[b]) return fs[a] < fs[b];
        if (ones[a] != ones[b]) return ones[a] < ones[b];
        return a < b;
    };
    std::vector<std::uint32_t> picks;
    picks.reserve(count);
    for (std::uint32_t k = 0; k < count; ++k) {
        std::uint32_t best = rng.below_u32(size);
        for (std::uint32_t round = 1; round < t; ++round) {
            const std::uint32_t cand = rng.below_u32(size);
            if (beats(cand, best)) best = cand;
        }
        picks.push_back(best);
    }
    return picks;
}

enum class CrossoverMode { CPoint, Uniform };
enum class SelectionMode { Roulette, Tournament, MuPlusLambda };

struct GaConfig {
    std::uint32_t mu = 100;
    double p_init = 0.005;
    std::uint32_t lambda = 150;
    CrossoverMode crossover = CrossoverMode::Uniform;
    std::uint32_t c = 25;  // cut count when crossover == CPoint
    double alpha0 = 0.0005;
    double eta = 0.0;
    SelectionMode parental = SelectionMode::Roulette;
    SelectionMode environmental = SelectionMode::MuPlusLambda;
    std::uint32_t tournament_t = 5;
    double gamma_frac = 0.05;
    std::optional<std::uint32_t> gamma;  // explicit budget; overrides gamma_frac
    std::uint32_t tau = 40;
    bool uniqueness_aware = false;
    std::uint64_t seed = 1;

    void validate() const {
        if (mu < 1) throw std::invalid_argument("config: mu must be >= 1");
        if (lambda < 1) throw std::invalid_argument("config: lambda must be >= 1");
        if (p_init < 0.0 || p_init > 1.0)
            throw std::invalid_argument("config: p_init must be in [0, 1]");
        if (alpha0 < 0.0 || alpha0 > 1.0)
            throw std::invalid_argument("config: alpha0 must be in [0, 1]");
        if (eta < 0.0) throw std::invalid_argument("config: eta must be >= 0");
        if (gamma_frac < 0.0 || gamma_frac > 1.0)
            throw std::invalid_argument("config: gamma_frac must be in [0, 1]");
        if (tau < 1) throw std::invalid_argument("config: tau must be >= 1");
        if (tournament_t < 1) throw std::invalid_argument("config: tournament_t must be >= 1");
        if (crossover == CrossoverMode::CPoint && c < 1)
            throw std::invalid_argument("config: c must be >= 1 for c-point crossover");
        if (parental == SelectionMode::MuPlusLambda)
            throw std::invalid_argument("config: parental selection cannot be mu-plus-lambda");
    }

    std::uint32_t resolve_gamma(std::uint32_t edge_count) const {
        return gamma ? *gamma : budget(edge_count, gamma_frac);
    }
};

// Parents are consumed as sequential pairs (0,1), (2,3), ... and every pair
// emits two children, so the offspring count equals the parent count; an
// unpaired trailing parent is copied through unchanged. Children identical to
// a parent inherit its cached objective.
inline std::vector<Individual> crossover(const std::vector<Individual>& parents,
                                         CrossoverMode mode, std::uint32_t c, Rng& rng) {
    std::vector<Individual> offspring;
    offspring.reserve(parents.size());
    for (std::size_t p = 0; p + 1 < parents.size(); p += 2) {
        const Individual& pa = parents[p];
        const Individual& pb = parents[p + 1];
        const std::uint32_t m = pa.bits.size();
        if (pb.bits.size() != m)
            throw std::invalid_argument("crossover: parents must have equal bitstring length");

        Individual ca;
        Individual cb;
        ca.bits = Bitstring(m);
        cb.bits = Bitstring(m);
        if (mode == CrossoverMode::Uniform) {
            // One random mask word decides 64 bits at a time: child one takes
            // the mask positions from parent a, child two takes the
            // complementary choice. Tail bits stay zero because both parents
            // keep them zero.
            const auto& wa = pa.bits.words();
            const auto& wb = pb.bits.words();
            for (std::size_t w = 0; w < wa.size(); ++w) {
                const std::uint64_t mask = rng.next_u64();
                ca.bits.words()[w] = (wa[w] & mask) | (wb[w] & ~mask);
                cb.bits.words()[w] = (wb[w] & mask) | (wa[w] & ~mask);
            }
            ca.bits.recount();
            cb.bits.recount();
        } else {
            if (c >= m)
                throw std::invalid_argument("crossover: c must be smaller than the bitstring length");
            std::set<std::uint32_t> cuts;
            while (cuts.size() < c) cuts.insert(1 + rng.below_u32(m - 1));

            bool from_a = true;
            std::uint32_t prev = 0;
            auto copy_segment = [&](std::uint32_t lo, std::uint32_t hi) {
                const Bitstring& sa = from_a ? pa.bits : pb.bits;
                const Bitstring& sb = from_a ? pb.bits : pa.bits;
                for (std::uint32_t i = lo; i < hi; ++i) {
                    if (sa.test(i)) ca.bits.flip(i);
                    if (sb.test(i)) cb.bits.flip(i);
                }
            };
            for (const std::uint32_t cut : cuts) {
                copy_segment(prev, cut);
                from_a = !from_a;
                prev = cut;
            }
            copy_segment(prev, m);
        }

        if (ca.bits == pa.bits) ca.cached_f = pa.cached_f;
        else if (ca.bits == pb.bits) ca.cached_f = pb.cached_f;
        if (cb.bits == pb.bits) cb.cached_f = pb.cached_f;
        else if (cb.bits == pa.bits) cb.cached_f = pa.cached_f;

        offspring.push_back(std::move(ca));
        offspring.push_back(std::move(cb));
    }
    if (parents.size() % 2 == 1) offspring.push_back(parents.back());
    return offspring;
}

// Plain per-bit mutation. Returns whether anything flipped; a change
// invalidates the cached objective.
inline bool mutate(Individual& ind, double alpha, Rng& rng) {
    bool changed = false;
    sample_bernoulli_indices(rng, ind.bits.size(), alpha, [&](std::uint32_t i) {
        ind.bits.flip(i);
        changed = true;
    });
    if (changed) ind.cached_f.reset();
    return changed;
}

inline void mutate(std::vector<Individual>& pop, double alpha, Rng& rng) {
    for (auto& ind : pop) mutate(ind, alpha, rng);
}

// Uniqueness-aware mutation. Zero bits are only eligible to flip when their
// edge still exists in the individual's derived graph and touches a unique
// node there (the edge set E_u); set bits stay mutable at the plain rate so
// over-budget individuals can repair themselves. Computing E_u costs as much
// as an objective evaluation, so both ride the same journal: when no set bit
// flips back, the flips are appended as further deltas and the mutated |V_u|
// is returned for the caller to cache. Draw order: set bits ascending, then
// eligible zero bits ascending.
inline std::optional<std::uint32_t> mutate_uniqueness_aware(Individual& ind, double alpha,
                                                            Evaluator& eval, Rng& rng) {
    const Graph& g = eval.view().graph();
    if (ind.bits.size() != g.edge_count())
        throw std::invalid_argument("mutate_uniqueness_aware: bitstring length must equal the edge count");

    eval.begin(ind.bits);
    std::vector<std::uint32_t> restore;
    ind.bits.for_each_one([&](std::uint32_t e) {
        if (rng.bernoulli(alpha)) restore.push_back(e);
    });

    const std::uint32_t n = g.node_count();
    std::vector<std::uint8_t> unique_node(n);
    for (NodeId v = 0; v < n; ++v) unique_node[v] = eval.view().is_unique(v) ? 1 : 0;

    std::vector<std::uint32_t> remove;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (ind.bits.test(e)) continue;
        const auto [v, w] = g.edge(e);
        if (!unique_node[v] && !unique_node[w]) continue;
        if (rng.bernoulli(alpha)) remove.push_back(e);
    }

    std::optional<std::uint32_t> unique_after;
    if (restore.empty()) {
        for (const EdgeId e : remove) eval.extend(e);
        unique_after = eval.view().unique_count();
    }
    eval.finish();

    if (!restore.empty() || !remove.empty()) ind.cached_f.reset();
    for (const EdgeId e : restore) ind.bits.flip(e);
    for (const EdgeId e : remove) ind.bits.flip(e);
    return unique_after;
}

inline Individual mutate_uniqueness_aware(const Individual& ind, double alpha, const Graph& g,
                                          Rng& rng) {
    Evaluator eval(g);
    Individual out = ind;
    mutate_uniqueness_aware(out, alpha, eval, rng);
    return out;
}

// Mutation-rate schedule: the current rate shrinks by a factor (1 - eta*gen)
// each generation (compounding) but never drops below 1/m, which keeps the
// expected number of flips per individual at one or more.
inline double decay(double alpha, double eta, std::uint64_t gen, std::uint32_t edge_count) {
    const double floor_rate = 1.0 / static_cast<double>(edge_count);
    return std::max(alpha * (1.0 - eta * static_cast<double>(gen)), floor_rate);
}

// Chooses the mu survivors among parents and offspring. MuPlusLambda keeps the
// best mu by ascending objective with ties broken by fewer deletions and then
// by position (parents precede offspring); the stochastic modes draw mu
// survivors from the union with the corresponding parental operator.
inline std::vector<Individual> environmental_select(const std::vector<Individual>& pop,
                                                    const std::vector<Individual>& offspring,
                                                    std::uint32_t mu, SelectionMode mode,
                                                    std::uint32_t tournament_t, Rng& rng) {
    std::vector<const Individual*> all;
    all.reserve(pop.size() + offspring.size());
    for (const auto& ind : pop) all.push_back(&ind);
    for (const auto& ind : offspring) all.push_back(&ind);
    if (all.size() < mu)
        throw std::invalid_argument("environmental_select: fewer candidates than mu");

    std::vector<std::int64_t> fs;
    std::vector<std::uint32_t> ones;
    fs.reserve(all.size());
    ones.reserve(all.size());
    for (const Individual* ind : all) {
        if (!ind->cached_f)
            throw std::logic_error("environmental_select: individual without cached objective");
        fs.push_back(*ind->cached_f);
        ones.push_back(ind->ones());
    }

    std::vector<Individual> next;
    next.reserve(mu);
    if (mode == SelectionMode::MuPlusLambda) {
        std::vector<std::uint32_t> order(all.size());
        for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            if (fs[a] != fs[b]) return fs[a] < fs[b];
            return ones[a] < ones[b];
        });
        for (std::uint32_t k = 0; k < mu; ++k) next.push_back(*all[order[k]]);
    } else {
        const auto picks = mode == SelectionMode::Roulette
                               ? roulette_select(fs, mu, rng)
                               : tournament_select(fs, ones, mu, tournament_t, rng);
        for (const std::uint32_t i : picks) next.push_back(*all[i]);
    }
    return next;
}

struct RunResult {
    Bitstring best_bits;
    std::int64_t best_f = 0;
    std::uint32_t best_unique = 0;
    std::uint32_t generations = 0;
    std::vector<std::int64_t> trajectory;  // best_f after init and after each generation
    std::uint64_t seed = 0;
    double wall_time = 0.0;  // seconds
};

// The search loop, exposed one generation at a time so hyperparameter tuning
// can advance many configurations in lockstep and resume them without losing
// state. Every stochastic phase draws from its own sub-stream derived from
// (seed, phase, generation), so results do not depend on evaluation order or
// on how often the loop is paused.
class GaEngine {
public:
    GaEngine(const Graph& g, GaConfig cfg) : g_(&g), cfg_(std::move(cfg)), eval_(g) {
        cfg_.validate();
        m_ = g.edge_count();
        if (m_ == 0) throw std::invalid_argument("ga: graph has no edges");
        if (cfg_.crossover == CrossoverMode::CPoint && cfg_.c >= m_)
            throw std::invalid_argument("crossover: c must be smaller than the bitstring length");
        gamma_ = cfg_.resolve_gamma(m_);
        alpha_ = cfg_.alpha0;

        const auto t0 = std::chrono::steady_clock::now();
        Rng rng(derive_seed(cfg_.seed, kPhaseInit, 0));
        pop_ = initialize_population(m_, cfg_.mu, cfg_.p_init, rng);
        evaluate_all(pop_);
        std::size_t best_idx = 0;
        for (std::size_t i = 1; i < pop_.size(); ++i) {
            if (better(pop_[i], pop_[best_idx])) best_idx = i;
        }
        best_ = pop_[best_idx];
        best_f_ = *best_.cached_f;
        trajectory_.push_back(best_f_);
        wall_time_ += seconds_since(t0);
    }

    // One full generation: parental selection, crossover, mutation,
    // evaluation, best-ever update, environmental selection, rate decay.
    void step() {
        const auto t0 = std::chrono::steady_clock::now();
        const std::uint32_t cur = gen_ + 1;

        std::vector<std::int64_t> fs;
        std::vector<std::uint32_t> ones;
        fs.reserve(pop_.size());
        ones.reserve(pop_.size());
        for (const auto& ind : pop_) {
            fs.push_back(*ind.cached_f);
            ones.push_back(ind.ones());
        }

        Rng parent_rng(derive_seed(cfg_.seed, kPhaseParental, cur));
        const auto parent_idx =
            cfg_.parental == SelectionMode::Roulette
                ? roulette_select(fs, cfg_.lambda, parent_rng)
                : tournament_select(fs, ones, cfg_.lambda, cfg_.tournament_t, parent_rng);
        std::vector<Individual> parents;
        parents.reserve(parent_idx.size());
        for (const std::uint32_t i : parent_idx) parents.push_back(pop_[i]);

        Rng cross_rng(derive_seed(cfg_.seed, kPhaseCrossover, cur));
        std::vector<Individual> offspring = crossover(parents, cfg_.crossover, cfg_.c, cross_rng);

        Rng mut_rng(derive_seed(cfg_.seed, kPhaseMutation, cur));
        if (cfg_.uniqueness_aware) {
            for (auto& ind : offspring) {
                const auto unique_after = mutate_uniqueness_aware(ind, alpha_, eval_, mut_rng);
                if (unique_after && !ind.cached_f)
                    ind.cached_f = objective_value(*unique_after, ind.ones(), gamma_);
            }
        } else {
            mutate(offspring, alpha_, mut_rng);
        }

        evaluate_all(offspring);

        for (const auto& ind : offspring) {
            if (*ind.cached_f < best_f_) {
                best_ = ind;
                best_f_ = *ind.cached_f;
                gen_best_ = cur;
            } else if (*ind.cached_f == best_f_ && ind.ones() < best_.ones()) {
                best_ = ind;  // same objective with fewer deletions; not an improvement for stagnation
            }
        }

        Rng env_rng(derive_seed(cfg_.seed, kPhaseEnvironmental, cur));
        pop_ = environmental_select(pop_, offspring, cfg_.mu, cfg_.environmental, cfg_.tournament_t,
                                    env_rng);

        alpha_ = decay(alpha_, cfg_.eta, cur, m_);
        gen_ = cur;
        trajectory_.push_back(best_f_);
        wall_time_ += seconds_since(t0);
    }

    // Stops when the best objective hits zero or has not improved for tau
    // generations.
    bool finished() const { return best_f_ == 0 || gen_ - gen_best_ >= cfg_.tau; }

    void run() {
        while (!finished()) step();
    }

    std::uint32_t generation() const { return gen_; }
    std::int64_t best_f() const { return best_f_; }
    const Individual& best() const { return best_; }
    double alpha() const { return alpha_; }
    std::uint32_t gamma() const { return gamma_; }
    const GaConfig& config() const { return cfg_; }
    const std::vector<Individual>& population() const { return pop_; }

    RunResult result() const {
        RunResult r;
        r.best_bits = best_.bits;
        r.best_f = best_f_;
        const std::int64_t unique = best_f_ - objective_value(0, best_.ones(), gamma_);
        r.best_unique = static_cast<std::uint32_t>(unique);
        r.generations = gen_;
        r.trajectory = trajectory_;
        r.seed = cfg_.seed;
        r.wall_time = wall_time_;
        return r;
    }

private:
    static constexpr std::uint64_t kPhaseInit = 1;
    static constexpr std::uint64_t kPhaseParental = 2;
    static constexpr std::uint64_t kPhaseCrossover = 3;
    static constexpr std::uint64_t kPhaseMutation = 4;
    static constexpr std::uint64_t kPhaseEnvironmental = 5;

    static bool better(const Individual& a, const Individual& b) {
        if (*a.cached_f != *b.cached_f) return *a.cached_f < *b.cached_f;
        return a.ones() < b.ones();
    }

    static double seconds_since(std::chrono::steady_clock::time_point t0) {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    void evaluate_all(std::vector<Individual>& pop) {
        for (auto& ind : pop) {
            if (!ind.cached_f) ind.cached_f = eval_.evaluate(ind.bits, gamma_).f;
        }
    }

    const Graph* g_;
    GaConfig cfg_;
    Evaluator eval_;
    std::uint32_t m_ = 0;
    std::uint32_t gamma_ = 0;
    double alpha_ = 0.0;
    std::vector<Individual> pop_;
    Individual best_;
    std::int64_t best_f_ = 0;
    std::uint32_t gen_ = 0;
    std::uint32_t gen_best_ = 0;
    std::vector<std::int64_t> trajectory_;
    double wall_time_ = 0.0;
};

inline RunResult run_ga(const Graph& g, const GaConfig& cfg) {
    GaEngine engine(g, cfg);
    engine.run();
    return engine.result();
}

}  // namespace anonet
