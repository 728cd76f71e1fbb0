#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace anonet {

// Mixes a root seed with up to three tags (splitmix64 steps). Used to derive
// independent sub-streams per run / generation / operator so that reordering
// or parallelizing work cannot perturb any other stream.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a = 0,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    auto mix = [](std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    };
    std::uint64_t s = mix(root);
    s = mix(s ^ a);
    s = mix(s ^ b);
    s = mix(s ^ c);
    return s;
}

// Seedable generator wrapping std::mt19937_64. All draws go through our own
// helpers rather than std distributions, whose output is not pinned by the
// standard; this keeps runs reproducible for a fixed seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, bound), unbiased via rejection. bound must be > 0.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t r;
        do {
            r = gen_();
        } while (r >= limit);
        return r % bound;
    }

    std::uint32_t below_u32(std::uint32_t bound) {
        return static_cast<std::uint32_t>(below(bound));
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return next_double() < p;
    }

private:
    std::mt19937_64 gen_;
};

// Iterates the positions of a Bernoulli(p) process over [0, n) by geometric
// skips, so sparse rates cost draws proportional to the number of hits.
template <typename Fn>
inline void sample_bernoulli_indices(Rng& rng, std::uint64_t n, double p, Fn&& on_hit) {
    if (p <= 0.0 || n == 0) return;
    if (p >= 1.0) {
        for (std::uint64_t i = 0; i < n; ++i) on_hit(i);
        return;
    }
    const double denom = std::log1p(-p);
    std::uint64_t i = 0;
    while (true) {
        const double u = rng.next_double();
        const double skip = std::floor(std::log1p(-u) / denom);
        if (skip >= static_cast<double>(n - i)) return;
        i += static_cast<std::uint64_t>(skip);
        on_hit(i);
        if (++i >= n) return;
    }
}

}  // namespace anonet
