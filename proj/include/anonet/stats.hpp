#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace anonet {

// Arithmetic mean and sample standard deviation (n-1 denominator; 0 for a
// single value).
inline std::pair<double, double> mean_std(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("mean_std: no values");
    double sum = 0.0;
    for (const double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    if (values.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (const double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

struct RankSumResult {
    double statistic = 0.0;  // rank sum of the first sample, midranks for ties
    double p_value = 1.0;    // two-sided
    bool significant = false;  // p < 0.05
    bool exact = true;         // exact conditional distribution vs normal approximation
};

// Unpaired two-sample Wilcoxon rank-sum test. For up to 10 observations per
// side the two-sided p-value comes from the exact conditional null
// distribution given the observed (mid)ranks: every n-subset of the pooled
// ranks is equally likely, counted by dynamic programming over doubled ranks
// (doubling makes midranks integral). Larger samples fall back to the normal
// approximation with tie-corrected variance and continuity correction.
inline RankSumResult wilcoxon_rank_sum(const std::vector<double>& a,
                                       const std::vector<double>& b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("wilcoxon_rank_sum: both samples must be non-empty");
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    const std::size_t total = n + m;

    struct Entry {
        double value;
        bool from_a;
    };
    std::vector<Entry> pooled;
    pooled.reserve(total);
    for (const double v : a) pooled.push_back({v, true});
    for (const double v : b) pooled.push_back({v, false});
    std::sort(pooled.begin(), pooled.end(),
              [](const Entry& x, const Entry& y) { return x.value < y.value; });

    // Doubled midranks stay integral: positions i..j (0-based) share rank
    // (i + j + 2) / 2, so twice that is i + j + 2.
    std::vector<std::uint32_t> rank2(total);
    std::vector<std::size_t> tie_sizes;
    std::uint64_t w2 = 0;
    for (std::size_t i = 0; i < total;) {
        std::size_t j = i;
        while (j + 1 < total && pooled[j + 1].value == pooled[i].value) ++j;
        const auto r2 = static_cast<std::uint32_t>(i + j + 2);
        tie_sizes.push_back(j - i + 1);
        for (std::size_t k = i; k <= j; ++k) {
            rank2[k] = r2;
            if (pooled[k].from_a) w2 += r2;
        }
        i = j + 1;
    }

    RankSumResult result;
    result.statistic = static_cast<double>(w2) / 2.0;

    if (n <= 10 && m <= 10) {
        // dp[k][s]: subsets of size k of the ranks seen so far with doubled
        // rank-sum s.
        const std::size_t max_sum = total * (total + 1);
        std::vector<std::vector<std::uint64_t>> dp(n + 1,
                                                   std::vector<std::uint64_t>(max_sum + 1, 0));
        dp[0][0] = 1;
        for (const std::uint32_t r : rank2) {
            for (std::size_t k = n; k >= 1; --k) {
                for (std::size_t s = max_sum; s >= r; --s) {
                    if (dp[k - 1][s - r]) dp[k][s] += dp[k - 1][s - r];
                }
            }
        }
        std::uint64_t count_total = 0;
        std::uint64_t count_le = 0;
        std::uint64_t count_ge = 0;
        for (std::size_t s = 0; s <= max_sum; ++s) {
            const std::uint64_t c = dp[n][s];
            count_total += c;
            if (s <= w2) count_le += c;
            if (s >= w2) count_ge += c;
        }
        const double tail = static_cast<double>(std::min(count_le, count_ge)) /
                            static_cast<double>(count_total);
        result.p_value = std::min(1.0, 2.0 * tail);
        result.exact = true;
    } else {
        const double dn = static_cast<double>(n);
        const double dm = static_cast<double>(m);
        const double dt = static_cast<double>(total);
        const double mu = dn * (dt + 1.0) / 2.0;
        double tie_term = 0.0;
        for (const std::size_t t : tie_sizes) {
            const double td = static_cast<double>(t);
            tie_term += td * td * td - td;
        }
        const double var =
            dn * dm / 12.0 * ((dt + 1.0) - tie_term / (dt * (dt - 1.0)));
        if (var <= 0.0) {
            result.p_value = 1.0;
        } else {
            const double w = static_cast<double>(w2) / 2.0;
            const double shift = w > mu ? -0.5 : (w < mu ? 0.5 : 0.0);
            const double z = (w - mu + shift) / std::sqrt(var);
            result.p_value = std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
        }
        result.exact = false;
    }
    result.significant = result.p_value < 0.05;
    return result;
}

}  // namespace anonet
