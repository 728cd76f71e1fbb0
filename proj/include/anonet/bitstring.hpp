#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace anonet {

// Fixed-length bitstring over canonical edge indices (1 = delete this edge).
// The set-bit count is maintained on every write so the budget penalty is
// always O(1).
class Bitstring {
public:
    Bitstring() = default;
    explicit Bitstring(std::uint32_t size)
        : words_((size + 63) / 64, 0), size_(size) {}

    std::uint32_t size() const { return size_; }
    std::uint32_t count() const { return ones_; }

    bool test(std::uint32_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set_value(std::uint32_t i, bool value) {
        if (test(i) != value) flip(i);
    }

    void flip(std::uint32_t i) {
        words_[i >> 6] ^= (std::uint64_t{1} << (i & 63));
        ones_ += test(i) ? 1 : -1;
    }

    template <typename Fn>
    void for_each_one(Fn&& fn) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                const int b = std::countr_zero(bits);
                fn(static_cast<std::uint32_t>(w * 64 + b));
                bits &= bits - 1;
            }
        }
    }

    // Word-level access for mask-based crossover; callers must keep the tail
    // bits beyond size() zero and call recount() afterwards.
    std::vector<std::uint64_t>& words() { return words_; }
    const std::vector<std::uint64_t>& words() const { return words_; }

    std::uint64_t tail_mask() const {
        const std::uint32_t rem = size_ & 63;
        return rem == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << rem) - 1;
    }

    void recount() {
        ones_ = 0;
        for (auto w : words_) ones_ += static_cast<std::uint32_t>(std::popcount(w));
    }

    bool operator==(const Bitstring& other) const {
        return size_ == other.size_ && words_ == other.words_;
    }

private:
    std::vector<std::uint64_t> words_;
    std::uint32_t size_ = 0;
    std::uint32_t ones_ = 0;
};

}  // namespace anonet
