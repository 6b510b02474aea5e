#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bdelab/random.hpp"

namespace bdelab {

// Fixed-length bit string. Bits are packed little-endian into 64-bit words;
// unused bits of the last word are kept at zero so that word-level popcounts
// and comparisons need no masking.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t dim) : dim_(dim), words_((dim + 63) / 64, 0) {}

    static BitVector sampled(std::size_t dim, double p, RandomStream& rng);

    std::size_t size() const { return dim_; }

    bool get(std::size_t j) const {
        return (words_[j >> 6] >> (j & 63)) & 1u;
    }

    void set(std::size_t j, bool v) {
        const std::uint64_t bit = 1ull << (j & 63);
        if (v)
            words_[j >> 6] |= bit;
        else
            words_[j >> 6] &= ~bit;
    }

    void flip(std::size_t j) { words_[j >> 6] ^= 1ull << (j & 63); }

    std::size_t count_ones() const;
    bool all_ones() const { return count_ones() == dim_; }

    std::span<const std::uint64_t> words() const { return words_; }
    std::uint64_t word(std::size_t k) const { return words_[k]; }
    void set_word(std::size_t k, std::uint64_t w);
    std::size_t word_count() const { return words_.size(); }

    // Mask covering the valid bits of the last word (all-ones when dim % 64 == 0).
    std::uint64_t tail_mask() const {
        const std::size_t rem = dim_ & 63;
        return rem == 0 ? ~0ull : (1ull << rem) - 1;
    }

    friend bool operator==(const BitVector& a, const BitVector& b) {
        return a.dim_ == b.dim_ && a.words_ == b.words_;
    }

private:
    std::size_t dim_ = 0;
    std::vector<std::uint64_t> words_;
};

// Number of positions where a and b differ. Throws std::invalid_argument on
// dimension mismatch.
std::size_t hamming(const BitVector& a, const BitVector& b);

}  // namespace bdelab
