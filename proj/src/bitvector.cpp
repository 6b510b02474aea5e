#include "bdelab/bitvector.hpp"

#include <bit>
#include <stdexcept>

namespace bdelab {

BitVector BitVector::sampled(std::size_t dim, double p, RandomStream& rng) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("gene probability outside [0,1]");
    BitVector x(dim);
    for (std::size_t j = 0; j < dim; ++j)
        if (rng.bernoulli(p)) x.words_[j >> 6] |= 1ull << (j & 63);
    return x;
}

std::size_t BitVector::count_ones() const {
    std::size_t total = 0;
    for (std::uint64_t w : words_) total += std::popcount(w);
    return total;
}

void BitVector::set_word(std::size_t k, std::uint64_t w) {
    words_[k] = (k + 1 == words_.size()) ? (w & tail_mask()) : w;
}

std::size_t hamming(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("hamming: dimension mismatch");
    std::size_t total = 0;
    for (std::size_t k = 0; k < a.word_count(); ++k)
        total += std::popcount(a.word(k) ^ b.word(k));
    return total;
}

}  // namespace bdelab
