#include "bdelab/core.hpp"

#include <bit>
#include <stdexcept>

namespace bdelab {

Population sample_population(std::size_t n, std::size_t dim, double p, RandomStream& rng) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("gene probability outside [0,1]");
    Population pop;
    pop.members.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        pop.members.push_back(BitVector::sampled(dim, p, rng));
    return pop;
}

std::vector<std::uint32_t> one_counts(const Population& pop) {
    std::vector<std::uint32_t> counts(pop.dimension(), 0);
    for (const BitVector& x : pop.members) {
        for (std::size_t k = 0; k < x.word_count(); ++k) {
            std::uint64_t w = x.word(k);
            while (w) {
                const int b = std::countr_zero(w);
                ++counts[k * 64 + static_cast<std::size_t>(b)];
                w &= w - 1;
            }
        }
    }
    return counts;
}

std::vector<RandomStream> spawn_member_streams(RandomStream& rng, std::size_t n) {
    std::vector<RandomStream> streams;
    streams.reserve(n);
    for (std::size_t i = 0; i < n; ++i) streams.push_back(rng.spawn());
    return streams;
}

}  // namespace bdelab
