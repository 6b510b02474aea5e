#include "bdelab/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace bdelab::analysis {

FrequencyTrace frequency_matrix(std::span<const Population> generations) {
    FrequencyTrace trace;
    if (generations.empty()) return trace;
    trace.bits = generations[0].dimension();
    trace.norm = static_cast<std::uint32_t>(generations[0].size());
    for (const Population& pop : generations) {
        if (pop.dimension() != trace.bits || pop.size() != trace.norm)
            throw std::invalid_argument("frequency_matrix: inconsistent population shapes");
        const auto counts = one_counts(pop);
        trace.push_row(counts);
    }
    return trace;
}

HittingReport first_band_exit(std::span<const std::uint32_t> series, std::uint32_t lo,
                              std::uint32_t hi) {
    for (std::size_t g = 0; g < series.size(); ++g)
        if (series[g] < lo || series[g] > hi)
            return {HittingReport::Event::band_exit, g};
    return {HittingReport::Event::band_exit, std::nullopt};
}

HittingReport first_absorption(std::span<const double> series) {
    for (std::size_t g = 0; g < series.size(); ++g)
        if (series[g] == 0.0 || series[g] == 1.0)
            return {HittingReport::Event::absorption, g};
    return {HittingReport::Event::absorption, std::nullopt};
}

std::vector<double> quantiles(std::vector<double> samples, std::span<const double> qs) {
    if (samples.empty()) throw std::invalid_argument("quantiles: empty sample set");
    std::sort(samples.begin(), samples.end());
    const auto n = samples.size();
    std::vector<double> out;
    out.reserve(qs.size());
    for (double q : qs) {
        if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantiles: q outside [0,1]");
        auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
        rank = std::clamp<std::size_t>(rank, 1, n);
        out.push_back(samples[rank - 1]);
    }
    return out;
}

namespace {

void check_tuple(const Population& pop, std::size_t i, std::size_t r1, std::size_t r2,
                 std::size_t r3) {
    const std::size_t n = pop.size();
    if (i >= n || r1 >= n || r2 >= n || r3 >= n)
        throw std::invalid_argument("tuple index out of range");
    if (i == r1 || i == r2 || i == r3 || r1 == r2 || r1 == r3 || r2 == r3)
        throw std::invalid_argument("tuple indices must be mutually distinct");
}

}  // namespace

ForcedPositions forced_positions(const Population& pop, std::size_t i, std::size_t r1,
                                 std::size_t r2, std::size_t r3) {
    check_tuple(pop, i, r1, r2, r3);
    const BitVector& xi = pop.members[i];
    const BitVector& x1 = pop.members[r1];
    const BitVector& x2 = pop.members[r2];
    const BitVector& x3 = pop.members[r3];
    ForcedPositions fp{BitVector(xi.size()), BitVector(xi.size())};
    for (std::size_t k = 0; k < xi.word_count(); ++k) {
        const std::uint64_t forced = ~(x1.word(k) ^ xi.word(k)) & ~(x2.word(k) ^ x3.word(k));
        fp.mask.set_word(k, forced);
        fp.values.set_word(k, forced & xi.word(k));
    }
    return fp;
}

std::uint64_t tuple_reachable_count(const Population& pop, std::size_t i, std::size_t r1,
                                    std::size_t r2, std::size_t r3) {
    if (pop.dimension() > 40)
        throw std::invalid_argument("tuple_reachable_count: D <= 40 required");
    const auto fp = forced_positions(pop, i, r1, r2, r3);
    return std::uint64_t{1} << (pop.dimension() - fp.count());
}

std::size_t forced_mismatch_count(const BitVector& target, const Population& pop, std::size_t i,
                                  std::size_t r1, std::size_t r2, std::size_t r3) {
    if (target.size() != pop.dimension())
        throw std::invalid_argument("forced_mismatch_count: dimension mismatch");
    const auto fp = forced_positions(pop, i, r1, r2, r3);
    std::size_t count = 0;
    const BitVector& xi = pop.members[i];
    for (std::size_t k = 0; k < target.word_count(); ++k)
        count += std::popcount(fp.mask.word(k) & (xi.word(k) ^ target.word(k)));
    return count;
}

std::uint64_t reachable_set_size(const Population& pop) {
    const std::size_t d = pop.dimension();
    const std::size_t n = pop.size();
    if (d > 20) throw std::invalid_argument("reachable_set_size: D <= 20 required");
    if (n > 8) throw std::invalid_argument("reachable_set_size: N <= 8 required");
    if (n < 4) throw std::invalid_argument("reachable_set_size: N >= 4 required");

    const std::uint64_t space = std::uint64_t{1} << d;
    std::vector<char> reachable(space, 0);
    std::uint64_t found = 0;
    for (std::size_t i = 0; i < n && found < space; ++i)
        for (std::size_t r1 = 0; r1 < n; ++r1) {
            if (r1 == i) continue;
            for (std::size_t r2 = 0; r2 < n; ++r2) {
                if (r2 == i || r2 == r1) continue;
                for (std::size_t r3 = 0; r3 < n && found < space; ++r3) {
                    if (r3 == i || r3 == r1 || r3 == r2) continue;
                    const auto fp = forced_positions(pop, i, r1, r2, r3);
                    const std::uint64_t mask = fp.mask.word(0);
                    const std::uint64_t base = fp.values.word(0);
                    const std::uint64_t free = ~mask & (space - 1);
                    // Walk the subcube {base | s : s submask of free}.
                    std::uint64_t s = 0;
                    while (true) {
                        const std::uint64_t x = base | s;
                        if (!reachable[x]) {
                            reachable[x] = 1;
                            ++found;
                        }
                        if (s == free) break;
                        s = (s - free) & free;  // next submask
                    }
                }
            }
        }
    return found;
}

}  // namespace bdelab::analysis
