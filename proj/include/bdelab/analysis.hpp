#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bdelab/core.hpp"

namespace bdelab::analysis {

// Per-generation, per-bit one-counts. `norm` is the divisor turning a count
// into a frequency: the population size N for population algorithms, mu or K
// for frequency-based ones.
struct FrequencyTrace {
    std::size_t bits = 0;
    std::uint32_t norm = 0;
    std::vector<std::uint32_t> counts;  // row-major, one row per generation

    std::size_t generations() const { return bits == 0 ? 0 : counts.size() / bits; }
    std::uint32_t at(std::size_t g, std::size_t j) const { return counts[g * bits + j]; }
    void push_row(std::span<const std::uint32_t> row) {
        counts.insert(counts.end(), row.begin(), row.end());
    }
};

FrequencyTrace frequency_matrix(std::span<const Population> generations);

struct HittingReport {
    enum class Event { band_exit, absorption, optimum, dominant_converged };
    Event event;
    std::optional<std::uint64_t> generation;  // first generation the event holds
};

// First index where the value leaves [lo, hi] (inclusive band).
HittingReport first_band_exit(std::span<const std::uint32_t> series, std::uint32_t lo,
                              std::uint32_t hi);

// First index where a frequency series hits exactly 0 or 1.
HittingReport first_absorption(std::span<const double> series);

// Nearest-rank quantiles: rank ceil(q*n) clamped to [1, n] on the sorted
// samples; q=0 gives the minimum, q=1 the maximum.
std::vector<double> quantiles(std::vector<double> samples, std::span<const double> qs);

// Positions whose trial value is determined by the donor tuple regardless of
// the mutation and crossover draws: X_{r1,j} = X_{i,j} and X_{r2,j} = X_{r3,j}.
// The forced value is always X_i's gene.
struct ForcedPositions {
    BitVector mask;    // 1 where the position is forced
    BitVector values;  // X_i's genes restricted to the mask
    std::size_t count() const { return mask.count_ones(); }
};
ForcedPositions forced_positions(const Population& pop, std::size_t i, std::size_t r1,
                                 std::size_t r2, std::size_t r3);

// 2^(number of unforced positions); requires D <= 40.
std::uint64_t tuple_reachable_count(const Population& pop, std::size_t i, std::size_t r1,
                                    std::size_t r2, std::size_t r3);

// Number of forced positions whose value disagrees with target; target is
// reachable from the tuple iff this is 0.
std::size_t forced_mismatch_count(const BitVector& target, const Population& pop, std::size_t i,
                                  std::size_t r1, std::size_t r2, std::size_t r3);

// Number of bit strings reachable in one generation by some ordered tuple
// (i, r1, r2, r3) of distinct members. Requires D <= 20 and N <= 8.
std::uint64_t reachable_set_size(const Population& pop);

}  // namespace bdelab::analysis
