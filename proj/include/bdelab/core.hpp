#pragma once

#include <cstdint>
#include <vector>

#include "bdelab/bitvector.hpp"
#include "bdelab/random.hpp"

namespace bdelab {

// Population of N equal-length bit strings plus an optional fitness cache.
// The cache is only meaningful while it has one entry per member; code that
// mutates members is responsible for refreshing or clearing it.
struct Population {
    std::vector<BitVector> members;
    std::vector<std::int64_t> fitness;

    std::size_t size() const { return members.size(); }
    std::size_t dimension() const { return members.empty() ? 0 : members[0].size(); }
    bool has_fitness() const { return fitness.size() == members.size(); }
};

// N individuals with independent Bernoulli(p) genes.
Population sample_population(std::size_t n, std::size_t dim, double p, RandomStream& rng);

// Per-bit one-counts of a population.
std::vector<std::uint32_t> one_counts(const Population& pop);

// Parameter bundle shared by all algorithms; fields not used by a given
// algorithm are ignored by it.
struct AlgorithmParams {
    std::size_t population_size = 0;  // N
    std::size_t dimension = 0;        // D
    double scale_factor = 0.2;        // F in [0,1]
    double crossover_rate = 0.3;      // C in (0,1]
    std::size_t mu = 0;               // UMDA parents
    std::size_t lambda = 0;           // UMDA offspring
    std::size_t step_size_k = 0;      // cGA hypothetical population size, even
    std::size_t max_generations = 2000;
    double init_p = 0.5;              // gene probability of the initial population
};

// One child stream per member, seeded in member order. Generation steps hand
// member i the i-th stream, so trial construction is independent of the order
// in which members are processed.
std::vector<RandomStream> spawn_member_streams(RandomStream& rng, std::size_t n);

}  // namespace bdelab
