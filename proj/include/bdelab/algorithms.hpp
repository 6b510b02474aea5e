#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "bdelab/analysis.hpp"
#include "bdelab/core.hpp"
#include "bdelab/objectives.hpp"

namespace bdelab::alg {

struct DonorTriple {
    std::size_t r1, r2, r3;
};

// Three mutually distinct indices in [0, n), none equal to self, drawn by
// rejection so the triple is uniform over all ordered admissible triples.
// Requires n >= 4.
DonorTriple draw_donors(std::size_t n, std::size_t self, RandomStream& rng);

// One trial vector for member i: mutant gene j is X_{r1,j}, flipped with
// probability F where the other two donors disagree; crossover takes the
// mutant gene with probability C, else the parent gene. There is no forced
// inheritance position.
BitVector bde_trial(const Population& pop, std::size_t i, double scale_f, double cross_c,
                    RandomStream& rng);
BitVector bde_trial_with_donors(const Population& pop, std::size_t i, const DonorTriple& donors,
                                double scale_f, double cross_c, RandomStream& rng);

// Same construction but with a fresh donor triple drawn per bit position.
BitVector ibde_trial(const Population& pop, std::size_t i, double scale_f, double cross_c,
                     RandomStream& rng);

struct GenerationOptions {
    bool collect_trial_ones = false;
    // Count trials (accepted or not) with at least 4D/5 ones.
    bool monitor_trial_norm = false;
};

struct GenerationOutcome {
    Population next;
    std::size_t accepted = 0;                // trials that replaced their parent
    std::vector<std::uint32_t> trial_ones;   // pre-selection per-bit one-counts, if requested
    std::uint64_t trial_norm_violations = 0;
};

// Synchronous generation: all trials are built against the incoming
// population; a trial replaces its parent when its fitness is at least the
// parent's (ties go to the offspring). Each member consumes randomness from
// its own child stream, spawned in member order, so the outcome does not
// depend on processing order.
GenerationOutcome bde_generation(const Population& pop, const Objective& f, double scale_f,
                                 double cross_c, RandomStream& rng,
                                 const GenerationOptions& opts = {});
GenerationOutcome ibde_generation(const Population& pop, const Objective& f, double scale_f,
                                  double cross_c, RandomStream& rng,
                                  const GenerationOptions& opts = {});

// Frequency vector of a univariate model, plus the generation counter.
struct FrequencyState {
    std::vector<double> p;
    std::uint64_t generation = 0;
};

// UMDA without margins: sample lambda individuals gene-wise from p, keep the
// mu fittest (stable tie-break by sample index), set p to the selected gene
// means. Frequencies 0 and 1 are absorbing. If sampled_optimum is non-null it
// reports whether any offspring was optimal.
FrequencyState umda_generation(const FrequencyState& state, const Objective& f, std::size_t mu,
                               std::size_t lambda, RandomStream& rng,
                               bool* sampled_optimum = nullptr);

// cGA with hypothetical population size k (even): sample two individuals,
// rank them (first sample wins ties), move each frequency 1/k toward the
// winner where the samples differ. 0 and 1 are absorbing.
FrequencyState cga_generation(const FrequencyState& state, const Objective& f, std::size_t k,
                              RandomStream& rng, bool* sampled_optimum = nullptr);

// Reduced chains for a single neutral bit.
// UMDA: Binomial(mu, p)/mu. cGA: p +/- 1/k each with probability p(1-p),
// unchanged otherwise (p must be a multiple of 1/k).
double umda_neutral_step(double p, std::size_t mu, RandomStream& rng);
double cga_neutral_step(double p, std::size_t k, RandomStream& rng);

enum class Algorithm { bde, ibde, umda, cga, umda_neutral, cga_neutral };
Algorithm algorithm_from_id(std::string_view id);
std::string_view algorithm_id(Algorithm a);

enum class RunStatus { success, frequency_zero, generation_limit, band_exit };
std::string_view run_status_id(RunStatus s);

enum class TraceMode { none, last_bit, all_bits };

struct Band {
    double lo_fraction;
    double hi_fraction;
};

struct RunOptions {
    TraceMode trace = TraceMode::none;
    // When set, the run terminates with status band_exit as soon as any
    // per-bit one-count leaves [lo*N, hi*N] (inclusive).
    std::optional<Band> band;
    // Replaces Bernoulli(init_p) sampling of generation 0.
    std::optional<Population> initial;
    // Terminate once bit 0 is all-ones across the population (dominant-bit
    // convergence instrumentation); reported as status success. While set, the
    // usual optimal-member check is disabled so the recorded generation is the
    // convergence time itself.
    bool stop_when_first_bit_converged = false;
    // Run exactly max_generations updates instead of stopping at the first
    // terminal event; the record still reports the first event and its
    // generation. Gives every run the same trace shape.
    bool fixed_horizon = false;
    // Count violations of the trap confinement properties: every individual
    // must stay below D/5 ones and every trial below 4D/5 ones.
    bool monitor_trap = false;
};

struct RunRecord {
    RunStatus status = RunStatus::generation_limit;
    std::uint64_t generations = 0;
    std::optional<analysis::FrequencyTrace> trace;
    AlgorithmParams params;
    std::uint64_t seed = 0;
    std::uint64_t trap_violations = 0;
};

// Executes one run to termination: success when an optimal individual exists
// in the population (or the frequency vector sits entirely at the optimum's
// pattern), frequency_zero when a bit whose optimal value is one can no
// longer produce ones, band_exit under band monitoring, generation_limit
// otherwise. Generations count whole population (or model) updates;
// generation 0 is the initial state.
RunRecord run(Algorithm algo, const Objective& f, const AlgorithmParams& params,
              std::uint64_t seed, const RunOptions& opts = {});

}  // namespace bdelab::alg
