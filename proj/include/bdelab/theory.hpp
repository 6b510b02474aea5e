#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>

namespace bdelab::theory {

// H_N(y): expected one-count of the trial population at a bit carrying y ones
// among the N parents, before selection. Fixed points at 0, N/2 and N; the
// drift always points toward N/2. Requires N >= 4, 0 <= y <= N.
double trial_ones_expectation(std::size_t n, double scale_f, double cross_c, double y);

// R_N(y_minus): probability that a mutant gene is one when the N-1
// donor-eligible members carry y_minus ones. Requires N >= 4,
// 0 <= y_minus <= N-1.
double mutant_one_prob(std::size_t n, double scale_f, double y_minus);

// S_N(z): probability that a member carrying zero at the dominant bit flips
// to one in one generation, when z members (including it) carry zero.
// Requires N >= 4, 1 <= z <= N.
double dominant_flip_prob(std::size_t n, double scale_f, double cross_c, double z);

// Probability that a mutant gene is one when the three donor genes are
// independent Bernoulli(p): p + 4F p(1-p)(1/2 - p).
double biased_mutant_one_prob(double p, double scale_f);

// Rate constant of the exponential lower bound for OneMax started from
// Bernoulli(p) individuals with p in (0.5, 1).
double onemax_gamma(double scale_f, double cross_c, double p);

// E[onemax(U) - onemax(X)] when parent and donors are independent
// Bernoulli(p) D-bit strings: 4FCD p(1-p)(1/2 - p).
double expected_trial_fitness_gap(std::size_t d, double scale_f, double cross_c, double p);

// Per-generation lower bound on the dominant-bit flip probability: 3C(4-F)/80.
double dominant_delta(double scale_f, double cross_c);

// Multiplicative growth constant of the dominant-bit recovery phase:
// 1 + 0.7C(1/2 - F/8).
double dominant_growth_c0(double scale_f, double cross_c);

enum class NeutralChain { umda, cga };

// One-step conditional variance of the neutral-bit frequency:
// p(1-p)/mu for UMDA, 2 p(1-p)/K^2 for cGA.
double neutral_step_variance(NeutralChain algorithm, double p, std::size_t size);

// Smallest integer N with N >= 3/(1-FC) and N >= 15625 ln2 / (288 (FC)^2).
// Requires 0 < FC < 1.
std::size_t stability_threshold_N(double scale_f, double cross_c);

struct FormulaCheckResult {
    std::string formula_name;
    std::string parameter_tuple;
    double closed_form_value = 0.0;
    double mc_estimate = 0.0;
    double mc_stderr = 0.0;
    std::uint64_t n_samples = 0;
    bool within_3_sigma = false;

    void finalize() {
        within_3_sigma =
            std::abs(closed_form_value - mc_estimate) <= 3.0 * mc_stderr;
    }
};

}  // namespace bdelab::theory
