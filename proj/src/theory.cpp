#include "bdelab/theory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bdelab::theory {
namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

// Case sum over ordered donor triples. With a ones and b = M - a zeros in the
// pool of M = N-1 eligible members, the mutant gene is one when the base gene
// is one and no flip triggers, or the base gene is zero and a flip triggers
// (flip: the other two donors disagree and the scale draw falls below F):
//   M(M-1)(M-2) R = a(a-1)(a-2) + (1+2F) a b(b-1) + 2(1-F) a(a-1) b.
// Evaluated as a polynomial in a, so fractional arguments are fine; at the
// corners a = 0 and a = M it returns exactly 0 and 1.
double mutant_one_raw(std::size_t n, double f, double a) {
    const double m = static_cast<double>(n) - 1.0;
    const double b = m - a;
    const double num = a * (a - 1.0) * (a - 2.0)
                     + (1.0 + 2.0 * f) * a * b * (b - 1.0)
                     + 2.0 * (1.0 - f) * a * (a - 1.0) * b;
    return num / (m * (m - 1.0) * (m - 2.0));
}

}  // namespace

double trial_ones_expectation(std::size_t n, double scale_f, double cross_c, double y) {
    require(n >= 4, "trial_ones_expectation: population size must be at least 4");
    const double nn = static_cast<double>(n);
    require(y >= 0.0 && y <= nn, "trial_ones_expectation: y must lie in [0, N]");
    // Split by the parent gene: a one-carrier sees y-1 ones in its donor pool,
    // a zero-carrier sees y. The guards keep the corner values exact.
    double acc = y;
    if (y > 0.0) acc += cross_c * y * (mutant_one_raw(n, scale_f, y - 1.0) - 1.0);
    if (y < nn) acc += cross_c * (nn - y) * mutant_one_raw(n, scale_f, y);
    return acc;
}

double mutant_one_prob(std::size_t n, double scale_f, double y_minus) {
    require(n >= 4, "mutant_one_prob: population size must be at least 4");
    require(y_minus >= 0.0 && y_minus <= static_cast<double>(n) - 1.0,
            "mutant_one_prob: y_minus must lie in [0, N-1]");
    return mutant_one_raw(n, scale_f, y_minus);
}

double dominant_flip_prob(std::size_t n, double scale_f, double cross_c, double z) {
    require(n >= 4, "dominant_flip_prob: population size must be at least 4");
    require(z >= 1.0 && z <= static_cast<double>(n),
            "dominant_flip_prob: z must lie in [1, N]");
    // A zero-carrier flips iff crossover takes the mutant gene and that gene
    // is one; its pool holds N - z ones.
    return cross_c * mutant_one_raw(n, scale_f, static_cast<double>(n) - z);
}

double biased_mutant_one_prob(double p, double scale_f) {
    return p + 4.0 * scale_f * p * (1.0 - p) * (0.5 - p);
}

double onemax_gamma(double scale_f, double cross_c, double p) {
    require(p > 0.5 && p < 1.0, "onemax_gamma: p must lie in (0.5, 1)");
    const double q = 1.0 - p;
    const double num = (8.0 / 3.0) * scale_f * scale_f * cross_c
                     * p * q * (p - 0.5) * (p - 0.5);
    const double den = 1.0
                     + (1.0 - 2.0 * scale_f * cross_c * p * q)
                     * scale_f * (1.0 - 2.0 * p) * (1.0 - 2.0 * p);
    return num / den;
}

double expected_trial_fitness_gap(std::size_t d, double scale_f, double cross_c, double p) {
    return 4.0 * scale_f * cross_c * static_cast<double>(d)
         * p * (1.0 - p) * (0.5 - p);
}

double dominant_delta(double scale_f, double cross_c) {
    return 3.0 * cross_c * (4.0 - scale_f) / 80.0;
}

double dominant_growth_c0(double scale_f, double cross_c) {
    return 1.0 + 0.7 * cross_c * (0.5 - scale_f / 8.0);
}

double neutral_step_variance(NeutralChain algorithm, double p, std::size_t size) {
    require(size >= 1, "neutral_step_variance: size must be positive");
    const double s = static_cast<double>(size);
    const double pq = p * (1.0 - p);
    return algorithm == NeutralChain::umda ? pq / s : 2.0 * pq / (s * s);
}

std::size_t stability_threshold_N(double scale_f, double cross_c) {
    const double fc = scale_f * cross_c;
    require(fc > 0.0 && fc < 1.0, "stability_threshold_N: FC must lie strictly in (0, 1)");
    const double bound = std::max(3.0 / (1.0 - fc),
                                  15625.0 * std::log(2.0) / (288.0 * fc * fc));
    return static_cast<std::size_t>(std::ceil(bound));
}

}  // namespace bdelab::theory
