#include "bdelab/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

#include "bdelab/algorithms.hpp"

namespace bdelab::oracles {
namespace {

McResult bernoulli_result(std::uint64_t hits, std::uint64_t samples) {
    const double n = static_cast<double>(samples);
    const double p = static_cast<double>(hits) / n;
    return {p, std::sqrt(p * (1.0 - p) / n), samples};
}

// Accumulates values centered on a hint close to the expected mean, which
// keeps the variance computation well conditioned when it is small relative
// to the mean.
struct MeanAccumulator {
    double center;
    double sum = 0.0;
    double sumsq = 0.0;
    std::uint64_t count = 0;

    explicit MeanAccumulator(double c) : center(c) {}

    void add(double x) {
        const double d = x - center;
        sum += d;
        sumsq += d * d;
        ++count;
    }

    McResult result() const {
        const double n = static_cast<double>(count);
        const double mean_d = sum / n;
        const double var = std::max(0.0, (sumsq - n * mean_d * mean_d) / (n - 1.0));
        return {center + mean_d, std::sqrt(var / n), count};
    }
};

struct TripleIdx {
    std::size_t a, b, c;
};

// Uniform ordered triple of distinct indices in {0..n-1}.
TripleIdx three_distinct(std::size_t n, RandomStream& rng) {
    TripleIdx t{};
    t.a = rng.index_below(n);
    do { t.b = rng.index_below(n); } while (t.b == t.a);
    do { t.c = rng.index_below(n); } while (t.c == t.a || t.c == t.b);
    return t;
}

unsigned mutant_gene(unsigned g1, unsigned g2, unsigned g3, double f, RandomStream& rng) {
    unsigned v = g1;
    if (g2 != g3 && rng.bernoulli(f)) v ^= 1u;
    return v;
}

}  // namespace

McResult mc_trial_ones(std::size_t n, double f, double c, std::size_t y,
                       std::uint64_t samples, RandomStream& rng) {
    std::vector<unsigned char> bits(n, 0);
    std::fill(bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(y), 1);
    MeanAccumulator acc(static_cast<double>(y));
    for (std::uint64_t s = 0; s < samples; ++s) {
        unsigned ones = 0;
        for (std::size_t i = 0; i < n; ++i) {
            // Skip-over draw from {0..n-1} minus the member itself.
            auto pick = [&] {
                const std::size_t r = rng.index_below(n - 1);
                return r >= i ? r + 1 : r;
            };
            const std::size_t r1 = pick();
            std::size_t r2, r3;
            do { r2 = pick(); } while (r2 == r1);
            do { r3 = pick(); } while (r3 == r1 || r3 == r2);
            const unsigned v = mutant_gene(bits[r1], bits[r2], bits[r3], f, rng);
            ones += rng.bernoulli(c) ? v : bits[i];
        }
        acc.add(static_cast<double>(ones));
    }
    return acc.result();
}

McResult mc_mutant_one(std::size_t n, double f, std::size_t y_minus,
                       std::uint64_t samples, RandomStream& rng) {
    const std::size_t m = n - 1;
    std::vector<unsigned char> pool(m, 0);
    std::fill(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(y_minus), 1);
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        const TripleIdx t = three_distinct(m, rng);
        hits += mutant_gene(pool[t.a], pool[t.b], pool[t.c], f, rng);
    }
    return bernoulli_result(hits, samples);
}

McResult mc_dominant_flip(std::size_t n, double f, double c, std::size_t z,
                          std::uint64_t samples, RandomStream& rng) {
    const std::size_t m = n - 1;
    std::vector<unsigned char> pool(m, 0);
    std::fill(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n - z), 1);
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        const TripleIdx t = three_distinct(m, rng);
        const unsigned v = mutant_gene(pool[t.a], pool[t.b], pool[t.c], f, rng);
        hits += rng.bernoulli(c) ? v : 0u;
    }
    return bernoulli_result(hits, samples);
}

McResult mc_biased_mutant_one(double p, double f,
                              std::uint64_t samples, RandomStream& rng) {
    std::uint64_t hits = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        const unsigned g1 = rng.bernoulli(p);
        const unsigned g2 = rng.bernoulli(p);
        const unsigned g3 = rng.bernoulli(p);
        hits += mutant_gene(g1, g2, g3, f, rng);
    }
    return bernoulli_result(hits, samples);
}

McResult mc_trial_fitness_gap(std::size_t d, double f, double c, double p,
                              std::uint64_t samples, RandomStream& rng) {
    MeanAccumulator acc(0.0);
    for (std::uint64_t s = 0; s < samples; ++s) {
        long gap = 0;
        for (std::size_t j = 0; j < d; ++j) {
            const unsigned x = rng.bernoulli(p);
            const unsigned g1 = rng.bernoulli(p);
            const unsigned g2 = rng.bernoulli(p);
            const unsigned g3 = rng.bernoulli(p);
            const unsigned v = mutant_gene(g1, g2, g3, f, rng);
            const unsigned u = rng.bernoulli(c) ? v : x;
            gap += static_cast<long>(u) - static_cast<long>(x);
        }
        acc.add(static_cast<double>(gap));
    }
    return acc.result();
}

McResult mc_neutral_step_variance(theory::NeutralChain algorithm, double p,
                                  std::size_t size, std::uint64_t samples,
                                  RandomStream& rng) {
    MeanAccumulator acc(0.0);
    for (std::uint64_t s = 0; s < samples; ++s) {
        const double step = algorithm == theory::NeutralChain::umda
                                ? alg::umda_neutral_step(p, size, rng)
                                : alg::cga_neutral_step(p, size, rng);
        const double d = step - p;
        acc.add(d * d);
    }
    return acc.result();
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::vector<std::size_t> count_spread(std::size_t n, std::size_t lo, std::size_t hi) {
    if (n == 8) {
        std::vector<std::size_t> all;
        for (std::size_t v = lo; v <= hi; ++v) all.push_back(v);
        return all;
    }
    return {1, n / 4, n / 2, 3 * n / 4, hi};
}

}  // namespace

std::vector<theory::FormulaCheckResult> formula_check_grid(std::uint64_t samples,
                                                           std::uint64_t master_seed) {
    const std::size_t sizes[] = {8, 16, 64};
    const double levels[] = {0.2, 0.5, 0.9};

    std::vector<theory::FormulaCheckResult> out;
    std::uint64_t check_index = 0;

    auto stream = [&] { return RandomStream::for_run(master_seed, check_index); };
    auto push = [&](std::string name, std::string params, double closed, const McResult& mc) {
        theory::FormulaCheckResult r;
        r.formula_name = std::move(name);
        r.parameter_tuple = std::move(params);
        r.closed_form_value = closed;
        r.mc_estimate = mc.estimate;
        r.mc_stderr = mc.std_error;
        r.n_samples = mc.n_samples;
        r.finalize();
        out.push_back(std::move(r));
        ++check_index;
    };

    for (std::size_t n : sizes) {
        for (double f : levels) {
            for (double c : levels) {
                for (std::size_t y : count_spread(n, 0, n)) {
                    RandomStream rng = stream();
                    push("trial_ones_expectation",
                         "N=" + std::to_string(n) + " F=" + num(f) + " C=" + num(c) +
                             " y=" + std::to_string(y),
                         theory::trial_ones_expectation(n, f, c, static_cast<double>(y)),
                         mc_trial_ones(n, f, c, y, samples, rng));
                }
                for (std::size_t z : count_spread(n, 1, n)) {
                    RandomStream rng = stream();
                    push("dominant_flip_prob",
                         "N=" + std::to_string(n) + " F=" + num(f) + " C=" + num(c) +
                             " z=" + std::to_string(z),
                         theory::dominant_flip_prob(n, f, c, static_cast<double>(z)),
                         mc_dominant_flip(n, f, c, z, samples, rng));
                }
            }
            for (std::size_t y_minus : count_spread(n, 0, n - 1)) {
                RandomStream rng = stream();
                push("mutant_one_prob",
                     "N=" + std::to_string(n) + " F=" + num(f) +
                         " y_minus=" + std::to_string(y_minus),
                     theory::mutant_one_prob(n, f, static_cast<double>(y_minus)),
                     mc_mutant_one(n, f, y_minus, samples, rng));
            }
        }
    }

    for (double p : levels) {
        for (double f : levels) {
            RandomStream rng = stream();
            push("biased_mutant_one_prob",
                 "p=" + num(p) + " F=" + num(f),
                 theory::biased_mutant_one_prob(p, f),
                 mc_biased_mutant_one(p, f, samples, rng));
        }
    }

    for (std::size_t d : sizes) {
        for (double f : levels) {
            for (double c : levels) {
                for (double p : levels) {
                    RandomStream rng = stream();
                    push("expected_trial_fitness_gap",
                         "D=" + std::to_string(d) + " F=" + num(f) + " C=" + num(c) +
                             " p=" + num(p),
                         theory::expected_trial_fitness_gap(d, f, c, p),
                         mc_trial_fitness_gap(d, f, c, p, samples, rng));
                }
            }
        }
    }

    for (std::size_t size : sizes) {
        for (double level : levels) {
            for (theory::NeutralChain chain :
                 {theory::NeutralChain::umda, theory::NeutralChain::cga}) {
                RandomStream rng = stream();
                const char* id = chain == theory::NeutralChain::umda ? "umda" : "cga";
                // The cGA chain only visits multiples of 1/K, so snap the
                // level to the nearest one (the recorded tuple shows it).
                const double p = chain == theory::NeutralChain::cga
                                     ? std::round(level * static_cast<double>(size)) /
                                           static_cast<double>(size)
                                     : level;
                push("neutral_step_variance",
                     std::string("algorithm=") + id + " p=" + num(p) +
                         " size=" + std::to_string(size),
                     theory::neutral_step_variance(chain, p, size),
                     mc_neutral_step_variance(chain, p, size, samples, rng));
            }
        }
    }

    return out;
}

}  // namespace bdelab::oracles
