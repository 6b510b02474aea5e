#include "bdelab/algorithms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace bdelab::alg {

DonorTriple draw_donors(std::size_t n, std::size_t self, RandomStream& rng) {
    if (n < 4) throw std::invalid_argument("draw_donors: N >= 4 required");
    if (self >= n) throw std::invalid_argument("draw_donors: member index out of range");
    DonorTriple t{};
    do {
        t.r1 = rng.index_below(n);
    } while (t.r1 == self);
    do {
        t.r2 = rng.index_below(n);
    } while (t.r2 == self || t.r2 == t.r1);
    do {
        t.r3 = rng.index_below(n);
    } while (t.r3 == self || t.r3 == t.r1 || t.r3 == t.r2);
    return t;
}

BitVector bde_trial_with_donors(const Population& pop, std::size_t i, const DonorTriple& donors,
                                double scale_f, double cross_c, RandomStream& rng) {
    if (scale_f < 0.0 || scale_f > 1.0) throw std::invalid_argument("scale factor outside [0,1]");
    if (cross_c < 0.0 || cross_c > 1.0) throw std::invalid_argument("crossover rate outside [0,1]");
    const BitVector& parent = pop.members[i];
    const BitVector& base = pop.members[donors.r1];
    const BitVector& d2 = pop.members[donors.r2];
    const BitVector& d3 = pop.members[donors.r3];
    const std::size_t dim = parent.size();
    BitVector trial = parent;
    for (std::size_t k = 0; k < parent.word_count(); ++k) {
        const std::uint64_t wb = base.word(k);
        const std::uint64_t diff = d2.word(k) ^ d3.word(k);
        const std::uint64_t wp = parent.word(k);
        const std::size_t lo = k * 64;
        const std::size_t nbits = std::min<std::size_t>(64, dim - lo);
        for (std::size_t b = 0; b < nbits; ++b) {
            bool mutant = (wb >> b) & 1u;
            if (((diff >> b) & 1u) && rng.bernoulli(scale_f)) mutant = !mutant;
            const bool pbit = (wp >> b) & 1u;
            if (mutant != pbit && rng.bernoulli(cross_c)) trial.flip(lo + b);
        }
    }
    return trial;
}

BitVector bde_trial(const Population& pop, std::size_t i, double scale_f, double cross_c,
                    RandomStream& rng) {
    const DonorTriple donors = draw_donors(pop.size(), i, rng);
    return bde_trial_with_donors(pop, i, donors, scale_f, cross_c, rng);
}

BitVector ibde_trial(const Population& pop, std::size_t i, double scale_f, double cross_c,
                     RandomStream& rng) {
    if (scale_f < 0.0 || scale_f > 1.0) throw std::invalid_argument("scale factor outside [0,1]");
    if (cross_c < 0.0 || cross_c > 1.0) throw std::invalid_argument("crossover rate outside [0,1]");
    const std::size_t n = pop.size();
    const BitVector& parent = pop.members[i];
    BitVector trial = parent;
    for (std::size_t j = 0; j < parent.size(); ++j) {
        const DonorTriple donors = draw_donors(n, i, rng);
        bool mutant = pop.members[donors.r1].get(j);
        if (pop.members[donors.r2].get(j) != pop.members[donors.r3].get(j) &&
            rng.bernoulli(scale_f))
            mutant = !mutant;
        if (mutant != parent.get(j) && rng.bernoulli(cross_c)) trial.flip(j);
    }
    return trial;
}

namespace {

void add_ones(std::vector<std::uint32_t>& acc, const BitVector& x) {
    for (std::size_t k = 0; k < x.word_count(); ++k) {
        std::uint64_t w = x.word(k);
        while (w) {
            ++acc[k * 64 + static_cast<std::size_t>(std::countr_zero(w))];
            w &= w - 1;
        }
    }
}

GenerationOutcome generation_impl(const Population& pop, const Objective& f, double scale_f,
                                  double cross_c, RandomStream& rng,
                                  const GenerationOptions& opts, bool per_bit_donors) {
    const std::size_t n = pop.size();
    if (n < 4) throw std::invalid_argument("generation: N >= 4 required");
    auto streams = spawn_member_streams(rng, n);
    const bool integer_fit = f.integer_fitness();

    GenerationOutcome out;
    out.next.members.reserve(n);
    if (integer_fit) out.next.fitness.reserve(n);
    if (opts.collect_trial_ones) out.trial_ones.assign(pop.dimension(), 0);

    for (std::size_t i = 0; i < n; ++i) {
        BitVector trial = per_bit_donors
                              ? ibde_trial(pop, i, scale_f, cross_c, streams[i])
                              : bde_trial(pop, i, scale_f, cross_c, streams[i]);
        if (opts.collect_trial_ones) add_ones(out.trial_ones, trial);
        if (opts.monitor_trial_norm && 5 * trial.count_ones() >= 4 * pop.dimension())
            ++out.trial_norm_violations;
        if (integer_fit) {
            const std::int64_t trial_fit = f.evaluate(trial);
            const std::int64_t parent_fit =
                pop.has_fitness() ? pop.fitness[i] : f.evaluate(pop.members[i]);
            if (trial_fit >= parent_fit) {
                out.next.members.push_back(std::move(trial));
                out.next.fitness.push_back(trial_fit);
                ++out.accepted;
            } else {
                out.next.members.push_back(pop.members[i]);
                out.next.fitness.push_back(parent_fit);
            }
        } else {
            if (f.compare(trial, pop.members[i]) >= 0) {
                out.next.members.push_back(std::move(trial));
                ++out.accepted;
            } else {
                out.next.members.push_back(pop.members[i]);
            }
        }
    }
    return out;
}

}  // namespace

GenerationOutcome bde_generation(const Population& pop, const Objective& f, double scale_f,
                                 double cross_c, RandomStream& rng,
                                 const GenerationOptions& opts) {
    return generation_impl(pop, f, scale_f, cross_c, rng, opts, false);
}

GenerationOutcome ibde_generation(const Population& pop, const Objective& f, double scale_f,
                                  double cross_c, RandomStream& rng,
                                  const GenerationOptions& opts) {
    return generation_impl(pop, f, scale_f, cross_c, rng, opts, true);
}

FrequencyState umda_generation(const FrequencyState& state, const Objective& f, std::size_t mu,
                               std::size_t lambda, RandomStream& rng, bool* sampled_optimum) {
    if (mu < 1 || mu > lambda) throw std::invalid_argument("umda: 1 <= mu <= lambda required");
    const std::size_t d = state.p.size();
    for (double pj : state.p)
        if (pj < 0.0 || pj > 1.0) throw std::invalid_argument("umda: frequency outside [0,1]");

    std::vector<BitVector> offspring;
    offspring.reserve(lambda);
    for (std::size_t s = 0; s < lambda; ++s) {
        BitVector x(d);
        for (std::size_t j = 0; j < d; ++j)
            if (rng.bernoulli(state.p[j])) x.set(j, true);
        offspring.push_back(std::move(x));
    }
    if (sampled_optimum) {
        *sampled_optimum = false;
        for (const BitVector& x : offspring)
            if (f.is_optimal(x)) {
                *sampled_optimum = true;
                break;
            }
    }

    std::vector<std::size_t> order(lambda);
    std::iota(order.begin(), order.end(), 0);
    if (f.integer_fitness()) {
        std::vector<std::int64_t> fit(lambda);
        for (std::size_t s = 0; s < lambda; ++s) fit[s] = f.evaluate(offspring[s]);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fit[a] > fit[b]; });
    } else {
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return f.compare(offspring[a], offspring[b]) > 0;
        });
    }

    FrequencyState next;
    next.generation = state.generation + 1;
    next.p.assign(d, 0.0);
    std::vector<std::uint32_t> ones(d, 0);
    for (std::size_t s = 0; s < mu; ++s) add_ones(ones, offspring[order[s]]);
    for (std::size_t j = 0; j < d; ++j)
        next.p[j] = static_cast<double>(ones[j]) / static_cast<double>(mu);
    return next;
}

namespace {

std::int64_t frequency_numerator(double p, std::size_t k) {
    const double scaled = p * static_cast<double>(k);
    const auto numer = std::llround(scaled);
    if (std::abs(scaled - static_cast<double>(numer)) > 1e-9)
        throw std::invalid_argument("cga: frequency is not a multiple of 1/K");
    return numer;
}

}  // namespace

FrequencyState cga_generation(const FrequencyState& state, const Objective& f, std::size_t k,
                              RandomStream& rng, bool* sampled_optimum) {
    if (k < 2 || k % 2 != 0) throw std::invalid_argument("cga: even K >= 2 required");
    const std::size_t d = state.p.size();

    BitVector a(d), b(d);
    for (std::size_t j = 0; j < d; ++j)
        if (rng.bernoulli(state.p[j])) a.set(j, true);
    for (std::size_t j = 0; j < d; ++j)
        if (rng.bernoulli(state.p[j])) b.set(j, true);
    if (sampled_optimum) *sampled_optimum = f.is_optimal(a) || f.is_optimal(b);

    // First sample wins ties.
    const bool a_wins = f.compare(a, b) >= 0;
    const BitVector& winner = a_wins ? a : b;

    FrequencyState next;
    next.generation = state.generation + 1;
    next.p = state.p;
    for (std::size_t j = 0; j < d; ++j) {
        if (a.get(j) == b.get(j)) continue;
        const std::int64_t numer = frequency_numerator(state.p[j], k) + (winner.get(j) ? 1 : -1);
        next.p[j] = static_cast<double>(numer) / static_cast<double>(k);
    }
    return next;
}

double umda_neutral_step(double p, std::size_t mu, RandomStream& rng) {
    if (mu < 1) throw std::invalid_argument("umda_neutral_step: mu >= 1 required");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("umda_neutral_step: p outside [0,1]");
    std::size_t ones = 0;
    for (std::size_t s = 0; s < mu; ++s)
        if (rng.bernoulli(p)) ++ones;
    return static_cast<double>(ones) / static_cast<double>(mu);
}

double cga_neutral_step(double p, std::size_t k, RandomStream& rng) {
    if (k < 2 || k % 2 != 0) throw std::invalid_argument("cga_neutral_step: even K >= 2 required");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("cga_neutral_step: p outside [0,1]");
    const std::int64_t numer = frequency_numerator(p, k);
    const bool b1 = rng.bernoulli(p);
    const bool b2 = rng.bernoulli(p);
    if (b1 == b2) return p;
    // The winner is decided by the rest of the genome, independent of this
    // neutral bit, so the surviving bit is b1 or b2 with equal probability.
    const bool up = rng.bernoulli(0.5);
    return static_cast<double>(numer + (up ? 1 : -1)) / static_cast<double>(k);
}

Algorithm algorithm_from_id(std::string_view id) {
    if (id == "bde") return Algorithm::bde;
    if (id == "ibde") return Algorithm::ibde;
    if (id == "umda") return Algorithm::umda;
    if (id == "cga") return Algorithm::cga;
    if (id == "umda_neutral") return Algorithm::umda_neutral;
    if (id == "cga_neutral") return Algorithm::cga_neutral;
    throw std::invalid_argument("unknown algorithm id: " + std::string(id));
}

std::string_view algorithm_id(Algorithm a) {
    switch (a) {
        case Algorithm::bde: return "bde";
        case Algorithm::ibde: return "ibde";
        case Algorithm::umda: return "umda";
        case Algorithm::cga: return "cga";
        case Algorithm::umda_neutral: return "umda_neutral";
        case Algorithm::cga_neutral: return "cga_neutral";
    }
    return "";
}

std::string_view run_status_id(RunStatus s) {
    switch (s) {
        case RunStatus::success: return "success";
        case RunStatus::frequency_zero: return "frequency_zero";
        case RunStatus::generation_limit: return "generation_limit";
        case RunStatus::band_exit: return "band_exit";
    }
    return "";
}

namespace {

struct BandCounts {
    std::uint32_t lo, hi;
};

// Inclusive integer bounds of [lo_fraction*N, hi_fraction*N]; the epsilon
// guards against products like 0.4*60 landing just above the exact integer.
BandCounts band_counts(const Band& band, std::size_t n) {
    if (band.lo_fraction < 0.0 || band.hi_fraction > 1.0 ||
        band.lo_fraction > band.hi_fraction)
        throw std::invalid_argument("band fractions must satisfy 0 <= lo <= hi <= 1");
    const double nn = static_cast<double>(n);
    const auto lo = static_cast<std::uint32_t>(std::ceil(band.lo_fraction * nn - 1e-9));
    const auto hi = static_cast<std::uint32_t>(std::floor(band.hi_fraction * nn + 1e-9));
    return {lo, hi};
}

void validate_population_params(const AlgorithmParams& p) {
    if (p.population_size < 4) throw std::invalid_argument("run: N >= 4 required");
    if (p.dimension < 1) throw std::invalid_argument("run: D >= 1 required");
    if (p.scale_factor < 0.0 || p.scale_factor > 1.0)
        throw std::invalid_argument("run: F outside [0,1]");
    if (p.crossover_rate <= 0.0 || p.crossover_rate > 1.0)
        throw std::invalid_argument("run: C outside (0,1]");
    if (p.init_p < 0.0 || p.init_p > 1.0) throw std::invalid_argument("run: init_p outside [0,1]");
}

RunRecord run_population_algorithm(Algorithm algo, const Objective& f,
                                   const AlgorithmParams& params, std::uint64_t seed,
                                   const RunOptions& opts) {
    validate_population_params(params);
    const std::size_t n = params.population_size;
    const std::size_t d = params.dimension;
    const bool per_bit_donors = algo == Algorithm::ibde;

    RandomStream rng(seed);
    Population pop;
    if (opts.initial) {
        if (opts.initial->size() != n || opts.initial->dimension() != d)
            throw std::invalid_argument("run: initial population shape does not match params");
        pop = *opts.initial;
    } else {
        pop = sample_population(n, d, params.init_p, rng);
    }
    if (f.integer_fitness()) {
        pop.fitness.clear();
        pop.fitness.reserve(n);
        for (const BitVector& x : pop.members) pop.fitness.push_back(f.evaluate(x));
    }

    std::vector<char> requires_one(d);
    for (std::size_t j = 0; j < d; ++j) requires_one[j] = f.optimum_requires_one(j) ? 1 : 0;

    std::optional<BandCounts> band;
    if (opts.band) band = band_counts(*opts.band, n);

    RunRecord rec;
    rec.params = params;
    rec.seed = seed;
    if (opts.trace != TraceMode::none) {
        rec.trace.emplace();
        rec.trace->bits = opts.trace == TraceMode::all_bits ? d : 1;
        rec.trace->norm = static_cast<std::uint32_t>(n);
    }

    std::vector<std::uint32_t> counts = one_counts(pop);
    const auto record_state = [&](const std::vector<std::uint32_t>& c) {
        if (!rec.trace) return;
        if (opts.trace == TraceMode::all_bits) {
            rec.trace->push_row(c);
        } else {
            const std::uint32_t last = c[d - 1];
            rec.trace->push_row(std::span<const std::uint32_t>(&last, 1));
        }
    };
    const auto monitor_members = [&]() {
        if (!opts.monitor_trap) return;
        for (const BitVector& x : pop.members)
            if (5 * x.count_ones() >= d) ++rec.trap_violations;
    };
    // Returns the terminal status applying at the current generation, if any.
    const auto terminal_status = [&]() -> std::optional<RunStatus> {
        if (opts.stop_when_first_bit_converged) {
            if (counts[0] == n) return RunStatus::success;
        } else {
            for (const BitVector& x : pop.members)
                if (f.is_optimal(x)) return RunStatus::success;
        }
        for (std::size_t j = 0; j < d; ++j)
            if (requires_one[j] && counts[j] == 0) return RunStatus::frequency_zero;
        if (band)
            for (std::size_t j = 0; j < d; ++j)
                if (counts[j] < band->lo || counts[j] > band->hi) return RunStatus::band_exit;
        return std::nullopt;
    };

    record_state(counts);
    monitor_members();
    std::uint64_t g = 0;
    auto status = terminal_status();
    std::uint64_t event_g = 0;
    while ((opts.fixed_horizon || !status) && g < params.max_generations) {
        GenerationOptions gen_opts;
        gen_opts.monitor_trial_norm = opts.monitor_trap;
        auto outcome = generation_impl(pop, f, params.scale_factor, params.crossover_rate, rng,
                                       gen_opts, per_bit_donors);
        rec.trap_violations += outcome.trial_norm_violations;
        pop = std::move(outcome.next);
        ++g;
        counts = one_counts(pop);
        record_state(counts);
        monitor_members();
        if (!status) {
            status = terminal_status();
            if (status) event_g = g;
        }
    }
    rec.status = status.value_or(RunStatus::generation_limit);
    rec.generations = status ? event_g : g;
    return rec;
}

RunRecord run_frequency_algorithm(Algorithm algo, const Objective& f,
                                  const AlgorithmParams& params, std::uint64_t seed,
                                  const RunOptions& opts) {
    const std::size_t d = params.dimension;
    if (d < 1) throw std::invalid_argument("run: D >= 1 required");
    if (params.init_p < 0.0 || params.init_p > 1.0)
        throw std::invalid_argument("run: init_p outside [0,1]");
    const bool is_umda = algo == Algorithm::umda;
    const std::size_t norm = is_umda ? params.mu : params.step_size_k;
    if (is_umda) {
        if (params.mu < 1 || params.mu > params.lambda)
            throw std::invalid_argument("run: 1 <= mu <= lambda required");
    } else if (params.step_size_k < 2 || params.step_size_k % 2 != 0) {
        throw std::invalid_argument("run: even K >= 2 required");
    }

    RandomStream rng(seed);
    FrequencyState state;
    state.p.assign(d, params.init_p);

    std::vector<char> requires_one(d);
    for (std::size_t j = 0; j < d; ++j) requires_one[j] = f.optimum_requires_one(j) ? 1 : 0;

    RunRecord rec;
    rec.params = params;
    rec.seed = seed;
    if (opts.trace != TraceMode::none) {
        rec.trace.emplace();
        rec.trace->bits = opts.trace == TraceMode::all_bits ? d : 1;
        rec.trace->norm = static_cast<std::uint32_t>(norm);
    }
    const auto record_state = [&]() {
        if (!rec.trace) return;
        std::vector<std::uint32_t> row;
        const std::size_t from = opts.trace == TraceMode::all_bits ? 0 : d - 1;
        for (std::size_t j = from; j < d; ++j)
            row.push_back(static_cast<std::uint32_t>(
                std::llround(state.p[j] * static_cast<double>(norm))));
        rec.trace->push_row(row);
    };
    const auto terminal_status = [&](bool sampled_optimum) -> std::optional<RunStatus> {
        if (sampled_optimum) return RunStatus::success;
        bool pattern_complete = true;
        for (std::size_t j = 0; j < d; ++j) {
            if (!requires_one[j])
                pattern_complete = false;
            else if (state.p[j] == 0.0)
                return RunStatus::frequency_zero;
            else if (state.p[j] != 1.0)
                pattern_complete = false;
        }
        if (pattern_complete) return RunStatus::success;
        return std::nullopt;
    };

    record_state();
    std::uint64_t g = 0;
    auto status = terminal_status(false);
    std::uint64_t event_g = 0;
    while ((opts.fixed_horizon || !status) && g < params.max_generations) {
        bool sampled_optimum = false;
        state = is_umda
                    ? umda_generation(state, f, params.mu, params.lambda, rng, &sampled_optimum)
                    : cga_generation(state, f, params.step_size_k, rng, &sampled_optimum);
        ++g;
        record_state();
        if (!status) {
            status = terminal_status(sampled_optimum);
            if (status) event_g = g;
        }
    }
    rec.status = status.value_or(RunStatus::generation_limit);
    rec.generations = status ? event_g : g;
    return rec;
}

RunRecord run_neutral_chain(Algorithm algo, const AlgorithmParams& params, std::uint64_t seed,
                            const RunOptions& opts) {
    const bool is_umda = algo == Algorithm::umda_neutral;
    const std::size_t size = is_umda ? params.mu : params.step_size_k;
    if (is_umda) {
        if (params.mu < 1) throw std::invalid_argument("run: mu >= 1 required");
    } else if (params.step_size_k < 2 || params.step_size_k % 2 != 0) {
        throw std::invalid_argument("run: even K >= 2 required");
    }
    if (params.init_p < 0.0 || params.init_p > 1.0)
        throw std::invalid_argument("run: init_p outside [0,1]");

    RandomStream rng(seed);
    double p = params.init_p;

    RunRecord rec;
    rec.params = params;
    rec.seed = seed;
    if (opts.trace != TraceMode::none) {
        rec.trace.emplace();
        rec.trace->bits = 1;
        rec.trace->norm = static_cast<std::uint32_t>(size);
    }
    const auto record_state = [&]() {
        if (!rec.trace) return;
        const auto numer =
            static_cast<std::uint32_t>(std::llround(p * static_cast<double>(size)));
        rec.trace->push_row(std::span<const std::uint32_t>(&numer, 1));
    };
    const auto terminal_status = [&]() -> std::optional<RunStatus> {
        if (p == 1.0) return RunStatus::success;
        if (p == 0.0) return RunStatus::frequency_zero;
        return std::nullopt;
    };

    record_state();
    std::uint64_t g = 0;
    auto status = terminal_status();
    std::uint64_t event_g = 0;
    while ((opts.fixed_horizon || !status) && g < params.max_generations) {
        p = is_umda ? umda_neutral_step(p, params.mu, rng)
                    : cga_neutral_step(p, params.step_size_k, rng);
        ++g;
        record_state();
        if (!status) {
            status = terminal_status();
            if (status) event_g = g;
        }
    }
    rec.status = status.value_or(RunStatus::generation_limit);
    rec.generations = status ? event_g : g;
    return rec;
}

}  // namespace

RunRecord run(Algorithm algo, const Objective& f, const AlgorithmParams& params,
              std::uint64_t seed, const RunOptions& opts) {
    switch (algo) {
        case Algorithm::bde:
        case Algorithm::ibde:
            return run_population_algorithm(algo, f, params, seed, opts);
        case Algorithm::umda:
        case Algorithm::cga:
            return run_frequency_algorithm(algo, f, params, seed, opts);
        case Algorithm::umda_neutral:
        case Algorithm::cga_neutral:
            return run_neutral_chain(algo, params, seed, opts);
    }
    throw std::invalid_argument("run: unknown algorithm");
}

}  // namespace bdelab::alg
