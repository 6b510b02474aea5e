#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "bdelab/algorithms.hpp"
#include "test_util.hpp"

using namespace bdelab;

namespace {

Population random_pop(std::size_t n, std::size_t d, std::uint64_t seed, double p = 0.5) {
    RandomStream rng(seed);
    return sample_population(n, d, p, rng);
}

}  // namespace

TEST_SUITE("algorithms") {

TEST_CASE("donor triples avoid self and repeats and cover all ordered triples") {
    RandomStream rng(3);
    const std::size_t n = 5, self = 2;
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, int> seen;
    for (int t = 0; t < 24000; ++t) {
        const alg::DonorTriple d = alg::draw_donors(n, self, rng);
        CHECK(d.r1 != self);
        CHECK(d.r2 != self);
        CHECK(d.r3 != self);
        CHECK(d.r1 != d.r2);
        CHECK(d.r1 != d.r3);
        CHECK(d.r2 != d.r3);
        ++seen[{d.r1, d.r2, d.r3}];
    }
    REQUIRE(seen.size() == 24);
    for (const auto& [triple, count] : seen) {
        CHECK(count > 800);
        CHECK(count < 1200);
    }
}

TEST_CASE("zero scale with certain crossover reproduces the base donor") {
    const Population pop = random_pop(6, 40, 101);
    RandomStream rng(55);
    for (std::size_t i = 0; i < pop.size(); ++i) {
        const alg::DonorTriple d = alg::draw_donors(pop.size(), i, rng);
        const BitVector u = alg::bde_trial_with_donors(pop, i, d, 0.0, 1.0, rng);
        CHECK(u == pop.members[d.r1]);
    }
}

TEST_CASE("zero crossover returns the parent unchanged") {
    const Population pop = random_pop(6, 40, 102);
    RandomStream rng(56);
    for (std::size_t i = 0; i < pop.size(); ++i) {
        CHECK(alg::bde_trial(pop, i, 0.9, 0.0, rng) == pop.members[i]);
        CHECK(alg::ibde_trial(pop, i, 0.9, 0.0, rng) == pop.members[i]);
    }
}

TEST_CASE("single-bit trial distribution matches exact enumeration") {
    // Five one-bit members; the target has a zero so crossover and mutation
    // effects are both visible.
    const Population pop = testutil::pop_of({"1", "1", "0", "1", "0"});
    const std::size_t i = 2;
    const double f = 0.7, c = 0.6;
    const double xi = 0.0;

    double pv = 0.0;
    int tuples = 0;
    const std::size_t n = pop.size();
    for (std::size_t r1 = 0; r1 < n; ++r1) {
        if (r1 == i) continue;
        for (std::size_t r2 = 0; r2 < n; ++r2) {
            if (r2 == i || r2 == r1) continue;
            for (std::size_t r3 = 0; r3 < n; ++r3) {
                if (r3 == i || r3 == r1 || r3 == r2) continue;
                const double b1 = pop.members[r1].get(0) ? 1.0 : 0.0;
                const bool differ = pop.members[r2].get(0) != pop.members[r3].get(0);
                pv += differ ? (1.0 - f) * b1 + f * (1.0 - b1) : b1;
                ++tuples;
            }
        }
    }
    pv /= tuples;
    const double pu = (1.0 - c) * xi + c * pv;

    for (const bool per_bit : {false, true}) {
        RandomStream rng(per_bit ? 901 : 900);
        const int reps = 200000;
        int ones = 0;
        for (int t = 0; t < reps; ++t) {
            const BitVector u = per_bit ? alg::ibde_trial(pop, i, f, c, rng)
                                        : alg::bde_trial(pop, i, f, c, rng);
            ones += u.get(0) ? 1 : 0;
        }
        const double est = static_cast<double>(ones) / reps;
        const double se = std::sqrt(pu * (1.0 - pu) / reps);
        CHECK(std::abs(est - pu) < 4.5 * se);
    }
}

TEST_CASE("selection never lets a member's fitness decrease") {
    auto f = make_objective("onemax", 20);
    Population pop = random_pop(8, 20, 7);
    RandomStream rng(71);
    for (int g = 0; g < 30; ++g) {
        auto outcome = alg::bde_generation(pop, *f, 0.5, 0.5, rng);
        for (std::size_t i = 0; i < pop.size(); ++i)
            CHECK(f->evaluate(outcome.next.members[i]) >= f->evaluate(pop.members[i]));
        pop = std::move(outcome.next);
    }
}

TEST_CASE("equal-fitness trials replace their parents") {
    // Away from the needle's optimum every trial ties at fitness zero, so
    // each one must be accepted. D=30 keeps the optimum out of reach over
    // this horizon.
    auto f = make_objective("needle", 30);
    Population pop = random_pop(6, 30, 23);
    RandomStream rng(13);
    for (int g = 0; g < 20; ++g) {
        auto outcome = alg::bde_generation(pop, *f, 0.9, 0.9, rng);
        CHECK(outcome.accepted == pop.size());
        pop = std::move(outcome.next);
    }
}

TEST_CASE("converged bits never change") {
    for (const bool per_bit : {false, true}) {
        RandomStream init(19);
        Population pop = sample_population(6, 12, 0.5, init);
        for (auto& m : pop.members) {
            m.set(3, true);
            m.set(7, false);
        }
        auto f = make_objective("onemax", 12);
        RandomStream rng(20);
        for (int g = 0; g < 50; ++g) {
            auto outcome = per_bit ? alg::ibde_generation(pop, *f, 0.9, 0.9, rng)
                                   : alg::bde_generation(pop, *f, 0.9, 0.9, rng);
            pop = std::move(outcome.next);
            const auto counts = one_counts(pop);
            CHECK(counts[3] == pop.size());
            CHECK(counts[7] == 0);
        }
    }
}

TEST_CASE("leadingones prefixes never degrade") {
    auto f = make_objective("leadingones", 20);
    Population pop = random_pop(8, 20, 23);
    RandomStream rng(24);
    std::vector<std::int64_t> best(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) best[i] = f->evaluate(pop.members[i]);
    for (int g = 0; g < 60; ++g) {
        auto outcome = alg::bde_generation(pop, *f, 0.2, 0.3, rng);
        pop = std::move(outcome.next);
        for (std::size_t i = 0; i < pop.size(); ++i) {
            const std::int64_t v = f->evaluate(pop.members[i]);
            CHECK(v >= best[i]);
            best[i] = v;
        }
    }
}

TEST_CASE("a generation equals per-member trials from the member streams") {
    auto f = make_objective("onemax", 16);
    const Population pop = random_pop(6, 16, 501);
    const double scale_f = 0.4, cross_c = 0.7;

    RandomStream rng_gen(601);
    const auto outcome = alg::bde_generation(pop, *f, scale_f, cross_c, rng_gen);

    RandomStream rng_manual(601);
    auto streams = spawn_member_streams(rng_manual, pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
        const alg::DonorTriple d = alg::draw_donors(pop.size(), i, streams[i]);
        const BitVector u = alg::bde_trial_with_donors(pop, i, d, scale_f, cross_c, streams[i]);
        const BitVector& expect =
            f->evaluate(u) >= f->evaluate(pop.members[i]) ? u : pop.members[i];
        CHECK(outcome.next.members[i] == expect);
    }

    RandomStream rng_gen2(602);
    const auto outcome2 = alg::ibde_generation(pop, *f, scale_f, cross_c, rng_gen2);
    RandomStream rng_manual2(602);
    auto streams2 = spawn_member_streams(rng_manual2, pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
        const BitVector u = alg::ibde_trial(pop, i, scale_f, cross_c, streams2[i]);
        const BitVector& expect =
            f->evaluate(u) >= f->evaluate(pop.members[i]) ? u : pop.members[i];
        CHECK(outcome2.next.members[i] == expect);
    }
}

TEST_CASE("trial one-counts drift toward the closed-form expectation") {
    // Bit 0 starts with 2 ones among 10 members; bit 1 is converged at zero,
    // so the needle keeps every comparison a tie and selection is inert.
    Population pop;
    for (int i = 0; i < 10; ++i) pop.members.push_back(testutil::bits(i < 2 ? "10" : "00"));
    auto f = make_objective("needle", 2);
    RandomStream rng(77);
    const int reps = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (int t = 0; t < reps; ++t) {
        const auto outcome = alg::bde_generation(pop, *f, 0.9, 0.9, rng);
        const auto counts = one_counts(outcome.next);
        const double y = counts[0];
        sum += y;
        sumsq += y * y;
    }
    const double mean = sum / reps;
    const double var = (sumsq - sum * sum / reps) / (reps - 1);
    const double se = std::sqrt(var / reps);
    const double expected = 299.52 / 72.0;
    CHECK(std::abs(mean - expected) < 4.5 * se);
}

TEST_CASE("umda frequencies are selected-gene means with absorbing borders") {
    auto f = make_objective("onemax", 3);
    alg::FrequencyState s;
    s.p = {1.0, 0.0, 0.5};
    RandomStream rng(41);
    for (int g = 0; g < 25; ++g) {
        bool sampled_optimum = false;
        s = alg::umda_generation(s, *f, 4, 8, rng, &sampled_optimum);
        CHECK(s.p[0] == 1.0);
        CHECK(s.p[1] == 0.0);
        CHECK_FALSE(sampled_optimum);
        const double scaled = s.p[2] * 4.0;
        CHECK(scaled == doctest::Approx(std::round(scaled)).epsilon(1e-12));
        CHECK(s.p[2] >= 0.0);
        CHECK(s.p[2] <= 1.0);
    }
    CHECK(s.generation == 25);
}

TEST_CASE("umda reports a sampled optimum") {
    auto f = make_objective("onemax", 4);
    alg::FrequencyState s;
    s.p = {1.0, 1.0, 1.0, 1.0};
    RandomStream rng(42);
    bool sampled_optimum = false;
    s = alg::umda_generation(s, *f, 3, 6, rng, &sampled_optimum);
    CHECK(sampled_optimum);
    for (double p : s.p) CHECK(p == 1.0);
}

TEST_CASE("cga moves frequencies by single steps with absorbing borders") {
    auto f = make_objective("onemax", 3);
    alg::FrequencyState s;
    s.p = {1.0, 0.0, 0.5};
    RandomStream rng(43);
    for (int g = 0; g < 40; ++g) {
        const auto prev = s.p;
        s = alg::cga_generation(s, *f, 10, rng);
        CHECK(s.p[0] == 1.0);
        CHECK(s.p[1] == 0.0);
        const double delta = std::abs(s.p[2] - prev[2]);
        CHECK((delta == doctest::Approx(0.0) || delta == doctest::Approx(0.1)));
        CHECK(s.p[2] >= 0.0);
        CHECK(s.p[2] <= 1.0);
    }
}

TEST_CASE("cga neutral step from one-half has the documented law") {
    RandomStream rng(45);
    const int reps = 40000;
    int down = 0, stay = 0, up = 0;
    for (int t = 0; t < reps; ++t) {
        const double next = alg::cga_neutral_step(0.5, 10, rng);
        if (next < 0.5)
            ++down;
        else if (next > 0.5)
            ++up;
        else
            ++stay;
    }
    const double sd_quarter = std::sqrt(reps * 0.25 * 0.75);
    const double sd_half = std::sqrt(reps * 0.25);
    CHECK(std::abs(down - reps * 0.25) < 4.5 * sd_quarter);
    CHECK(std::abs(up - reps * 0.25) < 4.5 * sd_quarter);
    CHECK(std::abs(stay - reps * 0.5) < 4.5 * sd_half);
}

TEST_CASE("neutral chains are balanced and absorbing") {
    RandomStream rng(46);
    CHECK(alg::umda_neutral_step(0.0, 20, rng) == 0.0);
    CHECK(alg::umda_neutral_step(1.0, 20, rng) == 1.0);
    CHECK(alg::cga_neutral_step(0.0, 16, rng) == 0.0);
    CHECK(alg::cga_neutral_step(1.0, 16, rng) == 1.0);

    const int reps = 200000;
    double sum = 0.0;
    for (int t = 0; t < reps; ++t) sum += alg::umda_neutral_step(0.3, 50, rng);
    const double se_umda = std::sqrt(0.3 * 0.7 / 50.0 / reps);
    CHECK(std::abs(sum / reps - 0.3) < 4.5 * se_umda);

    sum = 0.0;
    for (int t = 0; t < reps; ++t) sum += alg::cga_neutral_step(0.25, 16, rng);
    const double se_cga = std::sqrt(2.0 * 0.25 * 0.75 / (16.0 * 16.0) / reps);
    CHECK(std::abs(sum / reps - 0.25) < 4.5 * se_cga);

    const double step = alg::umda_neutral_step(0.5, 20, rng) * 20.0;
    CHECK(step == doctest::Approx(std::round(step)).epsilon(1e-12));
    CHECK_THROWS_AS(alg::cga_neutral_step(0.3, 7, rng), std::invalid_argument);
}

TEST_CASE("algorithm ids round-trip") {
    for (const char* id :
         {"bde", "ibde", "umda", "cga", "umda_neutral", "cga_neutral"}) {
        CHECK(alg::algorithm_id(alg::algorithm_from_id(id)) == id);
    }
    CHECK_THROWS_AS(alg::algorithm_from_id("bogus"), std::invalid_argument);
    CHECK(alg::run_status_id(alg::RunStatus::success) == "success");
    CHECK(alg::run_status_id(alg::RunStatus::frequency_zero) == "frequency_zero");
    CHECK(alg::run_status_id(alg::RunStatus::generation_limit) == "generation_limit");
    CHECK(alg::run_status_id(alg::RunStatus::band_exit) == "band_exit");
}

TEST_CASE("run solves onemax and echoes its inputs") {
    auto f = make_objective("onemax", 30);
    AlgorithmParams params;
    params.population_size = 30;
    params.dimension = 30;
    const auto rec = alg::run(alg::Algorithm::bde, *f, params, 91);
    CHECK(rec.status == alg::RunStatus::success);
    CHECK(rec.generations > 0);
    CHECK(rec.generations <= params.max_generations);
    CHECK(rec.seed == 91);
    CHECK(rec.params.population_size == 30);
    CHECK_FALSE(rec.trace.has_value());
}

TEST_CASE("an initial population with a dead required bit stops immediately") {
    auto f = make_objective("onemax", 8);
    AlgorithmParams params;
    params.population_size = 6;
    params.dimension = 8;
    alg::RunOptions opts;
    RandomStream init(10);
    Population pop = sample_population(6, 8, 0.5, init);
    for (auto& m : pop.members) {
        m.set(5, false);
        m.set(0, true);
    }
    opts.initial = pop;
    const auto rec = alg::run(alg::Algorithm::bde, *f, params, 11, opts);
    CHECK(rec.status == alg::RunStatus::frequency_zero);
    CHECK(rec.generations == 0);
}

TEST_CASE("band monitoring reports an exit") {
    auto f = make_objective("needle", 6);
    AlgorithmParams params;
    params.population_size = 10;
    params.dimension = 6;
    params.scale_factor = 0.9;
    params.crossover_rate = 0.9;
    params.max_generations = 500;
    alg::RunOptions opts;
    opts.band = alg::Band{0.4, 0.6};
    bool saw_exit = false;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto rec = alg::run(alg::Algorithm::bde, *f, params, seed, opts);
        if (rec.status == alg::RunStatus::band_exit) saw_exit = true;
    }
    CHECK(saw_exit);
}

TEST_CASE("band bounds are inclusive integer counts") {
    // With N=10 and band [0.4, 0.6], counts 4 and 6 sit inside while 3 and 7
    // exit. The populations avoid "11" so the needle optimum never fires.
    auto f = make_objective("needle", 2);
    AlgorithmParams params;
    params.population_size = 10;
    params.dimension = 2;
    params.max_generations = 0;
    alg::RunOptions opts;
    opts.band = alg::Band{0.4, 0.6};
    const auto status_for = [&](int ones_bit0, int ones_bit1) {
        Population pop;
        for (int i = 0; i < 10; ++i) {
            if (i < ones_bit0)
                pop.members.push_back(testutil::bits("10"));
            else if (i < ones_bit0 + ones_bit1)
                pop.members.push_back(testutil::bits("01"));
            else
                pop.members.push_back(testutil::bits("00"));
        }
        opts.initial = std::move(pop);
        return alg::run(alg::Algorithm::bde, *f, params, 1, opts).status;
    };
    CHECK(status_for(4, 5) == alg::RunStatus::generation_limit);
    CHECK(status_for(6, 4) == alg::RunStatus::generation_limit);
    CHECK(status_for(3, 5) == alg::RunStatus::band_exit);
    CHECK(status_for(7, 3) == alg::RunStatus::band_exit);
}

TEST_CASE("fixed horizon preserves the first event but runs to the budget") {
    auto f = make_objective("onemax", 20);
    AlgorithmParams params;
    params.population_size = 30;
    params.dimension = 20;
    params.max_generations = 60;
    alg::RunOptions plain;
    plain.trace = alg::TraceMode::last_bit;
    const auto rec_plain = alg::run(alg::Algorithm::bde, *f, params, 301, plain);
    REQUIRE(rec_plain.status == alg::RunStatus::success);
    CHECK(rec_plain.trace->generations() == rec_plain.generations + 1);

    alg::RunOptions fixed = plain;
    fixed.fixed_horizon = true;
    const auto rec_fixed = alg::run(alg::Algorithm::bde, *f, params, 301, fixed);
    CHECK(rec_fixed.status == alg::RunStatus::success);
    CHECK(rec_fixed.generations == rec_plain.generations);
    CHECK(rec_fixed.trace->generations() == params.max_generations + 1);
}

TEST_CASE("first-bit convergence stopping records the convergence time") {
    auto f = make_objective("dominant_onemax", 10);
    AlgorithmParams params;
    params.population_size = 16;
    params.dimension = 10;
    alg::RunOptions opts;
    opts.stop_when_first_bit_converged = true;
    opts.trace = alg::TraceMode::all_bits;
    const auto rec = alg::run(alg::Algorithm::bde, *f, params, 77, opts);
    REQUIRE(rec.status == alg::RunStatus::success);
    const auto g = rec.generations;
    CHECK(rec.trace->at(g, 0) == params.population_size);
    if (g > 0) CHECK(rec.trace->at(g - 1, 0) < params.population_size);
}

TEST_CASE("runs replay exactly under one seed") {
    auto f = make_objective("leadingones", 15);
    AlgorithmParams params;
    params.population_size = 12;
    params.dimension = 15;
    alg::RunOptions opts;
    opts.trace = alg::TraceMode::all_bits;
    const auto a = alg::run(alg::Algorithm::bde, *f, params, 404, opts);
    const auto b = alg::run(alg::Algorithm::bde, *f, params, 404, opts);
    CHECK(a.status == b.status);
    CHECK(a.generations == b.generations);
    CHECK(a.trace->counts == b.trace->counts);
    const auto c = alg::run(alg::Algorithm::bde, *f, params, 405, opts);
    CHECK(a.trace->counts != c.trace->counts);
}

TEST_CASE("umda and cga runs solve a small onemax") {
    auto f = make_objective("onemax", 15);
    AlgorithmParams params;
    params.dimension = 15;
    params.mu = 20;
    params.lambda = 40;
    params.max_generations = 5000;
    const auto u = alg::run(alg::Algorithm::umda, *f, params, 5);
    CHECK(u.status == alg::RunStatus::success);
    params.step_size_k = 20;
    const auto c = alg::run(alg::Algorithm::cga, *f, params, 6);
    CHECK(c.status == alg::RunStatus::success);
}

TEST_CASE("parameter validation rejects out-of-range settings") {
    auto f = make_objective("onemax", 10);
    AlgorithmParams params;
    params.population_size = 10;
    params.dimension = 10;

    AlgorithmParams bad = params;
    bad.population_size = 3;
    CHECK_THROWS_AS(alg::run(alg::Algorithm::bde, *f, bad, 1), std::invalid_argument);
    bad = params;
    bad.crossover_rate = 0.0;
    CHECK_THROWS_AS(alg::run(alg::Algorithm::bde, *f, bad, 1), std::invalid_argument);
    bad = params;
    bad.scale_factor = 1.1;
    CHECK_THROWS_AS(alg::run(alg::Algorithm::bde, *f, bad, 1), std::invalid_argument);
    bad = params;
    bad.init_p = -0.1;
    CHECK_THROWS_AS(alg::run(alg::Algorithm::bde, *f, bad, 1), std::invalid_argument);

    bad = params;
    bad.mu = 5;
    bad.lambda = 4;
    CHECK_THROWS_AS(alg::run(alg::Algorithm::umda, *f, bad, 1), std::invalid_argument);
    bad = params;
    bad.step_size_k = 7;
    CHECK_THROWS_AS(alg::run(alg::Algorithm::cga, *f, bad, 1), std::invalid_argument);
    CHECK_THROWS_AS(alg::run(alg::Algorithm::cga_neutral, *f, bad, 1), std::invalid_argument);

    alg::RunOptions opts;
    opts.initial = testutil::pop_of({"11", "00", "10", "01"});
    CHECK_THROWS_AS(alg::run(alg::Algorithm::bde, *f, params, 1, opts),
                    std::invalid_argument);
    RandomStream rng(1);
    CHECK_THROWS_AS(alg::draw_donors(3, 0, rng), std::invalid_argument);
}

}  // TEST_SUITE
