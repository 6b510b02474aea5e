#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bdelab/harness.hpp"
#include "bdelab/oracles.hpp"

namespace {

namespace harness = bdelab::harness;

void print_summary(const harness::ExperimentSummary& s) {
    const std::string& label =
        s.config.experiment_id.empty() ? s.config.algorithm : s.config.experiment_id;
    std::cout << label << ": runs=" << s.records.size() << " success=" << s.n_success
              << " frequency_zero=" << s.n_frequency_zero
              << " generation_limit=" << s.n_generation_limit
              << " band_exit=" << s.n_band_exit;
    if (s.success_generations.count > 0) {
        std::cout << " generations[min/mean/max]=" << s.success_generations.min << '/'
                  << harness::format_number(s.success_generations.mean) << '/'
                  << s.success_generations.max;
    }
    if (s.config.objective == "trap" || s.trap_violations > 0)
        std::cout << " trap_violations=" << s.trap_violations;
    std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Laboratory for binary differential evolution and univariate EDAs"};
    app.require_subcommand(1);
    int exit_code = 0;

    harness::ExperimentConfig cfg;
    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "Run one experiment configuration");
    run_cmd->add_option("--algo", cfg.algorithm,
                        "bde | ibde | umda | cga | umda_neutral | cga_neutral");
    run_cmd->add_option("--objective", cfg.objective,
                        "onemax | leadingones | binaryvalue | needle | dominant_onemax | trap "
                        "(\"none\" for the neutral chains)");
    run_cmd->add_option("--dim", cfg.params.dimension, "problem dimension D");
    run_cmd->add_option("--pop", cfg.params.population_size, "population size N");
    run_cmd->add_option("--scale-f", cfg.params.scale_factor, "mutation scale factor F");
    run_cmd->add_option("--cross", cfg.params.crossover_rate, "crossover rate C");
    run_cmd->add_option("--mu", cfg.params.mu, "UMDA parent count (also the neutral chain size)");
    run_cmd->add_option("--lambda", cfg.params.lambda, "UMDA offspring count");
    run_cmd->add_option("--k", cfg.params.step_size_k, "cGA hypothetical population size");
    run_cmd->add_option("--init-p", cfg.params.init_p, "initial gene probability");
    run_cmd->add_option("--runs", cfg.runs, "independent runs");
    run_cmd->add_option("--seed", cfg.master_seed, "master seed for the run seeds");
    run_cmd->add_option("--max-gen", cfg.params.max_generations, "generation budget");
    run_cmd->add_option("--trace", cfg.trace_bits, "none | last | all");
    run_cmd->add_option("--out", cfg.outputs.directory, "output directory (omit to skip files)");
    run_cmd->add_option("--config", config_path,
                        "JSON config; keys present in it override the flags");
    run_cmd->callback([&] {
        if (!config_path.empty()) harness::apply_config_json(cfg, config_path);
        print_summary(harness::run_experiment(cfg));
        if (!cfg.outputs.directory.empty())
            std::cout << "outputs in " << cfg.outputs.directory << '\n';
    });

    std::string repro_id;
    std::string scale = "desk";
    std::uint64_t repro_seed = 0;
    harness::ReproduceOptions repro;
    auto* repro_cmd = app.add_subcommand("reproduce", "Run a canned experiment by id");
    repro_cmd->add_option("id", repro_id, "experiment id (see --list)");
    repro_cmd->add_option("--scale", scale, "desk | paper")
        ->check(CLI::IsMember({"desk", "paper"}));
    auto* repro_seed_opt =
        repro_cmd->add_option("--seed", repro_seed, "override the canned master seed");
    repro_cmd->add_option("--out", repro.out_dir, "output directory (omit to skip files)");
    auto* list_flag = repro_cmd->add_flag("--list", "print the known experiment ids");
    repro_cmd->callback([&] {
        if (*list_flag) {
            for (const auto& id : harness::reproduce_ids()) std::cout << id << '\n';
            return;
        }
        if (repro_id.empty()) throw CLI::RequiredError("id");
        repro.scale = scale == "paper" ? harness::Scale::paper : harness::Scale::desk;
        if (*repro_seed_opt) repro.seed = repro_seed;
        for (const auto& s : harness::reproduce_all(repro_id, repro))
            print_summary(s);
        if (!repro.out_dir.empty()) std::cout << "outputs in " << repro.out_dir << '\n';
    });

    std::uint64_t samples = 1000000;
    std::uint64_t grid_seed = bdelab::oracles::default_grid_seed;
    std::string theory_out;
    auto* theory_cmd = app.add_subcommand(
        "verify-theory", "Check every closed form against its sampling oracle");
    theory_cmd->add_option("--samples", samples, "Monte Carlo samples per check");
    theory_cmd->add_option("--seed", grid_seed, "master seed for the check streams");
    theory_cmd->add_option("--out", theory_out, "output directory (omit to skip files)");
    theory_cmd->callback([&] {
        const auto results = bdelab::oracles::formula_check_grid(samples, grid_seed);
        std::size_t failed = 0;
        for (const auto& r : results) {
            if (!r.within_3_sigma) {
                ++failed;
                std::cout << "outside 3 sigma: " << r.formula_name << " " << r.parameter_tuple
                          << " closed=" << harness::format_number(r.closed_form_value)
                          << " mc=" << harness::format_number(r.mc_estimate)
                          << " stderr=" << harness::format_number(r.mc_stderr) << '\n';
            }
        }
        std::cout << results.size() << " checks, " << (results.size() - failed)
                  << " within 3 sigma, " << failed << " outside\n";
        if (!theory_out.empty()) {
            std::filesystem::create_directories(theory_out);
            harness::write_theory_csv(theory_out + "/theory_check.csv", results);
            std::cout << "outputs in " << theory_out << '\n';
        }
        if (failed > 0) exit_code = 1;
    });

    std::size_t reach_dim = 6;
    std::size_t reach_pop = 4;
    std::uint64_t reach_seed = 1;
    std::string reach_out;
    auto* reach_cmd = app.add_subcommand(
        "reachability", "Enumerate the one-generation reachable set of a random population");
    reach_cmd->add_option("--dim", reach_dim, "problem dimension D (at most 20)");
    reach_cmd->add_option("--pop", reach_pop, "population size N in [4,8]");
    reach_cmd->add_option("--seed", reach_seed, "seed for the sampled population");
    reach_cmd->add_option("--out", reach_out, "output directory (omit to skip files)");
    reach_cmd->callback([&] {
        const harness::ReachReport r =
            harness::reachability_report(reach_dim, reach_pop, reach_seed);
        std::cout << "D=" << r.dim << " N=" << r.pop << " tuples=" << r.tuples
                  << " reachable=" << r.reachable_count << " of " << r.search_space
                  << " (fraction " << harness::format_number(r.fraction) << ")\n";
        if (!reach_out.empty()) {
            std::filesystem::create_directories(reach_out);
            harness::write_reach_json(reach_out + "/reach.json", r);
            std::cout << "outputs in " << reach_out << '\n';
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return exit_code;
}
