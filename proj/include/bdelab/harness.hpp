#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bdelab/algorithms.hpp"
#include "bdelab/analysis.hpp"
#include "bdelab/theory.hpp"

namespace bdelab::harness {

struct OutputPaths {
    std::string directory;  // empty: nothing is written
    std::string runs_csv = "runs.csv";
    std::string summary_json = "summary.json";
    std::string quantiles_csv = "freq_quantiles.csv";  // written when tracing
};

struct ExperimentConfig {
    std::string experiment_id;
    std::string algorithm = "bde";
    std::string objective = "onemax";  // "none" for the neutral chains
    AlgorithmParams params;
    std::size_t runs = 1;
    std::uint64_t master_seed = 1;
    std::string trace_bits = "none";  // none | last_bit | all_bits
    OutputPaths outputs;
};

// Per-generation quantiles of the tracked bit's frequency across runs, plus
// the running minimum over every traced bit and every run. Runs that stop
// early contribute to the generations they reached.
struct QuantileTable {
    std::vector<double> qs;
    std::vector<std::vector<double>> rows;  // rows[g][k] = quantile qs[k] at generation g
    std::vector<double> min_all_bits;       // one entry per generation

    std::size_t generations() const { return rows.size(); }
};

struct GenerationStats {
    std::size_t count = 0;  // successful runs
    std::uint64_t min = 0;
    std::uint64_t max = 0;
    double mean = 0.0;
};

struct ExperimentSummary {
    ExperimentConfig config;
    std::vector<alg::RunRecord> records;  // indexed by run
    std::size_t n_success = 0;
    std::size_t n_frequency_zero = 0;
    std::size_t n_generation_limit = 0;
    std::size_t n_band_exit = 0;
    GenerationStats success_generations;
    std::uint64_t trap_violations = 0;
    std::optional<QuantileTable> quantile_table;  // last-bit table when tracing
};

// Extension points used by the canned reproductions; the plain overload runs
// the config as-is.
struct RunHooks {
    alg::RunOptions base;
    // Adjust options for one run (e.g. inject an initial population).
    std::function<void(std::size_t run_index, std::uint64_t run_seed, alg::RunOptions&)> per_run;
    // Called in run-index order once the run has finished; may consume the
    // record's trace.
    std::function<void(std::size_t run_index, alg::RunRecord&)> on_complete;
    bool keep_traces = true;
};

// Executes cfg.runs independent runs with seeds derived from the master seed,
// concurrently on a bounded worker pool with a deterministic ordered reduce.
// Writes runs.csv / summary.json (and the quantile table when tracing) into
// the configured output directory.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);
ExperimentSummary run_experiment(const ExperimentConfig& cfg, const RunHooks& hooks);

enum class Scale { desk, paper };

struct ReproduceOptions {
    Scale scale = Scale::desk;
    std::optional<std::uint64_t> seed;  // overrides the canned default seed
    std::string out_dir;                // empty: no files written
};

// Canned experiment ids:
//   table1_lo, table2_bv, table3_onemax, fig_neutral_quantiles,
//   fig_bv_quantiles, needle_stability, dominant_convergence, edahit_umda,
//   edahit_cga, biased_init_gap, reach_demo, trap_demo, fig_om_scaling.
// Unknown ids are rejected with the list of known ones. Ids composed of
// several configurations return one summary per configuration.
std::vector<ExperimentSummary> reproduce_all(const std::string& id,
                                             const ReproduceOptions& opts = {});
ExperimentSummary reproduce(const std::string& id, const ReproduceOptions& opts = {});
std::vector<std::string> reproduce_ids();

QuantileTable quantile_table_from_traces(std::span<const analysis::FrequencyTrace> traces,
                                         std::size_t bit, std::span<const double> qs);
void emit_quantile_table(std::span<const analysis::FrequencyTrace> traces, std::size_t bit,
                         std::span<const double> qs, const std::string& path);

struct HitRow {
    std::string algo;
    std::size_t size_param;
    std::size_t run_id;
    std::uint64_t hit_generation;
};

struct ReachReport {
    std::size_t dim = 0;
    std::size_t pop = 0;
    std::uint64_t tuples = 0;
    std::uint64_t reachable_count = 0;
    std::uint64_t search_space = 0;
    double fraction = 0.0;
};

// Samples a Bernoulli(1/2) population from the seed and enumerates its
// one-generation reachable set.
ReachReport reachability_report(std::size_t dim, std::size_t pop, std::uint64_t seed);

// Shortest round-trip decimal rendering, shared by every emitter.
std::string format_number(double v);

void write_runs_csv(const std::string& path, std::span<const ExperimentSummary> summaries);
void write_quantile_csv(const std::string& path, const QuantileTable& table);
void write_theory_csv(const std::string& path,
                      std::span<const theory::FormulaCheckResult> results);
void write_hitting_csv(const std::string& path, std::span<const HitRow> rows);
void write_summary_json(const std::string& path, std::span<const ExperimentSummary> summaries);
void write_reach_json(const std::string& path, const ReachReport& report);

// JSON mirror of ExperimentConfig; keys present in the file override the
// corresponding fields of cfg.
void apply_config_json(ExperimentConfig& cfg, const std::string& path);

}  // namespace bdelab::harness
