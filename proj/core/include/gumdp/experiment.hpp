#pragma once

#include "gumdp/mcts.hpp"
#include "gumdp/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gumdp {

/// Which GUMDP an experiment runs on. `name` selects the constructor:
/// illustrative (task), alternation (eps), subset_sum (numbers, k), lake (side, slip),
/// random (seed, n_states, n_actions, kind) or file (path).
struct EnvironmentSpec {
    std::string name = "illustrative";
    std::string task = "entropy";
    std::string path;
    double eps = 0.5;
    std::vector<std::uint64_t> numbers;
    std::uint64_t k = 0;
    std::size_t side = 4;
    double slip = 1.0 / 3.0;
    std::uint64_t seed = 0;
    std::size_t n_states = 3;
    std::size_t n_actions = 2;
    std::string kind = "Entropy";
};

enum class PolicyKind { Random, Solver, Mcts };

struct PolicySpec {
    PolicyKind kind = PolicyKind::Random;
    std::size_t fw_iterations = 500;  // Solver
    PlannerConfig planner;            // Mcts; the seed is derived per timestep

    std::string label() const;
};

/// Repeats the experiment at each value, overriding MCTS iterations or the horizon.
struct SweepSpec {
    std::string key;  // "iterations" or "H"
    std::vector<std::size_t> values;
};

/// The iteration grid used when a sweep over iterations lists no values.
std::vector<std::size_t> default_iteration_sweep();

struct ExperimentConfig {
    EnvironmentSpec environment;
    std::optional<ObjectiveSpec> objective;  // replaces the environment's objective
    std::size_t horizon = 100;
    double gamma = 0.9;
    std::vector<PolicySpec> policies;
    std::size_t n_runs = 10;
    std::uint64_t master_seed = 0;
    bool normalize_report = false;
    std::size_t workers = 1;
    double ci_level = 0.90;
    std::size_t bootstrap_resamples = 10000;
    std::optional<SweepSpec> sweep;
};

/**
 * Reads an ExperimentConfig from JSON. Field names mirror the struct; policies are
 * objects {"type": "random" | "solver" | "mcts", ...}. Unknown fields are rejected.
 * Throws ParseError naming the line/column or the field path.
 */
ExperimentConfig parse_experiment_config(std::string_view text);

/// horizon only matters for subset_sum, whose weights depend on it.
TabularGumdp build_environment(const EnvironmentSpec& env, double gamma, std::size_t horizon,
                               const std::optional<ObjectiveSpec>& objective = std::nullopt);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Percentile bootstrap interval for the mean. Throws on empty input.
Interval bootstrap_ci(const std::vector<double>& values, double level = 0.90,
                      std::size_t resamples = 10000, std::uint64_t seed = 0);

struct ResultRow {
    std::string env;
    std::string task;
    std::string policy;
    std::size_t run = 0;
    std::uint64_t seed = 0;
    double f_value = 0.0;
    std::optional<std::size_t> sweep_value;
};

struct SummaryRow {
    std::string env;
    std::string task;
    std::string policy;
    std::size_t n = 0;
    double mean = 0.0;
    Interval ci;
    std::optional<std::size_t> sweep_value;
};

struct ResultsTable {
    std::optional<std::string> sweep_key;
    std::vector<ResultRow> rows;
    std::vector<SummaryRow> summary;
};

/**
 * Runs n_runs episodes per policy (per sweep value). Seeds: policy p uses
 * mix_seed(master_seed, p), run r uses mix_seed(policy_seed, r); MCTS derives
 * timestep seeds from the run seed. Output order is (sweep value, policy, run)
 * whatever the number of workers.
 */
ResultsTable run_experiment(const ExperimentConfig& cfg);

/// `env,task,policy,run,seed,f_value`, plus a trailing `sweep_value` column for sweeps.
std::string results_csv(const ResultsTable& table);

/// `env,task,policy,n,mean,ci_lo,ci_hi`, plus `sweep_value` for sweeps.
std::string summary_csv(const ResultsTable& table);

/// Reads back the output of results_csv.
ResultsTable parse_results_csv(std::string_view text);

/// Recomputes summaries (mean and bootstrap CI) from rows.
void summarize(ResultsTable& table, double level = 0.90, std::size_t resamples = 10000,
               std::uint64_t seed = 0);

/// Long-format `sweep_value,policy,mean,ci_lo,ci_hi`, sweep values ascending.
/// Throws std::invalid_argument when the table was not swept over `key`.
std::string emit_plot_data(const ResultsTable& table, std::string_view key);

}  // namespace gumdp
