#pragma once

#include "gumdp/model.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace gumdp {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool passed = false;
    std::string detail;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;

    bool passed() const;
};

/// Suite names accepted by run_verify_suite: alternation,
/// truncation, subset_sum, mcts_vs_dp, bijection.
std::vector<std::string> verify_suite_names();

/// Runs one property suite with fixed seeds. Throws std::invalid_argument for unknown names.
SuiteReport run_verify_suite(std::string_view name, std::uint64_t seed = 0);

/// One line per check: name, measured value, bound and PASS/FAIL; then a suite verdict.
void print_report(std::ostream& out, const SuiteReport& report);

/// Single-trial values on the alternation GUMDP computed by enumeration.
struct AlternationValues {
    double history = 0.0;   // history-dependent alternation
    double markov = 0.0;    // time-dependent Markov alternation
    double grid_min = 0.0;  // best stationary policy on the grid pi(a1|s0) in {0, 0.1, ..., 1}
    double grid_argmin = 0.0;
    std::vector<double> grid;
};

AlternationValues alternation_values(double gamma, double eps, std::size_t horizon);

/// True when some subset of numbers sums to exactly k (exhaustive search).
bool subset_sum_exists(const std::vector<std::uint64_t>& numbers, std::uint64_t k);

/// Parameters of the planner/oracle agreement check.
struct AgreementOptions {
    std::size_t instances = 20;
    std::size_t seeds_per_instance = 10;
    std::size_t iterations = 50000;
    double min_gap = 0.02;  // normalized exact Q-gap required for an instance to count
    double required_rate = 0.95;
};

struct AgreementResult {
    std::size_t instances = 0;
    std::size_t trials = 0;
    std::size_t agreements = 0;
    std::size_t candidates_drawn = 0;
    double rate() const { return trials == 0 ? 0.0 : static_cast<double>(agreements) / static_cast<double>(trials); }
};

/// Draws random small GUMDPs (2-3 states, 2 actions, H in 2..6, objective kinds in
/// rotation) until `instances` have a normalized root Q-gap above min_gap, then
/// compares mcts_search with the exact greedy action over several seeds each.
AgreementResult planner_oracle_agreement(const AgreementOptions& opt, std::uint64_t seed);

}  // namespace gumdp
