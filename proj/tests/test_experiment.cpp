#include "gumdp/environments.hpp"
#include "gumdp/experiment.hpp"
#include "gumdp/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

using namespace gumdp;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.environment.name = "illustrative";
    cfg.environment.task = "imitation";
    cfg.horizon = 12;
    cfg.n_runs = 4;
    cfg.master_seed = 17;
    PolicySpec mcts;
    mcts.kind = PolicyKind::Mcts;
    mcts.planner.iterations = 150;
    PolicySpec solver;
    solver.kind = PolicyKind::Solver;
    solver.fw_iterations = 50;
    cfg.policies = {mcts, solver, PolicySpec{}};
    cfg.bootstrap_resamples = 500;
    return cfg;
}

std::string parse_error_of(const std::string& text) {
    try {
        parse_experiment_config(text);
    } catch (const ParseError& e) {
        return e.what();
    }
    return "";
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST(Bootstrap, ConstantValues) {
    auto ci = bootstrap_ci({2.5, 2.5, 2.5, 2.5});
    EXPECT_EQ(ci.lo, 2.5);
    EXPECT_EQ(ci.hi, 2.5);
}

TEST(Bootstrap, RangeBound) {
    auto ci = bootstrap_ci({0.0, 1.0}, 0.9);
    EXPECT_GE(ci.lo, 0.0);
    EXPECT_LE(ci.hi, 1.0);
    EXPECT_LE(ci.lo, ci.hi);
    EXPECT_THROW(bootstrap_ci({}), std::invalid_argument);
}

TEST(Bootstrap, Coverage) {
    std::mt19937_64 rng(61);
    std::normal_distribution<double> normal(0.0, 1.0);
    int covered = 0;
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> xs(1000);
        for (auto& x : xs) x = normal(rng);
        auto ci = bootstrap_ci(xs, 0.9, 2000, rep);
        covered += ci.lo <= 0.0 && 0.0 <= ci.hi ? 1 : 0;
    }
    EXPECT_GE(covered, 85);
}

TEST(ConfigParse, FullDocument) {
    auto cfg = parse_experiment_config(R"({
        "environment": {"name": "subset_sum", "numbers": [3, 5, 2], "k": 7},
        "H": 3, "gamma": 0.8, "n_runs": 2, "master_seed": 9, "workers": 2,
        "policies": [{"type": "mcts", "iterations": 25, "exploration_c": 1.0, "rollout": "uniform_random"},
                     {"type": "solver", "fw_iterations": 10}, {"type": "random"}],
        "sweep": {"key": "iterations"}
    })");
    EXPECT_EQ(cfg.environment.name, "subset_sum");
    EXPECT_EQ(cfg.environment.numbers, (std::vector<std::uint64_t>{3, 5, 2}));
    EXPECT_EQ(cfg.horizon, 3u);
    EXPECT_EQ(cfg.gamma, 0.8);
    ASSERT_EQ(cfg.policies.size(), 3u);
    EXPECT_EQ(cfg.policies[0].planner.iterations, 25u);
    EXPECT_EQ(cfg.policies[0].planner.exploration_c, 1.0);
    EXPECT_EQ(cfg.policies[1].fw_iterations, 10u);
    ASSERT_TRUE(cfg.sweep.has_value());
    EXPECT_EQ(cfg.sweep->values, default_iteration_sweep());
}

TEST(ConfigParse, Errors) {
    EXPECT_NE(parse_error_of("{\n\"environment\": {\"name\": \"lake\"},\n\"policies\": [,]\n}").find("line 3"),
              std::string::npos);
    EXPECT_NE(parse_error_of(R"({"environment": {"name": "lake"}, "policies": [{"type": "random"}], "colour": 1})").find("colour"),
              std::string::npos);
    EXPECT_NE(parse_error_of(R"({"environment": {"name": "lake"}, "policies": [{"type": "random"}], "n_runs": "ten"})").find("n_runs"),
              std::string::npos);
    EXPECT_NE(parse_error_of(R"({"environment": {"name": "lake"}, "policies": [{"type": "mcts", "iterations": -4}]})")
                  .find("iterations"),
              std::string::npos);
    EXPECT_NE(parse_error_of(R"({"environment": {"name": "maze"}, "policies": []})").find("environment.name"),
              std::string::npos);
    EXPECT_NE(parse_error_of(R"({"policies": [{"type": "random"}]})").find("environment"), std::string::npos);
    EXPECT_NE(parse_error_of(R"({"environment": {"name": "lake"}, "policies": []})").find("policies"),
              std::string::npos);
}

TEST(BuildEnvironment, ObjectiveOverride) {
    EnvironmentSpec env;
    env.name = "lake";
    auto g = build_environment(env, 0.95, 100, ObjectiveSpec::linear(std::vector<double>(64, 1.0)));
    EXPECT_EQ(g.gamma, 0.95);
    EXPECT_EQ(g.objective.kind(), ObjectiveKind::Linear);
    env.name = "alternation";
    EXPECT_EQ(build_environment(env, 0.9, 10).n_states, 3u);
}

TEST(RunExperiment, DeterministicAndWorkerIndependent) {
    auto cfg = small_config();
    const auto a = results_csv(run_experiment(cfg));
    const auto b = results_csv(run_experiment(cfg));
    cfg.workers = 3;
    const auto c = results_csv(run_experiment(cfg));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
    cfg.master_seed = 18;
    EXPECT_NE(a, results_csv(run_experiment(cfg)));
}

TEST(RunExperiment, SeedChain) {
    auto cfg = small_config();
    auto table = run_experiment(cfg);
    ASSERT_EQ(table.rows.size(), 12u);
    for (std::size_t p = 0; p < 3; ++p)
        for (std::size_t r = 0; r < 4; ++r) {
            const auto& row = table.rows[p * 4 + r];
            EXPECT_EQ(row.run, r);
            EXPECT_EQ(row.seed, mix_seed(mix_seed(17, p), r));
        }
    EXPECT_EQ(table.rows[0].policy, "mcts");
    EXPECT_EQ(table.rows[4].policy, "solver");
    EXPECT_EQ(table.rows[8].policy, "random");
    ASSERT_EQ(table.summary.size(), 3u);
}

TEST(RunExperiment, SingleDeterministicRun) {
    TabularGumdp g(2, 1, 0.9);
    g.transition(0, 0, 1) = g.transition(0, 1, 0) = 1.0;
    g.p0 = {1.0, 0.0};
    g.objective = ObjectiveSpec::entropy();
    const auto path = std::filesystem::temp_directory_path() / "gumdp_single_run.json";
    save_gumdp(path, g);
    ExperimentConfig cfg;
    cfg.environment.name = "file";
    cfg.environment.path = path.string();
    cfg.gamma = 0.9;
    cfg.horizon = 5;
    cfg.n_runs = 1;
    cfg.policies = {PolicySpec{}};
    auto table = run_experiment(cfg);
    std::filesystem::remove(path);
    ASSERT_EQ(table.rows.size(), 1u);
    ASSERT_EQ(table.summary.size(), 1u);
    EXPECT_EQ(table.summary[0].ci.lo, table.summary[0].ci.hi);
    EXPECT_EQ(table.summary[0].mean, table.rows[0].f_value);
}

TEST(RunExperiment, NormalizedReport) {
    auto cfg = small_config();
    cfg.normalize_report = true;
    for (const auto& row : run_experiment(cfg).rows) {
        EXPECT_GE(row.f_value, 0.0);
        EXPECT_LE(row.f_value, 1.0);
    }
}

TEST(ResultsCsv, SchemaAndRoundTrip) {
    auto table = run_experiment(small_config());
    const auto text = results_csv(table);
    auto rows = lines(text);
    EXPECT_EQ(rows[0], "env,task,policy,run,seed,f_value");
    EXPECT_EQ(rows.size(), 13u);
    EXPECT_EQ(lines(summary_csv(table))[0], "env,task,policy,n,mean,ci_lo,ci_hi");
    auto back = parse_results_csv(text);
    ASSERT_EQ(back.rows.size(), table.rows.size());
    for (std::size_t i = 0; i < back.rows.size(); ++i) {
        EXPECT_EQ(back.rows[i].policy, table.rows[i].policy);
        EXPECT_EQ(back.rows[i].seed, table.rows[i].seed);
        EXPECT_EQ(back.rows[i].f_value, table.rows[i].f_value);
    }
    EXPECT_EQ(results_csv(back), text);
    summarize(back, 0.9, 500, 17);
    EXPECT_EQ(summary_csv(back), summary_csv(table));
}

TEST(PlotData, SingleSweepPointAndOrdering) {
    auto cfg = small_config();
    cfg.sweep = SweepSpec{"iterations", {40}};
    auto table = run_experiment(cfg);
    auto rows = lines(emit_plot_data(table, "iterations"));
    EXPECT_EQ(rows[0], "sweep_value,policy,mean,ci_lo,ci_hi");
    EXPECT_EQ(rows.size(), 4u);
    EXPECT_EQ(lines(results_csv(table))[0], "env,task,policy,run,seed,f_value,sweep_value");
    EXPECT_THROW(emit_plot_data(table, "H"), std::invalid_argument);

    cfg.sweep = SweepSpec{"H", {9, 3, 6}};
    cfg.policies = {PolicySpec{}};
    rows = lines(emit_plot_data(run_experiment(cfg), "H"));
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[1].substr(0, 2), "3,");
    EXPECT_EQ(rows[2].substr(0, 2), "6,");
    EXPECT_EQ(rows[3].substr(0, 2), "9,");
}

TEST(PlotData, EntropySweepImproves) {
    ExperimentConfig cfg;
    cfg.environment.task = "entropy";
    PolicySpec mcts;
    mcts.kind = PolicyKind::Mcts;
    cfg.policies = {mcts};
    cfg.sweep = SweepSpec{"iterations", {10, 4000}};
    cfg.bootstrap_resamples = 1000;
    auto table = run_experiment(cfg);
    ASSERT_EQ(table.summary.size(), 2u);
    EXPECT_EQ(table.summary[0].sweep_value, 10u);
    EXPECT_LE(table.summary[1].mean, table.summary[0].mean);
}
