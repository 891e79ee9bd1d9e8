// gumdp: command-line front end for the planning toolkit.

#include "gumdp/baselines.hpp"
#include "gumdp/environments.hpp"
#include "gumdp/estimation.hpp"
#include "gumdp/experiment.hpp"
#include "gumdp/io.hpp"
#include "gumdp/mcts.hpp"
#include "gumdp/occupancy_mdp.hpp"
#include "gumdp/verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace {

using namespace gumdp;

struct Globals {
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "csv";
};

void emit(const Globals& g, const std::string& text) {
    if (g.out.empty() || g.out == "-") {
        std::cout << text;
    } else {
        write_text_file(g.out, text);
    }
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        const auto v = std::stoull(item, &pos);
        if (pos != item.size()) throw std::invalid_argument("bad index '" + item + "'");
        out.push_back(v);
    }
    return out;
}

// "s0,a0,s1,...,sl" -> occupancy state; empty text means the first root of p0
OccupancyState state_from_history(const TabularGumdp& g, const std::string& text) {
    if (text.empty()) return root_distribution(g).front().first;
    const auto items = parse_index_list(text);
    if (items.size() % 2 == 0)
        throw std::invalid_argument("history must alternate states and actions and end with a state");
    History h;
    for (std::size_t i = 0; i + 1 < items.size(); i += 2) h.steps.push_back({items[i], items[i + 1]});
    h.last = items.back();
    return history_to_state(g, h);
}

std::unique_ptr<Policy> make_policy(const TabularGumdp& g, const std::string& name,
                                    std::size_t fw_iterations, const PlannerConfig& planner) {
    if (name == "random") return std::make_unique<RandomPolicy>(g.n_actions);
    if (name == "solver")
        return std::make_unique<StationaryPolicyHandle>(solver_policy(g, fw_iterations), "solver");
    if (name == "exact") return std::make_unique<ExactDpPolicy>();
    if (name == "mcts") return std::make_unique<PlannerPolicy>(planner);
    if (name.rfind("stationary:", 0) == 0)
        return std::make_unique<StationaryPolicyHandle>(
            policy_from_json(read_text_file(name.substr(11))), "stationary");
    throw std::invalid_argument("unknown policy '" + name +
                                "' (random, solver, exact, mcts, stationary:<file>)");
}

void add_planner_options(CLI::App* cmd, PlannerConfig& cfg) {
    cmd->add_option("--iterations", cfg.iterations, "MCTS iterations per timestep")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--exploration-c", cfg.exploration_c, "UCB exploration constant")
        ->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-trial planning for general-utility MDPs"};
    app.require_subcommand(1);
    Globals globals;
    app.add_option("--seed", globals.seed, "Master seed")->capture_default_str();
    app.add_option("--out", globals.out, "Output file (default: stdout)");
    app.add_option("--format", globals.format, "Output format")->check(CLI::IsMember({"csv"}));

    // env build
    auto* env_cmd = app.add_subcommand("env", "Environment utilities");
    env_cmd->require_subcommand(1);
    auto* build_cmd = env_cmd->add_subcommand("build", "Write an environment as GUMDP JSON");
    EnvironmentSpec env_spec;
    double env_gamma = 0.9;
    std::size_t env_horizon = 0;
    std::string env_numbers, env_objective;
    build_cmd->add_option("name", env_spec.name,
                          "illustrative | alternation | subset_sum | lake | random")
        ->required();
    build_cmd->add_option("--task", env_spec.task, "illustrative task: entropy | imitation | adversarial");
    build_cmd->add_option("--gamma", env_gamma, "Discount factor");
    build_cmd->add_option("--eps", env_spec.eps, "alternation: probability of starting in s1");
    build_cmd->add_option("--numbers", env_numbers, "subset_sum: comma-separated numbers");
    build_cmd->add_option("--k", env_spec.k, "subset_sum: target");
    build_cmd->add_option("--horizon,-H", env_horizon, "subset_sum: horizon (default: chain length)");
    build_cmd->add_option("--side", env_spec.side, "lake: grid side");
    build_cmd->add_option("--slip", env_spec.slip, "lake: slip probability");
    build_cmd->add_option("--env-seed", env_spec.seed, "random: generator seed");
    build_cmd->add_option("--states", env_spec.n_states, "random: number of states");
    build_cmd->add_option("--actions", env_spec.n_actions, "random: number of actions");
    build_cmd->add_option("--kind", env_spec.kind, "random: objective kind");
    build_cmd->add_option("--objective", env_objective, "Objective JSON replacing the default");
    build_cmd->add_option("-o", globals.out, "Output file");

    // plan
    auto* plan_cmd = app.add_subcommand("plan", "One MCTS search from a given history");
    std::string env_path, history;
    std::size_t horizon = 100;
    PlannerConfig planner;
    plan_cmd->add_option("--env", env_path, "GUMDP JSON file")->required()->check(CLI::ExistingFile);
    plan_cmd->add_option("--horizon,-H", horizon, "Horizon H")->check(CLI::PositiveNumber);
    plan_cmd->add_option("--history", history, "s0,a0,s1,...,sl (default: a root state)");
    add_planner_options(plan_cmd, planner);

    // episode
    auto* episode_cmd = app.add_subcommand("episode", "Run one planned episode");
    episode_cmd->add_option("--env", env_path, "GUMDP JSON file")->required()->check(CLI::ExistingFile);
    episode_cmd->add_option("--horizon,-H", horizon, "Horizon H")->check(CLI::PositiveNumber);
    add_planner_options(episode_cmd, planner);

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "Single-trial objective of a policy");
    std::string policy_name = "random";
    std::size_t episodes = 1000, fw_iterations = 500, workers = 1;
    bool exact_eval = false;
    eval_cmd->add_option("--env", env_path, "GUMDP JSON file")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("--horizon,-H", horizon, "Horizon H")->check(CLI::PositiveNumber);
    eval_cmd->add_option("--policy", policy_name, "random | solver | exact | mcts | stationary:<file>");
    eval_cmd->add_option("--episodes", episodes, "Monte-Carlo episodes")->check(CLI::PositiveNumber);
    eval_cmd->add_option("--fw-iterations", fw_iterations, "Frank-Wolfe iterations for the solver policy");
    eval_cmd->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    eval_cmd->add_flag("--exact", exact_eval, "Enumerate trajectories instead of sampling");
    add_planner_options(eval_cmd, planner);

    // solve-infinite
    auto* solve_cmd = app.add_subcommand("solve-infinite", "Frank-Wolfe infinite-trials optimum");
    std::string policy_out;
    solve_cmd->add_option("--env", env_path, "GUMDP JSON file")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--iterations", fw_iterations, "Frank-Wolfe iterations")->check(CLI::PositiveNumber);
    solve_cmd->add_option("--policy-out", policy_out, "Write the induced stationary policy as JSON");

    // exact
    auto* exact_cmd = app.add_subcommand("exact", "Exact occupancy-MDP value and greedy action");
    exact_cmd->add_option("--env", env_path, "GUMDP JSON file")->required()->check(CLI::ExistingFile);
    exact_cmd->add_option("--horizon,-H", horizon, "Horizon H")->check(CLI::PositiveNumber);
    exact_cmd->add_option("--history", history, "s0,a0,...,sl; prints the greedy action there");

    // experiment
    auto* exp_cmd = app.add_subcommand("experiment", "Run an experiment config");
    std::string config_path, summary_path;
    exp_cmd->add_option("--config", config_path, "Experiment JSON")->required()->check(CLI::ExistingFile);
    exp_cmd->add_option("--summary", summary_path, "Write summary CSV here");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
    std::string suite;
    verify_cmd->add_option("suite", suite,
                           "alternation | truncation | subset_sum | mcts_vs_dp | bijection | all")
        ->required();

    // plot-data
    auto* plot_cmd = app.add_subcommand("plot-data", "Sweep summaries for plotting");
    std::string results_path, key = "iterations";
    plot_cmd->add_option("--config", config_path, "Experiment JSON with a sweep")->check(CLI::ExistingFile);
    plot_cmd->add_option("--results", results_path, "Results CSV of a sweep")->check(CLI::ExistingFile);
    plot_cmd->add_option("--key", key, "iterations | H")->check(CLI::IsMember({"iterations", "H"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (build_cmd->parsed()) {
            if (!env_numbers.empty())
                for (auto n : parse_index_list(env_numbers)) env_spec.numbers.push_back(n);
            std::optional<ObjectiveSpec> objective;
            if (!env_objective.empty()) objective = objective_from_json(env_objective);
            const std::size_t h = env_horizon ? env_horizon : std::max<std::size_t>(env_spec.numbers.size(), 1);
            emit(globals, gumdp_to_json(build_environment(env_spec, env_gamma, h, objective)));
        } else if (plan_cmd->parsed()) {
            const auto g = load_gumdp(env_path);
            require_valid(g);
            planner.seed = globals.seed;
            const auto r = mcts_search(g, horizon, state_from_history(g, history), planner);
            std::ostringstream out;
            write_root_stats_csv(out, {r.root});
            emit(globals, out.str());
            std::cerr << "action " << r.action << '\n';
        } else if (episode_cmd->parsed()) {
            const auto g = load_gumdp(env_path);
            require_valid(g);
            const auto ep = run_planned_episode(g, horizon, planner, globals.seed);
            std::ostringstream out;
            write_root_stats_csv(out, ep.root_stats);
            emit(globals, out.str());
            std::cerr << "f_value " << format_double(ep.episode.f_value) << '\n';
        } else if (eval_cmd->parsed()) {
            const auto g = load_gumdp(env_path);
            require_valid(g);
            const auto pol = make_policy(g, policy_name, fw_iterations, planner);
            if (exact_eval) {
                emit(globals, "f_value\n" + format_double(exact_single_trial_value(g, *pol, horizon)) + "\n");
            } else {
                const auto est = single_trial_mc_estimate(g, *pol, horizon, episodes, globals.seed, workers);
                std::ostringstream out;
                write_episode_csv(out, est);
                emit(globals, out.str());
                std::cerr << "mean " << format_double(est.mean) << '\n';
            }
        } else if (solve_cmd->parsed()) {
            const auto g = load_gumdp(env_path);
            require_valid(g);
            const auto fw = frank_wolfe_infinite_trials(g, fw_iterations);
            std::ostringstream out;
            write_trace_csv(out, fw.trace);
            emit(globals, out.str());
            if (!policy_out.empty())
                write_text_file(policy_out, policy_to_json(policy_from_occupancy(fw.d, g.n_states, g.n_actions)));
        } else if (exact_cmd->parsed()) {
            const auto g = load_gumdp(env_path);
            require_valid(g);
            if (history.empty()) {
                emit(globals, "root_value\n" + format_double(exact_root_value(g, horizon)) + "\n");
            } else {
                const auto choice = exact_optimal_action(g, horizon, state_from_history(g, history));
                std::ostringstream out;
                out << "action,q_value,greedy\n";
                for (ActionId a = 0; a < choice.q_values.size(); ++a)
                    out << a << ',' << format_double(choice.q_values[a]) << ','
                        << (a == choice.action ? 1 : 0) << '\n';
                emit(globals, out.str());
            }
        } else if (exp_cmd->parsed()) {
            auto cfg = parse_experiment_config(read_text_file(config_path));
            if (app.get_option("--seed")->count() > 0) cfg.master_seed = globals.seed;
            const auto table = run_experiment(cfg);
            emit(globals, results_csv(table));
            if (!summary_path.empty()) write_text_file(summary_path, summary_csv(table));
        } else if (verify_cmd->parsed()) {
            std::vector<std::string> suites = {suite};
            if (suite == "all") suites = verify_suite_names();
            bool ok = true;
            std::ostringstream out;
            for (const auto& name : suites) {
                const auto report = run_verify_suite(name, globals.seed);
                print_report(out, report);
                ok = ok && report.passed();
            }
            emit(globals, out.str());
            return ok ? 0 : 1;
        } else if (plot_cmd->parsed()) {
            ResultsTable table;
            if (!config_path.empty()) {
                auto cfg = parse_experiment_config(read_text_file(config_path));
                if (app.get_option("--seed")->count() > 0) cfg.master_seed = globals.seed;
                if (!cfg.sweep) cfg.sweep = SweepSpec{key, key == "iterations" ? default_iteration_sweep()
                                                                                : std::vector<std::size_t>{}};
                if (cfg.sweep->values.empty()) throw std::invalid_argument("an H sweep needs values in the config");
                table = run_experiment(cfg);
            } else if (!results_path.empty()) {
                table = parse_results_csv(read_text_file(results_path));
                summarize(table);
            } else {
                throw std::invalid_argument("plot-data needs --config or --results");
            }
            emit(globals, emit_plot_data(table, key));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
