#include "gumdp/experiment.hpp"

#include "gumdp/baselines.hpp"
#include "gumdp/environments.hpp"
#include "gumdp/estimation.hpp"
#include "gumdp/io.hpp"
#include "json_fields.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace gumdp {

using detail::Json;

std::string PolicySpec::label() const {
    switch (kind) {
        case PolicyKind::Random: return "random";
        case PolicyKind::Solver: return "solver";
        case PolicyKind::Mcts: return "mcts";
    }
    return "unknown";
}

std::vector<std::size_t> default_iteration_sweep() {
    return {10, 20, 50, 100, 500, 1000, 2000, 3000, 4000};
}

namespace {

void reject_unknown(const Json& j, const std::string& path,
                    std::initializer_list<std::string_view> known) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw ParseError("unknown field '" + detail::join_path(path, it.key()) + "'");
    }
}

EnvironmentSpec parse_environment(const Json& j, const std::string& path) {
    using namespace detail;
    if (!j.is_object()) throw ParseError("field '" + path + "' must be an object");
    reject_unknown(j, path, {"name", "task", "path", "eps", "numbers", "k", "side", "slip", "seed",
                             "n_states", "n_actions", "kind"});
    EnvironmentSpec env;
    env.name = as_string(require_field(j, path, "name"), join_path(path, "name"));
    auto get = [&](std::string_view key) -> const Json* {
        auto it = j.find(std::string(key));
        return it == j.end() ? nullptr : &*it;
    };
    const auto p = [&](std::string_view key) { return join_path(path, key); };
    if (auto f = get("task")) env.task = as_string(*f, p("task"));
    if (auto f = get("path")) env.path = as_string(*f, p("path"));
    if (auto f = get("eps")) env.eps = as_double(*f, p("eps"));
    if (auto f = get("numbers")) {
        if (!f->is_array()) throw ParseError("field '" + p("numbers") + "' must be an array");
        for (std::size_t i = 0; i < f->size(); ++i)
            env.numbers.push_back(as_uint((*f)[i], p("numbers") + "[" + std::to_string(i) + "]"));
    }
    if (auto f = get("k")) env.k = as_uint(*f, p("k"));
    if (auto f = get("side")) env.side = as_positive(*f, p("side"));
    if (auto f = get("slip")) env.slip = as_double(*f, p("slip"));
    if (auto f = get("seed")) env.seed = as_uint(*f, p("seed"));
    if (auto f = get("n_states")) env.n_states = as_positive(*f, p("n_states"));
    if (auto f = get("n_actions")) env.n_actions = as_positive(*f, p("n_actions"));
    if (auto f = get("kind")) env.kind = as_string(*f, p("kind"));
    static const std::set<std::string> names = {"illustrative", "alternation", "subset_sum",
                                                "lake", "random", "file"};
    if (!names.count(env.name))
        throw ParseError("field '" + p("name") + "': unknown environment '" + env.name + "'");
    return env;
}

PolicySpec parse_policy(const Json& j, const std::string& path) {
    using namespace detail;
    if (!j.is_object()) throw ParseError("field '" + path + "' must be an object");
    const auto type = as_string(require_field(j, path, "type"), join_path(path, "type"));
    PolicySpec spec;
    if (type == "random") {
        reject_unknown(j, path, {"type"});
        spec.kind = PolicyKind::Random;
    } else if (type == "solver") {
        reject_unknown(j, path, {"type", "fw_iterations"});
        spec.kind = PolicyKind::Solver;
        if (j.contains("fw_iterations"))
            spec.fw_iterations = as_positive(j["fw_iterations"], join_path(path, "fw_iterations"));
    } else if (type == "mcts") {
        reject_unknown(j, path, {"type", "iterations", "exploration_c", "rollout"});
        spec.kind = PolicyKind::Mcts;
        if (j.contains("iterations"))
            spec.planner.iterations = as_positive(j["iterations"], join_path(path, "iterations"));
        if (j.contains("exploration_c")) {
            spec.planner.exploration_c = as_double(j["exploration_c"], join_path(path, "exploration_c"));
            if (!(spec.planner.exploration_c >= 0.0))
                throw ParseError("field '" + join_path(path, "exploration_c") + "' must be >= 0");
        }
        if (j.contains("rollout")) {
            const auto r = as_string(j["rollout"], join_path(path, "rollout"));
            if (r != "uniform_random")
                throw ParseError("field '" + join_path(path, "rollout") + "': unknown rollout '" + r + "'");
        }
    } else {
        throw ParseError("field '" + join_path(path, "type") + "': unknown policy type '" + type + "'");
    }
    return spec;
}

std::string env_label(const EnvironmentSpec& env) { return env.name; }

std::string task_label(const EnvironmentSpec& env, const TabularGumdp& g) {
    if (env.name == "illustrative") return env.task;
    return std::string(to_string(g.objective.kind()));
}

double parse_number(std::string_view s, const std::string& what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("results CSV: bad number '" + std::string(s) + "' in " + what);
    return v;
}

std::uint64_t parse_unsigned(std::string_view s, const std::string& what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("results CSV: bad integer '" + std::string(s) + "' in " + what);
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view text) {
    using namespace detail;
    const Json j = parse_json(text);
    if (!j.is_object()) throw ParseError("experiment config must be a JSON object");
    reject_unknown(j, "", {"environment", "objective", "horizon", "H", "gamma", "policies", "n_runs",
                           "master_seed", "normalize_report", "workers", "ci_level",
                           "bootstrap_resamples", "sweep"});
    ExperimentConfig cfg;
    cfg.environment = parse_environment(require_field(j, "", "environment"), "environment");
    if (j.contains("objective")) cfg.objective = objective_from(j["objective"], "objective");
    if (j.contains("horizon") && j.contains("H"))
        throw ParseError("give only one of 'horizon' and 'H'");
    if (j.contains("horizon")) cfg.horizon = as_positive(j["horizon"], "horizon");
    if (j.contains("H")) cfg.horizon = as_positive(j["H"], "H");
    if (j.contains("gamma")) cfg.gamma = as_double(j["gamma"], "gamma");
    if (!(cfg.gamma > 0.0 && cfg.gamma < 1.0)) throw ParseError("field 'gamma' must lie in (0, 1)");
    const Json& policies = require_field(j, "", "policies");
    if (!policies.is_array() || policies.empty())
        throw ParseError("field 'policies' must be a non-empty array");
    for (std::size_t i = 0; i < policies.size(); ++i)
        cfg.policies.push_back(parse_policy(policies[i], "policies[" + std::to_string(i) + "]"));
    if (j.contains("n_runs")) cfg.n_runs = as_positive(j["n_runs"], "n_runs");
    if (j.contains("master_seed")) cfg.master_seed = as_uint(j["master_seed"], "master_seed");
    if (j.contains("normalize_report"))
        cfg.normalize_report = as_bool(j["normalize_report"], "normalize_report");
    if (j.contains("workers")) cfg.workers = as_positive(j["workers"], "workers");
    if (j.contains("ci_level")) {
        cfg.ci_level = as_double(j["ci_level"], "ci_level");
        if (!(cfg.ci_level > 0.0 && cfg.ci_level < 1.0))
            throw ParseError("field 'ci_level' must lie in (0, 1)");
    }
    if (j.contains("bootstrap_resamples"))
        cfg.bootstrap_resamples = as_positive(j["bootstrap_resamples"], "bootstrap_resamples");
    if (j.contains("sweep")) {
        const Json& s = j["sweep"];
        if (!s.is_object()) throw ParseError("field 'sweep' must be an object");
        reject_unknown(s, "sweep", {"key", "values"});
        SweepSpec sweep;
        sweep.key = as_string(require_field(s, "sweep", "key"), "sweep.key");
        if (sweep.key != "iterations" && sweep.key != "H")
            throw ParseError("field 'sweep.key' must be \"iterations\" or \"H\"");
        if (s.contains("values")) {
            const Json& v = s["values"];
            if (!v.is_array()) throw ParseError("field 'sweep.values' must be an array");
            for (std::size_t i = 0; i < v.size(); ++i)
                sweep.values.push_back(as_positive(v[i], "sweep.values[" + std::to_string(i) + "]"));
        }
        if (sweep.values.empty()) {
            if (sweep.key != "iterations") throw ParseError("field 'sweep.values' is required for H");
            sweep.values = default_iteration_sweep();
        }
        std::sort(sweep.values.begin(), sweep.values.end());
        sweep.values.erase(std::unique(sweep.values.begin(), sweep.values.end()), sweep.values.end());
        cfg.sweep = std::move(sweep);
    }
    return cfg;
}

TabularGumdp build_environment(const EnvironmentSpec& env, double gamma, std::size_t horizon,
                               const std::optional<ObjectiveSpec>& objective) {
    TabularGumdp g;
    if (env.name == "illustrative") {
        g = build_illustrative(illustrative_task_from_string(env.task), gamma);
    } else if (env.name == "alternation") {
        g = build_alternation_gumdp(gamma, env.eps);
    } else if (env.name == "subset_sum") {
        g = build_subset_sum(env.numbers, env.k, gamma, horizon);
    } else if (env.name == "lake") {
        g = build_lake(env.side, env.slip, gamma);
    } else if (env.name == "random") {
        g = build_random(env.seed, env.n_states, env.n_actions,
                         objective_kind_from_string(env.kind), gamma);
    } else if (env.name == "file") {
        g = load_gumdp(env.path);
    } else {
        throw std::invalid_argument("unknown environment '" + env.name + "'");
    }
    if (objective) g.objective = *objective;
    require_valid(g);
    return g;
}

Interval bootstrap_ci(const std::vector<double>& values, double level, std::size_t resamples,
                      std::uint64_t seed) {
    if (values.empty()) throw std::invalid_argument("bootstrap_ci: no values");
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("bootstrap_ci: level outside (0, 1)");
    if (resamples == 0) throw std::invalid_argument("bootstrap_ci: resamples must be positive");
    Rng rng(seed);
    const std::size_t n = values.size();
    std::vector<double> means(resamples);
    for (auto& m : means) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += values[rng.below(n)];
        m = acc / static_cast<double>(n);
    }
    std::sort(means.begin(), means.end());
    // empirical quantile with linear interpolation between order statistics
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(resamples - 1);
        const auto i = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(i);
        if (i + 1 >= resamples) return means.back();
        return means[i] + frac * (means[i + 1] - means[i]);
    };
    const double tail = (1.0 - level) / 2.0;
    return {quantile(tail), quantile(1.0 - tail)};
}

void summarize(ResultsTable& table, double level, std::size_t resamples, std::uint64_t seed) {
    table.summary.clear();
    // group rows by (sweep value, policy) preserving first-appearance order
    std::vector<std::pair<std::optional<std::size_t>, std::string>> keys;
    std::map<std::pair<std::size_t, std::string>, std::vector<const ResultRow*>> groups;
    for (const auto& row : table.rows) {
        const std::pair<std::size_t, std::string> key{row.sweep_value.value_or(0), row.policy};
        if (!groups.count(key)) keys.emplace_back(row.sweep_value, row.policy);
        groups[key].push_back(&row);
    }
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const auto& rows = groups[{keys[i].first.value_or(0), keys[i].second}];
        std::vector<double> values;
        for (const auto* r : rows) values.push_back(r->f_value);
        double acc = 0.0;
        for (double v : values) acc += v;
        SummaryRow s;
        s.env = rows.front()->env;
        s.task = rows.front()->task;
        s.policy = keys[i].second;
        s.n = values.size();
        s.mean = acc / static_cast<double>(values.size());
        s.ci = bootstrap_ci(values, level, resamples, mix_seed(seed, i));
        s.sweep_value = keys[i].first;
        table.summary.push_back(std::move(s));
    }
}

ResultsTable run_experiment(const ExperimentConfig& cfg) {
    if (cfg.n_runs == 0) throw std::invalid_argument("run_experiment: n_runs must be positive");
    if (cfg.policies.empty()) throw std::invalid_argument("run_experiment: no policies");

    ResultsTable table;
    std::vector<std::optional<std::size_t>> points{std::nullopt};
    if (cfg.sweep) {
        table.sweep_key = cfg.sweep->key;
        points.assign(cfg.sweep->values.begin(), cfg.sweep->values.end());
    }
    const TabularGumdp g = build_environment(cfg.environment, cfg.gamma, cfg.horizon, cfg.objective);
    const std::string env = env_label(cfg.environment);
    const std::string task = task_label(cfg.environment, g);
    const ValueBounds bounds = objective_bounds(g.objective, g.n_pairs());

    std::vector<std::string> labels;
    for (const auto& spec : cfg.policies) labels.push_back(spec.label());
    for (std::size_t p = 0; p < labels.size(); ++p) {
        const auto n = std::count_if(cfg.policies.begin(), cfg.policies.end(),
                                     [&](const PolicySpec& s) { return s.label() == labels[p]; });
        if (n > 1) labels[p] += "-" + std::to_string(p);
    }

    // The solver policy depends only on the GUMDP, so it is computed once per spec.
    std::vector<std::unique_ptr<Policy>> fixed(cfg.policies.size());
    for (std::size_t p = 0; p < cfg.policies.size(); ++p) {
        const auto& spec = cfg.policies[p];
        if (spec.kind == PolicyKind::Random)
            fixed[p] = std::make_unique<RandomPolicy>(g.n_actions);
        else if (spec.kind == PolicyKind::Solver)
            fixed[p] = std::make_unique<StationaryPolicyHandle>(solver_policy(g, spec.fw_iterations),
                                                                "solver");
    }

    struct Job {
        std::size_t point, policy, run;
        std::size_t horizon;
        const Policy* pol;
        std::uint64_t seed;
    };
    std::vector<std::unique_ptr<Policy>> planners;
    std::vector<Job> jobs;
    for (std::size_t k = 0; k < points.size(); ++k) {
        std::size_t horizon = cfg.horizon;
        if (cfg.sweep && cfg.sweep->key == "H") horizon = *points[k];
        for (std::size_t p = 0; p < cfg.policies.size(); ++p) {
            const Policy* pol = fixed[p].get();
            if (!pol) {
                PlannerConfig pc = cfg.policies[p].planner;
                if (cfg.sweep && cfg.sweep->key == "iterations") pc.iterations = *points[k];
                planners.push_back(std::make_unique<PlannerPolicy>(pc));
                pol = planners.back().get();
            }
            const std::uint64_t policy_seed = mix_seed(cfg.master_seed, p);
            for (std::size_t r = 0; r < cfg.n_runs; ++r)
                jobs.push_back({k, p, r, horizon, pol, mix_seed(policy_seed, r)});
        }
    }

    std::vector<double> values(jobs.size());
    auto run_job = [&](std::size_t i) {
        values[i] = run_episode(g, *jobs[i].pol, jobs[i].horizon, jobs[i].seed).f_value;
    };
    if (cfg.workers <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) run_job(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < std::min(cfg.workers, jobs.size()); ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < jobs.size(); i = next++) {
                    try {
                        run_job(i);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) error = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (error) std::rethrow_exception(error);
    }

    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto& job = jobs[i];
        double v = values[i];
        if (cfg.normalize_report) {
            const double span = bounds.hi - bounds.lo;
            v = span > 0.0 ? (v - bounds.lo) / span : 0.5;
        }
        table.rows.push_back({env, task, labels[job.policy], job.run, job.seed, v,
                              points[job.point]});
    }
    summarize(table, cfg.ci_level, cfg.bootstrap_resamples, cfg.master_seed);
    return table;
}

std::string results_csv(const ResultsTable& table) {
    std::ostringstream out;
    out << "env,task,policy,run,seed,f_value" << (table.sweep_key ? ",sweep_value" : "") << '\n';
    for (const auto& r : table.rows) {
        out << r.env << ',' << r.task << ',' << r.policy << ',' << r.run << ',' << r.seed << ','
            << format_double(r.f_value);
        if (table.sweep_key) out << ',' << r.sweep_value.value_or(0);
        out << '\n';
    }
    return out.str();
}

std::string summary_csv(const ResultsTable& table) {
    std::ostringstream out;
    out << "env,task,policy,n,mean,ci_lo,ci_hi" << (table.sweep_key ? ",sweep_value" : "") << '\n';
    for (const auto& s : table.summary) {
        out << s.env << ',' << s.task << ',' << s.policy << ',' << s.n << ','
            << format_double(s.mean) << ',' << format_double(s.ci.lo) << ','
            << format_double(s.ci.hi);
        if (table.sweep_key) out << ',' << s.sweep_value.value_or(0);
        out << '\n';
    }
    return out.str();
}

ResultsTable parse_results_csv(std::string_view text) {
    ResultsTable table;
    std::size_t line_no = 0;
    bool header = true;
    std::size_t columns = 6;
    while (!text.empty()) {
        const auto end = text.find('\n');
        std::string_view line = text.substr(0, end);
        text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (header) {
            if (line == "env,task,policy,run,seed,f_value") {
                columns = 6;
            } else if (line == "env,task,policy,run,seed,f_value,sweep_value") {
                columns = 7;
                table.sweep_key = "sweep_value";
            } else {
                throw ParseError("results CSV: unexpected header '" + std::string(line) + "'");
            }
            header = false;
            continue;
        }
        const std::string where = "line " + std::to_string(line_no);
        if (cells.size() != columns)
            throw ParseError("results CSV: " + where + " has " + std::to_string(cells.size()) +
                             " columns, expected " + std::to_string(columns));
        ResultRow r;
        r.env = cells[0];
        r.task = cells[1];
        r.policy = cells[2];
        r.run = parse_unsigned(cells[3], where);
        r.seed = parse_unsigned(cells[4], where);
        r.f_value = parse_number(cells[5], where);
        if (columns == 7) r.sweep_value = parse_unsigned(cells[6], where);
        table.rows.push_back(std::move(r));
    }
    if (header) throw ParseError("results CSV: missing header");
    return table;
}

std::string emit_plot_data(const ResultsTable& table, std::string_view key) {
    if (!table.sweep_key)
        throw std::invalid_argument("emit_plot_data: results were not produced by a sweep");
    if (*table.sweep_key != key && *table.sweep_key != "sweep_value")
        throw std::invalid_argument("emit_plot_data: results were swept over '" + *table.sweep_key +
                                    "', not '" + std::string(key) + "'");
    std::vector<const SummaryRow*> rows;
    for (const auto& s : table.summary) rows.push_back(&s);
    std::stable_sort(rows.begin(), rows.end(), [](const SummaryRow* a, const SummaryRow* b) {
        return a->sweep_value.value_or(0) < b->sweep_value.value_or(0);
    });
    std::ostringstream out;
    out << "sweep_value,policy,mean,ci_lo,ci_hi\n";
    for (const auto* s : rows)
        out << s->sweep_value.value_or(0) << ',' << s->policy << ',' << format_double(s->mean)
            << ',' << format_double(s->ci.lo) << ',' << format_double(s->ci.hi) << '\n';
    return out.str();
}

}  // namespace gumdp
