#include "gumdp/verify.hpp"

#include "gumdp/environments.hpp"
#include "gumdp/estimation.hpp"
#include "gumdp/io.hpp"
#include "gumdp/mcts.hpp"
#include "gumdp/occupancy_mdp.hpp"
#include "gumdp/policy.hpp"
#include "gumdp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace gumdp {

bool SuiteReport::passed() const {
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::vector<std::string> verify_suite_names() {
    return {"alternation", "truncation", "subset_sum", "mcts_vs_dp", "bijection"};
}

void print_report(std::ostream& out, const SuiteReport& report) {
    out << "suite " << report.suite << '\n';
    for (const auto& c : report.checks) {
        out << "  " << (c.passed ? "PASS" : "FAIL") << "  " << c.name
            << "  measured=" << format_double(c.measured) << "  bound=" << format_double(c.bound);
        if (!c.detail.empty()) out << "  (" << c.detail << ')';
        out << '\n';
    }
    out << (report.passed() ? "PASS " : "FAIL ") << report.suite << '\n';
}

AlternationValues alternation_values(double gamma, double eps, std::size_t horizon) {
    const TabularGumdp g = build_alternation_gumdp(gamma, eps);
    AlternationValues v;
    v.history = exact_single_trial_value(g, *alternation_history_policy(), horizon);
    v.markov = exact_single_trial_value(g, *alternation_markov_policy(), horizon);
    v.grid_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 10; ++i) {
        const double p = i / 10.0;
        const StationaryPolicyHandle pol(alternation_stationary_policy(p));
        const double value = exact_single_trial_value(g, pol, horizon);
        v.grid.push_back(value);
        if (value < v.grid_min) {
            v.grid_min = value;
            v.grid_argmin = p;
        }
    }
    return v;
}

bool subset_sum_exists(const std::vector<std::uint64_t>& numbers, std::uint64_t k) {
    if (numbers.size() > 30) throw std::invalid_argument("subset_sum_exists: too many numbers");
    const std::uint64_t subsets = std::uint64_t{1} << numbers.size();
    for (std::uint64_t mask = 0; mask < subsets; ++mask) {
        std::uint64_t sum = 0;
        for (std::size_t i = 0; i < numbers.size(); ++i)
            if (mask >> i & 1U) sum += numbers[i];
        if (sum == k) return true;
    }
    return false;
}

namespace {

constexpr ObjectiveKind kAllKinds[] = {ObjectiveKind::Linear,         ObjectiveKind::Entropy,
                                       ObjectiveKind::ImitationL2,    ObjectiveKind::AdversarialMax,
                                       ObjectiveKind::QuadraticTarget, ObjectiveKind::VisitBalance};

CheckResult check_less(std::string name, double smaller, double larger, double margin) {
    CheckResult c;
    c.name = std::move(name);
    c.measured = larger - smaller;
    c.bound = margin;
    c.passed = c.measured > margin;
    return c;
}

SuiteReport alternation_suite() {
    SuiteReport r{"alternation", {}};
    const double gamma = 0.9;
    const std::size_t horizon = 40;
    const auto v = alternation_values(gamma, 0.5, horizon);
    std::ostringstream values;
    values << "F(history)=" << format_double(v.history) << " F(markov)=" << format_double(v.markov)
           << " F(stationary grid min)=" << format_double(v.grid_min)
           << " at p=" << format_double(v.grid_argmin);
    auto a = check_less("history-dependent beats time-dependent Markov", v.history, v.markov, 1e-4);
    a.detail = values.str();
    r.checks.push_back(std::move(a));
    r.checks.push_back(
        check_less("time-dependent Markov beats every stationary grid policy", v.markov, v.grid_min, 1e-4));

    // Closed form of the Markov alternation value in the untruncated limit.
    const double c = 1.0 / (1.0 + gamma);
    auto f = [&](double o) { return o * o + (c - o) * (c - o); };
    const double g4 = std::pow(gamma, 4);
    const double closed = 0.5 * f((1.0 - gamma) * (1.0 + g4 / (1.0 - g4))) +
                          0.5 * f((1.0 - gamma) * g4 / (1.0 - g4));
    const auto g = build_alternation_gumdp(gamma, 0.5);
    CheckResult closed_check;
    closed_check.name = "Markov alternation value vs closed form";
    closed_check.measured = std::abs(v.markov - closed);
    closed_check.bound = 2.0 * lipschitz_constant(g.objective) * std::pow(gamma, horizon);
    closed_check.passed = closed_check.measured <= closed_check.bound;
    closed_check.detail = "closed form " + format_double(closed);
    r.checks.push_back(std::move(closed_check));
    return r;
}

StationaryPolicy random_stationary(Rng& rng, std::size_t n_states, std::size_t n_actions) {
    std::vector<std::vector<double>> rows(n_states, std::vector<double>(n_actions, 0.0));
    for (auto& row : rows) {
        if (rng.uniform() < 0.3) {
            row[rng.below(n_actions)] = 1.0;
            continue;
        }
        double total = 0.0;
        for (double& x : row) total += (x = 0.05 + rng.uniform());
        for (double& x : row) x /= total;
    }
    return StationaryPolicy(std::move(rows));
}

// Upper bound on the number of length-H trajectories with positive probability.
double trajectory_count_bound(const TabularGumdp& g, const StationaryPolicy& pi, std::size_t H) {
    std::size_t branching = 1;
    for (StateId s = 0; s < g.n_states; ++s) {
        std::size_t per_state = 0;
        for (ActionId a = 0; a < g.n_actions; ++a) {
            if (pi(s, a) <= 0.0) continue;
            auto row = g.row(a, s);
            per_state += static_cast<std::size_t>(
                std::count_if(row.begin(), row.end(), [](double p) { return p > 0.0; }));
        }
        branching = std::max(branching, per_state);
    }
    return std::pow(static_cast<double>(branching), static_cast<double>(H));
}

SuiteReport truncation_suite(std::uint64_t seed) {
    SuiteReport r{"truncation", {}};
    const std::size_t n_instances = 50;
    const std::size_t max_h = 10;
    Rng rng(mix_seed(seed, 0x7275));
    std::size_t pairs = 0, violations = 0, instances = 0;
    double worst_ratio = 0.0;
    for (std::uint64_t draw = 0; instances < n_instances; ++draw) {
        const std::size_t n_states = 1 + rng.below(3);
        const std::size_t n_actions = 1 + rng.below(2);
        const double gamma = 0.6 + 0.35 * rng.uniform();
        const auto kind = kAllKinds[draw % std::size(kAllKinds)];
        const TabularGumdp g = build_random(mix_seed(seed, draw), n_states, n_actions, kind, gamma);
        const auto pi = random_stationary(rng, n_states, n_actions);
        if (trajectory_count_bound(g, pi, max_h) > 1e6) continue;
        ++instances;
        const StationaryPolicyHandle pol(pi);
        std::vector<double> value(max_h + 1);
        for (std::size_t h = 1; h <= max_h; ++h) value[h] = exact_single_trial_value(g, pol, h);
        const double lip = lipschitz_constant(g.objective);
        for (std::size_t h = 1; h <= max_h; ++h)
            for (std::size_t h2 = h + 1; h2 <= max_h; ++h2) {
                const double gap = std::abs(value[h] - value[h2]);
                const double bound = 2.0 * lip * (std::pow(gamma, h) + std::pow(gamma, h2));
                ++pairs;
                if (gap > bound) ++violations;
                if (bound > 0.0) worst_ratio = std::max(worst_ratio, gap / bound);
            }
    }
    CheckResult c;
    c.name = "|F(H) - F(H')| <= 2L(gamma^H + gamma^H') for H < H' <= 10";
    c.measured = static_cast<double>(violations);
    c.bound = 0.0;
    c.passed = violations == 0;
    c.detail = std::to_string(instances) + " instances, " + std::to_string(pairs) +
               " horizon pairs, largest gap/bound " + format_double(worst_ratio);
    r.checks.push_back(std::move(c));
    return r;
}

SuiteReport subset_sum_suite(std::uint64_t seed) {
    SuiteReport r{"subset_sum", {}};
    Rng rng(mix_seed(seed, 0x5353));
    const std::size_t n_instances = 20;
    std::size_t agree = 0, solvable = 0;
    double worst_yes = 0.0, best_no = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_instances; ++i) {
        std::vector<std::uint64_t> numbers(1 + rng.below(6));
        for (auto& n : numbers) n = rng.below(10);
        const std::uint64_t k = rng.below(31);
        const TabularGumdp g = build_subset_sum(numbers, k, 0.9, numbers.size());
        const double value = exact_root_value(g, numbers.size());
        const bool exists = subset_sum_exists(numbers, k);
        const bool zero = std::abs(value) <= 1e-9;
        if (exists) {
            ++solvable;
            worst_yes = std::max(worst_yes, std::abs(value));
        } else {
            best_no = std::min(best_no, value);
        }
        if (zero == exists) ++agree;
    }
    CheckResult c;
    c.name = "exact root value is 0 iff a subset sums to k";
    c.measured = static_cast<double>(agree);
    c.bound = static_cast<double>(n_instances);
    c.passed = agree == n_instances;
    c.detail = std::to_string(solvable) + " solvable; max |V| on solvable " +
               format_double(worst_yes) + "; min V on unsolvable " +
               (std::isfinite(best_no) ? format_double(best_no) : std::string("n/a"));
    r.checks.push_back(std::move(c));
    return r;
}

// Smallest difference between distinct sums of distinct powers gamma^0 .. gamma^(n-1).
double min_power_subset_gap(double gamma, std::size_t n) {
    std::vector<double> sums;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        double s = 0.0;
        for (std::size_t u = 0; u < n; ++u)
            if (mask >> u & 1U) s += std::pow(gamma, static_cast<double>(u));
        sums.push_back(s);
    }
    std::sort(sums.begin(), sums.end());
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < sums.size(); ++i) gap = std::min(gap, sums[i] - sums[i - 1]);
    return gap;
}

SuiteReport bijection_suite(std::uint64_t seed) {
    SuiteReport r{"bijection", {}};
    const std::size_t max_len = 6;
    const TabularGumdp g = build_random(mix_seed(seed, 0x6269), 3, 2, ObjectiveKind::Entropy, 0.9);

    // all histories (s_0, a_0, ..., s_l) for l <= max_len, folded step by step
    std::map<std::pair<std::size_t, StateId>, std::vector<std::vector<double>>> groups;
    std::size_t histories = 0, fold_mismatches = 0;
    double worst_mass = 0.0;
    std::vector<OccupancyState> frontier;
    std::vector<History> frontier_h;
    for (StateId s = 0; s < g.n_states; ++s) {
        frontier.push_back(initial_state(g, s));
        frontier_h.push_back({{}, s});
    }
    for (std::size_t len = 0;; ++len) {
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            const auto& x = frontier[i];
            ++histories;
            if (!(history_to_state(g, frontier_h[i]) == x)) ++fold_mismatches;
            double mass = 0.0;
            for (double o : x.running) mass += o;
            const double expected = (1.0 - std::pow(g.gamma, static_cast<double>(x.t))) / (1.0 - g.gamma);
            worst_mass = std::max(worst_mass, std::abs(mass - expected));
            groups[{x.t, x.state}].push_back(x.running);
        }
        if (len == max_len) break;
        std::vector<OccupancyState> next;
        std::vector<History> next_h;
        for (std::size_t i = 0; i < frontier.size(); ++i)
            for (ActionId a = 0; a < g.n_actions; ++a)
                for (StateId s2 = 0; s2 < g.n_states; ++s2) {
                    next.push_back(occupancy_step(g, frontier[i], a, s2, max_len));
                    History h = frontier_h[i];
                    h.steps.push_back({h.last, a});
                    h.last = s2;
                    next_h.push_back(std::move(h));
                }
        frontier = std::move(next);
        frontier_h = std::move(next_h);
    }

    double min_sep = std::numeric_limits<double>::infinity();
    for (auto& [key, vectors] : groups) {
        std::sort(vectors.begin(), vectors.end());
        for (std::size_t i = 1; i < vectors.size(); ++i) {
            double sep = 0.0;
            for (std::size_t j = 0; j < vectors[i].size(); ++j)
                sep = std::max(sep, std::abs(vectors[i][j] - vectors[i - 1][j]));
            min_sep = std::min(min_sep, sep);
        }
    }
    const double subset_gap = min_power_subset_gap(g.gamma, max_len);

    CheckResult distinct;
    distinct.name = "distinct histories give distinct (s, o, t)";
    distinct.measured = std::min(min_sep, subset_gap);
    distinct.bound = 1e-9;
    distinct.passed = distinct.measured > distinct.bound;
    distinct.detail = std::to_string(histories) + " histories; nearest sorted neighbours " +
                      format_double(min_sep) + "; smallest gap between power-subset sums " +
                      format_double(subset_gap);
    r.checks.push_back(std::move(distinct));

    CheckResult fold;
    fold.name = "history_to_state equals the folded occupancy_step";
    fold.measured = static_cast<double>(fold_mismatches);
    fold.bound = 0.0;
    fold.passed = fold_mismatches == 0;
    r.checks.push_back(std::move(fold));

    CheckResult mass;
    mass.name = "sum o = (1 - gamma^t)/(1 - gamma)";
    mass.measured = worst_mass;
    mass.bound = 1e-9;
    mass.passed = worst_mass <= 1e-9;
    r.checks.push_back(std::move(mass));
    return r;
}

SuiteReport mcts_vs_dp_suite(std::uint64_t seed) {
    SuiteReport r{"mcts_vs_dp", {}};
    const AgreementOptions opt;
    const auto result = planner_oracle_agreement(opt, seed);
    CheckResult c;
    c.name = "mcts_search agrees with the exact greedy action";
    c.measured = result.rate();
    c.bound = opt.required_rate;
    c.passed = result.instances == opt.instances && result.rate() >= opt.required_rate;
    c.detail = std::to_string(result.agreements) + "/" + std::to_string(result.trials) +
               " trials on " + std::to_string(result.instances) + " instances (" +
               std::to_string(result.candidates_drawn) + " drawn), " +
               std::to_string(opt.iterations) + " iterations";
    r.checks.push_back(std::move(c));
    return r;
}

}  // namespace

AgreementResult planner_oracle_agreement(const AgreementOptions& opt, std::uint64_t seed) {
    AgreementResult result;
    Rng rng(mix_seed(seed, 0x6d63));
    for (std::uint64_t draw = 0; result.instances < opt.instances; ++draw) {
        if (draw > 100 * opt.instances + 1000)
            throw std::runtime_error("planner_oracle_agreement: too few instances with a clear gap");
        ++result.candidates_drawn;
        const std::size_t n_states = 2 + rng.below(2);
        const std::size_t horizon = 2 + rng.below(5);
        const double gamma = 0.5 + 0.45 * rng.uniform();
        const auto kind = kAllKinds[draw % std::size(kAllKinds)];
        const std::uint64_t instance_seed = mix_seed(seed, draw);
        const TabularGumdp g = build_random(instance_seed, n_states, 2, kind, gamma);
        const OccupancyState root = initial_state(g, rng.categorical(g.p0));

        const auto exact = ExactSolver(g, horizon).optimal_action(root);
        auto q = exact.q_values;
        std::sort(q.begin(), q.end());
        const auto bounds = objective_bounds(g.objective, g.n_pairs());
        const double span = bounds.hi - bounds.lo;
        if (!(span > 0.0) || (q[1] - q[0]) / span <= opt.min_gap) continue;

        ++result.instances;
        for (std::size_t j = 0; j < opt.seeds_per_instance; ++j) {
            PlannerConfig cfg;
            cfg.iterations = opt.iterations;
            cfg.seed = mix_seed(instance_seed, j);
            ++result.trials;
            if (mcts_search(g, horizon, root, cfg).action == exact.action) ++result.agreements;
        }
    }
    return result;
}

SuiteReport run_verify_suite(std::string_view name, std::uint64_t seed) {
    if (name == "alternation") return alternation_suite();
    if (name == "truncation") return truncation_suite(seed);
    if (name == "subset_sum") return subset_sum_suite(seed);
    if (name == "mcts_vs_dp") return mcts_vs_dp_suite(seed);
    if (name == "bijection") return bijection_suite(seed);
    throw std::invalid_argument("unknown verify suite '" + std::string(name) + "'");
}

}  // namespace gumdp
