#include "gumdp/occupancy_mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gumdp {

std::vector<std::pair<OccupancyState, double>> root_distribution(const TabularGumdp& g) {
    std::vector<std::pair<OccupancyState, double>> roots;
    for (StateId s = 0; s < g.n_states; ++s)
        if (g.p0[s] > 0.0) roots.emplace_back(initial_state(g, s), g.p0[s]);
    return roots;
}

OccupancyState initial_state(const TabularGumdp& g, StateId s) {
    if (s >= g.n_states) throw std::invalid_argument("initial_state: state out of range");
    return OccupancyState{s, std::vector<double>(g.n_pairs(), 0.0), 0, 1.0};
}

OccupancyState occupancy_step(const TabularGumdp& g, const OccupancyState& x, ActionId action,
                              StateId next, std::size_t horizon) {
    if (x.t >= horizon)
        throw std::logic_error("occupancy_step: state is already at the horizon");
    if (action >= g.n_actions || next >= g.n_states)
        throw std::invalid_argument("occupancy_step: action or next state out of range");
    OccupancyState out = x;
    advance(g, out, action, next);
    return out;
}

OccupancyVector normalized_occupancy(const OccupancyState& x, double gamma, std::size_t horizon) {
    const double scale = (1.0 - gamma) / (1.0 - std::pow(gamma, static_cast<double>(horizon)));
    std::vector<double> d(x.running);
    for (double& v : d) v *= scale;
    return OccupancyVector(std::move(d));
}

double terminal_cost(const OccupancyState& x, const ObjectiveSpec& obj, double gamma,
                     std::size_t horizon) {
    if (x.t != horizon) {
        throw std::logic_error("terminal_cost: t = " + std::to_string(x.t) +
                               " but the horizon is " + std::to_string(horizon));
    }
    return objective_value(obj, normalized_occupancy(x, gamma, horizon).entries());
}

OccupancyState history_to_state(const TabularGumdp& g, const History& h) {
    if (h.last >= g.n_states) throw std::invalid_argument("history_to_state: bad final state");
    if (h.steps.empty()) return initial_state(g, h.last);
    OccupancyState x = initial_state(g, h.steps.front().state);
    for (std::size_t i = 0; i < h.steps.size(); ++i) {
        const auto& step = h.steps[i];
        if (step.state >= g.n_states || step.action >= g.n_actions)
            throw std::invalid_argument("history_to_state: index out of range at step " +
                                        std::to_string(i));
        if (step.state != x.state)
            throw std::invalid_argument("history_to_state: malformed history at step " +
                                        std::to_string(i));
        const StateId next = i + 1 < h.steps.size() ? h.steps[i + 1].state : h.last;
        advance(g, x, step.action, next);
    }
    return x;
}

ExactSolver::ExactSolver(const TabularGumdp& g, std::size_t horizon, std::uint64_t budget)
    : g_(g), horizon_(horizon), budget_(budget), branching_(1) {
    if (horizon == 0) throw std::invalid_argument("ExactSolver: horizon must be positive");
    for (ActionId a = 0; a < g.n_actions; ++a)
        for (StateId s = 0; s < g.n_states; ++s) {
            auto row = g.row(a, s);
            const auto support =
                static_cast<std::size_t>(std::count_if(row.begin(), row.end(),
                                                       [](double p) { return p > 0.0; }));
            branching_ = std::max(branching_, support);
        }
}

void ExactSolver::check_budget(std::size_t t) const {
    // leaves below a state at time t: at most (|A| * branching)^(H - t)
    const double per_level = static_cast<double>(g_.n_actions * branching_);
    double leaves = 1.0;
    for (std::size_t u = t; u < horizon_; ++u) {
        leaves *= per_level;
        if (leaves > static_cast<double>(budget_)) {
            throw BudgetExceeded("exact occupancy-MDP recursion needs up to " +
                                 std::to_string(static_cast<long double>(std::pow(per_level, horizon_ - t))) +
                                 " leaves, budget is " + std::to_string(budget_));
        }
    }
}

double ExactSolver::value(const OccupancyState& x) const {
    if (x.t == horizon_) return terminal_cost(x, g_.objective, g_.gamma, horizon_);
    double best = std::numeric_limits<double>::infinity();
    for (ActionId a = 0; a < g_.n_actions; ++a) best = std::min(best, q_value(x, a));
    return best;
}

double ExactSolver::q_value(const OccupancyState& x, ActionId a) const {
    double acc = 0.0;
    auto row = g_.row(a, x.state);
    for (StateId next = 0; next < g_.n_states; ++next) {
        const double p = row[next];
        if (p <= 0.0) continue;  // zero-probability branches generate no children
        OccupancyState child = x;
        advance(g_, child, a, next);
        acc += p * value(child);
    }
    return acc;
}

double ExactSolver::optimal_value(const OccupancyState& x) const {
    if (x.t > horizon_) throw std::logic_error("optimal_value: state beyond the horizon");
    if (x.running.size() != g_.n_pairs() || x.state >= g_.n_states)
        throw std::invalid_argument("optimal_value: state does not match the GUMDP");
    check_budget(x.t);
    return value(x);
}

ExactSolver::ActionChoice ExactSolver::optimal_action(const OccupancyState& x) const {
    if (x.t >= horizon_) throw std::logic_error("optimal_action: state is at the horizon");
    if (x.running.size() != g_.n_pairs() || x.state >= g_.n_states)
        throw std::invalid_argument("optimal_action: state does not match the GUMDP");
    check_budget(x.t);
    ActionChoice choice;
    choice.q_values.resize(g_.n_actions);
    double best = std::numeric_limits<double>::infinity();
    for (ActionId a = 0; a < g_.n_actions; ++a) {
        choice.q_values[a] = q_value(x, a);
        if (choice.q_values[a] < best) {
            best = choice.q_values[a];
            choice.action = a;
        }
    }
    return choice;
}

double ExactSolver::root_value() const {
    check_budget(0);
    double acc = 0.0;
    for (const auto& [x, p] : root_distribution(g_)) acc += p * value(x);
    return acc;
}

double exact_optimal_value(const TabularGumdp& g, std::size_t horizon, const OccupancyState& x) {
    return ExactSolver(g, horizon).optimal_value(x);
}

ExactSolver::ActionChoice exact_optimal_action(const TabularGumdp& g, std::size_t horizon,
                                               const OccupancyState& x) {
    return ExactSolver(g, horizon).optimal_action(x);
}

double exact_root_value(const TabularGumdp& g, std::size_t horizon) {
    return ExactSolver(g, horizon).root_value();
}

}  // namespace gumdp
