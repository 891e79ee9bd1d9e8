#pragma once

#include "gumdp/model.hpp"

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gumdp {

/**
 * State {s, o} of the occupancy MDP.
 *
 * `running` holds the unnormalized running occupancy o(s,a) = sum_{u<t} gamma^u 1(s_u=s, a_u=a).
 * `discount` is gamma^t, carried forward by repeated multiplication so that
 * equal histories always produce bit-identical states.
 */
struct OccupancyState {
    StateId state = 0;
    std::vector<double> running;
    std::size_t t = 0;
    double discount = 1.0;

    friend bool operator==(const OccupancyState&, const OccupancyState&) = default;
};

/// Thrown when an exact enumeration would exceed its node budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Default bound on leaves/prefixes visited by the exact oracles.
inline constexpr std::uint64_t kEnumerationBudget = 10'000'000;

/// Initial occupancy states with their probabilities, one per state with p0(s) > 0.
std::vector<std::pair<OccupancyState, double>> root_distribution(const TabularGumdp& g);

/// A fresh state at s with zero running occupancy.
OccupancyState initial_state(const TabularGumdp& g, StateId s);

/// The sigma update: o(x.s, a) += gamma^t, s <- next, t <- t + 1.
/// Throws std::logic_error if x.t >= horizon.
OccupancyState occupancy_step(const TabularGumdp& g, const OccupancyState& x, ActionId action,
                              StateId next, std::size_t horizon);

/// In-place sigma update without the horizon check.
inline void advance(const TabularGumdp& g, OccupancyState& x, ActionId action, StateId next) {
    x.running[g.pair_index(x.state, action)] += x.discount;
    x.discount *= g.gamma;
    x.state = next;
    ++x.t;
}

/// (1 - gamma) / (1 - gamma^H) * o as an occupancy vector.
OccupancyVector normalized_occupancy(const OccupancyState& x, double gamma, std::size_t horizon);

/// f((1 - gamma)/(1 - gamma^H) o) at t = H. Throws std::logic_error when t != H.
double terminal_cost(const OccupancyState& x, const ObjectiveSpec& obj, double gamma,
                     std::size_t horizon);

/// A history (s_0, a_0, s_1, ..., s_l): `steps` carries the (s_u, a_u) pairs, `last` is s_l.
struct History {
    std::vector<Step> steps;
    StateId last = 0;
};

/// Maps a history to its occupancy state. Throws std::invalid_argument on out-of-range indices.
OccupancyState history_to_state(const TabularGumdp& g, const History& h);

/// Optimal value and greedy action of the finite-horizon occupancy MDP,
/// computed by exhaustive recursion over the (history-unique) state tree.
class ExactSolver {
public:
    ExactSolver(const TabularGumdp& g, std::size_t horizon,
                std::uint64_t budget = kEnumerationBudget);

    /// V*_t(x). At t = H this is the terminal cost.
    double optimal_value(const OccupancyState& x) const;

    struct ActionChoice {
        ActionId action = 0;
        std::vector<double> q_values;
    };
    /// argmin_a Q*_t(x, a), lowest index on ties; requires x.t < H.
    ActionChoice optimal_action(const OccupancyState& x) const;

    /// sum over roots of p0 * V*_0, the optimum of the truncated single-trial objective.
    double root_value() const;

    std::size_t horizon() const { return horizon_; }

private:
    double value(const OccupancyState& x) const;
    double q_value(const OccupancyState& x, ActionId a) const;
    void check_budget(std::size_t t) const;

    const TabularGumdp& g_;
    std::size_t horizon_;
    std::uint64_t budget_;
    std::size_t branching_;  // max successors with positive probability
};

double exact_optimal_value(const TabularGumdp& g, std::size_t horizon, const OccupancyState& x);
ExactSolver::ActionChoice exact_optimal_action(const TabularGumdp& g, std::size_t horizon,
                                               const OccupancyState& x);
double exact_root_value(const TabularGumdp& g, std::size_t horizon);

}  // namespace gumdp
