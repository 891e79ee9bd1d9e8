#pragma once

#include "gumdp/objective.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gumdp {

using StateId = std::size_t;
using ActionId = std::size_t;

/// Tolerance for probability rows and distributions.
inline constexpr double kProbabilityTolerance = 1e-9;

/**
 * Finite GUMDP: transition tensor P[a][s][s'], initial distribution, discount
 * and objective over state-action occupancies.
 *
 * Transitions are stored flat; row(a, s) views P[a][s][.]. Construction does
 * not validate; call validate_gumdp() on untrusted input.
 */
struct TabularGumdp {
    std::size_t n_states = 0;
    std::size_t n_actions = 0;
    std::vector<double> transitions;  // [a][s][s'] flattened
    std::vector<double> p0;
    double gamma = 0.9;
    ObjectiveSpec objective;

    TabularGumdp() = default;
    TabularGumdp(std::size_t states, std::size_t actions, double discount);

    std::size_t n_pairs() const { return n_states * n_actions; }
    std::size_t pair_index(StateId s, ActionId a) const { return s * n_actions + a; }

    double& transition(ActionId a, StateId s, StateId next) {
        return transitions[(a * n_states + s) * n_states + next];
    }
    double transition(ActionId a, StateId s, StateId next) const {
        return transitions[(a * n_states + s) * n_states + next];
    }
    std::span<const double> row(ActionId a, StateId s) const {
        return {transitions.data() + (a * n_states + s) * n_states, n_states};
    }

    friend bool operator==(const TabularGumdp&, const TabularGumdp&) = default;
};

/// One invariant violation with the index path it refers to, e.g. "transitions[1][0]".
struct Violation {
    std::string path;
    std::string message;
};

/// All invariant violations of g; empty means well-formed.
std::vector<Violation> validate_gumdp(const TabularGumdp& g);

/// Throws std::invalid_argument listing the violations, if any.
void require_valid(const TabularGumdp& g);

/// A point in the simplex over state-action pairs, flat index s * n_actions + a.
class OccupancyVector {
public:
    OccupancyVector() = default;
    explicit OccupancyVector(std::vector<double> entries) : entries_(std::move(entries)) {}

    std::span<const double> entries() const { return entries_; }
    std::vector<double>& mutable_entries() { return entries_; }
    std::size_t size() const { return entries_.size(); }
    double operator[](std::size_t i) const { return entries_[i]; }
    double sum() const;

    /// Non-negative and sums to one within tol.
    bool is_valid(double tol = kProbabilityTolerance) const;

    friend bool operator==(const OccupancyVector&, const OccupancyVector&) = default;

private:
    std::vector<double> entries_;
};

/// Stationary policy pi(a|s), rows over states.
class StationaryPolicy {
public:
    StationaryPolicy() = default;
    StationaryPolicy(std::size_t n_states, std::size_t n_actions);  // uniform
    explicit StationaryPolicy(std::vector<std::vector<double>> probs);

    static StationaryPolicy deterministic(std::span<const ActionId> actions,
                                          std::size_t n_actions);

    std::size_t n_states() const { return probs_.size(); }
    std::size_t n_actions() const { return probs_.empty() ? 0 : probs_.front().size(); }
    double operator()(StateId s, ActionId a) const { return probs_[s][a]; }
    std::span<const double> row(StateId s) const { return probs_[s]; }
    const std::vector<std::vector<double>>& rows() const { return probs_; }

    bool is_valid(double tol = kProbabilityTolerance) const;

private:
    std::vector<std::vector<double>> probs_;
};

struct Step {
    StateId state;
    ActionId action;
    friend bool operator==(const Step&, const Step&) = default;
};

/// A length-H prefix (s_0, a_0), ..., (s_{H-1}, a_{H-1}) of one trajectory.
struct TrajectorySample {
    std::vector<Step> steps;
    std::size_t n_states = 0;
    std::size_t n_actions = 0;

    std::size_t horizon() const { return steps.size(); }
};

}  // namespace gumdp
