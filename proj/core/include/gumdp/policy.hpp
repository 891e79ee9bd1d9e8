#pragma once

#include "gumdp/model.hpp"
#include "gumdp/occupancy_mdp.hpp"
#include "gumdp/rng.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gumdp {

/// Everything a policy may condition on at one decision point.
struct DecisionContext {
    const TabularGumdp& g;
    const OccupancyState& x;        // current state, running occupancy and t
    std::span<const Step> history;  // (s_u, a_u) for u < t
    std::size_t horizon;
    std::uint64_t episode_seed;  // root of the per-timestep seed chain
};

/**
 * Behaviour of an agent over histories.
 *
 * act() must return an action below g.n_actions. Policies whose action
 * distribution can be written down also expose it, which enables exact
 * evaluation by enumeration.
 */
class Policy {
public:
    virtual ~Policy() = default;

    virtual ActionId act(const DecisionContext& ctx, Rng& rng) const = 0;

    /// pi(. | history), or nullopt when the policy is only available as a sampler.
    virtual std::optional<std::vector<double>> action_distribution(
        const DecisionContext& ctx) const {
        (void)ctx;
        return std::nullopt;
    }

    virtual std::string name() const = 0;
};

/// Uniform over actions at every history.
class RandomPolicy final : public Policy {
public:
    explicit RandomPolicy(std::size_t n_actions);

    ActionId act(const DecisionContext& ctx, Rng& rng) const override;
    std::optional<std::vector<double>> action_distribution(
        const DecisionContext& ctx) const override;
    std::string name() const override { return "random"; }

private:
    std::size_t n_actions_;
};

/// pi(a|s), ignoring everything but the current state.
class StationaryPolicyHandle final : public Policy {
public:
    explicit StationaryPolicyHandle(StationaryPolicy pi, std::string label = "stationary");

    ActionId act(const DecisionContext& ctx, Rng& rng) const override;
    std::optional<std::vector<double>> action_distribution(
        const DecisionContext& ctx) const override;
    std::string name() const override { return label_; }

    const StationaryPolicy& policy() const { return pi_; }

private:
    StationaryPolicy pi_;
    std::string label_;
};

/// Deterministic policy given by an arbitrary function of the history.
class HistoryPolicy final : public Policy {
public:
    using Rule = std::function<ActionId(const DecisionContext&)>;

    HistoryPolicy(Rule rule, std::string label);

    ActionId act(const DecisionContext& ctx, Rng& rng) const override;
    std::optional<std::vector<double>> action_distribution(
        const DecisionContext& ctx) const override;
    std::string name() const override { return label_; }

private:
    Rule rule_;
    std::string label_;
};

/// Acts optimally in the occupancy MDP by exhaustive recursion. Small instances only.
class ExactDpPolicy final : public Policy {
public:
    explicit ExactDpPolicy(std::uint64_t budget = kEnumerationBudget) : budget_(budget) {}

    ActionId act(const DecisionContext& ctx, Rng& rng) const override;
    std::optional<std::vector<double>> action_distribution(
        const DecisionContext& ctx) const override;
    std::string name() const override { return "exact"; }

private:
    std::uint64_t budget_;
};

}  // namespace gumdp
