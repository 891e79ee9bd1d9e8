#include "gumdp/policy.hpp"

#include <stdexcept>

namespace gumdp {

namespace {

std::vector<double> one_hot(std::size_t n, std::size_t i) {
    std::vector<double> v(n, 0.0);
    v[i] = 1.0;
    return v;
}

ActionId checked(ActionId a, const TabularGumdp& g, const std::string& who) {
    if (a >= g.n_actions) throw std::logic_error(who + " returned an out-of-range action");
    return a;
}

}  // namespace

RandomPolicy::RandomPolicy(std::size_t n_actions) : n_actions_(n_actions) {
    if (n_actions == 0) throw std::invalid_argument("RandomPolicy: no actions");
}

ActionId RandomPolicy::act(const DecisionContext& ctx, Rng& rng) const {
    (void)ctx;
    return rng.below(n_actions_);
}

std::optional<std::vector<double>> RandomPolicy::action_distribution(
    const DecisionContext& ctx) const {
    (void)ctx;
    return std::vector<double>(n_actions_, 1.0 / static_cast<double>(n_actions_));
}

StationaryPolicyHandle::StationaryPolicyHandle(StationaryPolicy pi, std::string label)
    : pi_(std::move(pi)), label_(std::move(label)) {
    if (!pi_.is_valid()) throw std::invalid_argument("StationaryPolicyHandle: invalid policy");
}

ActionId StationaryPolicyHandle::act(const DecisionContext& ctx, Rng& rng) const {
    return rng.categorical(pi_.row(ctx.x.state));
}

std::optional<std::vector<double>> StationaryPolicyHandle::action_distribution(
    const DecisionContext& ctx) const {
    auto row = pi_.row(ctx.x.state);
    return std::vector<double>(row.begin(), row.end());
}

HistoryPolicy::HistoryPolicy(Rule rule, std::string label)
    : rule_(std::move(rule)), label_(std::move(label)) {}

ActionId HistoryPolicy::act(const DecisionContext& ctx, Rng& rng) const {
    (void)rng;
    return checked(rule_(ctx), ctx.g, label_);
}

std::optional<std::vector<double>> HistoryPolicy::action_distribution(
    const DecisionContext& ctx) const {
    return one_hot(ctx.g.n_actions, checked(rule_(ctx), ctx.g, label_));
}

ActionId ExactDpPolicy::act(const DecisionContext& ctx, Rng& rng) const {
    (void)rng;
    return ExactSolver(ctx.g, ctx.horizon, budget_).optimal_action(ctx.x).action;
}

std::optional<std::vector<double>> ExactDpPolicy::action_distribution(
    const DecisionContext& ctx) const {
    return one_hot(ctx.g.n_actions,
                   ExactSolver(ctx.g, ctx.horizon, budget_).optimal_action(ctx.x).action);
}

}  // namespace gumdp
