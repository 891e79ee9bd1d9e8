#pragma once

#include "gumdp/estimation.hpp"
#include "gumdp/model.hpp"
#include "gumdp/occupancy_mdp.hpp"
#include "gumdp/policy.hpp"
#include "gumdp/rng.hpp"

#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

namespace gumdp {

enum class RolloutKind { UniformRandom };

struct PlannerConfig {
    std::size_t iterations = 4000;
    double exploration_c = std::sqrt(2.0);
    RolloutKind rollout = RolloutKind::UniformRandom;
    std::uint64_t seed = 0;
};

struct EdgeStats {
    ActionId action = 0;
    std::size_t visits = 0;
    double mean_cost = 0.0;  // normalized to [0, 1]
};

struct RootStats {
    std::size_t t = 0;
    std::size_t visits = 0;
    std::vector<EdgeStats> edges;
};

/**
 * UCT tree over the occupancy MDP, rooted at one state x with x.t < H.
 *
 * Decision nodes hold one edge per action; each edge owns a chance node whose
 * children are keyed by sampled next state. Costs are terminal values
 * normalized by objective_bounds and clamped to [0, 1].
 */
class SearchTree {
public:
    SearchTree(const TabularGumdp& g, std::size_t horizon, OccupancyState root,
               const PlannerConfig& cfg);

    /// Runs n select/expand/rollout/backup iterations.
    void run(std::size_t n);

    std::size_t iterations() const { return iterations_; }
    std::size_t node_count() const { return nodes_.size(); }
    RootStats root_stats() const;

    /// argmin_a q_a over visited root edges, lowest index on ties.
    ActionId best_action() const;

    /// True when every node satisfies N = sum_a n_a and every q lies in [0, 1].
    bool check_invariants() const;

private:
    struct Edge {
        std::size_t visits = 0;
        double mean = 0.0;
        std::vector<std::uint32_t> children;  // by next state; 0 = absent
    };
    struct Node {
        OccupancyState x;
        std::size_t visits = 0;
        std::vector<Edge> edges;
    };

    std::uint32_t add_node(OccupancyState x);
    ActionId select(const Node& node) const;
    double rollout(OccupancyState x);
    double normalized_cost(const OccupancyState& x) const;
    void iterate();

    const TabularGumdp& g_;
    std::size_t horizon_;
    PlannerConfig cfg_;
    Rng rng_;
    ValueBounds bounds_;
    std::vector<Node> nodes_;  // nodes_[0] is the root
    std::size_t iterations_ = 0;
    std::vector<std::pair<std::uint32_t, ActionId>> path_;
};

struct SearchResult {
    ActionId action = 0;
    RootStats root;
};

/// One planning call from x. Throws std::logic_error if x.t >= H.
SearchResult mcts_search(const TabularGumdp& g, std::size_t horizon, const OccupancyState& x,
                         const PlannerConfig& cfg);

/// Plans afresh at every timestep; the planner seed at time t is mix_seed(episode_seed, t).
class PlannerPolicy final : public Policy {
public:
    explicit PlannerPolicy(PlannerConfig cfg) : cfg_(cfg) {}

    ActionId act(const DecisionContext& ctx, Rng& rng) const override;
    std::string name() const override { return "mcts"; }
    const PlannerConfig& config() const { return cfg_; }

private:
    PlannerConfig cfg_;
};

struct PlannedEpisode {
    Episode episode;
    std::vector<ActionId> actions;
    std::vector<RootStats> root_stats;  // one per timestep
};

/// Alternates mcts_search and environment steps from s_0 ~ p0 until t = H.
PlannedEpisode run_planned_episode(const TabularGumdp& g, std::size_t horizon,
                                   const PlannerConfig& cfg, std::uint64_t seed);

/// CSV with header `t,action,n_a,q_a`, one row per root edge per timestep.
void write_root_stats_csv(std::ostream& out, const std::vector<RootStats>& stats);

}  // namespace gumdp
