#include "gumdp/mcts.hpp"

#include "gumdp/io.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace gumdp {

SearchTree::SearchTree(const TabularGumdp& g, std::size_t horizon, OccupancyState root,
                       const PlannerConfig& cfg)
    : g_(g),
      horizon_(horizon),
      cfg_(cfg),
      rng_(cfg.seed),
      bounds_(objective_bounds(g.objective, g.n_pairs())) {
    if (root.t >= horizon) throw std::logic_error("mcts_search: root is at or past the horizon");
    if (cfg.iterations == 0) throw std::invalid_argument("PlannerConfig: iterations must be >= 1");
    if (!(cfg.exploration_c >= 0.0))
        throw std::invalid_argument("PlannerConfig: exploration_c must be >= 0");
    nodes_.reserve(cfg.iterations + 1);
    add_node(std::move(root));
}

std::uint32_t SearchTree::add_node(OccupancyState x) {
    Node node;
    node.x = std::move(x);
    node.edges.resize(g_.n_actions);
    for (auto& e : node.edges) e.children.assign(g_.n_states, 0);
    nodes_.push_back(std::move(node));
    return static_cast<std::uint32_t>(nodes_.size() - 1);
}

ActionId SearchTree::select(const Node& node) const {
    for (ActionId a = 0; a < node.edges.size(); ++a)
        if (node.edges[a].visits == 0) return a;
    const double log_n = std::log(static_cast<double>(node.visits));
    ActionId best = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (ActionId a = 0; a < node.edges.size(); ++a) {
        const auto& e = node.edges[a];
        const double score =
            e.mean - cfg_.exploration_c * std::sqrt(log_n / static_cast<double>(e.visits));
        if (score < best_score) {
            best_score = score;
            best = a;
        }
    }
    return best;
}

double SearchTree::normalized_cost(const OccupancyState& x) const {
    const double f = terminal_cost(x, g_.objective, g_.gamma, horizon_);
    const double span = bounds_.hi - bounds_.lo;
    if (!(span > 0.0)) return 0.5;
    return std::clamp((f - bounds_.lo) / span, 0.0, 1.0);
}

double SearchTree::rollout(OccupancyState x) {
    while (x.t < horizon_) {
        const ActionId a = rng_.below(g_.n_actions);
        const StateId next = rng_.categorical(g_.row(a, x.state));
        advance(g_, x, a, next);
    }
    return normalized_cost(x);
}

void SearchTree::iterate() {
    path_.clear();
    std::uint32_t current = 0;
    double cost = 0.0;
    for (;;) {
        const ActionId a = select(nodes_[current]);
        path_.emplace_back(current, a);
        const StateId next = rng_.categorical(g_.row(a, nodes_[current].x.state));
        const std::uint32_t child = nodes_[current].edges[a].children[next];
        if (child != 0) {
            current = child;
            continue;
        }
        OccupancyState x = nodes_[current].x;
        advance(g_, x, a, next);
        if (x.t == horizon_) {
            cost = normalized_cost(x);
        } else {
            const std::uint32_t id = add_node(x);
            nodes_[current].edges[a].children[next] = id;
            cost = rollout(std::move(x));
        }
        break;
    }
    for (const auto& [id, a] : path_) {
        Node& node = nodes_[id];
        Edge& e = node.edges[a];
        ++node.visits;
        ++e.visits;
        e.mean += (cost - e.mean) / static_cast<double>(e.visits);
    }
    ++iterations_;
}

void SearchTree::run(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) iterate();
}

RootStats SearchTree::root_stats() const {
    const Node& root = nodes_.front();
    RootStats stats;
    stats.t = root.x.t;
    stats.visits = root.visits;
    for (ActionId a = 0; a < root.edges.size(); ++a)
        stats.edges.push_back({a, root.edges[a].visits, root.edges[a].mean});
    return stats;
}

ActionId SearchTree::best_action() const {
    const Node& root = nodes_.front();
    ActionId best = 0;
    double best_q = std::numeric_limits<double>::infinity();
    for (ActionId a = 0; a < root.edges.size(); ++a) {
        if (root.edges[a].visits == 0) continue;
        if (root.edges[a].mean < best_q) {
            best_q = root.edges[a].mean;
            best = a;
        }
    }
    return best;
}

bool SearchTree::check_invariants() const {
    for (const auto& node : nodes_) {
        std::size_t total = 0;
        for (const auto& e : node.edges) {
            total += e.visits;
            if (e.mean < 0.0 || e.mean > 1.0) return false;
        }
        if (total != node.visits) return false;
    }
    return true;
}

SearchResult mcts_search(const TabularGumdp& g, std::size_t horizon, const OccupancyState& x,
                         const PlannerConfig& cfg) {
    SearchTree tree(g, horizon, x, cfg);
    tree.run(cfg.iterations);
    return {tree.best_action(), tree.root_stats()};
}

ActionId PlannerPolicy::act(const DecisionContext& ctx, Rng& rng) const {
    (void)rng;
    PlannerConfig cfg = cfg_;
    cfg.seed = mix_seed(ctx.episode_seed, ctx.x.t);
    return mcts_search(ctx.g, ctx.horizon, ctx.x, cfg).action;
}

PlannedEpisode run_planned_episode(const TabularGumdp& g, std::size_t horizon,
                                   const PlannerConfig& cfg, std::uint64_t seed) {
    if (horizon == 0) throw std::invalid_argument("run_planned_episode: horizon must be positive");
    // Mirrors run_episode() with a PlannerPolicy, additionally recording root statistics.
    Rng rng(seed);
    PlannedEpisode out;
    auto& traj = out.episode.trajectory;
    traj.n_states = g.n_states;
    traj.n_actions = g.n_actions;
    OccupancyState x = initial_state(g, rng.categorical(g.p0));
    for (std::size_t t = 0; t < horizon; ++t) {
        PlannerConfig step_cfg = cfg;
        step_cfg.seed = mix_seed(seed, t);
        SearchResult r = mcts_search(g, horizon, x, step_cfg);
        const StateId next = rng.categorical(g.row(r.action, x.state));
        traj.steps.push_back({x.state, r.action});
        out.actions.push_back(r.action);
        out.root_stats.push_back(std::move(r.root));
        advance(g, x, r.action, next);
    }
    out.episode.f_value = terminal_cost(x, g.objective, g.gamma, horizon);
    out.episode.final_state = std::move(x);
    return out;
}

void write_root_stats_csv(std::ostream& out, const std::vector<RootStats>& stats) {
    out << "t,action,n_a,q_a\n";
    for (const auto& s : stats)
        for (const auto& e : s.edges)
            out << s.t << ',' << e.action << ',' << e.visits << ',' << format_double(e.mean_cost)
                << '\n';
}

}  // namespace gumdp
