#include "gumdp/environments.hpp"

#include "gumdp/baselines.hpp"
#include "gumdp/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace gumdp {

namespace {

// 0.9 to the target of (s, a), 0.1 spread uniformly over all states.
TabularGumdp noisy_targets(const std::vector<std::vector<StateId>>& targets, double gamma) {
    const std::size_t n = targets.size();
    const std::size_t m = targets.front().size();
    TabularGumdp g(n, m, gamma);
    for (StateId s = 0; s < n; ++s)
        for (ActionId a = 0; a < m; ++a) {
            for (StateId next = 0; next < n; ++next)
                g.transition(a, s, next) = 0.1 / static_cast<double>(n);
            g.transition(a, s, targets[s][a]) += 0.9;
        }
    g.p0.assign(n, 1.0 / static_cast<double>(n));
    return g;
}

}  // namespace

std::string_view to_string(IllustrativeTask task) {
    switch (task) {
        case IllustrativeTask::Entropy: return "entropy";
        case IllustrativeTask::Imitation: return "imitation";
        case IllustrativeTask::Adversarial: return "adversarial";
    }
    return "unknown";
}

IllustrativeTask illustrative_task_from_string(std::string_view name) {
    for (auto task :
         {IllustrativeTask::Entropy, IllustrativeTask::Imitation, IllustrativeTask::Adversarial})
        if (to_string(task) == name) return task;
    throw std::invalid_argument("unknown illustrative task '" + std::string(name) + "'");
}

StationaryPolicy illustrative_imitation_behaviour() {
    return StationaryPolicy({{0.8, 0.2}, {0.2, 0.8}});
}

TabularGumdp build_illustrative(IllustrativeTask task, double gamma) {
    if (task == IllustrativeTask::Imitation) {
        TabularGumdp g = noisy_targets({{1, 0}, {1, 0}}, gamma);
        const auto target = expected_occupancy(g, illustrative_imitation_behaviour());
        g.objective = ObjectiveSpec::imitation({target.entries().begin(), target.entries().end()});
        return g;
    }
    TabularGumdp g = noisy_targets({{1, 2}, {2, 0}, {2, 2}}, gamma);
    if (task == IllustrativeTask::Entropy) {
        g.objective = ObjectiveSpec::entropy();
    } else {
        std::vector<FlatVector> costs(g.n_states, FlatVector(g.n_pairs(), 0.0));
        for (StateId s = 0; s < g.n_states; ++s)
            for (ActionId a = 0; a < g.n_actions; ++a) costs[s][g.pair_index(s, a)] = 1.0;
        g.objective = ObjectiveSpec::adversarial(std::move(costs));
    }
    return g;
}

TabularGumdp build_alternation_gumdp(double gamma, double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("alternation GUMDP: eps must lie in (0, 1)");
    TabularGumdp g(3, 2, gamma);
    g.transition(0, 0, 1) = 1.0;
    g.transition(1, 0, 2) = 1.0;
    for (ActionId a = 0; a < 2; ++a) {
        g.transition(a, 1, 0) = 1.0;
        g.transition(a, 2, 0) = 1.0;
    }
    g.p0 = {0.0, eps, 1.0 - eps};
    FlatVector selector(g.n_pairs(), 0.0);
    selector[g.pair_index(1, 0)] = 1.0;
    selector[g.pair_index(1, 1)] = 1.0;
    g.objective = ObjectiveSpec::visit_balance(gamma, std::move(selector));
    return g;
}

std::unique_ptr<Policy> alternation_markov_policy() {
    return std::make_unique<HistoryPolicy>(
        [](const DecisionContext& ctx) -> ActionId {
            if (ctx.x.state != 0) return 0;
            return ctx.x.t % 4 == 1 ? 1 : 0;
        },
        "alternation-markov");
}

std::unique_ptr<Policy> alternation_history_policy() {
    return std::make_unique<HistoryPolicy>(
        [](const DecisionContext& ctx) -> ActionId {
            if (ctx.x.state != 0) return 0;
            // Alternate s1/s2 visits, opening with the branch s_0 did not visit.
            const StateId start = ctx.history.empty() ? ctx.x.state : ctx.history.front().state;
            const bool first_leg = ctx.x.t % 4 == 1;
            const ActionId toward_other = start == 1 ? 1 : 0;
            return first_leg ? toward_other : 1 - toward_other;
        },
        "alternation-history");
}

StationaryPolicy alternation_stationary_policy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("stationary grid: p outside [0, 1]");
    return StationaryPolicy({{p, 1.0 - p}, {1.0, 0.0}, {1.0, 0.0}});
}

TabularGumdp build_subset_sum(const std::vector<std::uint64_t>& numbers, std::uint64_t k,
                              double gamma, std::size_t horizon) {
    const std::size_t n = numbers.size();
    if (n == 0 || n > 20) throw std::invalid_argument("subset-sum GUMDP: need 1 to 20 numbers");
    if (horizon < n) throw std::invalid_argument("subset-sum GUMDP: horizon shorter than the chain");
    TabularGumdp g(n + 1, 2, gamma);
    for (StateId s = 0; s <= n; ++s) {
        const StateId next = s < n ? s + 1 : n;
        g.transition(kInclude, s, next) = 1.0;
        g.transition(kSkip, s, next) = 1.0;
    }
    g.p0.assign(n + 1, 0.0);
    g.p0[0] = 1.0;
    FlatVector weights(g.n_pairs(), 0.0);
    const double scale = (1.0 - std::pow(gamma, static_cast<double>(horizon))) / (1.0 - gamma);
    for (std::size_t i = 0; i < n; ++i)
        weights[g.pair_index(i, kInclude)] =
            static_cast<double>(numbers[i]) * scale / std::pow(gamma, static_cast<double>(i));
    g.objective = ObjectiveSpec::quadratic_target(std::move(weights), static_cast<double>(k));
    return g;
}

std::vector<std::string> lake_map(std::size_t side) {
    if (side < 2) throw std::invalid_argument("lake: side must be at least 2");
    if (side == 4) return {"SFFF", "FHFH", "FFFH", "HFFG"};
    if (side == 8) {
        return {"SFFFFFFF", "FFFFFFFF", "FFFHFFFF", "FFFFFHFF",
                "FFFHFFFF", "FHHFFFHF", "FHFFHFHF", "FFFHFFFG"};
    }
    std::vector<std::string> rows(side, std::string(side, 'F'));
    rows.front().front() = 'S';
    rows.back().back() = 'G';
    return rows;
}

TabularGumdp build_lake(std::size_t side, double slip, double gamma) {
    if (!(slip >= 0.0 && slip < 1.0)) throw std::invalid_argument("lake: slip must lie in [0, 1)");
    const auto map = lake_map(side);
    const std::size_t n = side * side;
    TabularGumdp g(n, 4, gamma);
    // left, down, right, up
    const int dr[4] = {0, 1, 0, -1};
    const int dc[4] = {-1, 0, 1, 0};
    auto move = [&](std::size_t cell, int dir) {
        const int r = static_cast<int>(cell / side) + dr[dir];
        const int c = static_cast<int>(cell % side) + dc[dir];
        if (r < 0 || c < 0 || r >= static_cast<int>(side) || c >= static_cast<int>(side)) return cell;
        return static_cast<std::size_t>(r) * side + static_cast<std::size_t>(c);
    };
    for (StateId s = 0; s < n; ++s) {
        const char tile = map[s / side][s % side];
        for (ActionId a = 0; a < 4; ++a) {
            if (tile == 'H' || tile == 'G') {
                g.transition(a, s, s) = 1.0;
                continue;
            }
            const int dir = static_cast<int>(a);
            g.transition(a, s, move(s, dir)) += 1.0 - slip;
            g.transition(a, s, move(s, (dir + 1) % 4)) += slip / 2.0;
            g.transition(a, s, move(s, (dir + 3) % 4)) += slip / 2.0;
        }
    }
    g.p0.assign(n, 0.0);
    g.p0[0] = 1.0;
    g.objective = ObjectiveSpec::entropy();
    return g;
}

TabularGumdp build_random(std::uint64_t seed, std::size_t n_states, std::size_t n_actions,
                          ObjectiveKind kind, double gamma) {
    if (n_states == 0 || n_actions == 0) throw std::invalid_argument("build_random: empty GUMDP");
    Rng rng(seed);
    TabularGumdp g(n_states, n_actions, gamma);
    auto random_distribution = [&](std::size_t n, bool full_support) {
        std::vector<double> w(n, 0.0);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!full_support && rng.uniform() < 0.4) continue;
            w[i] = 0.05 + rng.uniform();
            total += w[i];
        }
        if (total == 0.0) {
            w[rng.below(n)] = 1.0;
            total = 1.0;
        }
        for (double& x : w) x /= total;
        return w;
    };
    for (ActionId a = 0; a < n_actions; ++a)
        for (StateId s = 0; s < n_states; ++s) {
            const auto row = random_distribution(n_states, false);
            for (StateId next = 0; next < n_states; ++next) g.transition(a, s, next) = row[next];
        }
    g.p0 = random_distribution(n_states, true);

    const std::size_t n = g.n_pairs();
    auto random_vector = [&](double lo, double hi) {
        FlatVector v(n);
        for (double& x : v) x = lo + (hi - lo) * rng.uniform();
        return v;
    };
    switch (kind) {
        case ObjectiveKind::Linear: g.objective = ObjectiveSpec::linear(random_vector(-1.0, 1.0)); break;
        case ObjectiveKind::Entropy: g.objective = ObjectiveSpec::entropy(); break;
        case ObjectiveKind::ImitationL2: g.objective = ObjectiveSpec::imitation(random_distribution(n, true)); break;
        case ObjectiveKind::AdversarialMax: {
            std::vector<FlatVector> costs;
            for (int k = 0; k < 3; ++k) costs.push_back(random_vector(0.0, 1.0));
            g.objective = ObjectiveSpec::adversarial(std::move(costs));
            break;
        }
        case ObjectiveKind::QuadraticTarget:
            g.objective = ObjectiveSpec::quadratic_target(random_vector(0.0, 2.0), rng.uniform());
            break;
        case ObjectiveKind::VisitBalance: {
            FlatVector selector(n, 0.0);
            const StateId marked = rng.below(n_states);
            for (ActionId a = 0; a < n_actions; ++a) selector[g.pair_index(marked, a)] = 1.0;
            g.objective = ObjectiveSpec::visit_balance(gamma, std::move(selector));
            break;
        }
    }
    return g;
}

}  // namespace gumdp
