#include "gumdp/estimation.hpp"

#include "gumdp/io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace gumdp {

Episode run_episode(const TabularGumdp& g, const Policy& pol, std::size_t horizon,
                    std::uint64_t seed) {
    if (horizon == 0) throw std::invalid_argument("run_episode: horizon must be positive");
    Rng rng(seed);
    Episode ep;
    ep.trajectory.n_states = g.n_states;
    ep.trajectory.n_actions = g.n_actions;
    ep.trajectory.steps.reserve(horizon);
    OccupancyState x = initial_state(g, rng.categorical(g.p0));
    for (std::size_t t = 0; t < horizon; ++t) {
        const DecisionContext ctx{g, x, ep.trajectory.steps, horizon, seed};
        const ActionId a = pol.act(ctx, rng);
        if (a >= g.n_actions) throw std::logic_error("policy returned an out-of-range action");
        const StateId next = rng.categorical(g.row(a, x.state));
        ep.trajectory.steps.push_back({x.state, a});
        advance(g, x, a, next);
    }
    ep.f_value = terminal_cost(x, g.objective, g.gamma, horizon);
    ep.final_state = std::move(x);
    return ep;
}

TrajectorySample sample_trajectory(const TabularGumdp& g, const Policy& pol,
                                   std::size_t horizon, std::uint64_t seed) {
    return run_episode(g, pol, horizon, seed).trajectory;
}

OccupancyVector empirical_truncated_occupancy(const TrajectorySample& traj, double gamma) {
    if (traj.steps.empty()) throw std::invalid_argument("empirical occupancy of an empty trajectory");
    // Same accumulation order as the occupancy-MDP fold, so both agree bit for bit.
    std::vector<double> o(traj.n_states * traj.n_actions, 0.0);
    double discount = 1.0;
    for (const auto& step : traj.steps) {
        if (step.state >= traj.n_states || step.action >= traj.n_actions)
            throw std::invalid_argument("trajectory step out of range");
        o[step.state * traj.n_actions + step.action] += discount;
        discount *= gamma;
    }
    OccupancyState x{0, std::move(o), traj.steps.size(), discount};
    return normalized_occupancy(x, gamma, traj.steps.size());
}

MonteCarloEstimate single_trial_mc_estimate(const TabularGumdp& g, const Policy& pol,
                                            std::size_t horizon, std::size_t n_episodes,
                                            std::uint64_t seed, std::size_t workers) {
    if (n_episodes == 0) throw std::invalid_argument("single_trial_mc_estimate: n_episodes = 0");
    MonteCarloEstimate est;
    est.values.resize(n_episodes);
    est.seeds.resize(n_episodes);
    for (std::size_t e = 0; e < n_episodes; ++e) est.seeds[e] = mix_seed(seed, e);

    auto run_one = [&](std::size_t e) {
        est.values[e] = run_episode(g, pol, horizon, est.seeds[e]).f_value;
    };
    if (workers <= 1) {
        for (std::size_t e = 0; e < n_episodes; ++e) run_one(e);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < std::min(workers, n_episodes); ++w) {
            pool.emplace_back([&] {
                for (std::size_t e = next++; e < n_episodes; e = next++) {
                    try {
                        run_one(e);
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
    double acc = 0.0;
    for (double v : est.values) acc += v;
    est.mean = acc / static_cast<double>(n_episodes);
    return est;
}

void write_episode_csv(std::ostream& out, const MonteCarloEstimate& est) {
    out << "episode,seed,f_value\n";
    for (std::size_t e = 0; e < est.values.size(); ++e)
        out << e << ',' << est.seeds[e] << ',' << format_double(est.values[e]) << '\n';
}

namespace {

class Enumerator {
public:
    Enumerator(const TabularGumdp& g, const Policy& pol, std::size_t horizon,
               std::uint64_t budget)
        : g_(g), pol_(pol), horizon_(horizon), budget_(budget) {}

    double run() {
        double acc = 0.0;
        for (const auto& [x, p] : root_distribution(g_)) acc += p * expand(x);
        return acc;
    }

private:
    // Expected terminal cost below x, conditional on reaching x.
    double expand(const OccupancyState& x) {
        if (++visited_ > budget_) {
            throw BudgetExceeded("trajectory enumeration exceeded " + std::to_string(budget_) +
                                 " prefixes");
        }
        if (x.t == horizon_) return terminal_cost(x, g_.objective, g_.gamma, horizon_);
        const DecisionContext ctx{g_, x, history_, horizon_, 0};
        const auto dist = pol_.action_distribution(ctx);
        if (!dist)
            throw std::invalid_argument("exact evaluation needs a policy with an explicit "
                                        "action distribution, got '" + pol_.name() + "'");
        if (dist->size() != g_.n_actions)
            throw std::logic_error("action distribution has the wrong length");
        double acc = 0.0;
        for (ActionId a = 0; a < g_.n_actions; ++a) {
            const double pa = (*dist)[a];
            if (pa <= 0.0) continue;
            auto row = g_.row(a, x.state);
            history_.push_back({x.state, a});
            double branch = 0.0;
            for (StateId next = 0; next < g_.n_states; ++next) {
                if (row[next] <= 0.0) continue;
                OccupancyState child = x;
                advance(g_, child, a, next);
                branch += row[next] * expand(child);
            }
            history_.pop_back();
            acc += pa * branch;
        }
        return acc;
    }

    const TabularGumdp& g_;
    const Policy& pol_;
    std::size_t horizon_;
    std::uint64_t budget_;
    std::uint64_t visited_ = 0;
    std::vector<Step> history_;
};

}  // namespace

double exact_single_trial_value(const TabularGumdp& g, const Policy& pol, std::size_t horizon,
                                std::uint64_t budget) {
    if (horizon == 0) throw std::invalid_argument("exact_single_trial_value: horizon = 0");
    return Enumerator(g, pol, horizon, budget).run();
}

}  // namespace gumdp
