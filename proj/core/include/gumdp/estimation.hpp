#pragma once

#include "gumdp/model.hpp"
#include "gumdp/occupancy_mdp.hpp"
#include "gumdp/policy.hpp"

#include <cstdint>
#include <ostream>
#include <vector>

namespace gumdp {

/// One length-H interaction together with its final occupancy-MDP state.
struct Episode {
    TrajectorySample trajectory;
    OccupancyState final_state;  // t == H
    double f_value = 0.0;        // terminal cost of final_state
};

/**
 * Samples s_0 ~ p0, a_t ~ pol, s_{t+1} ~ P[a_t][s_t] for t < H.
 *
 * The environment and the policy draw from one Rng seeded with `seed`;
 * planners derive their own per-timestep seeds from it via mix_seed.
 */
Episode run_episode(const TabularGumdp& g, const Policy& pol, std::size_t horizon,
                    std::uint64_t seed);

TrajectorySample sample_trajectory(const TabularGumdp& g, const Policy& pol,
                                   std::size_t horizon, std::uint64_t seed);

/// d(s,a) = (1 - gamma)/(1 - gamma^H) sum_{t<H} gamma^t 1(s_t = s, a_t = a).
OccupancyVector empirical_truncated_occupancy(const TrajectorySample& traj, double gamma);

struct MonteCarloEstimate {
    double mean = 0.0;
    std::vector<double> values;          // f(d_hat) per episode
    std::vector<std::uint64_t> seeds;    // mix_seed(seed, e)
};

/// Mean of f(d_hat) over n independent episodes. `workers` > 1 evaluates
/// episodes concurrently; the result is identical to the sequential one.
MonteCarloEstimate single_trial_mc_estimate(const TabularGumdp& g, const Policy& pol,
                                            std::size_t horizon, std::size_t n_episodes,
                                            std::uint64_t seed, std::size_t workers = 1);

/// CSV with header `episode,seed,f_value`.
void write_episode_csv(std::ostream& out, const MonteCarloEstimate& est);

/**
 * Exact F_{1,H}(pi) = sum over trajectories of P[w] f(d_hat_w), by depth-first
 * enumeration of all positive-probability length-H trajectories.
 *
 * pol must expose action_distribution(). Throws BudgetExceeded once more than
 * `budget` trajectory prefixes have been visited.
 */
double exact_single_trial_value(const TabularGumdp& g, const Policy& pol, std::size_t horizon,
                                std::uint64_t budget = kEnumerationBudget);

}  // namespace gumdp
