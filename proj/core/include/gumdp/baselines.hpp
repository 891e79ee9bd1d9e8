#pragma once

#include "gumdp/model.hpp"
#include "gumdp/policy.hpp"

#include <ostream>
#include <vector>

namespace gumdp {

/// d_pi(s,a) = x(s) pi(a|s) where x solves x = (1 - gamma) p0 + gamma P_pi^T x.
OccupancyVector expected_occupancy(const TabularGumdp& g, const StationaryPolicy& pi);

/// (1 - gamma)/(1 - gamma^H) sum_{t<H} gamma^t P[s_t = s, a_t = a]: the mean of the
/// empirical truncated occupancy under pi.
OccupancyVector truncated_expected_occupancy(const TabularGumdp& g, const StationaryPolicy& pi,
                                             std::size_t horizon);

/// Largest violation of sum_a d(s,a) = (1 - gamma) p0(s) + gamma sum_{s',a} P^a(s|s') d(s',a).
double flow_residual(const TabularGumdp& g, const OccupancyVector& d);

struct ValueIterationResult {
    StationaryPolicy policy;       // deterministic greedy policy
    std::vector<ActionId> actions; // its action per state
    std::vector<double> values;    // V(s) = min_a c(s,a) + gamma sum P V
};

/// Discounted-cost value iteration until the sup-norm Bellman residual is <= tol.
/// Greedy ties go to the lowest action index.
ValueIterationResult value_iteration_linear(const TabularGumdp& g, const std::vector<double>& cost,
                                            double tol = 1e-10);

struct FrankWolfeResult {
    OccupancyVector d;
    std::vector<double> trace;  // f(d_k) for k = 0 .. iterations
    std::vector<OccupancyVector> iterates;  // d_0 .. d_K when requested
};

/**
 * Conditional gradient over the occupancy polytope, minimizing g.objective:
 * d_0 = occupancy of the uniform policy, d_{k+1} = (1 - eta_k) d_k + eta_k v_k with
 * eta_k = 2/(k + 2) and v_k the occupancy of the greedy policy for cost grad f(d_k).
 */
FrankWolfeResult frank_wolfe_infinite_trials(const TabularGumdp& g, std::size_t iterations,
                                             bool keep_iterates = false);

/// CSV with header `k,f_value`.
void write_trace_csv(std::ostream& out, const std::vector<double>& trace);

/// pi(a|s) = d(s,a) / sum_a' d(s,a'); rows with mass below 1e-12 become uniform.
StationaryPolicy policy_from_occupancy(const OccupancyVector& d, std::size_t n_states,
                                       std::size_t n_actions);

RandomPolicy random_policy(std::size_t n_actions);

/// The infinite-trials optimum as a stationary policy: policy_from_occupancy of the
/// Frank-Wolfe solution.
StationaryPolicy solver_policy(const TabularGumdp& g, std::size_t fw_iterations);

}  // namespace gumdp
