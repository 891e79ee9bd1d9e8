#pragma once

#include "gumdp/model.hpp"
#include "gumdp/policy.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace gumdp {

enum class IllustrativeTask { Entropy, Imitation, Adversarial };

std::string_view to_string(IllustrativeTask task);
IllustrativeTask illustrative_task_from_string(std::string_view name);

/**
 * Small noisy-navigation GUMDPs. Each (s, a) has a target state reached with
 * probability 0.9; with probability 0.1 the agent lands uniformly at random.
 *
 * Entropy and Adversarial share 3-state, 2-action dynamics with targets
 * s0: {s1, s2}, s1: {s2, s0}, s2: {s2, s2}. Adversarial uses three unit cost
 * vectors, one per state's pairs, so f(d) = max_s d(s).
 *
 * Imitation has 2 states where a0 heads to s1 and a1 to s0; the target is the
 * occupancy of beta with beta(a0|s0) = 0.8, beta(a0|s1) = 0.2.
 * p0 is uniform in all three.
 */
TabularGumdp build_illustrative(IllustrativeTask task, double gamma = 0.9);

/// The behaviour policy whose occupancy is the imitation target.
StationaryPolicy illustrative_imitation_behaviour();

/**
 * Deterministic 3-state GUMDP where non-Markovian policies beat Markovian ones.
 *
 * States {s0, s1, s2}, actions {a1, a2}: s0 -a1-> s1, s0 -a2-> s2, and s1, s2
 * return to s0 under both actions. p0 = (0, eps, 1 - eps). The objective is
 * VisitBalance with the selector on s1's pairs, which equals d(s1)^2 + d(s2)^2
 * whenever d(s0) takes its forced value gamma/(1 + gamma).
 */
TabularGumdp build_alternation_gumdp(double gamma = 0.9, double eps = 0.5);

/// Time-dependent Markov policy: at s0, a2 when t = 1 mod 4 and a1 when t = 3 mod 4.
std::unique_ptr<Policy> alternation_markov_policy();

/// Remembers s_0 and alternates s1/s2 visits starting with the branch not yet visited.
std::unique_ptr<Policy> alternation_history_policy();

/// Stationary policy with pi(a1|s0) = p and a1 elsewhere.
StationaryPolicy alternation_stationary_policy(double p);

/**
 * Chain s_0 -> ... -> s_N (absorbing), actions {include, skip}. The objective is
 * QuadraticTarget with weight n_i (1 - gamma^H)/((1 - gamma) gamma^i) on
 * (s_i, include), so a trajectory's value is (sum of included numbers - k)^2.
 * Requires 1 <= N <= 20 and H >= N.
 */
TabularGumdp build_subset_sum(const std::vector<std::uint64_t>& numbers, std::uint64_t k,
                              double gamma, std::size_t horizon);

inline constexpr ActionId kInclude = 0;
inline constexpr ActionId kSkip = 1;

/**
 * side x side slippery grid, actions {left, down, right, up}. The intended move
 * happens with probability 1 - slip; otherwise one of the two perpendicular
 * moves, each with probability slip / 2. Moves into walls stay put; holes and
 * the goal are absorbing. Start is the top-left cell. Sides 4 and 8 use the
 * classic maps; other sides have only the goal in the bottom-right corner.
 * The objective defaults to Entropy.
 */
TabularGumdp build_lake(std::size_t side, double slip = 1.0 / 3.0, double gamma = 0.9);

/// The map used by build_lake, one string per row ('S', 'F', 'H', 'G').
std::vector<std::string> lake_map(std::size_t side);

/// Random GUMDP for property tests: each row is a random distribution over a
/// random support; p0 has full support. The objective is chosen by kind with
/// random parameters.
TabularGumdp build_random(std::uint64_t seed, std::size_t n_states, std::size_t n_actions,
                          ObjectiveKind kind, double gamma = 0.9);

}  // namespace gumdp
