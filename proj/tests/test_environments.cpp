#include "gumdp/baselines.hpp"
#include "gumdp/environments.hpp"
#include "gumdp/estimation.hpp"
#include "gumdp/experiment.hpp"
#include "gumdp/mcts.hpp"
#include "gumdp/occupancy_mdp.hpp"
#include "gumdp/verify.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace gumdp;

TEST(Environments, ConstructorsValidate) {
    std::vector<TabularGumdp> gs;
    for (auto task : {IllustrativeTask::Entropy, IllustrativeTask::Imitation, IllustrativeTask::Adversarial})
        gs.push_back(build_illustrative(task));
    gs.push_back(build_alternation_gumdp());
    gs.push_back(build_alternation_gumdp(0.5, 0.25));
    gs.push_back(build_subset_sum({1, 2, 3, 4}, 5, 0.9, 6));
    gs.push_back(build_lake(4));
    gs.push_back(build_lake(8, 0.0, 0.99));
    gs.push_back(build_lake(5, 0.5));
    for (auto kind : {ObjectiveKind::Linear, ObjectiveKind::Entropy, ObjectiveKind::ImitationL2,
                      ObjectiveKind::AdversarialMax, ObjectiveKind::QuadraticTarget})
        for (std::uint64_t seed = 0; seed < 5; ++seed) gs.push_back(build_random(seed, 4, 3, kind));
    for (const auto& g : gs) EXPECT_TRUE(validate_gumdp(g).empty()) << gumdp::to_string(g.objective.kind());
}

TEST(Illustrative, TaskNames) {
    for (auto task : {IllustrativeTask::Entropy, IllustrativeTask::Imitation, IllustrativeTask::Adversarial})
        EXPECT_EQ(illustrative_task_from_string(to_string(task)), task);
    EXPECT_THROW(illustrative_task_from_string("maze"), std::invalid_argument);
}

TEST(Illustrative, ImitationTargetIsBehaviourOccupancy) {
    auto g = build_illustrative(IllustrativeTask::Imitation);
    auto d = expected_occupancy(g, illustrative_imitation_behaviour());
    EXPECT_NEAR(objective_value(g.objective, d.entries()), 0.0, 1e-20);
    auto series = testsupport::power_series_occupancy(g, illustrative_imitation_behaviour().rows(), 3000);
    EXPECT_NEAR(objective_value(g.objective, series), 0.0, 1e-20);
}

TEST(Illustrative, NoisyTargets) {
    auto g = build_illustrative(IllustrativeTask::Entropy);
    // s0 under a0 heads to s1
    EXPECT_NEAR(g.transition(0, 0, 1), 0.9 + 0.1 / 3, 1e-15);
    EXPECT_NEAR(g.transition(0, 0, 0), 0.1 / 3, 1e-15);
    for (StateId s = 0; s < 3; ++s) EXPECT_NEAR(g.p0[s], 1.0 / 3, 1e-15);
}

TEST(Alternation, ForcedReturnOccupancy) {
    const double gamma = 0.9;
    auto g = build_alternation_gumdp(gamma, 0.5);
    RandomPolicy pol(2);
    const std::size_t H = 60;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto d = empirical_truncated_occupancy(sample_trajectory(g, pol, H, seed), gamma);
        const double s0 = d[0] + d[1];
        EXPECT_NEAR(s0, gamma / (1 + gamma), 2 * std::pow(gamma, 60));
        const double s1 = d[2] + d[3], s2 = d[4] + d[5];
        EXPECT_NEAR(objective_value(g.objective, d.entries()), s1 * s1 + s2 * s2, 1e-2);
    }
}

TEST(Alternation, PoliciesFollowTheirRules) {
    auto g = build_alternation_gumdp(0.9, 0.5);
    auto markov = alternation_markov_policy();
    auto history = alternation_history_policy();
    // Starting in s2 the history policy visits s1 next, the Markov one returns to s2.
    TabularGumdp from2 = g;
    from2.p0 = {0.0, 0.0, 1.0};
    auto h = sample_trajectory(from2, *history, 8, 0);
    auto m = sample_trajectory(from2, *markov, 8, 0);
    std::vector<StateId> hs, ms;
    for (auto& st : h.steps) hs.push_back(st.state);
    for (auto& st : m.steps) ms.push_back(st.state);
    EXPECT_EQ(hs, (std::vector<StateId>{2, 0, 1, 0, 2, 0, 1, 0}));
    EXPECT_EQ(ms, (std::vector<StateId>{2, 0, 2, 0, 1, 0, 2, 0}));
    EXPECT_TRUE(alternation_stationary_policy(0.3).is_valid());
    EXPECT_THROW(alternation_stationary_policy(1.5), std::invalid_argument);
}

TEST(Alternation, HistoryBeatsMarkovBeatsStationary) {
    auto v = alternation_values(0.9, 0.5, 40);
    EXPECT_GT(v.markov - v.history, 1e-4);
    EXPECT_GT(v.grid_min - v.markov, 1e-4);
    ASSERT_EQ(v.grid.size(), 11u);
    for (double x : v.grid) EXPECT_GE(x, v.grid_min);
}

TEST(SubsetSum, Examples) {
    EXPECT_NEAR(exact_root_value(build_subset_sum({3, 5, 2}, 7, 0.9, 3), 3), 0.0, 1e-9);
    EXPECT_GT(exact_root_value(build_subset_sum({2, 4}, 5, 0.9, 2), 2), 0.0);
    auto g = build_subset_sum({7}, 7, 0.9, 1);
    std::vector<ActionId> include{kInclude, kInclude};
    StationaryPolicyHandle pol(StationaryPolicy::deterministic(include, 2));
    EXPECT_NEAR(exact_single_trial_value(g, pol, 1), 0.0, 1e-9);
    EXPECT_THROW(build_subset_sum({}, 1, 0.9, 1), std::invalid_argument);
    EXPECT_THROW(build_subset_sum({1, 2}, 1, 0.9, 1), std::invalid_argument);
}

TEST(SubsetSum, TrajectoryValueIsSquaredMiss) {
    std::mt19937_64 rng(51);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 1 + rng() % 6;
        std::vector<std::uint64_t> numbers(n);
        for (auto& x : numbers) x = rng() % 10;
        const std::uint64_t k = rng() % 31;
        const std::size_t H = n + rng() % 3;
        auto g = build_subset_sum(numbers, k, 0.9, H);
        const std::uint64_t mask = rng() % (1u << n);
        auto x = initial_state(g, 0);
        double sum = 0.0;
        for (std::size_t t = 0; t < H; ++t) {
            const ActionId a = t < n && (mask >> t & 1u) ? kInclude : kSkip;
            if (a == kInclude) sum += static_cast<double>(numbers[t]);
            x = occupancy_step(g, x, a, std::min(t + 1, n), H);
        }
        const double miss = sum - static_cast<double>(k);
        EXPECT_NEAR(terminal_cost(x, g.objective, g.gamma, H), miss * miss, 1e-9 * std::max(1.0, miss * miss));
    }
}

TEST(SubsetSum, DecisionMatchesBruteForce) {
    std::mt19937_64 rng(52);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 1 + rng() % 6;
        std::vector<std::uint64_t> numbers(n);
        for (auto& x : numbers) x = rng() % 10;
        const std::uint64_t k = rng() % 31;
        const double v = exact_root_value(build_subset_sum(numbers, k, 0.9, n), n);
        const bool exists = testsupport::subset_sum_brute_force(numbers, k);
        EXPECT_EQ(std::abs(v) <= 1e-9, exists);
        EXPECT_EQ(subset_sum_exists(numbers, k), exists);
        if (!exists) EXPECT_GE(v, 1.0 - 1e-9);
    }
}

TEST(Lake, RowsAndSlip) {
    auto g = build_lake(4, 0.0);
    for (ActionId a = 0; a < 4; ++a)
        for (StateId s = 0; s < 16; ++s) {
            int ones = 0;
            for (double p : g.row(a, s)) {
                EXPECT_TRUE(p == 0.0 || p == 1.0);
                ones += p == 1.0;
            }
            EXPECT_EQ(ones, 1);
        }
    // corner cell moving left or up stays put
    EXPECT_EQ(g.transition(0, 0, 0), 1.0);
    EXPECT_EQ(g.transition(3, 0, 0), 1.0);
    EXPECT_EQ(g.transition(1, 0, 4), 1.0);
    EXPECT_EQ(g.transition(2, 0, 1), 1.0);

    auto slippery = build_lake(4);
    // moving down from the start: down 2/3, left (stay) 1/6, right 1/6
    EXPECT_NEAR(slippery.transition(1, 0, 4), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(slippery.transition(1, 0, 0), 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(slippery.transition(1, 0, 1), 1.0 / 6.0, 1e-15);
    EXPECT_EQ(slippery.p0[0], 1.0);
}

TEST(Lake, HolesAndGoalAbsorb) {
    auto map = lake_map(4);
    auto g = build_lake(4);
    ASSERT_EQ(map.size(), 4u);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) {
            if (map[r][c] != 'H' && map[r][c] != 'G') continue;
            const StateId s = r * 4 + c;
            for (ActionId a = 0; a < 4; ++a) EXPECT_EQ(g.transition(a, s, s), 1.0);
        }
    EXPECT_EQ(map[3][3], 'G');
    EXPECT_EQ(lake_map(8).size(), 8u);
    EXPECT_THROW(build_lake(1), std::invalid_argument);
}

TEST(Lake, PlannerBeatsRandomOnEntropy) {
    auto g = build_lake(4);
    RandomPolicy random(4);
    PlannerConfig cfg;
    cfg.iterations = 1000;
    double planner = 0.0, baseline = 0.0;
    for (std::uint64_t run = 0; run < 10; ++run) {
        planner += run_planned_episode(g, 100, cfg, mix_seed(3, run)).episode.f_value / 10;
        baseline += run_episode(g, random, 100, mix_seed(4, run)).f_value / 10;
    }
    EXPECT_LT(planner, baseline);
}
