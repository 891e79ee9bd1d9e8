#include "gumdp/baselines.hpp"
#include "gumdp/environments.hpp"
#include "gumdp/estimation.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace gumdp;

namespace {

TabularGumdp cycle(double gamma) {
    TabularGumdp g(2, 1, gamma);
    g.transition(0, 0, 1) = 1.0;
    g.transition(0, 1, 0) = 1.0;
    g.p0 = {1.0, 0.0};
    g.objective = ObjectiveSpec::linear({0.0, 1.0});
    return g;
}

double dot(const std::vector<double>& a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// min over deterministic stationary policies of c . d_pi, by enumeration.
double best_deterministic_cost(const TabularGumdp& g, const std::vector<double>& c) {
    double best = INFINITY;
    std::size_t combos = 1;
    for (std::size_t s = 0; s < g.n_states; ++s) combos *= g.n_actions;
    for (std::size_t code = 0; code < combos; ++code) {
        std::vector<std::vector<double>> rows(g.n_states, std::vector<double>(g.n_actions, 0.0));
        std::size_t rest = code;
        for (std::size_t s = 0; s < g.n_states; ++s) {
            rows[s][rest % g.n_actions] = 1.0;
            rest /= g.n_actions;
        }
        best = std::min(best, dot(c, testsupport::power_series_occupancy(g, rows, 3000)));
    }
    return best;
}

}  // namespace

TEST(ExpectedOccupancy, OneState) {
    TabularGumdp g(1, 3, 0.9);
    for (ActionId a = 0; a < 3; ++a) g.transition(a, 0, 0) = 1.0;
    g.p0 = {1.0};
    auto d = expected_occupancy(g, StationaryPolicy({{0.2, 0.5, 0.3}}));
    EXPECT_NEAR(d[0], 0.2, 1e-12);
    EXPECT_NEAR(d[1], 0.5, 1e-12);
    EXPECT_NEAR(d[2], 0.3, 1e-12);
}

TEST(ExpectedOccupancy, TwoStateCycle) {
    auto d = expected_occupancy(cycle(0.5), StationaryPolicy(2, 1));
    EXPECT_NEAR(d[0], 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(d[1], 1.0 / 3.0, 1e-12);
}

TEST(ExpectedOccupancy, MatchesPowerSeriesAndPolytope) {
    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t S = 2 + rng() % 4, A = 1 + rng() % 3;
        const double gamma = 0.5 + 0.45 * std::uniform_real_distribution<double>(0, 1)(rng);
        auto g = testsupport::random_dynamics(rng, S, A, gamma);
        auto rows = testsupport::random_policy_rows(rng, S, A);
        auto d = expected_occupancy(g, StationaryPolicy(rows));
        auto series = testsupport::power_series_occupancy(g, rows, 60);
        for (std::size_t i = 0; i < d.size(); ++i) {
            EXPECT_GE(d[i], 0.0);
            EXPECT_LE(std::abs(d[i] - series[i]), 2 * std::pow(gamma, 60) + 1e-14);
        }
        EXPECT_NEAR(d.sum(), 1.0, 1e-9);
        EXPECT_LE(testsupport::flow_violation(g, std::vector<double>(d.entries().begin(), d.entries().end())),
                  1e-8);
        EXPECT_LE(flow_residual(g, d), 1e-8);
    }
}

TEST(ExpectedOccupancy, TruncatedVariantMatchesSeries) {
    std::mt19937_64 rng(42);
    auto g = testsupport::random_dynamics(rng, 3, 2, 0.8);
    auto rows = testsupport::random_policy_rows(rng, 3, 2);
    const std::size_t H = 7;
    auto series = testsupport::power_series_occupancy(g, rows, H);
    auto d = truncated_expected_occupancy(g, StationaryPolicy(rows), H);
    for (std::size_t i = 0; i < series.size(); ++i)
        EXPECT_NEAR(d[i], series[i] / (1 - std::pow(0.8, H)), 1e-12);
}

TEST(ExpectedOccupancy, RejectsMismatchedPolicy) {
    EXPECT_THROW(expected_occupancy(cycle(0.5), StationaryPolicy(3, 1)), std::invalid_argument);
}

TEST(ValueIteration, ZeroCost) {
    auto g = build_illustrative(IllustrativeTask::Entropy);
    auto vi = value_iteration_linear(g, std::vector<double>(g.n_pairs(), 0.0));
    for (double v : vi.values) EXPECT_EQ(v, 0.0);
    for (auto a : vi.actions) EXPECT_EQ(a, 0u);
}

TEST(ValueIteration, DominantAction) {
    TabularGumdp g(1, 2, 0.9);
    g.transition(0, 0, 0) = g.transition(1, 0, 0) = 1.0;
    g.p0 = {1.0};
    auto vi = value_iteration_linear(g, {0.0, 1.0});
    EXPECT_EQ(vi.actions[0], 0u);
    EXPECT_NEAR(vi.values[0], 0.0, 1e-12);
}

TEST(ValueIteration, CycleMatchesDiscountedSum) {
    const double gamma = 0.9;
    auto g = cycle(gamma);
    auto vi = value_iteration_linear(g, {0.0, 1.0});
    // From s0 the cost-1 pair is hit at odd t, from s1 at even t.
    double from0 = 0.0, from1 = 0.0;
    for (int t = 0; t < 3000; ++t) {
        (t % 2 == 1 ? from0 : from1) += std::pow(gamma, t);
    }
    EXPECT_NEAR(vi.values[0], from0, 1e-8);
    EXPECT_NEAR(vi.values[1], from1, 1e-8);
}

TEST(ValueIteration, GreedyPolicyIsOptimal) {
    std::mt19937_64 rng(43);
    for (int rep = 0; rep < 20; ++rep) {
        auto g = testsupport::random_dynamics(rng, 3, 3, 0.85);
        std::vector<double> c(g.n_pairs());
        for (auto& x : c) x = std::uniform_real_distribution<double>(-1, 1)(rng);
        auto vi = value_iteration_linear(g, c);
        auto d = expected_occupancy(g, vi.policy);
        EXPECT_NEAR(dot(c, d.entries()), best_deterministic_cost(g, c), 1e-9);
        double v0 = 0.0;
        for (StateId s = 0; s < 3; ++s) v0 += g.p0[s] * vi.values[s];
        EXPECT_NEAR(v0 * (1 - g.gamma), dot(c, d.entries()), 1e-9);
    }
}

TEST(FrankWolfe, LinearSolvedInOneIteration) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto g = build_random(600 + seed, 3, 2, ObjectiveKind::Linear, 0.9);
        const auto& c = std::get<LinearObjective>(g.objective.params()).costs;
        auto fw = frank_wolfe_infinite_trials(g, 1);
        ASSERT_EQ(fw.trace.size(), 2u);
        EXPECT_NEAR(fw.trace[1], best_deterministic_cost(g, c), 1e-9);
    }
}

TEST(FrankWolfe, AchievableImitationTarget) {
    std::mt19937_64 rng(44);
    for (int rep = 0; rep < 3; ++rep) {
        auto g = testsupport::random_dynamics(rng, 3, 2, 0.9);
        auto beta = testsupport::random_policy_rows(rng, 3, 2);
        g.objective = ObjectiveSpec::imitation(testsupport::power_series_occupancy(g, beta, 3000));
        auto fw = frank_wolfe_infinite_trials(g, 500);
        EXPECT_LE(fw.trace.back(), 1e-3);
    }
    auto g = build_illustrative(IllustrativeTask::Imitation);
    EXPECT_LE(frank_wolfe_infinite_trials(g, 500).trace.back(), 1e-3);
}

TEST(FrankWolfe, IteratesStayFeasibleAndImprove) {
    for (auto kind : {ObjectiveKind::Entropy, ObjectiveKind::ImitationL2, ObjectiveKind::AdversarialMax,
                      ObjectiveKind::QuadraticTarget}) {
        auto g = build_random(700 + static_cast<int>(kind), 4, 2, kind, 0.9);
        auto fw = frank_wolfe_infinite_trials(g, 60, true);
        ASSERT_EQ(fw.iterates.size(), 61u);
        for (const auto& d : fw.iterates) {
            EXPECT_LE(testsupport::flow_violation(g, std::vector<double>(d.entries().begin(), d.entries().end())),
                      1e-8);
            for (double x : d.entries()) EXPECT_GE(x, -1e-15);
        }
        EXPECT_LE(fw.trace.back(), fw.trace.front() + 1e-12) << to_string(kind);
        EXPECT_EQ(fw.trace[0], objective_value(g.objective, fw.iterates[0].entries()));
    }
}

TEST(FrankWolfe, TraceCsv) {
    std::ostringstream out;
    write_trace_csv(out, {1.5, 0.25});
    EXPECT_EQ(out.str(), "k,f_value\n0,1.5\n1,0.25\n");
}

TEST(PolicyFromOccupancy, Examples) {
    auto pi = policy_from_occupancy(OccupancyVector(std::vector<double>(6, 1.0 / 6.0)), 3, 2);
    for (const auto& row : pi.rows()) EXPECT_EQ(row, (std::vector<double>{0.5, 0.5}));
    pi = policy_from_occupancy(OccupancyVector({0.2, 0.8, 0.0, 0.0}), 2, 2);
    EXPECT_EQ(pi.rows()[1], (std::vector<double>{0.5, 0.5}));
    EXPECT_NEAR(pi(0, 1), 0.8, 1e-15);
}

TEST(PolicyFromOccupancy, RoundTrip) {
    std::mt19937_64 rng(45);
    auto g = testsupport::random_dynamics(rng, 4, 3, 0.9);
    StationaryPolicy pi(testsupport::random_policy_rows(rng, 4, 3));
    auto back = policy_from_occupancy(expected_occupancy(g, pi), 4, 3);
    for (StateId s = 0; s < 4; ++s)
        for (ActionId a = 0; a < 3; ++a) EXPECT_NEAR(back(s, a), pi(s, a), 1e-7);
}

TEST(RandomPolicy, Frequencies) {
    auto g = build_illustrative(IllustrativeTask::Entropy);
    auto single = random_policy(1);
    Rng rng(5);
    auto x = initial_state(g, 0);
    DecisionContext ctx{g, x, {}, 10, 0};
    for (int i = 0; i < 100; ++i) EXPECT_EQ(single.act(ctx, rng), 0u);

    auto pol = random_policy(4);
    std::vector<int> counts(4, 0);
    const int n = 40000;
    for (int i = 0; i < n; ++i) ++counts[pol.act(ctx, rng)];
    const double sd = std::sqrt(n * 0.25 * 0.75);
    for (int c : counts) EXPECT_LE(std::abs(c - n / 4.0), 4 * sd);
}

TEST(SolverPolicy, IsValidAndStationary) {
    auto g = build_illustrative(IllustrativeTask::Entropy);
    auto pi = solver_policy(g, 200);
    EXPECT_TRUE(pi.is_valid());
    EXPECT_EQ(pi.n_states(), 3u);
    auto fw = frank_wolfe_infinite_trials(g, 200);
    auto d = expected_occupancy(g, pi);
    for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(d[i], fw.d[i], 1e-8);
}
