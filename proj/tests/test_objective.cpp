#include "gumdp/objective.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace gumdp;

namespace {

std::vector<double> uniform(std::size_t n) { return std::vector<double>(n, 1.0 / static_cast<double>(n)); }

double l1(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return s;
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

// One objective of every kind over n pairs, with random parameters.
std::vector<ObjectiveSpec> fleet(std::mt19937_64& rng, std::size_t n) {
    std::vector<double> selector(n, 0.0);
    selector[0] = selector[1] = 1.0;
    return {
        ObjectiveSpec::linear(random_vector(rng, n, -2.0, 3.0)),
        ObjectiveSpec::entropy(1e-3),
        ObjectiveSpec::imitation(testsupport::random_simplex(rng, n)),
        ObjectiveSpec::adversarial({random_vector(rng, n, -1.0, 1.0), random_vector(rng, n, -1.0, 1.0),
                                    random_vector(rng, n, 0.0, 2.0)}),
        ObjectiveSpec::quadratic_target(random_vector(rng, n, 0.0, 9.0), 4.0),
        ObjectiveSpec::visit_balance(0.9, selector),
    };
}

}  // namespace

TEST(ObjectiveValue, EntropyOfUnitMassIsZero) {
    EXPECT_EQ(objective_value(ObjectiveSpec::entropy(), std::vector<double>{0, 1, 0, 0}), 0.0);
}

TEST(ObjectiveValue, EntropyOfUniformOverFour) {
    // 4 * 0.25 * log(0.25)
    EXPECT_NEAR(objective_value(ObjectiveSpec::entropy(), uniform(4)), -1.3862943611198906, 1e-12);
}

TEST(ObjectiveValue, ImitationAtTargetIsZero) {
    std::vector<double> beta{0.1, 0.2, 0.3, 0.4};
    EXPECT_EQ(objective_value(ObjectiveSpec::imitation(beta), beta), 0.0);
}

TEST(ObjectiveValue, AdversarialWithOneCostIsLinear) {
    std::vector<double> c{0.5, -1.0, 2.0};
    std::vector<double> d{0.2, 0.3, 0.5};
    EXPECT_DOUBLE_EQ(objective_value(ObjectiveSpec::adversarial({c}), d),
                     objective_value(ObjectiveSpec::linear(c), d));
}

TEST(ObjectiveValue, QuadraticTarget) {
    auto obj = ObjectiveSpec::quadratic_target({1.0, 2.0}, 3.0);
    EXPECT_DOUBLE_EQ(objective_value(obj, std::vector<double>{0.5, 0.5}), 2.25);
}

TEST(ObjectiveValue, VisitBalance) {
    const double gamma = 0.9;
    auto obj = ObjectiveSpec::visit_balance(gamma, {1.0, 1.0, 0.0, 0.0});
    const double m = 0.3;
    const double other = 1.0 / (1.0 + gamma) - m;
    EXPECT_NEAR(objective_value(obj, std::vector<double>{0.1, 0.2, 0.3, 0.4}), m * m + other * other, 1e-15);
}

TEST(ObjectiveValue, LengthMismatchThrows) {
    EXPECT_THROW(objective_value(ObjectiveSpec::linear({1.0, 2.0}), std::vector<double>{1.0}),
                 std::invalid_argument);
}

TEST(ObjectiveSubgradient, LinearIsCost) {
    std::vector<double> c{1.0, -2.0, 0.5};
    EXPECT_EQ(objective_subgradient(ObjectiveSpec::linear(c), std::vector<double>{0.2, 0.2, 0.6}), c);
}

TEST(ObjectiveSubgradient, ImitationAtTargetIsZero) {
    std::vector<double> beta{0.25, 0.75};
    EXPECT_EQ(objective_subgradient(ObjectiveSpec::imitation(beta), beta), (std::vector<double>{0.0, 0.0}));
}

TEST(ObjectiveSubgradient, EntropyAtUniform) {
    for (double g : objective_subgradient(ObjectiveSpec::entropy(1e-4), uniform(4)))
        EXPECT_NEAR(g, -0.3862943611198906, 1e-12);
}

TEST(ObjectiveSubgradient, EntropyIsFiniteOnSparsePoints) {
    for (double g : objective_subgradient(ObjectiveSpec::entropy(1e-4), std::vector<double>{1, 0, 0}))
        EXPECT_TRUE(std::isfinite(g));
}

TEST(ObjectiveSubgradient, AdversarialTiesGoToLowestIndex) {
    auto obj = ObjectiveSpec::adversarial({{1.0, 0.0}, {0.0, 1.0}});
    EXPECT_EQ(objective_subgradient(obj, std::vector<double>{0.5, 0.5}), (std::vector<double>{1.0, 0.0}));
    EXPECT_EQ(objective_subgradient(obj, std::vector<double>{0.4, 0.6}), (std::vector<double>{0.0, 1.0}));
}

TEST(Lipschitz, Examples) {
    EXPECT_EQ(lipschitz_constant(ObjectiveSpec::imitation({0.5, 0.5})), 4.0);
    EXPECT_NEAR(lipschitz_constant(ObjectiveSpec::entropy(std::exp(-3.0))), 2.0, 1e-12);
    EXPECT_EQ(lipschitz_constant(ObjectiveSpec::linear({0.0, 0.0})), 0.0);
    EXPECT_EQ(lipschitz_constant(ObjectiveSpec::linear({1.0, -3.0})), 3.0);
    EXPECT_EQ(lipschitz_constant(ObjectiveSpec::adversarial({{1.0, 2.0}, {-5.0, 0.0}})), 5.0);
}

TEST(Bounds, Examples) {
    auto b = objective_bounds(ObjectiveSpec::imitation({0.5, 0.5}), 2);
    EXPECT_EQ(b.lo, 0.0);
    EXPECT_EQ(b.hi, 4.0);
    b = objective_bounds(ObjectiveSpec::entropy(), 4);
    EXPECT_NEAR(b.lo, -std::log(4.0), 1e-15);
    EXPECT_EQ(b.hi, 0.0);
    b = objective_bounds(ObjectiveSpec::linear({0, 1, 2, 3}), 4);
    EXPECT_EQ(b.lo, 0.0);
    EXPECT_EQ(b.hi, 3.0);
}

TEST(ObjectiveSpec, KindNamesRoundTrip) {
    for (auto k : {ObjectiveKind::Linear, ObjectiveKind::Entropy, ObjectiveKind::ImitationL2,
                   ObjectiveKind::AdversarialMax, ObjectiveKind::QuadraticTarget, ObjectiveKind::VisitBalance})
        EXPECT_EQ(objective_kind_from_string(to_string(k)), k);
    EXPECT_THROW(objective_kind_from_string("Nope"), std::invalid_argument);
}

TEST(ObjectiveSpec, Violations) {
    EXPECT_TRUE(ObjectiveSpec::entropy(1e-4).violations().empty());
    EXPECT_FALSE(ObjectiveSpec::entropy(0.0).violations().empty());
    EXPECT_FALSE(ObjectiveSpec::adversarial({}).violations().empty());
    EXPECT_FALSE(ObjectiveSpec::adversarial({{1.0, 2.0}, {1.0}}).violations().empty());
}

TEST(ObjectiveProperty, LipschitzOnRandomPairs) {
    std::mt19937_64 rng(11);
    for (std::size_t n : {2u, 4u, 6u}) {
        for (const auto& obj : fleet(rng, n)) {
            const double L = lipschitz_constant(obj);
            const double floor = obj.kind() == ObjectiveKind::Entropy
                                     ? std::get<EntropyObjective>(obj.params()).floor
                                     : 0.0;
            for (int i = 0; i < 500; ++i) {
                auto d1 = testsupport::random_simplex_above(rng, n, floor);
                auto d2 = testsupport::random_simplex_above(rng, n, floor);
                EXPECT_LE(std::abs(objective_value(obj, d1) - objective_value(obj, d2)),
                          L * l1(d1, d2) + 1e-12)
                    << to_string(obj.kind());
            }
        }
    }
}

TEST(ObjectiveProperty, SubgradientMatchesCentralDifferences) {
    std::mt19937_64 rng(12);
    const double h = 1e-6;
    for (const auto& obj : fleet(rng, 4)) {
        if (obj.kind() == ObjectiveKind::AdversarialMax) continue;
        for (int i = 0; i < 100; ++i) {
            auto d = testsupport::random_simplex_above(rng, 4, 0.02);
            auto g = objective_subgradient(obj, d);
            for (std::size_t j = 0; j < d.size(); ++j) {
                auto up = d, down = d;
                up[j] += h;
                down[j] -= h;
                const double fd = (objective_value(obj, up) - objective_value(obj, down)) / (2 * h);
                EXPECT_LE(std::abs(fd - g[j]), 1e-4 * std::max(1.0, std::abs(g[j])))
                    << to_string(obj.kind()) << " coordinate " << j;
            }
        }
    }
}

TEST(ObjectiveProperty, BoundsContainValues) {
    std::mt19937_64 rng(13);
    for (std::size_t n : {3u, 6u}) {
        for (const auto& obj : fleet(rng, n)) {
            const auto b = objective_bounds(obj, n);
            auto check = [&](const std::vector<double>& d) {
                const double f = objective_value(obj, d);
                EXPECT_GE(f, b.lo - 1e-12) << to_string(obj.kind());
                EXPECT_LE(f, b.hi + 1e-12) << to_string(obj.kind());
            };
            for (int i = 0; i < 1000; ++i) check(testsupport::random_simplex(rng, n));
            for (std::size_t v = 0; v < n; ++v) {
                std::vector<double> e(n, 0.0);
                e[v] = 1.0;
                check(e);
            }
        }
    }
}

TEST(ObjectiveProperty, AdversarialIsConvex) {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        auto obj = ObjectiveSpec::adversarial({random_vector(rng, 5, -1, 1), random_vector(rng, 5, -1, 1),
                                               random_vector(rng, 5, -1, 1)});
        auto d1 = testsupport::random_simplex(rng, 5);
        auto d2 = testsupport::random_simplex(rng, 5);
        const double lambda = u(rng);
        std::vector<double> mid(5);
        for (std::size_t j = 0; j < 5; ++j) mid[j] = lambda * d1[j] + (1 - lambda) * d2[j];
        EXPECT_LE(objective_value(obj, mid),
                  lambda * objective_value(obj, d1) + (1 - lambda) * objective_value(obj, d2) + 1e-12);
    }
}
