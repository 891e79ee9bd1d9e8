#include "gumdp/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gumdp {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_length(std::span<const double> d, std::size_t expected) {
    if (d.size() != expected) {
        throw std::invalid_argument("objective: occupancy has length " + std::to_string(d.size()) +
                                    ", parameters have length " + std::to_string(expected));
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double balance_center(const VisitBalanceObjective& o) { return 1.0 / (1.0 + o.gamma); }

// Range of selector . d over the simplex.
std::pair<double, double> selector_range(const VisitBalanceObjective& o) {
    auto [lo, hi] = std::minmax_element(o.selector.begin(), o.selector.end());
    return {*lo, *hi};
}

double balance_value(const VisitBalanceObjective& o, double m) {
    const double c = balance_center(o);
    return m * m + (c - m) * (c - m);
}

}  // namespace

std::string_view to_string(ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::Linear: return "Linear";
        case ObjectiveKind::Entropy: return "Entropy";
        case ObjectiveKind::ImitationL2: return "ImitationL2";
        case ObjectiveKind::AdversarialMax: return "AdversarialMax";
        case ObjectiveKind::QuadraticTarget: return "QuadraticTarget";
        case ObjectiveKind::VisitBalance: return "VisitBalance";
    }
    return "unknown";
}

ObjectiveKind objective_kind_from_string(std::string_view name) {
    for (auto kind : {ObjectiveKind::Linear, ObjectiveKind::Entropy, ObjectiveKind::ImitationL2,
                      ObjectiveKind::AdversarialMax, ObjectiveKind::QuadraticTarget,
                      ObjectiveKind::VisitBalance}) {
        if (to_string(kind) == name) return kind;
    }
    throw std::invalid_argument("unknown objective kind '" + std::string(name) + "'");
}

ObjectiveKind ObjectiveSpec::kind() const {
    return static_cast<ObjectiveKind>(params_.index());
}

std::size_t ObjectiveSpec::dimension() const {
    return std::visit(Overloaded{
                          [](const LinearObjective& o) { return o.costs.size(); },
                          [](const EntropyObjective&) { return std::size_t{0}; },
                          [](const ImitationObjective& o) { return o.target.size(); },
                          [](const AdversarialObjective& o) {
                              return o.costs.empty() ? std::size_t{0} : o.costs.front().size();
                          },
                          [](const QuadraticTargetObjective& o) { return o.weights.size(); },
                          [](const VisitBalanceObjective& o) { return o.selector.size(); },
                      },
                      params_);
}

std::vector<std::string> ObjectiveSpec::violations() const {
    std::vector<std::string> out;
    std::visit(
        Overloaded{
            [&](const LinearObjective& o) {
                if (o.costs.empty()) out.emplace_back("Linear: empty cost vector");
            },
            [&](const EntropyObjective& o) {
                if (!(o.floor > 0.0 && o.floor < std::exp(-2.0)))
                    out.emplace_back("Entropy: floor must lie in (0, e^-2)");
            },
            [&](const ImitationObjective& o) {
                double total = 0.0;
                bool negative = false;
                for (double x : o.target) {
                    negative = negative || !(x >= 0.0);
                    total += x;
                }
                if (o.target.empty() || negative || std::abs(total - 1.0) > 1e-9)
                    out.emplace_back("ImitationL2: target is not a valid occupancy vector");
            },
            [&](const AdversarialObjective& o) {
                if (o.costs.empty()) out.emplace_back("AdversarialMax: needs K >= 1 cost vectors");
                for (const auto& c : o.costs)
                    if (c.size() != o.costs.front().size() || c.empty()) {
                        out.emplace_back("AdversarialMax: cost vectors differ in length");
                        break;
                    }
            },
            [&](const QuadraticTargetObjective& o) {
                if (o.weights.empty()) out.emplace_back("QuadraticTarget: empty weight vector");
            },
            [&](const VisitBalanceObjective& o) {
                if (!(o.gamma > 0.0 && o.gamma < 1.0))
                    out.emplace_back("VisitBalance: gamma must lie in (0, 1)");
                if (o.selector.empty()) out.emplace_back("VisitBalance: empty selector");
            },
        },
        params_);
    return out;
}

double objective_value(const ObjectiveSpec& obj, std::span<const double> d) {
    return std::visit(
        Overloaded{
            [&](const LinearObjective& o) {
                require_length(d, o.costs.size());
                return dot(o.costs, d);
            },
            [&](const EntropyObjective&) {
                double acc = 0.0;
                for (double x : d)
                    if (x > 0.0) acc += x * std::log(x);
                return acc;
            },
            [&](const ImitationObjective& o) {
                require_length(d, o.target.size());
                double acc = 0.0;
                for (std::size_t i = 0; i < d.size(); ++i) {
                    const double diff = d[i] - o.target[i];
                    acc += diff * diff;
                }
                return acc;
            },
            [&](const AdversarialObjective& o) {
                if (o.costs.empty()) throw std::invalid_argument("AdversarialMax: no cost vectors");
                double best = -std::numeric_limits<double>::infinity();
                for (const auto& c : o.costs) {
                    require_length(d, c.size());
                    best = std::max(best, dot(c, d));
                }
                return best;
            },
            [&](const QuadraticTargetObjective& o) {
                require_length(d, o.weights.size());
                const double r = dot(o.weights, d) - o.target;
                return r * r;
            },
            [&](const VisitBalanceObjective& o) {
                require_length(d, o.selector.size());
                return balance_value(o, dot(o.selector, d));
            },
        },
        obj.params());
}

FlatVector objective_subgradient(const ObjectiveSpec& obj, std::span<const double> d) {
    return std::visit(
        Overloaded{
            [&](const LinearObjective& o) {
                require_length(d, o.costs.size());
                return o.costs;
            },
            [&](const EntropyObjective& o) {
                FlatVector g(d.size());
                for (std::size_t i = 0; i < d.size(); ++i)
                    g[i] = std::log(std::max(d[i], o.floor)) + 1.0;
                return g;
            },
            [&](const ImitationObjective& o) {
                require_length(d, o.target.size());
                FlatVector g(d.size());
                for (std::size_t i = 0; i < d.size(); ++i) g[i] = 2.0 * (d[i] - o.target[i]);
                return g;
            },
            [&](const AdversarialObjective& o) {
                if (o.costs.empty()) throw std::invalid_argument("AdversarialMax: no cost vectors");
                std::size_t arg = 0;
                double best = -std::numeric_limits<double>::infinity();
                for (std::size_t k = 0; k < o.costs.size(); ++k) {
                    require_length(d, o.costs[k].size());
                    const double v = dot(o.costs[k], d);
                    if (v > best) {
                        best = v;
                        arg = k;
                    }
                }
                return o.costs[arg];
            },
            [&](const QuadraticTargetObjective& o) {
                require_length(d, o.weights.size());
                const double scale = 2.0 * (dot(o.weights, d) - o.target);
                FlatVector g(o.weights);
                for (double& x : g) x *= scale;
                return g;
            },
            [&](const VisitBalanceObjective& o) {
                require_length(d, o.selector.size());
                const double m = dot(o.selector, d);
                const double scale = 4.0 * m - 2.0 * balance_center(o);
                FlatVector g(o.selector);
                for (double& x : g) x *= scale;
                return g;
            },
        },
        obj.params());
}

double lipschitz_constant(const ObjectiveSpec& obj) {
    return std::visit(
        Overloaded{
            [](const LinearObjective& o) { return max_abs(o.costs); },
            [](const EntropyObjective& o) { return std::abs(std::log(o.floor) + 1.0); },
            [](const ImitationObjective&) { return 4.0; },
            [](const AdversarialObjective& o) {
                double m = 0.0;
                for (const auto& c : o.costs) m = std::max(m, max_abs(c));
                return m;
            },
            [](const QuadraticTargetObjective& o) {
                // sup |f'| over the simplex, where w . d ranges over [min w, max w]
                auto [lo, hi] = std::minmax_element(o.weights.begin(), o.weights.end());
                const double k = o.target;
                const double spread =
                    std::max({std::abs(k), std::abs(*hi - k), std::abs(*lo - k)});
                return 2.0 * spread * max_abs(o.weights);
            },
            [](const VisitBalanceObjective& o) {
                auto [lo, hi] = selector_range(o);
                const double c = balance_center(o);
                const double slope = std::max(std::abs(4.0 * lo - 2.0 * c), std::abs(4.0 * hi - 2.0 * c));
                return slope * max_abs(o.selector);
            },
        },
        obj.params());
}

ValueBounds objective_bounds(const ObjectiveSpec& obj, std::size_t n_pairs) {
    return std::visit(
        Overloaded{
            [](const LinearObjective& o) {
                auto [lo, hi] = std::minmax_element(o.costs.begin(), o.costs.end());
                return ValueBounds{*lo, *hi};
            },
            [&](const EntropyObjective&) {
                return ValueBounds{-std::log(static_cast<double>(std::max<std::size_t>(n_pairs, 1))),
                                   0.0};
            },
            [](const ImitationObjective&) { return ValueBounds{0.0, 4.0}; },
            [](const AdversarialObjective& o) {
                ValueBounds b{std::numeric_limits<double>::infinity(),
                              -std::numeric_limits<double>::infinity()};
                for (const auto& c : o.costs) {
                    auto [lo, hi] = std::minmax_element(c.begin(), c.end());
                    b.lo = std::min(b.lo, *lo);
                    b.hi = std::max(b.hi, *hi);
                }
                return b;
            },
            [](const QuadraticTargetObjective& o) {
                double hi = 0.0;
                for (double w : o.weights) hi = std::max(hi, (w - o.target) * (w - o.target));
                return ValueBounds{0.0, hi};
            },
            [](const VisitBalanceObjective& o) {
                // convex parabola in m, minimized at m = c/2
                auto [lo, hi] = selector_range(o);
                const double c = balance_center(o);
                const double m_star = std::clamp(c / 2.0, lo, hi);
                return ValueBounds{balance_value(o, m_star),
                                   std::max(balance_value(o, lo), balance_value(o, hi))};
            },
        },
        obj.params());
}

}  // namespace gumdp
