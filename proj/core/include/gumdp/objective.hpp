#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace gumdp {

/// Real vector indexed by the flat state-action index s * n_actions + a.
using FlatVector = std::vector<double>;

/// f(d) = c . d
struct LinearObjective {
    FlatVector costs;
    friend bool operator==(const LinearObjective&, const LinearObjective&) = default;
};

/// f(d) = sum d log d with 0 log 0 = 0. The floor only enters the
/// subgradient and the Lipschitz constant.
struct EntropyObjective {
    double floor = 1e-4;
    friend bool operator==(const EntropyObjective&, const EntropyObjective&) = default;
};

/// f(d) = || d - target ||_2^2
struct ImitationObjective {
    FlatVector target;
    friend bool operator==(const ImitationObjective&, const ImitationObjective&) = default;
};

/// f(d) = max_k c_k . d
struct AdversarialObjective {
    std::vector<FlatVector> costs;
    friend bool operator==(const AdversarialObjective&, const AdversarialObjective&) = default;
};

/// f(d) = (w . d - k)^2
struct QuadraticTargetObjective {
    FlatVector weights;
    double target = 0.0;
    friend bool operator==(const QuadraticTargetObjective&, const QuadraticTargetObjective&) = default;
};

/// f(d) = m^2 + (1/(1+gamma) - m)^2 where m = selector . d is the occupancy of
/// a marked set of pairs. With the selector marking one state this is the
/// two-branch balance objective of the alternation GUMDP, where the other
/// branch receives 1/(1+gamma) - m of the mass in the infinite-horizon limit.
struct VisitBalanceObjective {
    double gamma = 0.9;
    FlatVector selector;
    friend bool operator==(const VisitBalanceObjective&, const VisitBalanceObjective&) = default;
};

enum class ObjectiveKind {
    Linear,
    Entropy,
    ImitationL2,
    AdversarialMax,
    QuadraticTarget,
    VisitBalance,
};

std::string_view to_string(ObjectiveKind kind);
ObjectiveKind objective_kind_from_string(std::string_view name);

/// The utility f over occupancies. Immutable value type.
class ObjectiveSpec {
public:
    using Params = std::variant<LinearObjective, EntropyObjective, ImitationObjective,
                                AdversarialObjective, QuadraticTargetObjective,
                                VisitBalanceObjective>;

    ObjectiveSpec() : params_(EntropyObjective{}) {}
    ObjectiveSpec(Params params) : params_(std::move(params)) {}  // NOLINT implicit

    static ObjectiveSpec linear(FlatVector costs) { return Params{LinearObjective{std::move(costs)}}; }
    static ObjectiveSpec entropy(double floor = 1e-4) { return Params{EntropyObjective{floor}}; }
    static ObjectiveSpec imitation(FlatVector target) {
        return Params{ImitationObjective{std::move(target)}};
    }
    static ObjectiveSpec adversarial(std::vector<FlatVector> costs) {
        return Params{AdversarialObjective{std::move(costs)}};
    }
    static ObjectiveSpec quadratic_target(FlatVector weights, double target) {
        return Params{QuadraticTargetObjective{std::move(weights), target}};
    }
    static ObjectiveSpec visit_balance(double gamma, FlatVector selector) {
        return Params{VisitBalanceObjective{gamma, std::move(selector)}};
    }

    ObjectiveKind kind() const;
    const Params& params() const { return params_; }

    /// Length of the parameter vectors, or 0 when the kind has none (Entropy).
    std::size_t dimension() const;

    /// Invariant violations of the parameters; empty when well-formed.
    std::vector<std::string> violations() const;

    friend bool operator==(const ObjectiveSpec&, const ObjectiveSpec&) = default;

private:
    Params params_;
};

/// Exact objective value f(d). Throws std::invalid_argument on length mismatch.
double objective_value(const ObjectiveSpec& obj, std::span<const double> d);

/**
 * A subgradient of f at d.
 *
 * Entropy uses log(max(d_i, floor)) + 1, so it is finite on sparse points.
 * AdversarialMax returns the cost vector attaining the max, lowest index on ties.
 */
FlatVector objective_subgradient(const ObjectiveSpec& obj, std::span<const double> d);

/// L1 Lipschitz constant of f over the simplex (Entropy: over points >= floor).
double lipschitz_constant(const ObjectiveSpec& obj);

/// Bounds containing f over the whole simplex; used to rescale planner costs.
struct ValueBounds {
    double lo = 0.0;
    double hi = 0.0;
};

/// n_pairs is |S||A|; needed only for the Entropy lower bound -log(|S||A|).
ValueBounds objective_bounds(const ObjectiveSpec& obj, std::size_t n_pairs);

}  // namespace gumdp
