#include "gumdp/baselines.hpp"

#include "gumdp/io.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gumdp {

namespace {

void require_policy_shape(const TabularGumdp& g, const StationaryPolicy& pi) {
    if (pi.n_states() != g.n_states || pi.n_actions() != g.n_actions)
        throw std::invalid_argument("policy shape does not match the GUMDP");
    if (!pi.is_valid()) throw std::invalid_argument("policy rows are not distributions");
}

// P_pi[s][s'] = sum_a pi(a|s) P^a(s'|s)
Eigen::MatrixXd policy_transitions(const TabularGumdp& g, const StationaryPolicy& pi) {
    const auto n = static_cast<Eigen::Index>(g.n_states);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (StateId s = 0; s < g.n_states; ++s)
        for (ActionId a = 0; a < g.n_actions; ++a) {
            const double p = pi(s, a);
            if (p == 0.0) continue;
            auto row = g.row(a, s);
            for (StateId next = 0; next < g.n_states; ++next)
                m(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(next)) += p * row[next];
        }
    return m;
}

OccupancyVector pairs_from_states(const TabularGumdp& g, const StationaryPolicy& pi,
                                  const Eigen::VectorXd& x) {
    std::vector<double> d(g.n_pairs());
    for (StateId s = 0; s < g.n_states; ++s)
        for (ActionId a = 0; a < g.n_actions; ++a)
            d[g.pair_index(s, a)] = x(static_cast<Eigen::Index>(s)) * pi(s, a);
    return OccupancyVector(std::move(d));
}

}  // namespace

OccupancyVector expected_occupancy(const TabularGumdp& g, const StationaryPolicy& pi) {
    require_policy_shape(g, pi);
    const auto n = static_cast<Eigen::Index>(g.n_states);
    const Eigen::MatrixXd a =
        Eigen::MatrixXd::Identity(n, n) - g.gamma * policy_transitions(g, pi).transpose();
    const Eigen::VectorXd b =
        (1.0 - g.gamma) * Eigen::Map<const Eigen::VectorXd>(g.p0.data(), n);
    const Eigen::VectorXd x = a.partialPivLu().solve(b);
    const double residual = (a * x - b).lpNorm<Eigen::Infinity>();
    if (!(residual <= 1e-10))
        throw std::runtime_error("expected_occupancy: linear solve residual " +
                                 format_double(residual) + " exceeds 1e-10");
    return pairs_from_states(g, pi, x);
}

OccupancyVector truncated_expected_occupancy(const TabularGumdp& g, const StationaryPolicy& pi,
                                             std::size_t horizon) {
    require_policy_shape(g, pi);
    if (horizon == 0) throw std::invalid_argument("truncated_expected_occupancy: horizon = 0");
    const auto n = static_cast<Eigen::Index>(g.n_states);
    const Eigen::MatrixXd pt = policy_transitions(g, pi).transpose();
    Eigen::VectorXd mu = Eigen::Map<const Eigen::VectorXd>(g.p0.data(), n);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
    double discount = 1.0;
    for (std::size_t t = 0; t < horizon; ++t) {
        acc += discount * mu;
        mu = pt * mu;
        discount *= g.gamma;
    }
    acc *= (1.0 - g.gamma) / (1.0 - std::pow(g.gamma, static_cast<double>(horizon)));
    return pairs_from_states(g, pi, acc);
}

double flow_residual(const TabularGumdp& g, const OccupancyVector& d) {
    if (d.size() != g.n_pairs()) throw std::invalid_argument("flow_residual: wrong length");
    std::vector<double> inflow(g.n_states);
    for (StateId s = 0; s < g.n_states; ++s) inflow[s] = (1.0 - g.gamma) * g.p0[s];
    for (StateId prev = 0; prev < g.n_states; ++prev)
        for (ActionId a = 0; a < g.n_actions; ++a) {
            const double mass = d[g.pair_index(prev, a)];
            auto row = g.row(a, prev);
            for (StateId s = 0; s < g.n_states; ++s) inflow[s] += g.gamma * row[s] * mass;
        }
    double worst = 0.0;
    for (StateId s = 0; s < g.n_states; ++s) {
        double out = 0.0;
        for (ActionId a = 0; a < g.n_actions; ++a) out += d[g.pair_index(s, a)];
        worst = std::max(worst, std::abs(out - inflow[s]));
    }
    return worst;
}

ValueIterationResult value_iteration_linear(const TabularGumdp& g, const std::vector<double>& cost,
                                            double tol) {
    if (cost.size() != g.n_pairs()) throw std::invalid_argument("value_iteration: cost length");
    if (!(tol > 0.0)) throw std::invalid_argument("value_iteration: tol must be positive");
    std::vector<double> v(g.n_states, 0.0), next_v(g.n_states);
    std::vector<ActionId> greedy(g.n_states, 0);

    auto backup = [&](const std::vector<double>& values) {
        for (StateId s = 0; s < g.n_states; ++s) {
            double best = std::numeric_limits<double>::infinity();
            ActionId arg = 0;
            for (ActionId a = 0; a < g.n_actions; ++a) {
                auto row = g.row(a, s);
                double q = cost[g.pair_index(s, a)];
                for (StateId n = 0; n < g.n_states; ++n) q += g.gamma * row[n] * values[n];
                if (q < best) {
                    best = q;
                    arg = a;
                }
            }
            next_v[s] = best;
            greedy[s] = arg;
        }
    };

    for (;;) {
        backup(v);
        double residual = 0.0;
        for (StateId s = 0; s < g.n_states; ++s)
            residual = std::max(residual, std::abs(next_v[s] - v[s]));
        v.swap(next_v);
        if (residual <= tol) break;
    }
    // greedy policy with respect to the returned values
    backup(v);
    return {StationaryPolicy::deterministic(greedy, g.n_actions), greedy, v};
}

FrankWolfeResult frank_wolfe_infinite_trials(const TabularGumdp& g, std::size_t iterations,
                                             bool keep_iterates) {
    if (iterations == 0) throw std::invalid_argument("frank_wolfe: iterations must be positive");
    FrankWolfeResult r;
    r.d = expected_occupancy(g, StationaryPolicy(g.n_states, g.n_actions));
    r.trace.push_back(objective_value(g.objective, r.d.entries()));
    if (keep_iterates) r.iterates.push_back(r.d);
    for (std::size_t k = 0; k < iterations; ++k) {
        const auto grad = objective_subgradient(g.objective, r.d.entries());
        const auto vertex = expected_occupancy(g, value_iteration_linear(g, grad).policy);
        const double eta = 2.0 / (static_cast<double>(k) + 2.0);
        auto& d = r.d.mutable_entries();
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = (1.0 - eta) * d[i] + eta * vertex[i];
        r.trace.push_back(objective_value(g.objective, r.d.entries()));
        if (keep_iterates) r.iterates.push_back(r.d);
    }
    return r;
}

void write_trace_csv(std::ostream& out, const std::vector<double>& trace) {
    out << "k,f_value\n";
    for (std::size_t k = 0; k < trace.size(); ++k) out << k << ',' << format_double(trace[k]) << '\n';
}

StationaryPolicy policy_from_occupancy(const OccupancyVector& d, std::size_t n_states,
                                       std::size_t n_actions) {
    if (d.size() != n_states * n_actions)
        throw std::invalid_argument("policy_from_occupancy: wrong length");
    std::vector<std::vector<double>> rows(n_states, std::vector<double>(n_actions));
    for (StateId s = 0; s < n_states; ++s) {
        double mass = 0.0;
        for (ActionId a = 0; a < n_actions; ++a) mass += d[s * n_actions + a];
        for (ActionId a = 0; a < n_actions; ++a)
            rows[s][a] = mass < 1e-12 ? 1.0 / static_cast<double>(n_actions)
                                      : d[s * n_actions + a] / mass;
    }
    return StationaryPolicy(std::move(rows));
}

RandomPolicy random_policy(std::size_t n_actions) { return RandomPolicy(n_actions); }

StationaryPolicy solver_policy(const TabularGumdp& g, std::size_t fw_iterations) {
    const auto fw = frank_wolfe_infinite_trials(g, fw_iterations);
    return policy_from_occupancy(fw.d, g.n_states, g.n_actions);
}

}  // namespace gumdp
