#include "gumdp/model.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace gumdp {

namespace {

std::string index_path(std::string_view name, std::initializer_list<std::size_t> idx) {
    std::ostringstream out;
    out << name;
    for (auto i : idx) out << '[' << i << ']';
    return out.str();
}

void check_distribution(std::span<const double> row, const std::string& path,
                        std::vector<Violation>& out) {
    double total = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (!(row[i] >= 0.0) || !std::isfinite(row[i])) {
            out.push_back({path, "negative or non-finite entry at index " + std::to_string(i)});
        }
        total += row[i];
    }
    if (!(std::abs(total - 1.0) <= kProbabilityTolerance)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "sums to " << total << ", expected 1";
        out.push_back({path, msg.str()});
    }
}

}  // namespace

TabularGumdp::TabularGumdp(std::size_t states, std::size_t actions, double discount)
    : n_states(states),
      n_actions(actions),
      transitions(actions * states * states, 0.0),
      p0(states, 0.0),
      gamma(discount) {}

std::vector<Violation> validate_gumdp(const TabularGumdp& g) {
    std::vector<Violation> out;
    if (g.n_states == 0) out.push_back({"n_states", "must be positive"});
    if (g.n_actions == 0) out.push_back({"n_actions", "must be positive"});
    if (!(g.gamma > 0.0 && g.gamma < 1.0)) {
        out.push_back({"gamma", "gamma out of range (0, 1)"});
    }
    if (g.transitions.size() != g.n_actions * g.n_states * g.n_states) {
        out.push_back({"transitions", "expected " +
                                          std::to_string(g.n_actions * g.n_states * g.n_states) +
                                          " entries, found " +
                                          std::to_string(g.transitions.size())});
    } else {
        for (ActionId a = 0; a < g.n_actions; ++a)
            for (StateId s = 0; s < g.n_states; ++s)
                check_distribution(g.row(a, s), index_path("transitions", {a, s}), out);
    }
    if (g.p0.size() != g.n_states) {
        out.push_back({"p0", "expected " + std::to_string(g.n_states) + " entries, found " +
                                 std::to_string(g.p0.size())});
    } else {
        check_distribution(g.p0, "p0", out);
    }
    for (auto& msg : g.objective.violations()) out.push_back({"objective", msg});
    const auto dim = g.objective.dimension();
    if (dim != 0 && dim != g.n_pairs()) {
        out.push_back({"objective", "parameter length " + std::to_string(dim) +
                                        " does not match n_states * n_actions = " +
                                        std::to_string(g.n_pairs())});
    }
    return out;
}

void require_valid(const TabularGumdp& g) {
    auto violations = validate_gumdp(g);
    if (violations.empty()) return;
    std::ostringstream msg;
    msg << "invalid GUMDP:";
    for (auto& v : violations) msg << "\n  " << v.path << ": " << v.message;
    throw std::invalid_argument(msg.str());
}

double OccupancyVector::sum() const {
    return std::accumulate(entries_.begin(), entries_.end(), 0.0);
}

bool OccupancyVector::is_valid(double tol) const {
    for (double x : entries_)
        if (!(x >= 0.0)) return false;
    return !entries_.empty() && std::abs(sum() - 1.0) <= tol;
}

StationaryPolicy::StationaryPolicy(std::size_t n_states, std::size_t n_actions)
    : probs_(n_states, std::vector<double>(n_actions, 1.0 / static_cast<double>(n_actions))) {}

StationaryPolicy::StationaryPolicy(std::vector<std::vector<double>> probs)
    : probs_(std::move(probs)) {
    for (std::size_t s = 1; s < probs_.size(); ++s)
        if (probs_[s].size() != probs_[0].size())
            throw std::invalid_argument("StationaryPolicy: ragged probability rows");
}

StationaryPolicy StationaryPolicy::deterministic(std::span<const ActionId> actions,
                                                 std::size_t n_actions) {
    std::vector<std::vector<double>> probs(actions.size(), std::vector<double>(n_actions, 0.0));
    for (std::size_t s = 0; s < actions.size(); ++s) {
        if (actions[s] >= n_actions)
            throw std::invalid_argument("StationaryPolicy: action out of range");
        probs[s][actions[s]] = 1.0;
    }
    return StationaryPolicy(std::move(probs));
}

bool StationaryPolicy::is_valid(double tol) const {
    for (const auto& row : probs_) {
        double total = 0.0;
        for (double p : row) {
            if (!(p >= 0.0)) return false;
            total += p;
        }
        if (std::abs(total - 1.0) > tol) return false;
    }
    return !probs_.empty();
}

}  // namespace gumdp
