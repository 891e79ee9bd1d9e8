#include "gumdp/io.hpp"

#include "json_fields.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace gumdp {

namespace detail {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Json objective_json(const ObjectiveSpec& obj) {
    Json j;
    j["kind"] = std::string(to_string(obj.kind()));
    std::visit(Overloaded{
                   [&](const LinearObjective& o) { j["costs"] = o.costs; },
                   [&](const EntropyObjective& o) { j["floor"] = o.floor; },
                   [&](const ImitationObjective& o) { j["target"] = o.target; },
                   [&](const AdversarialObjective& o) { j["costs"] = o.costs; },
                   [&](const QuadraticTargetObjective& o) {
                       j["weights"] = o.weights;
                       j["target"] = o.target;
                   },
                   [&](const VisitBalanceObjective& o) {
                       j["gamma"] = o.gamma;
                       j["selector"] = o.selector;
                   },
               },
               obj.params());
    return j;
}

ObjectiveSpec objective_from(const Json& j, const std::string& path) {
    const auto kind_name = as_string(require_field(j, path, "kind"), join_path(path, "kind"));
    ObjectiveKind kind;
    try {
        kind = objective_kind_from_string(kind_name);
    } catch (const std::invalid_argument& e) {
        throw ParseError("field '" + join_path(path, "kind") + "': " + e.what());
    }
    auto field = [&](std::string_view key) -> std::pair<const Json&, std::string> {
        return {require_field(j, path, key), join_path(path, key)};
    };
    switch (kind) {
        case ObjectiveKind::Linear: {
            auto [f, p] = field("costs");
            return ObjectiveSpec::linear(as_vector(f, p));
        }
        case ObjectiveKind::Entropy: {
            if (!j.contains("floor")) return ObjectiveSpec::entropy();
            auto [f, p] = field("floor");
            return ObjectiveSpec::entropy(as_double(f, p));
        }
        case ObjectiveKind::ImitationL2: {
            auto [f, p] = field("target");
            return ObjectiveSpec::imitation(as_vector(f, p));
        }
        case ObjectiveKind::AdversarialMax: {
            auto [f, p] = field("costs");
            return ObjectiveSpec::adversarial(as_matrix(f, p));
        }
        case ObjectiveKind::QuadraticTarget: {
            auto [w, wp] = field("weights");
            auto [k, kp] = field("target");
            return ObjectiveSpec::quadratic_target(as_vector(w, wp), as_double(k, kp));
        }
        case ObjectiveKind::VisitBalance: {
            auto [gm, gp] = field("gamma");
            auto [s, sp] = field("selector");
            return ObjectiveSpec::visit_balance(as_double(gm, gp), as_vector(s, sp));
        }
    }
    throw ParseError("unhandled objective kind");
}

}  // namespace detail

using detail::Json;

std::string format_double(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, end);
}

std::string gumdp_to_json(const TabularGumdp& g, int indent) {
    Json j;
    j["n_states"] = g.n_states;
    j["n_actions"] = g.n_actions;
    Json tensor = Json::array();
    for (ActionId a = 0; a < g.n_actions; ++a) {
        Json matrix = Json::array();
        for (StateId s = 0; s < g.n_states; ++s) {
            auto row = g.row(a, s);
            matrix.push_back(std::vector<double>(row.begin(), row.end()));
        }
        tensor.push_back(std::move(matrix));
    }
    j["transitions"] = std::move(tensor);
    j["p0"] = g.p0;
    j["gamma"] = g.gamma;
    j["objective"] = detail::objective_json(g.objective);
    return j.dump(indent) + "\n";
}

TabularGumdp gumdp_from_json(std::string_view text) {
    using namespace detail;
    const Json j = parse_json(text);
    const auto n_states = as_positive(require_field(j, "", "n_states"), "n_states");
    const auto n_actions = as_positive(require_field(j, "", "n_actions"), "n_actions");
    TabularGumdp g(n_states, n_actions, as_double(require_field(j, "", "gamma"), "gamma"));

    const Json& tensor = require_field(j, "", "transitions");
    if (!tensor.is_array() || tensor.size() != n_actions)
        throw ParseError("field 'transitions' must have n_actions = " + std::to_string(n_actions) +
                         " matrices");
    for (ActionId a = 0; a < n_actions; ++a) {
        const std::string path = "transitions[" + std::to_string(a) + "]";
        const auto matrix = as_matrix(tensor[a], path);
        if (matrix.size() != n_states)
            throw ParseError("field '" + path + "' must have n_states rows");
        for (StateId s = 0; s < n_states; ++s) {
            if (matrix[s].size() != n_states)
                throw ParseError("field '" + path + "[" + std::to_string(s) +
                                 "]' must have n_states entries");
            for (StateId next = 0; next < n_states; ++next) g.transition(a, s, next) = matrix[s][next];
        }
    }
    g.p0 = as_vector(require_field(j, "", "p0"), "p0");
    if (g.p0.size() != n_states) throw ParseError("field 'p0' must have n_states entries");
    g.objective = objective_from(require_field(j, "", "objective"), "objective");
    return g;
}

std::string objective_to_json(const ObjectiveSpec& obj) {
    return detail::objective_json(obj).dump() + "\n";
}

ObjectiveSpec objective_from_json(std::string_view text) {
    return detail::objective_from(detail::parse_json(text), "");
}

std::string policy_to_json(const StationaryPolicy& pi) {
    Json j;
    j["probs"] = pi.rows();
    return j.dump(2) + "\n";
}

StationaryPolicy policy_from_json(std::string_view text) {
    using namespace detail;
    const Json j = parse_json(text);
    StationaryPolicy pi(as_matrix(require_field(j, "", "probs"), "probs"));
    if (!pi.is_valid()) throw ParseError("field 'probs': rows must be probability vectors");
    return pi;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

TabularGumdp load_gumdp(const std::filesystem::path& path) {
    return gumdp_from_json(read_text_file(path));
}

void save_gumdp(const std::filesystem::path& path, const TabularGumdp& g) {
    write_text_file(path, gumdp_to_json(g));
}

}  // namespace gumdp
