#pragma once

#include "gumdp/model.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace gumdp {

/// Shortest decimal form that reads back to the same double; '.' decimal point,
/// independent of the global locale.
std::string format_double(double x);

/// Thrown for malformed documents; the message names the offending field or position.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * GUMDP JSON document:
 *
 *   { "n_states": S, "n_actions": A, "transitions": [A][S][S], "p0": [S],
 *     "gamma": g, "objective": { "kind": "...", ...params } }
 *
 * Objective params by kind: Linear {costs}, Entropy {floor}, ImitationL2
 * {target}, AdversarialMax {costs: [[...], ...]}, QuadraticTarget {weights,
 * target}, VisitBalance {gamma, selector}. Doubles round-trip bit-exactly.
 */
std::string gumdp_to_json(const TabularGumdp& g, int indent = 2);
TabularGumdp gumdp_from_json(std::string_view text);

std::string objective_to_json(const ObjectiveSpec& obj);
ObjectiveSpec objective_from_json(std::string_view text);

/// {"probs": [[...], ...]} with one row per state.
std::string policy_to_json(const StationaryPolicy& pi);
StationaryPolicy policy_from_json(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

TabularGumdp load_gumdp(const std::filesystem::path& path);
void save_gumdp(const std::filesystem::path& path, const TabularGumdp& g);

}  // namespace gumdp
