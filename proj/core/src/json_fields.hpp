#pragma once

// Typed field access on nlohmann::json with path-qualified diagnostics.

#include "gumdp/io.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gumdp::detail {

using Json = nlohmann::json;

inline Json parse_json(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        // e.byte is 1-based; translate to line/column
        std::size_t line = 1, column = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError("JSON syntax error at line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + e.what());
    }
}

inline std::string join_path(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline const Json& require_field(const Json& j, const std::string& path, std::string_view key) {
    if (!j.is_object()) throw ParseError("'" + (path.empty() ? "<root>" : path) + "' must be an object");
    auto it = j.find(std::string(key));
    if (it == j.end()) throw ParseError("missing field '" + join_path(path, key) + "'");
    return *it;
}

inline double as_double(const Json& j, const std::string& path) {
    if (!j.is_number()) throw ParseError("field '" + path + "' must be a number");
    return j.get<double>();
}

inline std::uint64_t as_uint(const Json& j, const std::string& path) {
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0))
        throw ParseError("field '" + path + "' must be a non-negative integer");
    return j.get<std::uint64_t>();
}

inline std::uint64_t as_positive(const Json& j, const std::string& path) {
    const auto v = as_uint(j, path);
    if (v == 0) throw ParseError("field '" + path + "' must be positive");
    return v;
}

inline bool as_bool(const Json& j, const std::string& path) {
    if (!j.is_boolean()) throw ParseError("field '" + path + "' must be true or false");
    return j.get<bool>();
}

inline std::string as_string(const Json& j, const std::string& path) {
    if (!j.is_string()) throw ParseError("field '" + path + "' must be a string");
    return j.get<std::string>();
}

inline std::vector<double> as_vector(const Json& j, const std::string& path) {
    if (!j.is_array()) throw ParseError("field '" + path + "' must be an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(as_double(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline std::vector<std::vector<double>> as_matrix(const Json& j, const std::string& path) {
    if (!j.is_array()) throw ParseError("field '" + path + "' must be an array of arrays");
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(as_vector(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

Json objective_json(const ObjectiveSpec& obj);
ObjectiveSpec objective_from(const Json& j, const std::string& path);

}  // namespace gumdp::detail
