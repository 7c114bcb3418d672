#pragma once

// Deterministic JSON and CSV emission.

#include <iosfwd>
#include <string>

#include <json.hpp>

namespace scalrig {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

/// Floats are written with 17 significant digits; NaN and infinities become null.
std::string dump_json(const Json& value, int indent = 2);

/// {command, inputs, results, residuals, version}.
Json make_report(const std::string& command, Json inputs, Json results, Json residuals);

/// Shortest field formatting for CSV: 17 significant digits, "nan" for NaN.
std::string csv_number(double v);

}  // namespace scalrig
