#pragma once

#include <string>

#include <json.hpp>

#include "redpath/free_group.hpp"
#include "redpath/signature.hpp"

namespace redpath {

/// {"d": int, "depth": int, "coeffs": {"": 1.0, "1": ..., "1 2": ...}}
/// Keys are space-separated 1-based indices in shortlex order; absent keys are zero.
nlohmann::ordered_json signature_to_json(const TensorSeries<double>& x);

/// Throws std::invalid_argument on any schema violation.
TensorSeries<double> signature_from_json(const nlohmann::ordered_json& j);

/// "r:index" items separated by commas, e.g. "2:1,-3.5:2". Empty text is the empty path.
/// Throws std::invalid_argument on malformed items or indices outside [1, d] (d > 0).
AxisPath parse_axis_path(const std::string& text, int d = 0);

/// Inverse of parse_axis_path, with r printed to 12 significant digits.
std::string format_axis_path(const AxisPath& path);

}  // namespace redpath
