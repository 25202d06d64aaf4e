#pragma once

#include <string>
#include <string_view>

namespace dwell {

/// Shortest-safe, locale-independent rendering at 17 significant digits.
std::string format_double(double value);

/// Locale-independent parse of a complete floating-point token.
/// Returns false if `text` is not entirely a number.
bool parse_double(std::string_view text, double& value);

}  // namespace dwell
