#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace brickvm::text {

/// Shortest decimal text that parses back to exactly `value`.
/// Integral values print without a fraction ("3", "-10").
std::string format_number(double value);

/// Parses a complete decimal literal (optional sign, fraction, exponent).
/// Leading/trailing whitespace is allowed; anything else fails.
std::optional<double> parse_number(std::string_view text);

/// Parses the longest leading decimal literal; 0 when there is none.
double parse_leading_number(std::string_view text);

std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// Code points of a UTF-8 string. Invalid bytes decode as single units.
std::vector<std::string> utf8_chars(std::string_view s);

/// Escapes '%', '\n', '\r', '=' and ',' as %XX so values survive line/field framing.
std::string percent_escape(std::string_view s);
std::string percent_unescape(std::string_view s);

}  // namespace brickvm::text
