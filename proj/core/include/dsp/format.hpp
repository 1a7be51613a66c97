#pragma once

#include <string>
#include <string_view>

namespace dsp {

/// Shortest decimal text that parses back to the same double.
[[nodiscard]] std::string format_double(double value);

/// Like format_double, but pads the fraction with zeros to at least
/// min_fraction digits ("0.208" -> "0.2080"). Parsing the result and
/// formatting again is the identity.
[[nodiscard]] std::string format_decimal(double value, int min_fraction = 4);

/// Strict parse: the whole string must be a number. Throws std::invalid_argument.
[[nodiscard]] double parse_double(std::string_view text);
[[nodiscard]] long long parse_integer(std::string_view text);

} // namespace dsp
