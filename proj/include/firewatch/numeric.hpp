#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace firewatch {

// Shortest decimal rendering that parses back to the same double.
std::string format_real(double value);

// Parses a plain or scientific decimal. The whole of `text` must be consumed;
// surrounding whitespace is not skipped. Returns nullopt on any failure,
// including non-finite results.
std::optional<double> parse_real(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace firewatch
