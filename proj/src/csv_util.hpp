#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gmncs::detail {

/// Splits one CSV line, honouring double-quoted fields with "" escapes.
/// Throws std::invalid_argument on malformed quoting.
[[nodiscard]] std::vector<std::string> split_csv_line(std::string_view line);

void write_csv_field(std::ostream& out, std::string_view s);

/// Shortest decimal form that parses back to the same double.
[[nodiscard]] std::string format_double(double v);
[[nodiscard]] std::string format_optional(const std::optional<double>& v);

/// Whole-cell parse; throws std::invalid_argument naming `field`.
[[nodiscard]] double parse_double(std::string_view cell, std::string_view field);
[[nodiscard]] std::optional<double> parse_optional_double(std::string_view cell, std::string_view field);
[[nodiscard]] long long parse_integer(std::string_view cell, std::string_view field);

[[nodiscard]] std::string_view trim(std::string_view s);

}  // namespace gmncs::detail
