#include "csv_util.hpp"

#include <array>
#include <charconv>
#include <ostream>
#include <stdexcept>

namespace gmncs::detail {

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  bool field_was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"' && current.empty() && !field_was_quoted) {
      quoted = true;
      field_was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
      field_was_quoted = false;
    } else {
      if (field_was_quoted) throw std::invalid_argument("unexpected character after closing quote");
      current.push_back(c);
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quoted field");
  fields.push_back(std::move(current));
  return fields;
}

void write_csv_field(std::ostream& out, std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) {
    out << s;
    return;
  }
  out << '"';
  for (const char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw std::runtime_error("cannot format floating-point value");
  return std::string(buf.data(), ptr);
}

std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view cell, std::string_view field) {
  cell = trim(cell);
  double v = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("field '" + std::string(field) + "' is not a number: '" + std::string(cell) + "'");
  }
  return v;
}

std::optional<double> parse_optional_double(std::string_view cell, std::string_view field) {
  if (trim(cell).empty()) return std::nullopt;
  return parse_double(cell, field);
}

long long parse_integer(std::string_view cell, std::string_view field) {
  cell = trim(cell);
  long long v = 0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc{} || ptr != end) {
    throw std::invalid_argument("field '" + std::string(field) + "' is not an integer: '" + std::string(cell) + "'");
  }
  return v;
}

}  // namespace gmncs::detail
