#include "gmncs/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "csv_util.hpp"

namespace gmncs {

namespace {

using nlohmann::json;
using detail::trim;
using detail::write_csv_field;

/// Per-line schema violation; converted into a RecordError by the caller.
struct LineError {
  std::string reason;
};

std::string to_upper_ascii(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(c >= 'a' && c <= 'z' ? c - 'a' + 'A' : c);
  });
  return out;
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

void check_record(const ArticleRecord& r) {
  if (r.id.empty()) throw LineError{"id must be non-empty"};
  if (r.categories.empty()) throw LineError{"categories must be non-empty"};
  for (const auto& c : r.categories) {
    if (c.empty()) throw LineError{"category identifiers must be non-empty"};
  }
  if (r.citations < 0) throw LineError{"citations must be >= 0"};
  if (r.author_count < 1) throw LineError{"author_count must be >= 1"};
  for (const auto& c : r.countries) {
    if (c.empty()) throw LineError{"country codes must be non-empty"};
  }
}

// ---------------------------------------------------------------------------
// JSONL

template <typename Int>
Int json_integer(const json& obj, const char* field) {
  const auto it = obj.find(field);
  if (it == obj.end()) throw LineError{std::string("missing field '") + field + "'"};
  if (!it->is_number_integer()) throw LineError{std::string("field '") + field + "' must be an integer"};
  if (it->is_number_unsigned()) {
    const auto v = it->get<std::uint64_t>();
    if (v > static_cast<std::uint64_t>(std::numeric_limits<Int>::max())) {
      throw LineError{std::string("field '") + field + "' is out of range"};
    }
    return static_cast<Int>(v);
  }
  const auto v = it->get<std::int64_t>();
  if (v < std::numeric_limits<Int>::min() || v > std::numeric_limits<Int>::max()) {
    throw LineError{std::string("field '") + field + "' is out of range"};
  }
  return static_cast<Int>(v);
}

std::vector<std::string> json_strings(const json& obj, const char* field) {
  const auto it = obj.find(field);
  if (it == obj.end()) throw LineError{std::string("missing field '") + field + "'"};
  if (!it->is_array()) throw LineError{std::string("field '") + field + "' must be an array of strings"};
  std::vector<std::string> out;
  out.reserve(it->size());
  for (const auto& v : *it) {
    if (!v.is_string()) throw LineError{std::string("field '") + field + "' must be an array of strings"};
    out.push_back(v.get<std::string>());
  }
  return out;
}

ArticleRecord parse_json_line(std::string_view line) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw LineError{std::string("invalid JSON: ") + e.what()};
  }
  if (!obj.is_object()) throw LineError{"line is not a JSON object"};

  static const std::set<std::string, std::less<>> known = {"id",        "year",         "categories",
                                                           "citations", "author_count", "countries"};
  for (const auto& [key, _] : obj.items()) {
    if (!known.contains(key)) throw LineError{"unexpected field '" + key + "'"};
  }

  ArticleRecord r;
  const auto id = obj.find("id");
  if (id == obj.end()) throw LineError{"missing field 'id'"};
  if (!id->is_string()) throw LineError{"field 'id' must be a string"};
  r.id = id->get<std::string>();
  r.year = json_integer<int>(obj, "year");
  r.categories = json_strings(obj, "categories");
  r.citations = json_integer<std::int64_t>(obj, "citations");
  r.author_count = json_integer<int>(obj, "author_count");
  const auto raw_countries = json_strings(obj, "countries");
  r.countries = normalize_countries(raw_countries);
  check_record(r);
  return r;
}

// ---------------------------------------------------------------------------
// CSV

std::vector<std::string> split_list(std::string_view cell) {
  std::vector<std::string> out;
  if (cell.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto pos = cell.find(';', start);
    out.emplace_back(trim(cell.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename Int>
Int csv_integer(std::string_view cell, const char* field) {
  cell = trim(cell);
  Int value{};
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (cell.empty() || ec == std::errc::invalid_argument || ptr != end) {
    throw LineError{std::string("field '") + field + "' must be an integer"};
  }
  if (ec == std::errc::result_out_of_range) {
    throw LineError{std::string("field '") + field + "' is out of range"};
  }
  return value;
}

ArticleRecord parse_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  try {
    fields = detail::split_csv_line(line);
  } catch (const std::invalid_argument& e) {
    throw LineError{e.what()};
  }
  if (fields.size() != 6) {
    throw LineError{"expected 6 fields, found " + std::to_string(fields.size())};
  }
  ArticleRecord r;
  r.id = fields[0];
  r.year = csv_integer<int>(fields[1], "year");
  r.categories = split_list(fields[2]);
  r.citations = csv_integer<std::int64_t>(fields[3], "citations");
  r.author_count = csv_integer<int>(fields[4], "author_count");
  const auto raw_countries = split_list(fields[5]);
  r.countries = normalize_countries(raw_countries);
  check_record(r);
  return r;
}

std::string join_list(std::span<const std::string> items, const char* field) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].find(';') != std::string::npos) {
      throw std::invalid_argument(std::string(field) + " entry '" + items[i] + "' contains ';'");
    }
    if (i != 0) out.push_back(';');
    out += items[i];
  }
  return out;
}

}  // namespace

std::optional<Format> format_from_name(std::string_view name) {
  const auto upper = to_upper_ascii(name);
  if (upper == "JSONL" || upper == "JSON") return Format::jsonl;
  if (upper == "CSV") return Format::csv;
  return std::nullopt;
}

std::optional<Format> format_from_extension(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  if (ext.empty()) return std::nullopt;
  return format_from_name(std::string_view(ext).substr(1));
}

std::vector<std::string> normalize_countries(std::span<const std::string> countries) {
  std::vector<std::string> out;
  out.reserve(countries.size());
  for (const auto& raw : countries) {
    auto code = to_upper_ascii(trim(raw));
    if (std::find(out.begin(), out.end(), code) == out.end()) out.push_back(std::move(code));
  }
  return out;
}

ParseResult parse_dataset(std::istream& source, Format format) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(source, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) continue;

    if (format == Format::csv && !header_seen) {
      if (trim(line) != kCsvHeader) {
        throw IngestError("line " + std::to_string(line_no) + ": expected CSV header '" +
                          std::string(kCsvHeader) + "'");
      }
      header_seen = true;
      continue;
    }

    try {
      result.records.push_back(format == Format::jsonl ? parse_json_line(line) : parse_csv_line(line));
    } catch (const LineError& e) {
      result.errors.push_back({line_no, e.reason});
    }
  }
  if (source.bad()) {
    throw IngestError("read error after line " + std::to_string(line_no));
  }
  return result;
}

ParseResult parse_file(const std::filesystem::path& path, std::optional<Format> format) {
  if (!format) format = format_from_extension(path);
  if (!format) {
    throw IngestError("cannot infer format of '" + path.string() + "'; use .jsonl or .csv");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IngestError("cannot open input file '" + path.string() + "'");
  }
  return parse_dataset(in, *format);
}

void write_jsonl(std::ostream& out, std::span<const ArticleRecord> records) {
  for (const auto& r : records) {
    // ordered_json keeps the documented field order.
    nlohmann::ordered_json obj;
    obj["id"] = r.id;
    obj["year"] = r.year;
    obj["categories"] = r.categories;
    obj["citations"] = r.citations;
    obj["author_count"] = r.author_count;
    obj["countries"] = r.countries;
    out << obj.dump() << '\n';
  }
}

void write_csv(std::ostream& out, std::span<const ArticleRecord> records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    write_csv_field(out, r.id);
    out << ',' << r.year << ',';
    write_csv_field(out, join_list(r.categories, "category"));
    out << ',' << r.citations << ',' << r.author_count << ',';
    write_csv_field(out, join_list(r.countries, "country"));
    out << '\n';
  }
}

void write_dataset(std::ostream& out, std::span<const ArticleRecord> records, Format format) {
  if (format == Format::jsonl) {
    write_jsonl(out, records);
  } else {
    write_csv(out, records);
  }
}

DatasetReport validate_dataset(std::span<const ArticleRecord> records) {
  DatasetReport report;
  report.record_count = records.size();
  report.empty = records.empty();
  if (report.empty) {
    report.warnings.emplace_back("dataset is empty");
    return report;
  }

  std::unordered_map<std::string_view, std::size_t> seen;
  for (const auto& r : records) {
    if (++seen[r.id] == 2) report.duplicates.push_back(r.id);
    report.year_min = std::min(report.year_min.value_or(r.year), r.year);
    report.year_max = std::max(report.year_max.value_or(r.year), r.year);
    for (const auto& c : r.categories) ++report.category_counts[c];
    if (r.countries.empty()) ++report.unknown_country_count;
    if (r.author_count > 10) ++report.over_ten_authors_count;
  }
  std::sort(report.duplicates.begin(), report.duplicates.end());

  if (!report.duplicates.empty()) {
    report.warnings.push_back(std::to_string(report.duplicates.size()) + " duplicate article id(s)");
  }
  return report;
}

}  // namespace gmncs
