#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gmncs {

/// One journal article as seen by the indicator pipeline.
struct ArticleRecord {
  std::string id;
  int year = 0;
  std::vector<std::string> categories;
  std::int64_t citations = 0;
  int author_count = 1;
  /// Upper-case, de-duplicated, first-occurrence order.
  std::vector<std::string> countries;

  friend bool operator==(const ArticleRecord&, const ArticleRecord&) = default;
};

/// A rejected input line. `line` is 1-based and counts every physical line,
/// including the CSV header.
struct RecordError {
  std::size_t line = 0;
  std::string reason;
};

/// Raised when the source as a whole cannot be read.
class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { jsonl, csv };

struct ParseResult {
  std::vector<ArticleRecord> records;
  std::vector<RecordError> errors;
};

[[nodiscard]] std::optional<Format> format_from_name(std::string_view name);
[[nodiscard]] std::optional<Format> format_from_extension(const std::filesystem::path& path);

/// Streams `source` line by line. Blank lines are skipped; every other line
/// yields exactly one record or one error. For CSV the first non-blank line
/// must be the fixed header, otherwise IngestError is thrown.
[[nodiscard]] ParseResult parse_dataset(std::istream& source, Format format);

/// Opens `path` and parses it; format falls back to the file extension.
[[nodiscard]] ParseResult parse_file(const std::filesystem::path& path,
                                     std::optional<Format> format = std::nullopt);

/// Upper-cases and de-duplicates country codes, keeping first occurrences.
[[nodiscard]] std::vector<std::string> normalize_countries(std::span<const std::string> countries);

void write_jsonl(std::ostream& out, std::span<const ArticleRecord> records);
void write_csv(std::ostream& out, std::span<const ArticleRecord> records);
void write_dataset(std::ostream& out, std::span<const ArticleRecord> records, Format format);

inline constexpr std::string_view kCsvHeader = "id,year,categories,citations,author_count,countries";

struct DatasetReport {
  std::size_t record_count = 0;
  std::vector<std::string> duplicates;
  std::optional<int> year_min;
  std::optional<int> year_max;
  std::map<std::string, std::size_t> category_counts;
  std::size_t unknown_country_count = 0;
  std::size_t over_ten_authors_count = 0;
  bool empty = true;
  std::vector<std::string> warnings;
};

[[nodiscard]] DatasetReport validate_dataset(std::span<const ArticleRecord> records);

}  // namespace gmncs
