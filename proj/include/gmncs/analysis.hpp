#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "gmncs/baselines.hpp"
#include "gmncs/ingest.hpp"

namespace gmncs {

/// Bucket value used for articles with more than ten authors.
inline constexpr int kOverflowBucket = 11;
inline constexpr int kMaxBucket = 10;
inline constexpr const char* kAllGroup = "All";

enum class CountryStatus { domestic, international, unknown };

[[nodiscard]] const char* to_string(CountryStatus status) noexcept;

struct CollaborationProfile {
  int author_bucket = 1;
  CountryStatus country_status = CountryStatus::unknown;
  /// The record's de-duplicated countries; exactly one entry when domestic.
  std::vector<std::string> countries;

  [[nodiscard]] bool overflow() const noexcept { return author_bucket == kOverflowBucket; }
  /// The single country of a domestic record, empty otherwise.
  [[nodiscard]] std::string domestic_country() const;
};

[[nodiscard]] CollaborationProfile classify(const ArticleRecord& record);

using ProfileMap = std::unordered_map<std::string, CollaborationProfile>;

[[nodiscard]] ProfileMap classify_all(std::span<const ArticleRecord> records);

/// How observations of a multiply-classified article enter a group.
enum class Aggregation {
  /// Every (article, category) assignment is its own observation.
  per_assignment,
  /// One observation per article: the mean of its defined category scores.
  per_article_mean,
};

struct GroupingSpec {
  /// Country groups to emit. Empty means every country that has at least
  /// one qualifying record.
  std::vector<std::string> countries;
  bool include_all_group = true;
  /// When false, internationally co-authored records also join the group of
  /// every selected country on their affiliation list.
  bool domestic_only = true;
  int bucket_min = 1;
  int bucket_max = kMaxBucket;
  /// Emit a "10+" bucket for records with more than ten authors.
  bool overflow_bucket = false;
  std::size_t min_n = 1;
  std::size_t min_n_ci = 2;
  double level = 0.95;
  /// Restrict grouped rows to these publication years (empty = all). The
  /// baselines are always computed from the full dataset.
  std::vector<int> years;
  std::vector<std::string> categories;
  Aggregation aggregation = Aggregation::per_assignment;

  /// Throws std::invalid_argument describing the first bad field.
  void validate() const;
};

struct GroupSummary {
  std::string group_label;
  int author_bucket = 1;
  std::size_t n = 0;
  double gmncs = 0.0;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  double level = 0.95;
};

/// Rows ordered by group label, then author bucket.
struct AnalysisTable {
  std::vector<GroupSummary> rows;
  /// Observations that fell in a degenerate cell and had no geometric score.
  std::size_t degenerate_excluded = 0;
  std::vector<FieldYearKey> degenerate_cells;
};

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

[[nodiscard]] AnalysisTable group_gmncs(std::span<const NormalizedObservation> observations,
                                        const ProfileMap& profiles, const GroupingSpec& spec);

/// Baselines, normalization, classification and grouping in one call.
/// Throws AnalysisError on duplicate ids or when every cell is degenerate.
[[nodiscard]] AnalysisTable analyze_dataset(std::span<const ArticleRecord> records, const GroupingSpec& spec);

[[nodiscard]] std::string bucket_label(int bucket);
[[nodiscard]] int parse_bucket_label(std::string_view label);

inline constexpr const char* kAnalysisCsvHeader = "group,author_bucket,n,gmncs,ci_low,ci_high";
void write_analysis_csv(std::ostream& out, const AnalysisTable& table);
/// Reads rows back; level is not part of the file and is set to `level`.
[[nodiscard]] AnalysisTable read_analysis_csv(std::istream& in, double level = 0.95);

}  // namespace gmncs
