#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmncs/ingest.hpp"

namespace gmncs {

/// A normalization cell: one subject category in one publication year.
struct FieldYearKey {
  std::string category;
  int year = 0;

  friend auto operator<=>(const FieldYearKey&, const FieldYearKey&) = default;
  friend bool operator==(const FieldYearKey&, const FieldYearKey&) = default;
};

[[nodiscard]] std::string to_string(const FieldYearKey& key);

struct Baseline {
  FieldYearKey key;
  std::size_t n = 0;
  double arith_mean = 0.0;
  double geo_mean = 0.0;

  /// A cell with no citations at all cannot normalize anything.
  [[nodiscard]] bool degenerate() const noexcept { return !(geo_mean > 0.0) || !(arith_mean > 0.0); }
};

using BaselineTable = std::map<FieldYearKey, Baseline>;

struct NormalizedObservation {
  std::string article_id;
  FieldYearKey key;
  std::int64_t raw_citations = 0;
  std::optional<double> score_arith;
  std::optional<double> score_geo;
};

class MissingBaselineError : public std::out_of_range {
 public:
  explicit MissingBaselineError(const FieldYearKey& key);
};

/// Folds every (article, category) assignment into its cell. Records with
/// unknown countries or more than ten authors count like any other.
[[nodiscard]] BaselineTable compute_baselines(std::span<const ArticleRecord> records);

/// Score of `record` against the (category, record.year) cell. A score is
/// absent when the corresponding cell mean is zero.
[[nodiscard]] NormalizedObservation normalize(const ArticleRecord& record, const std::string& category,
                                              const BaselineTable& baselines);

/// One observation per (record, category) assignment, in input order.
[[nodiscard]] std::vector<NormalizedObservation> normalize_all(std::span<const ArticleRecord> records,
                                                               const BaselineTable& baselines);

[[nodiscard]] std::vector<FieldYearKey> degenerate_cells(const BaselineTable& baselines);

inline constexpr const char* kBaselineCsvHeader = "category,year,n,arith_mean,geo_mean";

/// Doubles are written in shortest round-trip form.
void write_baselines_csv(std::ostream& out, const BaselineTable& baselines);
[[nodiscard]] BaselineTable read_baselines_csv(std::istream& in);

inline constexpr const char* kObservationCsvHeader = "article_id,category,year,citations,score_arith,score_geo";
void write_observations_csv(std::ostream& out, std::span<const NormalizedObservation> observations);

}  // namespace gmncs
