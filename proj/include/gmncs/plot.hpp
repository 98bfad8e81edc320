#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gmncs/analysis.hpp"

namespace gmncs {

inline constexpr double kDefaultJitter = 0.06;

/// One point of a per-group series with a horizontally displaced x value.
struct PlotPoint {
  std::string group_label;
  int author_bucket = 1;
  double x_jittered = 0.0;
  double gmncs = 0.0;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
};

/// Offset of series `index` among `series_count` series, centred on zero.
[[nodiscard]] double jitter_offset(std::size_t index, std::size_t series_count, double jitter = kDefaultJitter);

/// Series are the distinct group labels in lexicographic order; series i is
/// shifted by jitter_offset(i, k). Output follows the table's row order.
[[nodiscard]] std::vector<PlotPoint> jitter_plot_points(const AnalysisTable& table, double jitter = kDefaultJitter);

inline constexpr const char* kPlotCsvHeader = "group,author_bucket,x_jittered,gmncs,ci_low,ci_high";
void write_plot_csv(std::ostream& out, std::span<const PlotPoint> points);

}  // namespace gmncs
