#include "gmncs/plot.hpp"

#include <algorithm>
#include <ostream>

#include "csv_util.hpp"

namespace gmncs {

double jitter_offset(std::size_t index, std::size_t series_count, double jitter) {
  if (series_count == 0) return 0.0;
  return (static_cast<double>(index) - static_cast<double>(series_count - 1) / 2.0) * jitter;
}

std::vector<PlotPoint> jitter_plot_points(const AnalysisTable& table, double jitter) {
  std::vector<std::string> series;
  for (const auto& row : table.rows) series.push_back(row.group_label);
  std::sort(series.begin(), series.end());
  series.erase(std::unique(series.begin(), series.end()), series.end());

  std::vector<PlotPoint> points;
  points.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    const auto index = static_cast<std::size_t>(
        std::lower_bound(series.begin(), series.end(), row.group_label) - series.begin());
    points.push_back({.group_label = row.group_label,
                      .author_bucket = row.author_bucket,
                      .x_jittered = row.author_bucket + jitter_offset(index, series.size(), jitter),
                      .gmncs = row.gmncs,
                      .ci_low = row.ci_low,
                      .ci_high = row.ci_high});
  }
  return points;
}

void write_plot_csv(std::ostream& out, std::span<const PlotPoint> points) {
  out << kPlotCsvHeader << '\n';
  for (const auto& p : points) {
    detail::write_csv_field(out, p.group_label);
    out << ',' << bucket_label(p.author_bucket) << ',' << detail::format_double(p.x_jittered) << ','
        << detail::format_double(p.gmncs) << ',' << detail::format_optional(p.ci_low) << ','
        << detail::format_optional(p.ci_high) << '\n';
  }
}

}  // namespace gmncs
