#include "gmncs/baselines.hpp"

#include <istream>
#include <ostream>

#include "csv_util.hpp"
#include "gmncs/stats.hpp"

namespace gmncs {

std::string to_string(const FieldYearKey& key) { return "(" + key.category + ", " + std::to_string(key.year) + ")"; }

MissingBaselineError::MissingBaselineError(const FieldYearKey& key)
    : std::out_of_range("no baseline for cell " + to_string(key)) {}

BaselineTable compute_baselines(std::span<const ArticleRecord> records) {
  // Cells keep their observations in input order so each reduction is
  // performed in a fixed order.
  std::map<FieldYearKey, std::vector<double>> cells;
  for (const auto& r : records) {
    for (const auto& category : r.categories) {
      cells[FieldYearKey{category, r.year}].push_back(static_cast<double>(r.citations));
    }
  }

  BaselineTable table;
  for (auto& [key, citations] : cells) {
    Baseline b{.key = key,
               .n = citations.size(),
               .arith_mean = stats::arithmetic_mean(citations),
               .geo_mean = stats::geometric_mean(citations)};
    table.emplace_hint(table.end(), key, std::move(b));
  }
  return table;
}

NormalizedObservation normalize(const ArticleRecord& record, const std::string& category,
                                const BaselineTable& baselines) {
  FieldYearKey key{category, record.year};
  const auto it = baselines.find(key);
  if (it == baselines.end()) throw MissingBaselineError(key);
  const Baseline& b = it->second;

  NormalizedObservation obs{.article_id = record.id,
                            .key = std::move(key),
                            .raw_citations = record.citations,
                            .score_arith = std::nullopt,
                            .score_geo = std::nullopt};
  const auto c = static_cast<double>(record.citations);
  if (b.arith_mean > 0.0) obs.score_arith = c / b.arith_mean;
  if (b.geo_mean > 0.0) obs.score_geo = c / b.geo_mean;
  return obs;
}

std::vector<NormalizedObservation> normalize_all(std::span<const ArticleRecord> records,
                                                 const BaselineTable& baselines) {
  std::vector<NormalizedObservation> out;
  for (const auto& r : records) {
    for (const auto& category : r.categories) out.push_back(normalize(r, category, baselines));
  }
  return out;
}

std::vector<FieldYearKey> degenerate_cells(const BaselineTable& baselines) {
  std::vector<FieldYearKey> out;
  for (const auto& [key, b] : baselines) {
    if (b.degenerate()) out.push_back(key);
  }
  return out;
}

void write_baselines_csv(std::ostream& out, const BaselineTable& baselines) {
  out << kBaselineCsvHeader << '\n';
  for (const auto& [key, b] : baselines) {
    detail::write_csv_field(out, key.category);
    out << ',' << key.year << ',' << b.n << ',' << detail::format_double(b.arith_mean) << ','
        << detail::format_double(b.geo_mean) << '\n';
  }
}

BaselineTable read_baselines_csv(std::istream& in) {
  BaselineTable table;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    if (!header_seen) {
      if (detail::trim(line) != kBaselineCsvHeader) {
        throw std::invalid_argument("baseline CSV: expected header '" + std::string(kBaselineCsvHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    try {
      const auto fields = detail::split_csv_line(line);
      if (fields.size() != 5) throw std::invalid_argument("expected 5 fields");
      Baseline b;
      b.key.category = fields[0];
      b.key.year = static_cast<int>(detail::parse_integer(fields[1], "year"));
      const auto n = detail::parse_integer(fields[2], "n");
      if (n < 1) throw std::invalid_argument("n must be >= 1");
      b.n = static_cast<std::size_t>(n);
      b.arith_mean = detail::parse_double(fields[3], "arith_mean");
      b.geo_mean = detail::parse_double(fields[4], "geo_mean");
      if (b.arith_mean < 0.0 || b.geo_mean < 0.0) throw std::invalid_argument("means must be >= 0");
      if (!table.emplace(b.key, b).second) throw std::invalid_argument("duplicate cell " + to_string(b.key));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("baseline CSV line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!header_seen) throw std::invalid_argument("baseline CSV: missing header");
  return table;
}

void write_observations_csv(std::ostream& out, std::span<const NormalizedObservation> observations) {
  out << kObservationCsvHeader << '\n';
  for (const auto& o : observations) {
    detail::write_csv_field(out, o.article_id);
    out << ',';
    detail::write_csv_field(out, o.key.category);
    out << ',' << o.key.year << ',' << o.raw_citations << ',' << detail::format_optional(o.score_arith) << ','
        << detail::format_optional(o.score_geo) << '\n';
  }
}

}  // namespace gmncs
