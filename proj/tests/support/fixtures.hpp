#pragma once

// Test-only helpers: random dataset generators and a naive, single-pass
// recomputation of the grouped indicator that shares no code with the
// library's pipeline.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "gmncs/ingest.hpp"

namespace gmncs::testing {

/// z for a two-sided 95% interval (scipy.stats.norm.ppf(0.975)).
inline constexpr double kZ95 = 1.959963984540054;

/// The {0, 1, 3, 7} fixture cell as four records in category X, year 2009.
inline std::vector<ArticleRecord> fixture_cell() {
  return {
      {"a1", 2009, {"X"}, 0, 1, {"GB"}},
      {"a2", 2009, {"X"}, 1, 1, {"GB"}},
      {"a3", 2009, {"X"}, 3, 1, {"GB"}},
      {"a4", 2009, {"X"}, 7, 1, {"GB"}},
  };
}

struct DatasetShape {
  std::size_t max_records = 1000;
  std::vector<std::string> categories = {"1101", "1102", "1103", "2304"};
  std::vector<int> years = {2009, 2010, 2011};
  std::vector<std::string> countries = {"RU", "GB", "DE", "US"};
  double mu = 1.0;
  double sigma = 1.1;
};

/// Random dataset: 1-2 categories per record, 0-3 countries, 1-13 authors,
/// discretised lognormal citations. Ids are unique.
inline std::vector<ArticleRecord> random_dataset(std::mt19937_64& rng, const DatasetShape& shape = {}) {
  std::uniform_int_distribution<std::size_t> n_dist(1, shape.max_records);
  std::uniform_int_distribution<std::size_t> cat_dist(0, shape.categories.size() - 1);
  std::uniform_int_distribution<std::size_t> year_dist(0, shape.years.size() - 1);
  std::uniform_int_distribution<std::size_t> country_dist(0, shape.countries.size() - 1);
  std::uniform_int_distribution<int> n_country_dist(0, 3);
  std::uniform_int_distribution<int> author_dist(1, 13);
  std::uniform_int_distribution<int> extra_cat(0, 3);
  std::normal_distribution<double> log_citations(shape.mu, shape.sigma);

  const auto n = n_dist(rng);
  std::vector<ArticleRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ArticleRecord r;
    r.id = "r" + std::to_string(i);
    r.year = shape.years[year_dist(rng)];
    r.categories.push_back(shape.categories[cat_dist(rng)]);
    if (extra_cat(rng) == 0) {
      const auto& second = shape.categories[cat_dist(rng)];
      if (second != r.categories.front()) r.categories.push_back(second);
    }
    r.citations = std::max<std::int64_t>(0, std::llround(std::exp(log_citations(rng)) - 1.0));
    r.author_count = author_dist(rng);
    const int k = n_country_dist(rng);
    for (int c = 0; c < k; ++c) {
      const auto& code = shape.countries[country_dist(rng)];
      if (std::find(r.countries.begin(), r.countries.end(), code) == r.countries.end()) r.countries.push_back(code);
    }
    out.push_back(std::move(r));
  }
  return out;
}

struct OracleRow {
  std::string group;
  int bucket = 0;
  std::size_t n = 0;
  double gmncs = 0.0;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
};

/// Direct formulas with plain loops: baselines by rescanning the dataset,
/// per-assignment observations, domestic-only country lines plus "All",
/// buckets 1-10, CI at 95% once a group has two members.
inline std::vector<OracleRow> naive_gmncs_table(const std::vector<ArticleRecord>& records,
                                                const std::set<std::string>& countries = {}) {
  auto cell_means = [&](const std::string& category, int year) {
    double sum = 0.0;
    double log_sum = 0.0;
    int n = 0;
    for (const auto& r : records) {
      if (r.year != year) continue;
      for (const auto& c : r.categories) {
        if (c != category) continue;
        sum += static_cast<double>(r.citations);
        log_sum += std::log(1.0 + static_cast<double>(r.citations));
        ++n;
      }
    }
    return std::pair{sum / n, std::exp(log_sum / n) - 1.0};
  };

  std::map<std::pair<std::string, int>, std::vector<double>> groups;
  std::map<std::pair<std::string, int>, double> geo_cache;
  for (const auto& r : records) {
    if (r.author_count < 1 || r.author_count > 10) continue;
    for (const auto& category : r.categories) {
      const auto key = std::pair{category, r.year};
      if (!geo_cache.contains(key)) geo_cache[key] = cell_means(category, r.year).second;
      const double geo = geo_cache[key];
      if (!(geo > 0.0)) continue;
      const double score = static_cast<double>(r.citations) / geo;
      groups[{"All", r.author_count}].push_back(score);
      if (r.countries.size() == 1 && (countries.empty() || countries.contains(r.countries[0]))) {
        groups[{r.countries[0], r.author_count}].push_back(score);
      }
    }
  }

  std::vector<OracleRow> rows;
  for (const auto& [key, scores] : groups) {
    OracleRow row{key.first, key.second, scores.size(), 0.0, std::nullopt, std::nullopt};
    double mean = 0.0;
    for (const double s : scores) mean += std::log(1.0 + s);
    mean /= static_cast<double>(scores.size());
    row.gmncs = std::exp(mean) - 1.0;
    if (scores.size() >= 2) {
      double ss = 0.0;
      for (const double s : scores) ss += (std::log(1.0 + s) - mean) * (std::log(1.0 + s) - mean);
      const double half = kZ95 * std::sqrt(ss / static_cast<double>(scores.size() - 1)) /
                          std::sqrt(static_cast<double>(scores.size()));
      row.ci_low = std::max(0.0, std::exp(mean - half) - 1.0);
      row.ci_high = std::exp(mean + half) - 1.0;
    }
    rows.push_back(row);
  }
  return rows;
}

/// |a - b| <= tol * max(1, |a|, |b|).
inline bool close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace gmncs::testing
