#include "gmncs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_set>

#include "csv_util.hpp"
#include "gmncs/stats.hpp"

namespace gmncs {

const char* to_string(CountryStatus status) noexcept {
  switch (status) {
    case CountryStatus::domestic:
      return "domestic";
    case CountryStatus::international:
      return "international";
    case CountryStatus::unknown:
      return "unknown";
  }
  return "unknown";
}

std::string CollaborationProfile::domestic_country() const {
  return country_status == CountryStatus::domestic ? countries.front() : std::string();
}

CollaborationProfile classify(const ArticleRecord& record) {
  CollaborationProfile p;
  p.author_bucket = (record.author_count >= 1 && record.author_count <= kMaxBucket) ? record.author_count
                                                                                   : kOverflowBucket;
  // Records are normalized at ingest, but classification must not depend on it.
  p.countries = normalize_countries(record.countries);
  switch (p.countries.size()) {
    case 0:
      p.country_status = CountryStatus::unknown;
      break;
    case 1:
      p.country_status = CountryStatus::domestic;
      break;
    default:
      p.country_status = CountryStatus::international;
      break;
  }
  return p;
}

ProfileMap classify_all(std::span<const ArticleRecord> records) {
  ProfileMap out;
  out.reserve(records.size());
  for (const auto& r : records) {
    if (!out.emplace(r.id, classify(r)).second) {
      throw AnalysisError("duplicate article id '" + r.id + "'");
    }
  }
  return out;
}

void GroupingSpec::validate() const {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("confidence level must lie in (0, 1)");
  }
  if (bucket_min < 1 || bucket_max > kMaxBucket || bucket_min > bucket_max) {
    throw std::invalid_argument("author bucket range must satisfy 1 <= min <= max <= 10");
  }
  if (min_n < 1) throw std::invalid_argument("min_n must be >= 1");
  if (min_n_ci < 2) throw std::invalid_argument("min_n_ci must be >= 2");
}

namespace {

struct GroupKey {
  std::string label;
  int bucket;
  friend auto operator<=>(const GroupKey&, const GroupKey&) = default;
};

/// One sample point entering the group folds.
struct Member {
  const CollaborationProfile* profile;
  double score;
};

bool bucket_selected(const CollaborationProfile& p, const GroupingSpec& spec) {
  if (p.overflow()) return spec.overflow_bucket;
  return p.author_bucket >= spec.bucket_min && p.author_bucket <= spec.bucket_max;
}

}  // namespace

AnalysisTable group_gmncs(std::span<const NormalizedObservation> observations, const ProfileMap& profiles,
                          const GroupingSpec& spec) {
  spec.validate();

  const std::unordered_set<int> years(spec.years.begin(), spec.years.end());
  const std::unordered_set<std::string> categories(spec.categories.begin(), spec.categories.end());
  const auto wanted_countries = normalize_countries(spec.countries);
  const std::unordered_set<std::string> country_filter(wanted_countries.begin(), wanted_countries.end());
  const auto country_selected = [&](const std::string& c) {
    return country_filter.empty() || country_filter.contains(c);
  };

  AnalysisTable table;

  // Collect the sample points, in observation order.
  std::vector<Member> members;
  struct ArticleAccumulator {
    const CollaborationProfile* profile = nullptr;
    double sum = 0.0;
    std::size_t count = 0;
  };
  std::vector<std::string> article_order;
  std::unordered_map<std::string, ArticleAccumulator> per_article;

  for (const auto& obs : observations) {
    if (!years.empty() && !years.contains(obs.key.year)) continue;
    if (!categories.empty() && !categories.contains(obs.key.category)) continue;
    if (!obs.score_geo) {
      ++table.degenerate_excluded;
      continue;
    }
    const auto it = profiles.find(obs.article_id);
    if (it == profiles.end()) {
      throw AnalysisError("no collaboration profile for article '" + obs.article_id + "'");
    }
    if (spec.aggregation == Aggregation::per_assignment) {
      members.push_back({&it->second, *obs.score_geo});
    } else {
      auto [acc, inserted] = per_article.try_emplace(obs.article_id);
      if (inserted) {
        article_order.push_back(obs.article_id);
        acc->second.profile = &it->second;
      }
      acc->second.sum += *obs.score_geo;
      ++acc->second.count;
    }
  }
  for (const auto& id : article_order) {
    const auto& acc = per_article.at(id);
    members.push_back({acc.profile, acc.sum / static_cast<double>(acc.count)});
  }

  std::map<GroupKey, std::vector<double>> groups;
  for (const auto& m : members) {
    const auto& p = *m.profile;
    if (!bucket_selected(p, spec)) continue;
    if (spec.include_all_group) groups[GroupKey{kAllGroup, p.author_bucket}].push_back(m.score);
    if (p.country_status == CountryStatus::domestic) {
      const auto& c = p.countries.front();
      if (country_selected(c)) groups[GroupKey{c, p.author_bucket}].push_back(m.score);
    } else if (p.country_status == CountryStatus::international && !spec.domestic_only) {
      for (const auto& c : p.countries) {
        if (country_selected(c)) groups[GroupKey{c, p.author_bucket}].push_back(m.score);
      }
    }
  }

  for (const auto& [key, scores] : groups) {
    if (scores.size() < spec.min_n) continue;
    const auto summary = stats::log_summary(scores);
    GroupSummary row{.group_label = key.label,
                     .author_bucket = key.bucket,
                     .n = scores.size(),
                     .gmncs = 0.0,
                     .ci_low = std::nullopt,
                     .ci_high = std::nullopt,
                     .level = spec.level};
    if (scores.size() >= spec.min_n_ci) {
      const auto ci = stats::interval_from_summary(summary, spec.level);
      row.gmncs = ci.center;
      row.ci_low = ci.low;
      row.ci_high = ci.high;
    } else {
      row.gmncs = std::expm1(summary.mean_log);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

AnalysisTable analyze_dataset(std::span<const ArticleRecord> records, const GroupingSpec& spec) {
  spec.validate();
  const auto profiles = classify_all(records);
  const auto baselines = compute_baselines(records);
  auto degenerate = degenerate_cells(baselines);
  if (degenerate.size() == baselines.size()) {
    throw AnalysisError("no usable baseline");
  }
  const auto observations = normalize_all(records, baselines);
  auto table = group_gmncs(observations, profiles, spec);
  table.degenerate_cells = std::move(degenerate);
  return table;
}

std::string bucket_label(int bucket) {
  return bucket == kOverflowBucket ? std::string("10+") : std::to_string(bucket);
}

int parse_bucket_label(std::string_view label) {
  label = detail::trim(label);
  if (label == "10+") return kOverflowBucket;
  const auto v = detail::parse_integer(label, "author_bucket");
  if (v < 1 || v > kMaxBucket) throw std::invalid_argument("author_bucket out of range: " + std::string(label));
  return static_cast<int>(v);
}

void write_analysis_csv(std::ostream& out, const AnalysisTable& table) {
  out << kAnalysisCsvHeader << '\n';
  for (const auto& row : table.rows) {
    detail::write_csv_field(out, row.group_label);
    out << ',' << bucket_label(row.author_bucket) << ',' << row.n << ',' << detail::format_double(row.gmncs) << ','
        << detail::format_optional(row.ci_low) << ',' << detail::format_optional(row.ci_high) << '\n';
  }
}

AnalysisTable read_analysis_csv(std::istream& in, double level) {
  AnalysisTable table;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    if (!header_seen) {
      if (detail::trim(line) != kAnalysisCsvHeader) {
        throw std::invalid_argument("analysis CSV: expected header '" + std::string(kAnalysisCsvHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    try {
      const auto fields = detail::split_csv_line(line);
      if (fields.size() != 6) throw std::invalid_argument("expected 6 fields");
      GroupSummary row;
      row.group_label = fields[0];
      row.author_bucket = parse_bucket_label(fields[1]);
      const auto n = detail::parse_integer(fields[2], "n");
      if (n < 1) throw std::invalid_argument("n must be >= 1");
      row.n = static_cast<std::size_t>(n);
      row.gmncs = detail::parse_double(fields[3], "gmncs");
      row.ci_low = detail::parse_optional_double(fields[4], "ci_low");
      row.ci_high = detail::parse_optional_double(fields[5], "ci_high");
      row.level = level;
      table.rows.push_back(std::move(row));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("analysis CSV line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!header_seen) throw std::invalid_argument("analysis CSV: missing header");
  return table;
}

}  // namespace gmncs
