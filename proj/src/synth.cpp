#include "gmncs/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "csv_util.hpp"
#include "gmncs/stats.hpp"

namespace gmncs::synth {

namespace {

// Stream tag for the reference sample; replicate streams use small indices.
constexpr std::uint64_t kReferenceStream = 0xFFFF'FFFF'FFFF'FFFFull;

// Saturation point of discretise(); far beyond any citation count.
constexpr double kMaxCount = 9.0e15;

std::vector<double> as_doubles(const std::vector<std::int64_t>& counts) {
  return {counts.begin(), counts.end()};
}

/// Mean and n-1 standard deviation in one compensated two-pass fold.
std::pair<double, double> mean_sd(const std::vector<double>& xs) {
  if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs.front(); })) return {xs.front(), 0.0};
  const double mean = stats::arithmetic_mean(xs);
  stats::CompensatedSum sq;
  for (const double x : xs) sq.add((x - mean) * (x - mean));
  return {mean, std::sqrt(sq.value() / static_cast<double>(xs.size() - 1))};
}

void require_level(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("confidence level must lie in (0, 1)");
  }
}

}  // namespace

void LognormalSpec::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("sigma must be > 0, got " + std::to_string(sigma));
  }
  if (!std::isfinite(mu)) throw std::invalid_argument("mu must be finite");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E37'79B9'7F4A'7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58'476D'1CE4'E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D0'49BB'1331'11EBull;
  return x ^ (x >> 31);
}

std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(index));
}

double NormalSource::uniform_open() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double NormalSource::standard_normal() { return stats::inverse_normal_cdf(uniform_open()); }

std::int64_t discretise(double z) noexcept {
  const double c = std::round(std::expm1(z));
  if (!(c > 0.0)) return 0;
  if (c >= kMaxCount) return static_cast<std::int64_t>(kMaxCount);
  return static_cast<std::int64_t>(c);
}

std::vector<std::int64_t> sample(const LognormalSpec& spec) {
  spec.validate();
  NormalSource source(spec.seed);
  std::vector<std::int64_t> out;
  out.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    out.push_back(discretise(spec.mu + spec.sigma * source.standard_normal()));
  }
  return out;
}

PrecisionReport precision_experiment(const LognormalSpec& spec, std::size_t replicates) {
  spec.validate();
  if (replicates < 100) throw std::invalid_argument("precision experiment needs >= 100 replicates");

  std::vector<double> arith(replicates);
  std::vector<double> geo(replicates);
  for (std::size_t r = 0; r < replicates; ++r) {
    LognormalSpec rep = spec;
    rep.seed = replicate_seed(spec.seed, r);
    const auto values = as_doubles(sample(rep));
    arith[r] = stats::arithmetic_mean(values);
    geo[r] = stats::geometric_mean(values);
  }

  PrecisionReport report;
  report.spec = spec;
  report.replicates = replicates;
  const auto [am, asd] = mean_sd(arith);
  const auto [gm, gsd] = mean_sd(geo);
  report.arith_grand_mean = am;
  report.geo_grand_mean = gm;
  report.arith_relative_spread = am > 0.0 ? asd / am : 0.0;
  report.geo_relative_spread = gm > 0.0 ? gsd / gm : 0.0;
  if (report.arith_relative_spread > 0.0) {
    report.ratio = report.geo_relative_spread / report.arith_relative_spread;
  } else {
    report.ratio = report.geo_relative_spread > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  return report;
}

double reference_target(const LognormalSpec& spec, std::size_t draws) {
  spec.validate();
  if (draws < 1) throw std::invalid_argument("reference sample needs >= 1 draw");
  NormalSource source(replicate_seed(spec.seed, kReferenceStream));
  stats::CompensatedSum sum;
  for (std::size_t i = 0; i < draws; ++i) {
    const auto c = discretise(spec.mu + spec.sigma * source.standard_normal());
    sum.add(std::log1p(static_cast<double>(c)));
  }
  return std::expm1(sum.value() / static_cast<double>(draws));
}

std::vector<CoverageReport> coverage_experiment(const LognormalSpec& spec, const std::vector<double>& levels,
                                                std::size_t replicates, std::size_t reference_draws) {
  spec.validate();
  for (const double level : levels) require_level(level);
  if (replicates < 1000) throw std::invalid_argument("coverage experiment needs >= 1000 replicates");

  std::vector<CoverageReport> reports(levels.size());
  const double target = reference_target(spec, reference_draws);
  for (std::size_t i = 0; i < levels.size(); ++i) {
    reports[i].spec = spec;
    reports[i].level = levels[i];
    reports[i].replicates = replicates;
    reports[i].reference_draws = reference_draws;
    reports[i].target = target;
  }

  for (std::size_t r = 0; r < replicates; ++r) {
    LognormalSpec rep = spec;
    rep.seed = replicate_seed(spec.seed, r);
    const auto summary = stats::log_summary(as_doubles(sample(rep)));
    for (auto& report : reports) {
      const auto ci = stats::interval_from_summary(summary, report.level);
      if (!ci.has_bounds()) {
        ++report.undefined;
      } else if (*ci.low <= target && target <= *ci.high) {
        ++report.covered;
      }
    }
  }
  for (auto& report : reports) {
    report.coverage = static_cast<double>(report.covered) / static_cast<double>(replicates);
  }
  return reports;
}

CoverageReport coverage_experiment(const LognormalSpec& spec, double level, std::size_t replicates,
                                   std::size_t reference_draws) {
  return coverage_experiment(spec, std::vector<double>{level}, replicates, reference_draws).front();
}

void write_precision_csv(std::ostream& out, const PrecisionReport& r) {
  using detail::format_double;
  out << kPrecisionCsvHeader << '\n'
      << format_double(r.spec.mu) << ',' << format_double(r.spec.sigma) << ',' << r.spec.n << ',' << r.spec.seed
      << ',' << r.replicates << ',' << format_double(r.arith_grand_mean) << ',' << format_double(r.geo_grand_mean)
      << ',' << format_double(r.arith_relative_spread) << ',' << format_double(r.geo_relative_spread) << ','
      << format_double(r.ratio) << '\n';
}

void write_coverage_csv(std::ostream& out, const CoverageReport& r) {
  using detail::format_double;
  out << kCoverageCsvHeader << '\n'
      << format_double(r.spec.mu) << ',' << format_double(r.spec.sigma) << ',' << r.spec.n << ',' << r.spec.seed
      << ',' << format_double(r.level) << ',' << r.replicates << ',' << r.reference_draws << ','
      << format_double(r.target) << ',' << r.covered << ',' << r.undefined << ',' << format_double(r.coverage)
      << '\n';
}

void write_precision_text(std::ostream& out, const PrecisionReport& r) {
  using detail::format_double;
  out << "precision experiment\n"
      << "  mu=" << format_double(r.spec.mu) << " sigma=" << format_double(r.spec.sigma) << " n=" << r.spec.n
      << " seed=" << r.spec.seed << " replicates=" << r.replicates << '\n'
      << "  arithmetic mean estimator: grand mean " << format_double(r.arith_grand_mean) << ", relative spread "
      << format_double(r.arith_relative_spread) << '\n'
      << "  geometric mean estimator:  grand mean " << format_double(r.geo_grand_mean) << ", relative spread "
      << format_double(r.geo_relative_spread) << '\n'
      << "  spread ratio (geometric / arithmetic): " << format_double(r.ratio) << '\n';
}

void write_coverage_text(std::ostream& out, const CoverageReport& r) {
  using detail::format_double;
  out << "coverage experiment\n"
      << "  mu=" << format_double(r.spec.mu) << " sigma=" << format_double(r.spec.sigma) << " n=" << r.spec.n
      << " seed=" << r.spec.seed << " level=" << format_double(r.level) << " replicates=" << r.replicates << '\n'
      << "  population target (" << r.reference_draws << " reference draws): " << format_double(r.target) << '\n'
      << "  covered " << r.covered << " of " << r.replicates << " (undefined intervals: " << r.undefined << ")\n"
      << "  coverage: " << format_double(r.coverage) << '\n';
}

}  // namespace gmncs::synth
