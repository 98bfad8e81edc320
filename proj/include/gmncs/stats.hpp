#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace gmncs::stats {

/// Neumaier-compensated running sum. Terms are accumulated strictly in the
/// order they are added, so a fixed input order gives a bit-reproducible
/// result, and reorderings agree to within a few ulps of the total.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  [[nodiscard]] double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Summary of ln(1 + x) over a sample.
struct LogSummary {
  std::size_t n = 0;
  double mean_log = 0.0;
  /// Sample standard deviation (n - 1 denominator); absent when n == 1.
  std::optional<double> sd_log;
};

/// Back-transformed interval around an offset geometric mean.
struct IntervalEstimate {
  double center = 0.0;
  std::optional<double> low;
  std::optional<double> high;
  double level = 0.95;

  [[nodiscard]] bool has_bounds() const noexcept { return low.has_value() && high.has_value(); }
};

[[nodiscard]] double arithmetic_mean(std::span<const double> values);

/// Offset geometric mean exp(mean(ln(1 + v))) - 1. Throws
/// std::invalid_argument on an empty sample or a negative value.
[[nodiscard]] double geometric_mean(std::span<const double> values);

[[nodiscard]] LogSummary log_summary(std::span<const double> values);

/// Normal-theory interval built in log space and mapped back through
/// exp(.) - 1, with the lower limit floored at 0. With n == 1 the bounds
/// are absent.
[[nodiscard]] IntervalEstimate interval_from_summary(const LogSummary& summary, double level);

[[nodiscard]] IntervalEstimate geometric_mean_ci(std::span<const double> values, double level);

/// Quantile function of the standard normal distribution.
///
/// Uses Wichura's algorithm AS 241 (PPND16): a rational approximation on the
/// central region |p - 0.5| <= 0.425 and two tail rational approximations in
/// sqrt(-ln(min(p, 1 - p))). Relative accuracy is about 1e-16.
/// Throws std::domain_error unless 0 < p < 1.
[[nodiscard]] double inverse_normal_cdf(double p);

/// Two-sided critical value z such that P(|Z| <= z) = level.
[[nodiscard]] double normal_critical_value(double level);

}  // namespace gmncs::stats
