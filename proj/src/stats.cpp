#include "gmncs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gmncs::stats {

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

namespace {

void require_sample(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("empty sample");
  }
  for (const double v : values) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("sample values must be finite and >= 0, got " + std::to_string(v));
    }
  }
}

void require_level(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::domain_error("confidence level must lie in (0, 1), got " + std::to_string(level));
  }
}

}  // namespace

double arithmetic_mean(std::span<const double> values) {
  if (values.empty()) {
    throw std::invalid_argument("empty sample");
  }
  CompensatedSum sum;
  for (const double v : values) sum.add(v);
  return sum.value() / static_cast<double>(values.size());
}

double geometric_mean(std::span<const double> values) {
  return std::expm1(log_summary(values).mean_log);
}

LogSummary log_summary(std::span<const double> values) {
  require_sample(values);
  const auto n = values.size();

  CompensatedSum sum;
  bool constant = true;
  for (const double v : values) {
    sum.add(std::log1p(v));
    constant = constant && v == values.front();
  }
  // A constant sample must give exactly its own value and zero spread;
  // sum / n can be off by an ulp.
  const double mean = constant ? std::log1p(values.front()) : sum.value() / static_cast<double>(n);

  LogSummary out{.n = n, .mean_log = mean, .sd_log = std::nullopt};
  if (n >= 2 && constant) {
    out.sd_log = 0.0;
  } else if (n >= 2) {
    // Two-pass variance about the compensated mean.
    CompensatedSum squares;
    for (const double v : values) {
      const double d = std::log1p(v) - mean;
      squares.add(d * d);
    }
    out.sd_log = std::sqrt(squares.value() / static_cast<double>(n - 1));
  }
  return out;
}

IntervalEstimate interval_from_summary(const LogSummary& summary, double level) {
  require_level(level);
  IntervalEstimate out;
  out.center = std::expm1(summary.mean_log);
  out.level = level;
  if (summary.n < 2 || !summary.sd_log) {
    return out;
  }
  const double half_width =
      normal_critical_value(level) * *summary.sd_log / std::sqrt(static_cast<double>(summary.n));
  // exp(.) - 1 can dip below zero for samples dominated by zeros; the
  // indicator itself cannot.
  out.low = std::max(0.0, std::expm1(summary.mean_log - half_width));
  out.high = std::expm1(summary.mean_log + half_width);
  return out;
}

IntervalEstimate geometric_mean_ci(std::span<const double> values, double level) {
  require_level(level);
  return interval_from_summary(log_summary(values), level);
}

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("probability must lie in (0, 1), got " + std::to_string(p));
  }

  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
              6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
            1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
          1.3314166789178437745e+2) * r + 3.3871328727963666080e+0);
    const double den =
        (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
              3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
            5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
          4.2313330701600911252e+1) * r + 1.0);
    return q * num / den;
  }

  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value = 0.0;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
            3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
          4.63033784615654529590e+0) * r + 1.42343711074968357734e+0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
          2.05319162663775882187e+0) * r + 1.0);
    value = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
          5.46378491116411436990e+0) * r + 6.65790464350110377720e+0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
    value = num / den;
  }
  return q < 0.0 ? -value : value;
}

double normal_critical_value(double level) {
  require_level(level);
  return inverse_normal_cdf(0.5 + level / 2.0);
}

}  // namespace gmncs::stats
