#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

namespace gmncs::synth {

/// Discretised lognormal citation model: ln(1 + c) is approximately
/// Normal(mu, sigma).
struct LognormalSpec {
  double mu = 1.0;
  double sigma = 1.1;
  std::size_t n = 100;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument unless sigma > 0, n >= 1 and mu is finite.
  void validate() const;
};

/// SplitMix64 finalizer; used to derive independent stream seeds.
[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of replicate `index` of an experiment seeded with `seed`.
[[nodiscard]] std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Normal variates from std::mt19937_64 (whose output sequence is fixed by
/// the C++ standard) through the inverse normal CDF. Each variate consumes
/// exactly one 64-bit word: u = (top 53 bits + 0.5) / 2^53.
class NormalSource {
 public:
  explicit NormalSource(std::uint64_t seed) : engine_(seed) {}

  [[nodiscard]] double uniform_open();
  [[nodiscard]] double standard_normal();

 private:
  std::mt19937_64 engine_;
};

/// max(0, round(exp(z) - 1)), saturating for very large z.
[[nodiscard]] std::int64_t discretise(double z) noexcept;

[[nodiscard]] std::vector<std::int64_t> sample(const LognormalSpec& spec);

struct PrecisionReport {
  LognormalSpec spec;
  std::size_t replicates = 0;
  double arith_grand_mean = 0.0;
  double geo_grand_mean = 0.0;
  /// Standard deviation of the estimator over replicates / its grand mean.
  double arith_relative_spread = 0.0;
  double geo_relative_spread = 0.0;
  /// geo / arith; 1 when both spreads are zero.
  double ratio = 1.0;
};

/// Replicate r uses the sample of spec with seed replicate_seed(spec.seed, r).
/// Throws std::invalid_argument when replicates < 100.
[[nodiscard]] PrecisionReport precision_experiment(const LognormalSpec& spec, std::size_t replicates);

inline constexpr std::size_t kReferenceDraws = 10'000'000;

struct CoverageReport {
  LognormalSpec spec;
  double level = 0.95;
  std::size_t replicates = 0;
  std::size_t reference_draws = kReferenceDraws;
  /// exp(mean ln(1 + C)) - 1 over the reference sample.
  double target = 0.0;
  std::size_t covered = 0;
  /// Replicates whose interval had no bounds (n == 1).
  std::size_t undefined = 0;
  double coverage = 0.0;
};

/// Population offset geometric mean estimated from `draws` variates of a
/// stream independent of every replicate stream.
[[nodiscard]] double reference_target(const LognormalSpec& spec, std::size_t draws = kReferenceDraws);

/// Throws std::invalid_argument when replicates < 1000 or level is not in (0, 1).
[[nodiscard]] CoverageReport coverage_experiment(const LognormalSpec& spec, double level, std::size_t replicates,
                                                 std::size_t reference_draws = kReferenceDraws);

/// Same replicate samples evaluated at several levels; the target is shared.
[[nodiscard]] std::vector<CoverageReport> coverage_experiment(const LognormalSpec& spec,
                                                              const std::vector<double>& levels,
                                                              std::size_t replicates,
                                                              std::size_t reference_draws = kReferenceDraws);

inline constexpr const char* kPrecisionCsvHeader =
    "mu,sigma,n,seed,replicates,arith_grand_mean,geo_grand_mean,arith_relative_spread,geo_relative_spread,ratio";
inline constexpr const char* kCoverageCsvHeader =
    "mu,sigma,n,seed,level,replicates,reference_draws,target,covered,undefined,coverage";

void write_precision_csv(std::ostream& out, const PrecisionReport& report);
void write_coverage_csv(std::ostream& out, const CoverageReport& report);
void write_precision_text(std::ostream& out, const PrecisionReport& report);
void write_coverage_text(std::ostream& out, const CoverageReport& report);

}  // namespace gmncs::synth
