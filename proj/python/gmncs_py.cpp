#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "cli.hpp"
#include "gmncs/analysis.hpp"
#include "gmncs/baselines.hpp"
#include "gmncs/ingest.hpp"
#include "gmncs/plot.hpp"
#include "gmncs/stats.hpp"
#include "gmncs/synth.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

py::dict baselines_dict(const std::vector<gmncs::ArticleRecord>& records) {
  py::dict out;
  for (const auto& [key, baseline] : gmncs::compute_baselines(records)) {
    out[py::make_tuple(key.category, key.year)] = baseline;
  }
  return out;
}

gmncs::AnalysisTable analyze(const std::vector<gmncs::ArticleRecord>& records, std::vector<std::string> countries,
                             bool include_all_group, bool domestic_only, int bucket_min, int bucket_max,
                             bool overflow_bucket, std::size_t min_n, std::size_t min_n_ci, double level,
                             std::vector<int> years, std::vector<std::string> categories, bool per_article) {
  gmncs::GroupingSpec spec;
  spec.countries = std::move(countries);
  spec.include_all_group = include_all_group;
  spec.domestic_only = domestic_only;
  spec.bucket_min = bucket_min;
  spec.bucket_max = bucket_max;
  spec.overflow_bucket = overflow_bucket;
  spec.min_n = min_n;
  spec.min_n_ci = min_n_ci;
  spec.level = level;
  spec.years = std::move(years);
  spec.categories = std::move(categories);
  spec.aggregation = per_article ? gmncs::Aggregation::per_article_mean : gmncs::Aggregation::per_assignment;
  return gmncs::analyze_dataset(records, spec);
}

}  // namespace

PYBIND11_MODULE(_gmncs, m) {
  m.doc() = "Geometric mean normalized citation scores";

  py::register_exception<gmncs::IngestError>(m, "IngestError");
  py::register_exception<gmncs::AnalysisError>(m, "AnalysisError");
  py::register_exception<gmncs::MissingBaselineError>(m, "MissingBaselineError", PyExc_KeyError);

  py::class_<gmncs::ArticleRecord>(m, "ArticleRecord")
      .def(py::init([](std::string id, int year, std::vector<std::string> categories, std::int64_t citations,
                       int author_count, std::vector<std::string> countries) {
             return gmncs::ArticleRecord{std::move(id),  year, std::move(categories), citations, author_count,
                                         gmncs::normalize_countries(countries)};
           }),
           "id"_a, "year"_a, "categories"_a, "citations"_a, "author_count"_a = 1,
           "countries"_a = std::vector<std::string>{})
      .def_readwrite("id", &gmncs::ArticleRecord::id)
      .def_readwrite("year", &gmncs::ArticleRecord::year)
      .def_readwrite("categories", &gmncs::ArticleRecord::categories)
      .def_readwrite("citations", &gmncs::ArticleRecord::citations)
      .def_readwrite("author_count", &gmncs::ArticleRecord::author_count)
      .def_readwrite("countries", &gmncs::ArticleRecord::countries)
      .def("__eq__", [](const gmncs::ArticleRecord& a, const gmncs::ArticleRecord& b) { return a == b; })
      .def("__repr__", [](const gmncs::ArticleRecord& r) {
        return "ArticleRecord(" + r.id + ", " + std::to_string(r.year) + ", citations=" +
               std::to_string(r.citations) + ")";
      });

  py::class_<gmncs::Baseline>(m, "Baseline")
      .def_property_readonly("category", [](const gmncs::Baseline& b) { return b.key.category; })
      .def_property_readonly("year", [](const gmncs::Baseline& b) { return b.key.year; })
      .def_readonly("n", &gmncs::Baseline::n)
      .def_readonly("arith_mean", &gmncs::Baseline::arith_mean)
      .def_readonly("geo_mean", &gmncs::Baseline::geo_mean)
      .def_property_readonly("degenerate", &gmncs::Baseline::degenerate);

  py::class_<gmncs::GroupSummary>(m, "GroupSummary")
      .def_readonly("group", &gmncs::GroupSummary::group_label)
      .def_readonly("author_bucket", &gmncs::GroupSummary::author_bucket)
      .def_readonly("n", &gmncs::GroupSummary::n)
      .def_readonly("gmncs", &gmncs::GroupSummary::gmncs)
      .def_readonly("ci_low", &gmncs::GroupSummary::ci_low)
      .def_readonly("ci_high", &gmncs::GroupSummary::ci_high)
      .def_readonly("level", &gmncs::GroupSummary::level)
      .def("__repr__", [](const gmncs::GroupSummary& s) {
        return "GroupSummary(" + s.group_label + ", " + gmncs::bucket_label(s.author_bucket) +
               ", n=" + std::to_string(s.n) + ")";
      });

  py::class_<gmncs::PlotPoint>(m, "PlotPoint")
      .def_readonly("group", &gmncs::PlotPoint::group_label)
      .def_readonly("author_bucket", &gmncs::PlotPoint::author_bucket)
      .def_readonly("x_jittered", &gmncs::PlotPoint::x_jittered)
      .def_readonly("gmncs", &gmncs::PlotPoint::gmncs)
      .def_readonly("ci_low", &gmncs::PlotPoint::ci_low)
      .def_readonly("ci_high", &gmncs::PlotPoint::ci_high);

  py::class_<gmncs::synth::PrecisionReport>(m, "PrecisionReport")
      .def_readonly("replicates", &gmncs::synth::PrecisionReport::replicates)
      .def_readonly("arith_grand_mean", &gmncs::synth::PrecisionReport::arith_grand_mean)
      .def_readonly("geo_grand_mean", &gmncs::synth::PrecisionReport::geo_grand_mean)
      .def_readonly("arith_relative_spread", &gmncs::synth::PrecisionReport::arith_relative_spread)
      .def_readonly("geo_relative_spread", &gmncs::synth::PrecisionReport::geo_relative_spread)
      .def_readonly("ratio", &gmncs::synth::PrecisionReport::ratio);

  py::class_<gmncs::synth::CoverageReport>(m, "CoverageReport")
      .def_readonly("level", &gmncs::synth::CoverageReport::level)
      .def_readonly("replicates", &gmncs::synth::CoverageReport::replicates)
      .def_readonly("reference_draws", &gmncs::synth::CoverageReport::reference_draws)
      .def_readonly("target", &gmncs::synth::CoverageReport::target)
      .def_readonly("covered", &gmncs::synth::CoverageReport::covered)
      .def_readonly("undefined", &gmncs::synth::CoverageReport::undefined)
      .def_readonly("coverage", &gmncs::synth::CoverageReport::coverage);

  m.def("arithmetic_mean", [](const std::vector<double>& v) { return gmncs::stats::arithmetic_mean(v); }, "values"_a);
  m.def("geometric_mean", [](const std::vector<double>& v) { return gmncs::stats::geometric_mean(v); }, "values"_a);
  m.def(
      "geometric_mean_ci",
      [](const std::vector<double>& v, double level) {
        const auto ci = gmncs::stats::geometric_mean_ci(v, level);
        return py::make_tuple(ci.center, ci.low, ci.high);
      },
      "values"_a, "level"_a = 0.95, "Returns (center, low, high); bounds are None for a single value.");
  m.def("inverse_normal_cdf", &gmncs::stats::inverse_normal_cdf, "p"_a);
  m.def("normal_critical_value", &gmncs::stats::normal_critical_value, "level"_a);

  m.def(
      "parse_file",
      [](const std::filesystem::path& path, std::optional<std::string> format) {
        std::optional<gmncs::Format> fmt;
        if (format) {
          fmt = gmncs::format_from_name(*format);
          if (!fmt) throw py::value_error("unknown format '" + *format + "'");
        }
        auto result = gmncs::parse_file(path, fmt);
        py::list errors;
        for (const auto& e : result.errors) errors.append(py::make_tuple(e.line, e.reason));
        return py::make_tuple(std::move(result.records), errors);
      },
      "path"_a, "format"_a = py::none(), "Returns (records, [(line, reason), ...]).");

  m.def("compute_baselines", &baselines_dict, "records"_a, "Maps (category, year) to Baseline.");

  m.def("analyze",
        [](const std::vector<gmncs::ArticleRecord>& records, std::vector<std::string> countries,
           bool include_all_group, bool domestic_only, int bucket_min, int bucket_max, bool overflow_bucket,
           std::size_t min_n, std::size_t min_n_ci, double level, std::vector<int> years,
           std::vector<std::string> categories, bool per_article) {
          return analyze(records, std::move(countries), include_all_group, domestic_only, bucket_min, bucket_max,
                         overflow_bucket, min_n, min_n_ci, level, std::move(years), std::move(categories),
                         per_article)
              .rows;
        },
        "records"_a, "countries"_a = std::vector<std::string>{}, "include_all_group"_a = true,
        "domestic_only"_a = true, "bucket_min"_a = 1, "bucket_max"_a = gmncs::kMaxBucket,
        "overflow_bucket"_a = false, "min_n"_a = 1, "min_n_ci"_a = 2, "level"_a = 0.95,
        "years"_a = std::vector<int>{}, "categories"_a = std::vector<std::string>{}, "per_article"_a = false);

  m.def(
      "jitter_plot_points",
      [](const std::vector<gmncs::GroupSummary>& rows, double jitter) {
        gmncs::AnalysisTable table;
        table.rows = rows;
        return gmncs::jitter_plot_points(table, jitter);
      },
      "rows"_a, "jitter"_a = gmncs::kDefaultJitter);

  m.def(
      "sample",
      [](double mu, double sigma, std::size_t n, std::uint64_t seed) {
        return gmncs::synth::sample({.mu = mu, .sigma = sigma, .n = n, .seed = seed});
      },
      "mu"_a, "sigma"_a, "n"_a, "seed"_a);
  m.def(
      "precision_experiment",
      [](double mu, double sigma, std::size_t n, std::uint64_t seed, std::size_t replicates) {
        py::gil_scoped_release release;
        return gmncs::synth::precision_experiment({.mu = mu, .sigma = sigma, .n = n, .seed = seed}, replicates);
      },
      "mu"_a = 1.0, "sigma"_a = 1.1, "n"_a = 100, "seed"_a = 0, "replicates"_a = 10'000);
  m.def(
      "coverage_experiment",
      [](double mu, double sigma, std::size_t n, std::uint64_t seed, double level, std::size_t replicates,
         std::size_t reference_draws) {
        py::gil_scoped_release release;
        return gmncs::synth::coverage_experiment({.mu = mu, .sigma = sigma, .n = n, .seed = seed}, level,
                                                 replicates, reference_draws);
      },
      "mu"_a = 1.0, "sigma"_a = 1.1, "n"_a = 100, "seed"_a = 0, "level"_a = 0.95, "replicates"_a = 10'000,
      "reference_draws"_a = gmncs::synth::kReferenceDraws);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = gmncs::cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      "args"_a, "Runs the gmncs command line; returns (exit_code, stdout, stderr).");
}
