#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "gmncs/analysis.hpp"
#include "gmncs/baselines.hpp"
#include "gmncs/ingest.hpp"
#include "gmncs/plot.hpp"
#include "gmncs/synth.hpp"

namespace gmncs::cli {

namespace {

/// A command failed for a reason the user must see; exit code 1.
class CommandError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr std::size_t kMaxReportedLineErrors = 20;

struct RunConfig {
  std::vector<std::string> inputs;
  std::string format;
  std::string output;

  // analyze / export-plot
  std::string countries;
  bool include_international = false;
  std::string buckets = "1-10";
  bool overflow_bucket = false;
  std::size_t min_n = 1;
  std::size_t min_n_ci = 2;
  double level = 0.95;
  std::string years;
  std::string categories;
  bool per_article = false;

  // score
  std::string baselines_path;

  // export-plot
  std::string table_path;
  double jitter = kDefaultJitter;

  // simulate
  std::string mode = "all";
  double mu = 1.0;
  double sigma = 1.1;
  std::size_t n = 100;
  std::size_t replicates = 10'000;
  std::uint64_t seed = 0;
  std::size_t reference_draws = synth::kReferenceDraws;
  std::string report_format = "text";
};

std::vector<std::string> split_comma(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(' ');
    const auto last = item.find_last_not_of(' ');
    if (first != std::string::npos) out.push_back(item.substr(first, last - first + 1));
  }
  return out;
}

std::pair<int, int> parse_bucket_range(const std::string& s) {
  const auto dash = s.find('-');
  try {
    if (dash == std::string::npos) {
      const int b = std::stoi(s);
      return {b, b};
    }
    return {std::stoi(s.substr(0, dash)), std::stoi(s.substr(dash + 1))};
  } catch (const std::exception&) {
    throw CLI::ValidationError("--buckets", "expected a range such as 1-10, got '" + s + "'");
  }
}

/// Writes through `write` to --out, or to `out` when no path was given.
void emit(const RunConfig& cfg, std::ostream& out, const std::function<void(std::ostream&)>& write) {
  if (cfg.output.empty() || cfg.output == "-") {
    write(out);
    return;
  }
  std::ofstream file(cfg.output, std::ios::binary);
  if (!file) throw CommandError("cannot open output file '" + cfg.output + "'");
  write(file);
  if (!file) throw CommandError("failed writing output file '" + cfg.output + "'");
}

std::vector<ArticleRecord> load_records(const RunConfig& cfg, std::ostream& err) {
  std::optional<Format> format;
  if (!cfg.format.empty()) format = format_from_name(cfg.format);

  std::vector<ArticleRecord> records;
  std::size_t error_count = 0;
  for (const auto& path : cfg.inputs) {
    if (!std::filesystem::exists(path)) throw CommandError("input file not found: '" + path + "'");
    ParseResult parsed;
    try {
      parsed = parse_file(path, format);
    } catch (const IngestError& e) {
      throw CommandError(e.what());
    }
    for (const auto& e : parsed.errors) {
      if (error_count++ < kMaxReportedLineErrors) {
        err << "warning: " << path << ":" << e.line << ": " << e.reason << '\n';
      }
    }
    std::move(parsed.records.begin(), parsed.records.end(), std::back_inserter(records));
  }
  if (error_count > kMaxReportedLineErrors) {
    err << "warning: " << error_count << " malformed lines skipped in total\n";
  }

  const auto report = validate_dataset(records);
  if (!report.duplicates.empty()) {
    throw CommandError("duplicate article id '" + report.duplicates.front() + "' (" +
                       std::to_string(report.duplicates.size()) + " duplicated id(s))");
  }
  return records;
}

void warn_degenerate(const std::vector<FieldYearKey>& cells, std::ostream& err) {
  for (const auto& key : cells) {
    err << "warning: degenerate cell " << to_string(key) << " (no citations); its articles are excluded\n";
  }
}

BaselineTable usable_baselines(const std::vector<ArticleRecord>& records, std::ostream& err) {
  auto baselines = compute_baselines(records);
  const auto degenerate = degenerate_cells(baselines);
  if (degenerate.size() == baselines.size()) throw CommandError("no usable baseline");
  warn_degenerate(degenerate, err);
  return baselines;
}

GroupingSpec grouping_spec(const RunConfig& cfg) {
  GroupingSpec spec;
  spec.countries = split_comma(cfg.countries);
  spec.domestic_only = !cfg.include_international;
  std::tie(spec.bucket_min, spec.bucket_max) = parse_bucket_range(cfg.buckets);
  spec.overflow_bucket = cfg.overflow_bucket;
  spec.min_n = cfg.min_n;
  spec.min_n_ci = cfg.min_n_ci;
  spec.level = cfg.level;
  for (const auto& y : split_comma(cfg.years)) {
    try {
      spec.years.push_back(std::stoi(y));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--years", "not a year: '" + y + "'");
    }
  }
  spec.categories = split_comma(cfg.categories);
  spec.aggregation = cfg.per_article ? Aggregation::per_article_mean : Aggregation::per_assignment;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("grouping", e.what());
  }
  return spec;
}

AnalysisTable run_analysis(const RunConfig& cfg, std::ostream& err) {
  const auto spec = grouping_spec(cfg);
  const auto records = load_records(cfg, err);
  AnalysisTable table;
  try {
    table = analyze_dataset(records, spec);
  } catch (const AnalysisError& e) {
    throw CommandError(e.what());
  }
  warn_degenerate(table.degenerate_cells, err);
  if (table.degenerate_excluded > 0) {
    err << "warning: " << table.degenerate_excluded << " observation(s) in degenerate cells excluded\n";
  }
  return table;
}

// ---------------------------------------------------------------------------
// Commands

void cmd_baselines(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto records = load_records(cfg, err);
  const auto baselines = usable_baselines(records, err);
  emit(cfg, out, [&](std::ostream& os) { write_baselines_csv(os, baselines); });
}

void cmd_score(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto records = load_records(cfg, err);
  BaselineTable baselines;
  if (cfg.baselines_path.empty()) {
    baselines = usable_baselines(records, err);
  } else {
    std::ifstream in(cfg.baselines_path, std::ios::binary);
    if (!in) throw CommandError("cannot open baseline file '" + cfg.baselines_path + "'");
    try {
      baselines = read_baselines_csv(in);
    } catch (const std::invalid_argument& e) {
      throw CommandError(e.what());
    }
  }
  std::vector<NormalizedObservation> observations;
  try {
    observations = normalize_all(records, baselines);
  } catch (const MissingBaselineError& e) {
    throw CommandError(e.what());
  }
  emit(cfg, out, [&](std::ostream& os) { write_observations_csv(os, observations); });
}

void cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto table = run_analysis(cfg, err);
  emit(cfg, out, [&](std::ostream& os) { write_analysis_csv(os, table); });
}

void cmd_export_plot(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  AnalysisTable table;
  if (!cfg.table_path.empty()) {
    std::ifstream in(cfg.table_path, std::ios::binary);
    if (!in) throw CommandError("cannot open table file '" + cfg.table_path + "'");
    try {
      table = read_analysis_csv(in, cfg.level);
    } catch (const std::invalid_argument& e) {
      throw CommandError(e.what());
    }
  } else if (!cfg.inputs.empty()) {
    table = run_analysis(cfg, err);
  } else {
    throw CLI::ValidationError("export-plot", "either --table or --in is required");
  }
  const auto points = jitter_plot_points(table, cfg.jitter);
  emit(cfg, out, [&](std::ostream& os) { write_plot_csv(os, points); });
}

void cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
  synth::LognormalSpec spec{.mu = cfg.mu, .sigma = cfg.sigma, .n = cfg.n, .seed = cfg.seed};
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("simulate", e.what());
  }
  const bool precision = cfg.mode == "all" || cfg.mode == "precision";
  const bool coverage = cfg.mode == "all" || cfg.mode == "coverage";
  const bool csv = cfg.report_format == "csv";

  std::optional<synth::PrecisionReport> precision_report;
  std::optional<synth::CoverageReport> coverage_report;
  try {
    if (precision) precision_report = synth::precision_experiment(spec, cfg.replicates);
    if (coverage) coverage_report = synth::coverage_experiment(spec, cfg.level, cfg.replicates, cfg.reference_draws);
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("simulate", e.what());
  }

  emit(cfg, out, [&](std::ostream& os) {
    if (!csv) os << "# gmncs simulate seed=" << cfg.seed << "\n";
    if (precision_report) {
      if (csv) {
        synth::write_precision_csv(os, *precision_report);
      } else {
        synth::write_precision_text(os, *precision_report);
      }
    }
    if (precision_report && coverage_report) os << '\n';
    if (coverage_report) {
      if (csv) {
        synth::write_coverage_csv(os, *coverage_report);
      } else {
        synth::write_coverage_text(os, *coverage_report);
      }
    }
  });
}

// ---------------------------------------------------------------------------
// Option wiring

const auto kOpenUnitInterval = CLI::Validator(
    [](std::string& s) -> std::string {
      try {
        const double v = std::stod(s);
        if (v > 0.0 && v < 1.0) return {};
      } catch (const std::exception&) {
      }
      return "value must lie strictly between 0 and 1, got " + s;
    },
    "in (0,1)");

void add_input_options(CLI::App* sub, RunConfig& cfg, bool required) {
  auto* in = sub->add_option("--in", cfg.inputs, "Input dataset file(s) (.jsonl or .csv)");
  if (required) in->required();
  sub->add_option("--format", cfg.format, "Input format, overriding the file extension")
      ->check(CLI::IsMember({"jsonl", "csv"}));
}

void add_output_option(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--out", cfg.output, "Output file (default: standard output)");
}

void add_grouping_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--countries", cfg.countries,
                  "Comma-separated country codes for the country lines (default: every country present)");
  sub->add_flag("--include-international,!--domestic-only", cfg.include_international,
                "Country lines use single-country articles only (default) or also international ones")
      ->default_str("domestic-only");
  sub->add_option("--buckets", cfg.buckets, "Author-count range, e.g. 1-10")->capture_default_str();
  sub->add_flag("--overflow", cfg.overflow_bucket, "Add a 10+ bucket for articles with more than ten authors");
  sub->add_option("--min-n", cfg.min_n, "Smallest group size that yields a row")->capture_default_str();
  sub->add_option("--min-n-ci", cfg.min_n_ci, "Smallest group size that yields a confidence interval")
      ->capture_default_str();
  sub->add_option("--level", cfg.level, "Confidence level")->check(kOpenUnitInterval)->capture_default_str();
  sub->add_option("--years", cfg.years, "Comma-separated publication years to report (default: all)");
  sub->add_option("--categories", cfg.categories, "Comma-separated categories to report (default: all)");
  sub->add_flag("--per-article", cfg.per_article,
                "Average each article's scores across its categories instead of one observation per category");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Geometric mean normalized citation score (gMNCS) toolkit", "gmncs"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  auto* baselines = app.add_subcommand("baselines", "Compute per-(category, year) citation baselines");
  add_input_options(baselines, cfg, true);
  add_output_option(baselines, cfg);

  auto* score = app.add_subcommand("score", "Normalize every (article, category) citation count");
  add_input_options(score, cfg, true);
  score->add_option("--baselines", cfg.baselines_path, "Use baselines from this CSV instead of computing them");
  add_output_option(score, cfg);

  auto* analyze = app.add_subcommand("analyze", "Grouped gMNCS table by country line and author count");
  add_input_options(analyze, cfg, true);
  add_grouping_options(analyze, cfg);
  add_output_option(analyze, cfg);

  auto* export_plot = app.add_subcommand("export-plot", "Figure data with jittered x positions");
  export_plot->add_option("--table", cfg.table_path, "Analysis table CSV produced by 'analyze'");
  add_input_options(export_plot, cfg, false);
  add_grouping_options(export_plot, cfg);
  export_plot->add_option("--jitter", cfg.jitter, "Spacing between adjacent series on the x axis")
      ->capture_default_str();
  add_output_option(export_plot, cfg);

  auto* simulate = app.add_subcommand("simulate", "Precision and coverage experiments on discretised lognormal data");
  simulate->add_option("mode", cfg.mode, "Which experiment to run")
      ->check(CLI::IsMember({"all", "precision", "coverage"}))
      ->capture_default_str();
  simulate->add_option("--mu", cfg.mu, "Mean of ln(1+c)")->capture_default_str();
  simulate->add_option("--sigma", cfg.sigma, "Standard deviation of ln(1+c), > 0")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--n", cfg.n, "Sample size per replicate")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--reps", cfg.replicates, "Number of replicates")->capture_default_str();
  simulate->add_option("--seed", cfg.seed, "Random seed")->required();
  simulate->add_option("--level", cfg.level, "Confidence level for the coverage experiment")
      ->check(kOpenUnitInterval)
      ->capture_default_str();
  simulate->add_option("--ref-draws", cfg.reference_draws, "Draws in the population reference sample")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--report-format", cfg.report_format, "Report layout")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();
  add_output_option(simulate, cfg);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (baselines->parsed()) cmd_baselines(cfg, out, err);
    if (score->parsed()) cmd_score(cfg, out, err);
    if (analyze->parsed()) cmd_analyze(cfg, out, err);
    if (export_plot->parsed()) cmd_export_plot(cfg, out, err);
    if (simulate->parsed()) cmd_simulate(cfg, out, err);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace gmncs::cli
