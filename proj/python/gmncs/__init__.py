from ._gmncs import (
    AnalysisError,
    ArticleRecord,
    Baseline,
    CoverageReport,
    GroupSummary,
    IngestError,
    MissingBaselineError,
    PlotPoint,
    PrecisionReport,
    analyze,
    arithmetic_mean,
    compute_baselines,
    coverage_experiment,
    geometric_mean,
    geometric_mean_ci,
    inverse_normal_cdf,
    jitter_plot_points,
    normal_critical_value,
    parse_file,
    precision_experiment,
    run_cli,
    sample,
)

__all__ = [
    "AnalysisError",
    "ArticleRecord",
    "Baseline",
    "CoverageReport",
    "GroupSummary",
    "IngestError",
    "MissingBaselineError",
    "PlotPoint",
    "PrecisionReport",
    "analyze",
    "arithmetic_mean",
    "compute_baselines",
    "coverage_experiment",
    "geometric_mean",
    "geometric_mean_ci",
    "inverse_normal_cdf",
    "jitter_plot_points",
    "normal_critical_value",
    "parse_file",
    "precision_experiment",
    "run_cli",
    "sample",
]
