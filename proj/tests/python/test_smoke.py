import json
import math

import pytest

import gmncs

# Values computed with numpy/scipy for the {0, 1, 3, 7} cell.
FIXTURE_GEO = 1.8284271247461903
FIXTURE_CI = (0.1767833080604298, 5.798192959743431)
FIXTURE_CELL_GMNCS = 1.1074159425740515


def fixture_records():
    return [gmncs.ArticleRecord(f"a{i}", 2009, ["X"], c, 1, ["GB"]) for i, c in enumerate([0, 1, 3, 7], 1)]


def test_geometric_mean_and_interval():
    assert gmncs.geometric_mean([0, 1, 3, 7]) == pytest.approx(FIXTURE_GEO, abs=1e-12)
    center, low, high = gmncs.geometric_mean_ci([0, 1, 3, 7], 0.95)
    assert center == pytest.approx(FIXTURE_GEO, abs=1e-12)
    assert (low, high) == pytest.approx(FIXTURE_CI, abs=1e-12)
    assert gmncs.geometric_mean_ci([4.0]) == (pytest.approx(4.0), None, None)
    with pytest.raises(ValueError):
        gmncs.geometric_mean([])


def test_inverse_normal_cdf():
    assert gmncs.inverse_normal_cdf(0.975) == pytest.approx(1.959963984540054, abs=1e-12)
    assert gmncs.normal_critical_value(0.99) == pytest.approx(2.5758293035489004, abs=1e-12)


def test_baselines_and_analysis():
    records = fixture_records()
    baselines = gmncs.compute_baselines(records)
    cell = baselines[("X", 2009)]
    assert (cell.n, cell.arith_mean) == (4, 2.75)
    assert cell.geo_mean == pytest.approx(FIXTURE_GEO, abs=1e-12)

    rows = gmncs.analyze(records)
    assert [(r.group, r.author_bucket, r.n) for r in rows] == [("All", 1, 4), ("GB", 1, 4)]
    assert rows[0].gmncs == pytest.approx(FIXTURE_CELL_GMNCS, abs=1e-12)
    assert rows[0].ci_high - rows[0].gmncs > rows[0].gmncs - rows[0].ci_low

    points = gmncs.jitter_plot_points(rows)
    assert [p.x_jittered for p in points] == pytest.approx([0.97, 1.03])


def test_countries_are_normalized():
    record = gmncs.ArticleRecord("a", 2009, ["X"], 1, 2, ["gb", " GB", "de"])
    assert record.countries == ["GB", "DE"]


def test_parse_file_reports_bad_lines(tmp_path):
    good = {"id": "a", "year": 2009, "categories": ["X"], "citations": 2, "author_count": 1, "countries": []}
    path = tmp_path / "data.jsonl"
    path.write_text(json.dumps(good) + "\n{broken\n")
    records, errors = gmncs.parse_file(path)
    assert [r.id for r in records] == ["a"]
    assert [line for line, _ in errors] == [2]


def test_analysis_errors():
    zeros = [gmncs.ArticleRecord("a", 2009, ["X"], 0), gmncs.ArticleRecord("b", 2009, ["X"], 0)]
    with pytest.raises(gmncs.AnalysisError, match="no usable baseline"):
        gmncs.analyze(zeros)


def test_simulation():
    assert gmncs.sample(1.0, 1.1, 50, 7) == gmncs.sample(1.0, 1.1, 50, 7)
    precision = gmncs.precision_experiment(seed=3, replicates=500)
    assert precision.ratio < 1.0
    coverage = gmncs.coverage_experiment(seed=3, replicates=1000, reference_draws=100_000)
    assert 0.9 <= coverage.coverage <= 1.0
    assert math.isfinite(coverage.target)


def test_run_cli(tmp_path):
    code, out, err = gmncs.run_cli(["simulate", "precision", "--seed", "1", "--reps", "100", "--report-format", "csv"])
    assert code == 0, err
    assert out.startswith("mu,sigma,n,seed,replicates")
    code, _, err = gmncs.run_cli(["analyze", "--in", str(tmp_path / "missing.jsonl")])
    assert code != 0
    assert "missing.jsonl" in err
