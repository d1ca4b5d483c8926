"""Comparison tables, curve emission, and report rendering."""

import json
import math

import numpy as np
import pytest

from cesmix import bench, susy

STEPS = 3000  # coarse but converged grids keep this module fast


@pytest.fixture(scope="module")
def set_i_k1_report():
    pset = bench.ParameterSet("I", 1.0, 0.5, 0.01, k_max=1)
    return bench.run_comparison(pset, n_steps=STEPS)


def make_report():
    """Hand-built report with one absent cell, for rendering tests."""
    rows = [
        bench.ComparisonRow(
            n=0, susy_energy=3.5355276559, numeric_by_member={0: 3.5355276623}, delta_e=6.4e-9
        ),
        bench.ComparisonRow(
            n=1,
            susy_energy=6.3639582529,
            numeric_by_member={0: 6.3614264900, 1: None},
            delta_e=-0.0025317629,
            diagnostics={1: "no bracket"},
        ),
    ]
    return bench.TableReport(label="I", l=1.0, b=0.5, c=0.01, k_max=1, rows=rows)


# ---------------------------------------------------------------- parameters

def test_builtin_sets():
    assert bench.SET_I.l == 1.0 and bench.SET_I.b == 0.5 and bench.SET_I.c == 0.01
    assert bench.SET_II.l == 1.0 and bench.SET_II.b == 3.0 and bench.SET_II.c == 1.0
    assert set(bench.BUILTIN_SETS) == {"I", "II"}


def test_parameter_set_validation():
    with pytest.raises(susy.NonPositiveB):
        bench.ParameterSet("x", 1.0, -1.0, 1.0)
    with pytest.raises(susy.ZeroC):
        bench.ParameterSet("x", 1.0, 1.0, 0.0)
    with pytest.raises(susy.NegativeL):
        bench.ParameterSet("x", -1.0, 1.0, 1.0)
    with pytest.raises(susy.ValidationError):
        bench.ParameterSet("x", 1.0, 1.0, 1.0, k_max=-1)


# ---------------------------------------------------------------- comparison

def test_run_comparison_structure(set_i_k1_report):
    report = set_i_k1_report
    assert [row.n for row in report.rows] == [0, 1]
    row0, row1 = report.rows
    assert math.isclose(row0.susy_energy, susy.closed_form_energy(1.0, 0.5, 0.01, 0), rel_tol=1e-15)
    assert set(row0.numeric_by_member) == {0}
    assert set(row1.numeric_by_member) == {0, 1}
    assert not row0.diagnostics and not row1.diagnostics
    assert row1.delta_e == row1.numeric_by_member[0] - row1.susy_energy


def test_run_comparison_ground_state_exact(set_i_k1_report):
    row0 = set_i_k1_report.rows[0]
    assert abs(row0.delta_e) < 2e-3


def test_run_comparison_k0_single_row():
    pset = bench.ParameterSet("I", 1.0, 0.5, 0.01, k_max=0)
    report = bench.run_comparison(pset, n_steps=STEPS)
    assert len(report.rows) == 1
    rendered = bench.render_report(report, "human")
    assert "exact" in rendered


def test_run_comparison_diagonal_is_exact():
    """Diagonal cells (ground of member n) reproduce the closed form."""
    pset = bench.ParameterSet("I", 1.0, 0.5, 0.01, k_max=2)
    report = bench.run_comparison(pset, n_steps=STEPS)
    for row in report.rows:
        assert abs(row.numeric_by_member[row.n] - row.susy_energy) < 2e-3


# -------------------------------------------------------------------- curves

def test_emit_curves_two_points_hits_endpoints():
    series = bench.emit_curves(bench.SET_I, 0.5, 4.0, 2)
    assert len(series) == bench.SET_I.k_max + 1
    for s in series:
        assert s.points.shape == (2, 2)
        assert s.points[0, 0] == 0.5
        assert s.points[1, 0] == 4.0


def test_emit_curves_strictly_ordered_set_ii():
    series = bench.emit_curves(bench.SET_II, 0.3, 4.0, 50)
    for lower, upper in zip(series, series[1:]):
        assert np.all(upper.points[:, 1] > lower.points[:, 1])


def test_emit_curves_set_i_slope_drift_is_small():
    """Raw member curves differ by the offset and centrifugal terms; the
    slope contribution alone stays below 0.01 over the plotted range."""
    series = bench.emit_curves(bench.SET_I, 0.3, 4.0, 41)
    members = susy.build_hierarchy(1.0, 0.5, 0.01, 4)
    r = series[0].points[:, 0]
    base = members[0].params
    for member, s in zip(members, series):
        p = member.params
        centrifugal = (p.l * (p.l + 1.0) - base.l * (base.l + 1.0)) / (r * r)
        slope_part = s.points[:, 1] - series[0].points[:, 1] - p.offset - centrifugal
        expected = (p.a - base.a) * r
        assert np.max(np.abs(slope_part - expected)) < 1e-10
        assert np.max(np.abs(slope_part)) < 0.01


def test_emit_curves_validation():
    with pytest.raises(susy.ValidationError):
        bench.emit_curves(bench.SET_I, 0.0, 4.0, 10)
    with pytest.raises(susy.ValidationError):
        bench.emit_curves(bench.SET_I, 4.0, 0.3, 10)
    with pytest.raises(susy.ValidationError):
        bench.emit_curves(bench.SET_I, 0.3, 4.0, 1)


# ----------------------------------------------------------------- rendering

def test_render_human_two_decimals_and_tokens():
    text = bench.render_report(make_report(), "human")
    assert "3.54" in text  # 3.5355... rounds to two decimals
    assert "exact" in text
    assert " -" in text  # absent cell
    assert "6.36" in text


def test_render_csv_header_and_precision():
    text = bench.render_report(make_report(), "csv")
    lines = text.strip().splitlines()
    assert lines[0] == "n,susy_energy,numeric_k0,numeric_k1,delta_e"
    row0 = lines[1].split(",")
    assert row0[0] == "0"
    assert float(row0[1]) == pytest.approx(3.5355276559, rel=1e-10)
    assert row0[-1] == "exact"
    row1 = lines[2].split(",")
    assert row1[3] == ""  # absent cell renders empty
    assert float(row1[-1]) == pytest.approx(-0.0025317629, rel=1e-9)


def test_render_json_round_trip():
    report = make_report()
    text = bench.render_report(report, "json")
    parsed = bench.parse_report(text)
    assert parsed.label == report.label
    assert parsed.k_max == report.k_max
    for got, want in zip(parsed.rows, report.rows):
        assert got.n == want.n
        assert math.isclose(got.susy_energy, want.susy_energy, rel_tol=1e-10)
        assert set(got.numeric_by_member) == set(want.numeric_by_member)
        assert got.numeric_by_member[1] is None if 1 in got.numeric_by_member else True
        assert got.diagnostics == want.diagnostics
    # a second render of the parsed report is byte-identical
    assert bench.render_report(parsed, "json") == text


def test_render_json_null_for_absent():
    payload = json.loads(bench.render_report(make_report(), "json"))
    assert payload["rows"][1]["numeric_by_member"]["1"] is None


def test_render_deterministic():
    report = make_report()
    for fmt in ("human", "csv", "json"):
        assert bench.render_report(report, fmt) == bench.render_report(report, fmt)


def test_render_empty_report_header_only():
    empty = bench.TableReport(label="x", l=1.0, b=1.0, c=1.0, k_max=2, rows=[])
    text = bench.render_report(empty, "csv")
    assert text == "n,susy_energy,numeric_k0,numeric_k1,numeric_k2,delta_e\n"


def test_render_unknown_format():
    with pytest.raises(bench.UnknownFormat):
        bench.render_report(make_report(), "yaml")
    with pytest.raises(bench.UnknownFormat):
        bench.render_report(42, "csv")
    with pytest.raises(bench.UnknownFormat):
        bench.render_report([], "csv")


def test_render_curves_csv():
    series = bench.emit_curves(bench.SET_II, 0.3, 4.0, 5)
    text = bench.render_report(series, "csv")
    lines = text.strip().splitlines()
    assert lines[0] == "r,V0,V1,V2,V3,V4"
    assert len(lines) == 6
    first = [float(x) for x in lines[1].split(",")]
    assert first[0] == pytest.approx(0.3)
    assert first[1:] == sorted(first[1:])  # ordering across members


def test_render_curves_json():
    series = bench.emit_curves(bench.SET_I, 0.5, 1.0, 3)
    payload = json.loads(bench.render_report(series, "json"))
    assert [c["k"] for c in payload["curves"]] == [0, 1, 2, 3, 4]
    assert len(payload["curves"][0]["points"]) == 3
