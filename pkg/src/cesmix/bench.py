"""Cross-validation tables and potential curves for the hierarchy.

Pairs the closed-form level formula with the shooting eigensolver over a
whole hierarchy: row n of a comparison table holds the closed-form E_n,
the numerically computed level (n - k) of every member k <= n in the
original energy scale, and the defect delta_e between the numeric level n
of the original potential and the closed form.  Reports render as a
human-readable table, CSV, or JSON.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import shooting, susy

EXACT_GROUND_TOL = 2e-3


class UnknownFormat(susy.ValidationError):
    """Requested rendering format is not one of human, csv, json."""


@dataclass(frozen=True)
class ParameterSet:
    """Named choice of the free parameters (l, b, c) and hierarchy depth."""

    label: str
    l: float
    b: float
    c: float
    k_max: int = 4

    def __post_init__(self):
        if not self.b > 0:
            raise susy.NonPositiveB("b must be positive")
        if self.l < 0:
            raise susy.NegativeL("l must be non-negative")
        if self.c == 0:
            raise susy.ZeroC("constrained algebra requires c != 0")
        if self.k_max < 0:
            raise susy.ValidationError("k_max must be non-negative")


# Built-in parameter choices used throughout the regression suite.
SET_I = ParameterSet("I", l=1.0, b=0.5, c=0.01)
SET_II = ParameterSet("II", l=1.0, b=3.0, c=1.0)
BUILTIN_SETS = {"I": SET_I, "II": SET_II}


@dataclass
class ComparisonRow:
    """One energy level: closed form vs numeric levels of members 0..n."""

    n: int
    susy_energy: float
    numeric_by_member: dict[int, float | None]
    delta_e: float | None
    diagnostics: dict[int, str] = field(default_factory=dict)


@dataclass
class TableReport:
    """Comparison rows for one parameter set."""

    label: str
    l: float
    b: float
    c: float
    k_max: int
    rows: list[ComparisonRow]


@dataclass(frozen=True)
class CurveSeries:
    """Sampled potential curve of hierarchy member k in the original scale."""

    k: int
    points: np.ndarray  # (n_points, 2) rows of (r, V)


def run_comparison(
    pset: ParameterSet,
    r_min: float | None = None,
    r_max: float | None = None,
    n_steps: int | None = None,
    tol: float = shooting.DEFAULT_TOL,
) -> TableReport:
    """Fill the comparison table for one parameter set.

    Every cell is an independent eigensolver run; a failed cell is recorded
    as absent with a diagnostic instead of aborting the table.
    """
    members = susy.build_hierarchy(pset.l, pset.b, pset.c, pset.k_max)
    e_top = susy.closed_form_energy(pset.l, pset.b, pset.c, pset.k_max)

    cells: dict[tuple[int, int], float | None] = {}
    notes: dict[tuple[int, int], str] = {}
    for member in members:
        grid = shooting.build_grid(
            member.params, e_top, r_min=r_min, r_max=r_max, n_steps=n_steps
        )
        previous = None
        for level in range(pset.k_max - member.k + 1):
            row = level + member.k
            try:
                res = shooting.find_eigenvalue(
                    member.params, level, grid, tol, e_start=previous
                )
            except shooting.SolverError as exc:
                cells[(row, member.k)] = None
                notes[(row, member.k)] = str(exc)
                continue
            cells[(row, member.k)] = res.energy
            previous = res.energy

    rows = []
    for n in range(pset.k_max + 1):
        numeric = {k: cells.get((n, k)) for k in range(n + 1)}
        diagnostics = {k: notes[(n, k)] for k in range(n + 1) if (n, k) in notes}
        base = numeric.get(0)
        delta = None if base is None else base - members[n].ground_energy
        rows.append(
            ComparisonRow(
                n=n,
                susy_energy=members[n].ground_energy,
                numeric_by_member=numeric,
                delta_e=delta,
                diagnostics=diagnostics,
            )
        )
    return TableReport(
        label=pset.label, l=pset.l, b=pset.b, c=pset.c, k_max=pset.k_max, rows=rows
    )


def emit_curves(
    pset: ParameterSet, r_lo: float, r_hi: float, n_points: int
) -> list[CurveSeries]:
    """Sample every member's potential uniformly on [r_lo, r_hi]."""
    if not (0 < r_lo < r_hi):
        raise susy.ValidationError("curve range requires 0 < r_lo < r_hi")
    if n_points < 2:
        raise susy.ValidationError("n_points must be at least 2")
    r = np.linspace(r_lo, r_hi, n_points)
    return [
        CurveSeries(k=m.k, points=np.column_stack((r, susy.eval_potential(m, r))))
        for m in susy.build_hierarchy(pset.l, pset.b, pset.c, pset.k_max)
    ]


def _g12(x: float) -> str:
    return f"{x:.12g}"


def _round12(x: float) -> float:
    return float(_g12(x))


def _delta_cell(row: ComparisonRow, absent: str) -> str | None:
    if row.delta_e is None:
        return absent
    if row.n == 0 and abs(row.delta_e) < EXACT_GROUND_TOL:
        return "exact"
    return None  # caller formats the number


def render_report(report, fmt: str) -> str:
    """Render a TableReport or a list of CurveSeries as text.

    Human tables round energies to two decimals; csv and json carry twelve
    significant digits.  Absent cells render as "-" (human), empty (csv)
    and null (json).
    """
    if isinstance(report, TableReport):
        renderers = {"human": _table_human, "csv": _table_csv, "json": _table_json}
    elif (
        isinstance(report, (list, tuple))
        and report
        and all(isinstance(s, CurveSeries) for s in report)
    ):
        renderers = {"human": _curves_human, "csv": _curves_csv, "json": _curves_json}
    else:
        raise UnknownFormat(f"cannot render object of type {type(report).__name__}")
    try:
        renderer = renderers[fmt]
    except KeyError:
        raise UnknownFormat(f"unknown format {fmt!r}; expected human, csv or json") from None
    return renderer(report)


def _table_human(report: TableReport) -> str:
    headers = ["n", "E_susy"] + [f"member {k}" for k in range(report.k_max + 1)] + ["delta_e"]
    lines = [
        f"parameter set {report.label}: l={report.l:g} b={report.b:g} c={report.c:g}"
    ]
    body = []
    for row in report.rows:
        cells = [str(row.n), f"{row.susy_energy:.2f}"]
        for k in range(report.k_max + 1):
            value = row.numeric_by_member.get(k)
            cells.append("-" if value is None else f"{value:.2f}")
        label = _delta_cell(row, "-")
        cells.append(label if label is not None else f"{row.delta_e:.2f}")
        body.append(cells)
    widths = [
        max(len(row[i]) for row in [headers] + body) for i in range(len(headers))
    ]
    lines.append("  ".join(h.rjust(w) for h, w in zip(headers, widths)))
    for cells in body:
        lines.append("  ".join(c.rjust(w) for c, w in zip(cells, widths)))
    return "\n".join(lines) + "\n"


def _table_csv(report: TableReport) -> str:
    header = (
        "n,susy_energy,"
        + ",".join(f"numeric_k{k}" for k in range(report.k_max + 1))
        + ",delta_e"
    )
    lines = [header]
    for row in report.rows:
        cells = [str(row.n), _g12(row.susy_energy)]
        for k in range(report.k_max + 1):
            value = row.numeric_by_member.get(k)
            cells.append("" if value is None else _g12(value))
        label = _delta_cell(row, "")
        cells.append(label if label is not None else _g12(row.delta_e))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _table_json(report: TableReport) -> str:
    payload = {
        "label": report.label,
        "l": report.l,
        "b": report.b,
        "c": report.c,
        "k_max": report.k_max,
        "rows": [
            {
                "n": row.n,
                "susy_energy": _round12(row.susy_energy),
                "numeric_by_member": {
                    str(k): (None if v is None else _round12(v))
                    for k, v in sorted(row.numeric_by_member.items())
                },
                "delta_e": None if row.delta_e is None else _round12(row.delta_e),
                "diagnostics": {str(k): v for k, v in sorted(row.diagnostics.items())},
            }
            for row in report.rows
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def parse_report(text: str) -> TableReport:
    """Inverse of the JSON rendering of a TableReport."""
    payload = json.loads(text)
    rows = [
        ComparisonRow(
            n=row["n"],
            susy_energy=row["susy_energy"],
            numeric_by_member={int(k): v for k, v in row["numeric_by_member"].items()},
            delta_e=row["delta_e"],
            diagnostics={int(k): v for k, v in row.get("diagnostics", {}).items()},
        )
        for row in payload["rows"]
    ]
    return TableReport(
        label=payload["label"],
        l=payload["l"],
        b=payload["b"],
        c=payload["c"],
        k_max=payload["k_max"],
        rows=rows,
    )


def _curves_human(series: list[CurveSeries]) -> str:
    header = ["r"] + [f"V{s.k}" for s in series]
    lines = ["  ".join(h.rjust(12) for h in header)]
    for i in range(len(series[0].points)):
        cells = [f"{series[0].points[i, 0]:.6f}"]
        cells += [f"{s.points[i, 1]:.6f}" for s in series]
        lines.append("  ".join(c.rjust(12) for c in cells))
    return "\n".join(lines) + "\n"


def _curves_csv(series: list[CurveSeries]) -> str:
    header = "r," + ",".join(f"V{s.k}" for s in series)
    lines = [header]
    for i in range(len(series[0].points)):
        cells = [_g12(series[0].points[i, 0])]
        cells += [_g12(s.points[i, 1]) for s in series]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _curves_json(series: list[CurveSeries]) -> str:
    payload = {
        "curves": [
            {
                "k": s.k,
                "points": [[_round12(r), _round12(v)] for r, v in s.points],
            }
            for s in series
        ]
    }
    return json.dumps(payload, indent=2) + "\n"
