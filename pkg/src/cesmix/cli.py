"""Command-line front end.

Subcommands: spectrum (closed-form hierarchy listing), numeric (shooting
eigensolver on arbitrary mixed-potential parameters), compare (closed form
vs numeric table) and curves (sampled member potentials).  Exit codes:
0 success, 2 validation or usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench, shooting, susy


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cesmix",
        description="Spectra of V(r) = a*r + b*r^2 + c/r + l(l+1)/r^2: "
        "closed-form hierarchy and shooting eigensolver.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_set_or_params(p, with_a=False):
        p.add_argument("--set", choices=sorted(bench.BUILTIN_SETS), dest="set_label",
                       help="built-in parameter set (mutually exclusive with explicit parameters)")
        p.add_argument("--l", type=float, default=None, help="angular parameter l >= 0")
        p.add_argument("--b", type=float, default=None, help="quadratic coefficient b > 0")
        p.add_argument("--c", type=float, default=None, help="inverse-r coefficient c")
        if with_a:
            p.add_argument("--a", type=float, default=None,
                           help="linear coefficient a (defaults to the constrained value)")

    def add_solver(p):
        p.add_argument("--rmin", type=float, default=None, help="inner cutoff")
        p.add_argument("--rmax", type=float, default=None, help="outer cutoff")
        p.add_argument("--steps", type=int, default=None, help="grid steps (>= 1000)")
        p.add_argument("--tol", type=float, default=shooting.DEFAULT_TOL,
                       help="energy bisection tolerance")

    def add_output(p):
        p.add_argument("--format", choices=["human", "csv", "json"], default="human")
        p.add_argument("--out", default=None, help="output path (default: stdout)")

    p_spec = sub.add_parser("spectrum", help="closed-form hierarchy listing")
    add_set_or_params(p_spec)
    p_spec.add_argument("--k-max", type=int, default=4, dest="k_max")
    add_output(p_spec)

    p_num = sub.add_parser("numeric", help="shooting eigensolver levels")
    add_set_or_params(p_num, with_a=True)
    p_num.add_argument("--n-max", type=int, default=0, dest="n_max")
    add_solver(p_num)
    add_output(p_num)

    p_cmp = sub.add_parser("compare", help="closed form vs numeric table")
    add_set_or_params(p_cmp)
    p_cmp.add_argument("--k-max", type=int, default=4, dest="k_max")
    add_solver(p_cmp)
    add_output(p_cmp)

    p_crv = sub.add_parser("curves", help="sampled member potentials")
    add_set_or_params(p_crv)
    p_crv.add_argument("--k-max", type=int, default=4, dest="k_max")
    p_crv.add_argument("--r-lo", type=float, default=0.3, dest="r_lo")
    p_crv.add_argument("--r-hi", type=float, default=4.0, dest="r_hi")
    p_crv.add_argument("--points", type=int, default=200)
    p_crv.add_argument("--format", choices=["human", "csv", "json"], default="csv")
    p_crv.add_argument("--out", default=None)
    return parser


def _resolve_set(args, k_max: int) -> bench.ParameterSet:
    explicit = [v for v in (args.l, args.b, args.c) if v is not None]
    if args.set_label is not None:
        if explicit or getattr(args, "a", None) is not None:
            raise susy.ValidationError(
                "--set and explicit parameters are mutually exclusive"
            )
        base = bench.BUILTIN_SETS[args.set_label]
        return bench.ParameterSet(base.label, base.l, base.b, base.c, k_max)
    if len(explicit) != 3:
        raise susy.ValidationError("provide either --set or all of --l, --b, --c")
    return bench.ParameterSet("custom", args.l, args.b, args.c, k_max)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _cmd_spectrum(args) -> int:
    pset = _resolve_set(args, args.k_max)
    members = susy.build_hierarchy(pset.l, pset.b, pset.c, pset.k_max)
    records = [susy.member_record(m) for m in members]
    if args.format == "human":
        lines = [f"{'k':>3} {'a_k':>14} {'l_k':>6} {'offset':>12} {'E_k':>14}"]
        for rec in records:
            lines.append(
                f"{rec['k']:>3} {rec['a_k']:>14.6e} {rec['l_k']:>6g} "
                f"{rec['offset']:>12.6f} {rec['E_k']:>14.8f}"
            )
        text = "\n".join(lines) + "\n"
    elif args.format == "csv":
        lines = [",".join(susy.RECORD_FIELDS)]
        for rec in records:
            lines.append(",".join(f"{rec[f]:.12g}" for f in susy.RECORD_FIELDS))
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps({"members": records}, indent=2) + "\n"
    _emit(text, args.out)
    return 0


def _cmd_numeric(args) -> int:
    if args.set_label is not None:
        base = _resolve_set(args, 0)
        a = susy.solve_constraint(base.l, base.b, base.c).selected
        params = susy.PotentialParams(a=a, b=base.b, c=base.c, l=base.l)
    else:
        if args.b is None or args.l is None:
            raise susy.ValidationError("provide --set or at least --b and --l")
        params = susy.PotentialParams(
            a=0.0 if args.a is None else args.a,
            b=args.b,
            c=0.0 if args.c is None else args.c,
            l=args.l,
        )
    susy.validate_params(params)
    grid = shooting.auto_grid(
        params, args.n_max, r_min=args.rmin, r_max=args.rmax, n_steps=args.steps
    )
    levels = shooting.solve_spectrum(params, args.n_max, grid, tol=args.tol)
    if args.format == "human":
        lines = [f"{'n':>3} {'energy':>16} {'nodes':>6} {'residual':>12}"]
        for res in levels:
            lines.append(
                f"{res.n:>3} {res.energy:>16.9f} {res.n:>6} {res.residual:>12.3e}"
            )
        text = "\n".join(lines) + "\n"
    elif args.format == "csv":
        lines = ["n,energy,nodes,residual"]
        for res in levels:
            lines.append(f"{res.n},{res.energy:.12g},{res.n},{res.residual:.12g}")
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(
            {
                "levels": [
                    {
                        "n": res.n,
                        "energy": float(f"{res.energy:.12g}"),
                        "nodes": res.n,
                        "residual": float(f"{res.residual:.12g}"),
                    }
                    for res in levels
                ]
            },
            indent=2,
        ) + "\n"
    _emit(text, args.out)
    return 0


def _cmd_compare(args) -> int:
    pset = _resolve_set(args, args.k_max)
    report = bench.run_comparison(
        pset, r_min=args.rmin, r_max=args.rmax, n_steps=args.steps, tol=args.tol
    )
    for row in report.rows:
        if row.numeric_by_member and all(
            v is None for v in row.numeric_by_member.values()
        ):
            sys.stderr.write(
                f"error: every cell of row n={row.n} failed: {row.diagnostics}\n"
            )
            return 3
    _emit(bench.render_report(report, args.format), args.out)
    return 0


def _cmd_curves(args) -> int:
    pset = _resolve_set(args, args.k_max)
    series = bench.emit_curves(pset, args.r_lo, args.r_hi, args.points)
    _emit(bench.render_report(series, args.format), args.out)
    return 0


_DISPATCH = {
    "spectrum": _cmd_spectrum,
    "numeric": _cmd_numeric,
    "compare": _cmd_compare,
    "curves": _cmd_curves,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return _DISPATCH[args.command](args)
    except susy.ValidationError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except shooting.SolverError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 3


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
