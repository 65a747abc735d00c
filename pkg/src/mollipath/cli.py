"""Command-line interface: smooth, plan, analyze and demo.

Exit codes: 0 success, 1 input error, 2 numerical failure, 3 a check failed.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from typing import Optional, Sequence

import numpy as np

from .curvature import (DEFAULT_EPS_MIN, PlanningError, path_corners, plan_epsilons,
                        speed_to_curvature_budget)
from .documents import (InputError, load_waypoints, svg_document, write_plan,
                        write_samples)
from .geometry import LengthNotConverged, refine_length
from .paths import ExtendedPath, WaypointPath, cube_path, extend, heart_path, staircase_path
from .quadrature import QuadratureError
from .smoothing import MollifiedPath
from .verify import (COUNTEREXAMPLE_KINKS, COUNTEREXAMPLE_WINDOW, check_curvature_budget,
                     check_hull_enclosure, check_length_non_increase,
                     check_local_convexity_window, check_monotonicity, check_quasiconvexity,
                     counterexample_function, reports_document)

log = logging.getLogger("mollipath")

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_CHECK = 0, 1, 2, 3

STAIRCASE_STEPS = 4
DEMOS = {
    "heart": heart_path,
    "cube": cube_path,
    "staircase": lambda: staircase_path(STAIRCASE_STEPS),
}
# documented default kernel widths; the first entry is used when none is given
DEMO_EPSILONS = {
    "heart": [(0.4, 0.4), (0.2, 0.8)],
    "cube": [(1.0, 1.0, 1.0)],
    "staircase": [(0.5,)],
}
COUNTEREXAMPLE_EPS = (3.2,)


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, not argparse's default exit status 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _source_args(p: argparse.ArgumentParser, demos: Sequence[str]):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--input", "-i", help="waypoint document (JSON)")
    g.add_argument("--demo", choices=list(demos), help="built-in path")


def _budget_args(p: argparse.ArgumentParser, allow_eps: bool = True):
    g = p.add_mutually_exclusive_group()
    if allow_eps:
        g.add_argument("--eps", type=float, nargs="+", metavar="EPS",
                       help="kernel half-width, one value or one per component")
    g.add_argument("--kappa-max", type=float, metavar="K", help="curvature budget (1/m)")
    g.add_argument("--speed", type=float, nargs=4, metavar=("V", "RMIN", "RMAX", "VMAX"),
                   help="derive the budget from speed and the radius schedule")
    p.add_argument("--eps-min", type=float, default=DEFAULT_EPS_MIN)
    p.add_argument("--refine", action="store_true",
                   help="tune the global epsilon on sampled curvature when the bound is inexact")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mollipath", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("smooth", help="sample a mollified path")
    _source_args(p, DEMOS)
    _budget_args(p)
    p.add_argument("--samples-per-unit", type=int, default=200)
    p.add_argument("--format", choices=("table", "svg"), default="table")
    p.add_argument("--output", "-o", help="output file (default: stdout)")

    p = sub.add_parser("plan", help="per-corner and global epsilon for a budget")
    _source_args(p, ("cube",))
    _budget_args(p, allow_eps=False)
    p.add_argument("--samples-per-unit", type=int, default=64,
                   help="grid density for --refine")
    p.add_argument("--output", "-o")

    p = sub.add_parser("analyze", help="run the verification checks")
    _source_args(p, [*DEMOS, "counterexample"])
    _budget_args(p)
    p.add_argument("--samples", type=int, default=10_000, help="hull samples")
    p.add_argument("--slack", type=float, default=1e-6)
    p.add_argument("--length-norm", choices=("1", "2", "inf"), default="2")
    p.add_argument("--shrink", action="store_true",
                   help="counterexample: narrow the window by eps on each side")
    p.add_argument("--output", "-o")

    p = sub.add_parser("demo", help="write source and mollified samples for a built-in path")
    p.add_argument("name", choices=list(DEMOS))
    p.add_argument("--outdir", default=".")
    p.add_argument("--samples-per-unit", type=int, default=200)
    p.add_argument("--format", choices=("table", "svg"), default="table")
    return parser


# --- helpers ---------------------------------------------------------------

def _load_source(args):
    if args.demo == "counterexample":
        return None
    if args.demo:
        return DEMOS[args.demo]()
    return load_waypoints(args.input)


def _budget(args) -> Optional[float]:
    if args.kappa_max is not None:
        if not args.kappa_max > 0:
            raise InputError(f"--kappa-max must be positive, got {args.kappa_max}")
        return args.kappa_max
    if args.speed is not None:
        try:
            return speed_to_curvature_budget(*args.speed)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    return None


def _plan(source, args):
    if not isinstance(source, WaypointPath):
        raise InputError("curvature budgets need a waypoint path")
    try:
        plan = plan_epsilons(source, _budget(args), eps_min=args.eps_min, refine=args.refine)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    for msg in plan.warnings:
        print(f"warning: {msg}", file=sys.stderr)
    return plan


def _resolve_epsilons(source, args) -> tuple:
    eps = getattr(args, "eps", None)
    if eps is not None:
        if len(eps) not in (1, source.dimension):
            raise InputError(f"expected 1 or {source.dimension} epsilons, got {len(eps)}")
        if not all(e > 0 for e in eps):
            raise InputError("every epsilon must be positive")
        return tuple(eps)
    if args.kappa_max is not None or args.speed is not None:
        return (_plan(source, args).global_epsilon,)
    if args.demo in DEMO_EPSILONS:
        return DEMO_EPSILONS[args.demo][0]
    raise InputError("give one of --eps, --kappa-max or --speed")


def _grid(domain, samples_per_unit: int) -> np.ndarray:
    if samples_per_unit < 1:
        raise InputError("--samples-per-unit must be positive")
    lo, hi = domain
    return np.linspace(lo, hi, int(math.ceil((hi - lo) * samples_per_unit)) + 1)


def _corner_annotations(source, ts, kappa):
    ext = extend(source)
    if isinstance(source, WaypointPath):
        marks = [c.knot for _, c in path_corners(source)]
    else:
        marks = list(getattr(source, "kinks", ()))
    period = ext.period if ext.policy == "periodic" else None
    notes = []
    for knot in marks:
        d = ts - knot
        if period:
            d = (d + 0.5 * period) % period - 0.5 * period
        near = np.abs(d) < 0.5
        if not near.any():
            continue
        x, y = ext(knot)[:2]
        notes.append((x, y, f"κ={np.nanmax(kappa[near]):.3g}"))
    return notes


def _sample(source, eps, ts):
    mol = MollifiedPath(source, eps)
    pos = mol.sample(ts)
    vel = mol.sample(ts, 1)
    kappa = mol.curvature(ts) if mol.dimension in (2, 3) else None
    return pos, vel, kappa


def _render(out, source, eps, ts, fmt, title=""):
    pos, vel, kappa = _sample(source, eps, ts)
    if fmt == "table":
        write_samples(out, ts, pos, vel, kappa)
        return pos
    src = extend(source)(ts)
    if pos.shape[1] == 1:
        curves = [(np.column_stack([ts, src[:, 0]]), "#888", "source"),
                  (np.column_stack([ts, pos[:, 0]]), "#c00", f"eps={list(eps)}")]
        notes = []
    else:
        curves = [(src, "#888", "source"), (pos, "#c00", f"eps={list(eps)}")]
        notes = _corner_annotations(source, ts, kappa)
    out.write(svg_document(curves, notes, title=title))
    return pos


class _Output:
    def __init__(self, path):
        self.path = path
        self.fh = None

    def __enter__(self):
        self.fh = open(self.path, "w", encoding="utf-8", newline="") if self.path else sys.stdout
        return self.fh

    def __exit__(self, *exc):
        if self.path:
            self.fh.close()


# --- commands --------------------------------------------------------------

def run_smooth(args) -> int:
    source = _load_source(args)
    eps = _resolve_epsilons(source, args)
    ts = _grid(extend(source).domain, args.samples_per_unit)
    with _Output(args.output) as out:
        _render(out, source, eps, ts, args.format)
    return EXIT_OK


def run_plan(args) -> int:
    source = _load_source(args)
    if _budget(args) is None:
        raise InputError("plan needs --kappa-max or --speed")
    plan = _plan(source, args)
    with _Output(args.output) as out:
        write_plan(out, plan)
    return EXIT_OK


def _analyze_reports(args) -> list:
    if args.demo == "counterexample":
        eps = args.eps or COUNTEREXAMPLE_EPS
        if args.kappa_max is not None or args.speed is not None:
            raise InputError("counterexample takes --eps only")
        return check_local_convexity_window(counterexample_function, COUNTEREXAMPLE_WINDOW,
                                            eps, kinks=COUNTEREXAMPLE_KINKS,
                                            shrink=args.shrink)
    source = _load_source(args)
    eps = _resolve_epsilons(source, args)
    mol = MollifiedPath(source, eps)
    p = math.inf if args.length_norm == "inf" else int(args.length_norm)
    reports = [
        check_hull_enclosure(source, mol, sample_count=args.samples, slack=args.slack),
        check_length_non_increase(source, mol, p=p),
    ]
    budget = _budget(args)
    if budget is not None and isinstance(source, WaypointPath):
        reports.append(check_curvature_budget(source, eps if len(eps) > 1 else eps[0], budget))
    if source.dimension == 1:
        lo, hi = extend(source).domain
        grid = (lo - 1.0, hi + 1.0, 801)
        kinks = getattr(source, "kinks", ())
        fn = extend(source)
        reports.append(check_monotonicity(fn, eps[0], grid=grid, kinks=kinks))
        reports.append(check_quasiconvexity(fn, eps[0], grid=grid, kinks=kinks))
    return reports


def run_analyze(args) -> int:
    reports = _analyze_reports(args)
    with _Output(args.output) as out:
        out.write(reports_document(reports) + "\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_CHECK


def run_demo(args) -> int:
    source = DEMOS[args.name]()
    ts = _grid(extend(source).domain, args.samples_per_unit)
    os.makedirs(args.outdir, exist_ok=True)
    ext = "csv" if args.format == "table" else "svg"
    src_pos = extend(source)(ts)
    src_file = os.path.join(args.outdir, f"{args.name}_source.{ext}")
    with open(src_file, "w", encoding="utf-8", newline="") as fh:
        if args.format == "table":
            write_samples(fh, ts, src_pos)
        else:
            pts = src_pos if src_pos.shape[1] > 1 else np.column_stack([ts, src_pos[:, 0]])
            fh.write(svg_document([(pts, "#888", "source")], title=f"{args.name} source"))
    print(f"{src_file}: " + _lengths(extend(source), source))
    for eps in DEMO_EPSILONS[args.name]:
        tag = "_".join(f"{e:g}" for e in eps)
        path = os.path.join(args.outdir, f"{args.name}_eps{tag}.{ext}")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            _render(fh, source, eps, ts, args.format, title=f"{args.name} eps={tag}")
        print(f"{path}: " + _lengths(MollifiedPath(source, eps), source))
    return EXIT_OK


def _lengths(curve, source) -> str:
    domain = extend(source).domain
    parts = []
    for p, label in ((1, "l1"), (2, "l2")):
        if isinstance(curve, ExtendedPath) and curve.is_waypoint:
            value = source.length(p)
        else:
            value = refine_length(curve, domain, p=p, tol=1e-6)
        parts.append(f"{label}={value:.6f}")
    return " ".join(parts)


COMMANDS = {"smooth": run_smooth, "plan": run_plan, "analyze": run_analyze, "demo": run_demo}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help or a usage error
        return exc.code
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (QuadratureError, PlanningError, LengthNotConverged) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
