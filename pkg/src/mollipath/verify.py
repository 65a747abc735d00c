"""Grid-based checks of the structural guarantees of mollification.

Each check samples the smoothed function on an explicit grid and returns a
:class:`CheckReport`.  A property violation is reported as data
(``passed=False``); exceptions are reserved for numerical failures such as
non-converging quadrature.

``worst_violation`` is the smallest margin seen: non-negative when the
property holds everywhere on the grid, negative by the amount of the worst
breach otherwise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .curvature import sampled_max_curvature
from .geometry import distance_to_hull, refine_length
from .paths import ExtendedPath, ParametricPath, WaypointPath, extend, function_path
from .smoothing import MollifiedPath


@dataclass
class CheckReport:
    name: str
    passed: bool
    worst_violation: float
    samples: int
    tolerance: float = 0.0
    skipped: bool = False
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "worstViolation": self.worst_violation,
            "samples": self.samples,
            "tolerance": self.tolerance,
            "skipped": self.skipped,
            "details": self.details,
        }


def _report(name, margin, samples, tol, **details) -> CheckReport:
    margin = float(margin)
    return CheckReport(name=name, passed=bool(margin >= -tol), worst_violation=margin,
                       samples=int(samples), tolerance=tol, details=details)


def _grid(grid) -> np.ndarray:
    if isinstance(grid, tuple) and len(grid) == 3:
        lo, hi, count = grid
        return np.linspace(lo, hi, int(count))
    return np.asarray(grid, dtype=float)


def _as_1d_path(fn, kinks) -> ExtendedPath:
    if isinstance(fn, (ParametricPath, ExtendedPath)):
        return extend(fn)
    return extend(function_path(fn, kinks))


def mollify_1d(fn, eps: float, ts, kinks: Sequence[float] = ()):
    """Source values and mollified values of a scalar function on ``ts``."""
    path = _as_1d_path(fn, kinks)
    ts = np.asarray(ts, dtype=float)
    return path(ts)[:, 0], MollifiedPath(path, eps).sample(ts)[:, 0]


def check_convexity_preservation(fn, eps: float, grid=(-3.0, 3.0, 601),
                                 kinks: Sequence[float] = (), tol: float = 1e-9) -> CheckReport:
    """Second differences of the mollified function are >= -tol."""
    ts = _grid(grid)
    _, F = mollify_1d(fn, eps, ts, kinks)
    d2 = F[2:] - 2.0 * F[1:-1] + F[:-2]
    return _report("convexity_preservation", d2.min(), ts.size, tol, eps=eps)


def check_local_convexity_window(fn, window, eps_list: Iterable[float], count: int = 201,
                                 kinks: Sequence[float] = (), shrink: bool = False,
                                 tol: float = 1e-9) -> list:
    """Convexity of the mollified function on an open window, one report per eps.

    With ``shrink=True`` the window is narrowed by ``eps`` on each side, the
    region where only values from inside the original window contribute.
    Reports also record whether the mollified values lie strictly below the
    source at every grid point.
    """
    a, b = window
    reports = []
    for eps in eps_list:
        lo, hi = (a + eps, b - eps) if shrink else (a, b)
        if not hi > lo:
            reports.append(CheckReport("local_convexity", True, 0.0, 0, tol, skipped=True,
                                       details={"eps": eps, "reason": "window empty after shrink"}))
            continue
        ts = np.linspace(lo, hi, count + 2)[1:-1]
        f, F = mollify_1d(fn, eps, ts, kinks)
        d2 = F[2:] - 2.0 * F[1:-1] + F[:-2]
        reports.append(_report("local_convexity", d2.min(), ts.size, tol, eps=eps,
                               window=[lo, hi], below_source=bool(np.all(F < f)),
                               max_excess=float(np.max(F - f))))
    return reports


def check_dominance(fn, eps: float, grid=(-3.0, 3.0, 601),
                    kinks: Sequence[float] = (), tol: float = 1e-9) -> CheckReport:
    """Mollified minus source is >= -tol (convex sources)."""
    ts = _grid(grid)
    f, F = mollify_1d(fn, eps, ts, kinks)
    return _report("dominance", np.min(F - f), ts.size, tol, eps=eps)


def check_monotonicity(fn, eps: float, grid=(-2.0, 6.0, 801), kinks: Sequence[float] = (),
                       decreasing: bool = False, tol: float = 1e-9) -> CheckReport:
    ts = _grid(grid)
    _, F = mollify_1d(fn, eps, ts, kinks)
    d1 = np.diff(F)
    margin = (-d1 if decreasing else d1).min()
    return _report("monotonicity", margin, ts.size, tol, eps=eps, decreasing=decreasing)


def sublevel_margin(values) -> float:
    """Smallest margin of sublevel-set contiguity over all sampled levels.

    A sublevel set ``{i : v[i] <= alpha}`` breaks into pieces exactly when
    some ``v[j]`` exceeds both the smallest value to its left and the
    smallest to its right.  The margin is minus the largest such excess
    (0 when there is none).
    """
    v = np.asarray(values, dtype=float)
    if v.size < 3:
        return 0.0
    left = np.minimum.accumulate(v)[:-2]
    right = np.minimum.accumulate(v[::-1])[::-1][2:]
    excess = v[1:-1] - np.maximum(left, right)
    return float(min(0.0, -excess.max()))


def check_quasiconvexity(fn, eps: float, grid=(-3.0, 3.0, 601),
                         kinks: Sequence[float] = (), tol: float = 1e-9) -> CheckReport:
    """Every sampled sublevel set of the mollified function is an index interval."""
    ts = _grid(grid)
    _, F = mollify_1d(fn, eps, ts, kinks)
    return _report("quasiconvexity", sublevel_margin(F), ts.size, tol, eps=eps)


def _source_cloud(source: ExtendedPath, domain, count):
    a, b = domain
    ts = np.linspace(a, b, count, endpoint=not source.policy == "periodic")
    if source.is_waypoint:
        knots = np.arange(math.ceil(a), math.floor(b) + 1, dtype=float)
        ts = np.union1d(ts, knots)
    return source(ts)


def check_hull_enclosure(source, mollified: MollifiedPath, domain=None,
                         sample_count: int = 10_000, slack: float = 1e-6) -> CheckReport:
    """Every sampled mollified point lies within ``slack`` of the source's hull.

    The hull is built from ``sample_count`` source samples over ``domain``
    (plus every knot of a waypoint source).
    """
    source = extend(source)
    domain = domain or source.domain
    cloud = _source_cloud(source, domain, sample_count)
    ts = np.linspace(domain[0], domain[1], sample_count)
    pts = mollified.sample(ts)
    if cloud.shape[1] == 1:
        # the hull of a scalar cloud is the interval it spans
        x = pts[:, 0]
        dist = np.maximum(np.maximum(cloud.min() - x, x - cloud.max()), 0.0)
    else:
        dist = distance_to_hull(cloud, pts)
    return _report("hull_enclosure", slack - dist.max(), ts.size, 0.0,
                   slack=slack, max_distance=float(dist.max()))


def _path_length(path, domain, p, length_tol):
    if isinstance(path, ExtendedPath) and path.is_waypoint and tuple(domain) == path.domain:
        return path.source.length(p)
    return refine_length(path, domain, p=p, tol=length_tol)


def check_length_non_increase(source, mollified: MollifiedPath, p=2, tol: float = 1e-6,
                              domain=None, length_tol: float = 1e-6) -> CheckReport:
    """Refined length of the mollified path does not exceed the source's."""
    source = extend(source)
    domain = domain or source.domain
    src_len = _path_length(source, domain, p, length_tol)
    mol_len = refine_length(mollified, domain, p=p, tol=length_tol)
    return _report("length_non_increase", src_len - mol_len, 0, tol,
                   p=str(p), source_length=src_len, mollified_length=mol_len)


def check_uniform_convergence(fn, lipschitz: Optional[float], eps_sequence: Sequence[float],
                              grid=(-3.0, 3.0, 601), kinks: Sequence[float] = (),
                              tol: float = 1e-8) -> CheckReport:
    """``sup |F_eps - f| <= K eps`` on the grid, with errors shrinking as eps does.

    A source with no finite Lipschitz constant is skipped.
    """
    if lipschitz is None or not math.isfinite(lipschitz):
        return CheckReport("uniform_convergence", True, 0.0, 0, tol, skipped=True,
                           details={"reason": "source is not Lipschitz"})
    ts = _grid(grid)
    eps_desc = sorted(eps_sequence, reverse=True)
    errors = []
    margins = []
    for eps in eps_desc:
        f, F = mollify_1d(fn, eps, ts, kinks)
        err = float(np.max(np.abs(F - f)))
        errors.append(err)
        margins.append(lipschitz * eps + tol - err)
    # sup error must not grow as eps shrinks
    margins.extend(errors[k] - errors[k + 1] + tol for k in range(len(errors) - 1))
    return _report("uniform_convergence", min(margins), ts.size * len(eps_desc), 0.0,
                   epsilons=eps_desc, sup_errors=errors)


def check_curvature_budget(path: WaypointPath, eps: float, kappa_max: float,
                           samples_per_unit: int = 64, rel_tol: float = 1e-6) -> CheckReport:
    """Sampled curvature of the smoothed waypoint path stays within the budget."""
    peak = sampled_max_curvature(path, eps, samples_per_unit)
    limit = kappa_max * (1.0 + rel_tol)
    n = int(math.ceil(path.n_segments * samples_per_unit)) + 1
    return _report("curvature_budget", limit - peak, n, 0.0,
                   kappa_max=kappa_max, sampled_max=peak, eps=eps)


def reports_document(reports: Sequence[CheckReport]) -> str:
    """JSON document listing the reports and an overall verdict."""
    body = {
        "passed": all(r.passed for r in reports),
        "reports": [r.to_dict() for r in reports],
    }
    return json.dumps(body, indent=2, default=float)


# Convex on (-0.5, 0.5), yet wide kernels pull the smoothed curve below it there.
COUNTEREXAMPLE_KINKS = (0.0, 0.5)
COUNTEREXAMPLE_WINDOW = (-0.5, 0.5)


def counterexample_function(x):
    """``0`` for ``x < 0``, ``x`` up to ``1/2``, then ``1 - x``."""
    x = np.asarray(x, dtype=float)
    return np.where(x < 0.0, 0.0, np.where(x <= 0.5, x, 1.0 - x))
