"""Corner curvature of mollified waypoint paths and epsilon planning.

Around an isolated corner with incoming segment vector ``P1~`` and outgoing
``P2~`` the smoothed path has

    F'(t)  = A1(t) P1~ + A2(t) P2~
    F''(t) = phi_eps(t - knot) (P2~ - P1~)

where ``A2(t) = Phi_eps(t - knot)`` and ``A1 = 1 - A2``.  This gives a
closed-form curvature and a bound that does not depend on ``t``:

    kappa(t) <= |phi|_inf / eps * |P1~ ^ P2~| * M(P1~, P2~)

with ``M`` the inverse cube of the smallest norm of a convex combination of
the two segment vectors.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .geometry import wedge_norm
from .kernel import BUMP
from .paths import WaypointPath
from .smoothing import MollifiedPath

log = logging.getLogger(__name__)

# each epsilon must stay below this for a corner window to see only its two segments
EXACT_THRESHOLD = 0.5
DEFAULT_EPS_MIN = 1e-4
REFINE_SAMPLES_PER_UNIT = 64


class CornerNotIsolatedError(ValueError):
    """Another knot lies inside the kernel window of the corner."""


class PlanningError(RuntimeError):
    """Epsilon refinement did not bracket or converge."""


@dataclass(frozen=True, eq=False)
class CornerData:
    p_tilde1: np.ndarray
    p_tilde2: np.ndarray
    knot: float = 1.0

    def __post_init__(self):
        p1 = np.array(self.p_tilde1, dtype=float)
        p2 = np.array(self.p_tilde2, dtype=float)
        if p1.shape != p2.shape or p1.ndim != 1 or p1.size not in (2, 3):
            raise ValueError("segment vectors must be matching 2D or 3D vectors")
        if not (np.any(p1) and np.any(p2)):
            raise ValueError("segment vectors must be nonzero")
        object.__setattr__(self, "p_tilde1", p1)
        object.__setattr__(self, "p_tilde2", p2)
        object.__setattr__(self, "knot", float(self.knot))

    @classmethod
    def from_points(cls, p0, p1, p2, knot: float = 1.0) -> "CornerData":
        p0, p1, p2 = (np.asarray(p, dtype=float) for p in (p0, p1, p2))
        return cls(p1 - p0, p2 - p1, knot)


@dataclass(frozen=True)
class CornerEpsilon:
    index: int
    epsilon: float
    bound: float


@dataclass
class EpsilonPlan:
    per_corner: list
    global_epsilon: float
    exact: bool
    budget: float
    warnings: list = field(default_factory=list)
    refined: bool = False

    @property
    def epsilons(self) -> np.ndarray:
        return np.array([c.epsilon for c in self.per_corner])


def corner_weights(t, eps: float, knot: float = 1.0):
    """Kernel mass ``(A1, A2)`` on the incoming and outgoing segments."""
    a2 = BUMP.scaled(eps).cdf(np.subtract(t, knot))
    return 1.0 - a2, a2


def exact_corner_curvature(corner: CornerData, eps: float, t,
                           neighbor_knots: Sequence[float] = ()):
    """Closed-form curvature near an isolated corner.

    ``neighbor_knots`` are the parameters of the adjacent knots; if any lies
    strictly inside ``(t - eps, t + eps)`` the two-segment formula does not
    apply and :class:`CornerNotIsolatedError` is raised.
    """
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    t_arr = np.asarray(t, dtype=float)
    for k in neighbor_knots:
        if np.any(np.abs(t_arr - k) < eps):
            raise CornerNotIsolatedError(f"knot {k} lies within eps={eps} of the evaluation point")
    a1, a2 = corner_weights(t_arr, eps, corner.knot)
    speed = np.linalg.norm(np.multiply.outer(a1, corner.p_tilde1)
                           + np.multiply.outer(a2, corner.p_tilde2), axis=-1)
    weight = BUMP.scaled(eps)(t_arr - corner.knot)
    kappa = weight * wedge_norm(corner.p_tilde2, corner.p_tilde1) / speed**3
    return float(kappa) if t_arr.ndim == 0 else kappa


def min_speed_factor(corner: CornerData) -> float:
    """``M(P1~, P2~)``: inverse cube of the least norm over the segment between them."""
    p1, p2 = corner.p_tilde1, corner.p_tilde2
    diff = p2 - p1
    denom = float(diff @ diff)
    if denom == 0.0:
        return float(np.linalg.norm(p1)) ** -3
    s_bar = float(diff @ p2) / denom
    if 0.0 <= s_bar <= 1.0:
        return float(np.linalg.norm(s_bar * p1 + (1.0 - s_bar) * p2)) ** -3
    return max(float(np.linalg.norm(p1)) ** -3, float(np.linalg.norm(p2)) ** -3)


def bound_coefficient(corner: CornerData) -> float:
    """``eps * curvature_upper_bound``; zero for collinear corners."""
    if np.array_equal(corner.p_tilde1, corner.p_tilde2):
        return 0.0
    wedge = float(wedge_norm(corner.p_tilde1, corner.p_tilde2))
    if wedge == 0.0:
        return 0.0
    return BUMP.sup_norm * wedge * min_speed_factor(corner)


def curvature_upper_bound(corner: CornerData, eps: float) -> float:
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    return bound_coefficient(corner) / eps


def solve_epsilon_for_budget(corner: CornerData, kappa_max: float) -> float:
    """Smallest eps whose curvature bound equals ``kappa_max`` (0 if collinear)."""
    if not kappa_max > 0:
        raise ValueError(f"kappa_max must be positive, got {kappa_max}")
    return bound_coefficient(corner) / kappa_max


def path_corners(path: WaypointPath) -> list:
    """``(knot index, CornerData)`` for every interior corner, plus the seam when closed."""
    seg = path.segment_vectors
    out = [(i, CornerData(seg[i - 1], seg[i], knot=i)) for i in range(1, path.n_segments)]
    if path.closed:
        out.insert(0, (0, CornerData(seg[-1], seg[0], knot=0)))
    return out


def speed_to_curvature_budget(v: float, r_min: float, r_max: float, v_max: float) -> float:
    """Curvature budget ``1 / R(v)`` for the linear radius schedule
    ``R(v) = r_min + v / v_max * (r_max - r_min)``."""
    if not (0 < r_min <= r_max):
        raise ValueError(f"need 0 < r_min <= r_max, got r_min={r_min}, r_max={r_max}")
    if not v_max > 0:
        raise ValueError(f"v_max must be positive, got {v_max}")
    if not 0 <= v <= v_max:
        raise ValueError(f"speed {v} outside [0, {v_max}]")
    return 1.0 / (r_min + v / v_max * (r_max - r_min))


def sampled_max_curvature(path: WaypointPath, eps: float,
                          samples_per_unit: int = REFINE_SAMPLES_PER_UNIT) -> float:
    """Max curvature of the mollified path on a uniform grid over its domain."""
    lo, hi = path.domain
    ts = np.linspace(lo, hi, int(math.ceil((hi - lo) * samples_per_unit)) + 1)
    kappa = MollifiedPath(path, eps).curvature(ts)
    return float(np.nanmax(kappa))


def plan_epsilons(path: WaypointPath, kappa_max: float, eps_min: float = DEFAULT_EPS_MIN,
                  refine: bool = False, samples_per_unit: int = REFINE_SAMPLES_PER_UNIT,
                  rel_tol: float = 1e-3, max_iter: int = 60) -> EpsilonPlan:
    """Per-corner epsilons for a curvature budget and the global choice.

    Each corner gets the epsilon at which its two-segment bound meets
    ``kappa_max``; the global epsilon is their maximum (floored at
    ``eps_min``).  When some corner needs ``eps >= 0.5`` the bound is only
    approximate; with ``refine=True`` the global epsilon is then tuned by
    bisection against the sampled curvature of the whole smoothed path.
    """
    if path.n_segments < 2:
        raise ValueError("planning needs at least two segments")
    if not kappa_max > 0:
        raise ValueError(f"kappa_max must be positive, got {kappa_max}")
    corners = path_corners(path)
    eps_i = [solve_epsilon_for_budget(corner, kappa_max) for _, corner in corners]
    plan = EpsilonPlan(per_corner=[], global_epsilon=max(max(eps_i, default=0.0), eps_min),
                       exact=all(e < EXACT_THRESHOLD for e in eps_i),
                       budget=float(kappa_max))
    if not plan.exact:
        msg = (f"some corner needs eps >= {EXACT_THRESHOLD}; neighbouring segments overlap "
               "and the two-segment bound is only an approximation")
        plan.warnings.append(msg)
        log.warning(msg)
        if refine:
            plan.global_epsilon = _bisect_global_epsilon(
                path, kappa_max, plan.global_epsilon, eps_min, samples_per_unit,
                rel_tol, max_iter)
            plan.refined = True
    # bound each corner would see under the shared global epsilon
    plan.per_corner = [CornerEpsilon(index, e, curvature_upper_bound(corner, plan.global_epsilon))
                       for (index, corner), e in zip(corners, eps_i)]
    return plan


def _bisect_global_epsilon(path, kappa_max, start, eps_min, samples_per_unit,
                           rel_tol, max_iter):
    def ok(eps):
        return sampled_max_curvature(path, eps, samples_per_unit) <= kappa_max

    hi = start
    it = 0
    while not ok(hi):
        hi *= 2.0
        it += 1
        if it > max_iter or 2.0 * hi > 1e3 * path.n_segments:
            raise PlanningError(f"no epsilon up to {hi:.3g} meets kappa_max={kappa_max}")
    lo = hi / 2.0
    while ok(lo):
        hi = lo
        lo /= 2.0
        it += 1
        if lo < eps_min:
            return eps_min if ok(eps_min) else hi
        if it > max_iter:
            raise PlanningError("could not bracket the smallest admissible epsilon")
    while (hi - lo) > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
        it += 1
        if it > max_iter:
            raise PlanningError("epsilon bisection did not converge")
    return hi
