"""Path representations and their extension to the whole real line.

Waypoint paths use unit-parameter segments: knot ``i`` sits at ``t = i``.
A closed waypoint path has an implicit segment back to the first point and
period equal to its number of points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

CLAMP = "clamp"
PERIODIC = "periodic"


@dataclass(frozen=True, eq=False)
class WaypointPath:
    points: np.ndarray
    closed: bool = False

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] not in (2, 3):
            raise ValueError(f"points must be an (m, 2) or (m, 3) array, got shape {pts.shape}")
        if pts.shape[0] < 2:
            raise ValueError("a waypoint path needs at least 2 points")
        if not np.all(np.isfinite(pts)):
            raise ValueError("waypoints must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        seg = np.diff(self.vertices, axis=0)
        zero = np.flatnonzero(np.all(seg == 0.0, axis=1))
        if zero.size:
            raise ValueError(f"zero-length segment after waypoint {int(zero[0])}")

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    @property
    def vertices(self) -> np.ndarray:
        """Waypoints in visiting order; repeats the first point when closed."""
        if self.closed:
            return np.vstack([self.points, self.points[:1]])
        return self.points

    @property
    def n_segments(self) -> int:
        return self.vertices.shape[0] - 1

    @property
    def domain(self) -> tuple[float, float]:
        return 0.0, float(self.n_segments)

    @property
    def segment_vectors(self) -> np.ndarray:
        return np.diff(self.vertices, axis=0)

    def length(self, p=2) -> float:
        return float(np.linalg.norm(self.segment_vectors, ord=p, axis=1).sum())

    def evaluate(self, t):
        """Piecewise-linear interpolation on ``[0, n_segments]``."""
        t = np.asarray(t, dtype=float)
        lo, hi = self.domain
        if np.any((t < lo) | (t > hi)):
            raise ValueError("parameter outside the native domain; extend the path first")
        return _interp(self.vertices, t)


def _interp(vertices, t):
    n_seg = vertices.shape[0] - 1
    i = np.clip(np.floor(t).astype(np.intp), 0, n_seg - 1)
    frac = (t - i)[..., None]
    out = vertices[i] + frac * (vertices[i + 1] - vertices[i])
    exact = (t == np.floor(t)) & (t >= 0) & (t <= n_seg)
    if np.any(exact):
        # knots return the stored waypoint bit-for-bit
        out[exact] = vertices[t[exact].astype(np.intp)]
    return out


@dataclass(frozen=True, eq=False)
class ParametricPath:
    """A path given by one vectorized callable per component.

    ``domain`` is ``None`` for paths defined on the whole line.  ``kinks``
    lists parameters where some component is not smooth; they become
    quadrature breakpoints.  ``closed`` paths repeat with period
    ``domain[1] - domain[0]``.
    """

    components: tuple
    domain: Optional[tuple] = None
    kinks: tuple = ()
    closed: bool = False
    name: str = ""

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps or not all(callable(c) for c in comps):
            raise ValueError("components must be a non-empty sequence of callables")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "kinks", tuple(float(k) for k in self.kinks))
        if self.domain is not None:
            a, b = (float(v) for v in self.domain)
            if not a < b:
                raise ValueError(f"empty domain {self.domain}")
            object.__setattr__(self, "domain", (a, b))
        elif self.closed:
            raise ValueError("a closed path needs a compact domain to define its period")

    @property
    def dimension(self) -> int:
        return len(self.components)

    def component(self, i: int, t):
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(np.asarray(self.components[i](t), dtype=float), t.shape)

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        return np.stack([self.component(i, t) for i in range(self.dimension)], axis=-1)


@dataclass(frozen=True, eq=False)
class ExtendedPath:
    """A waypoint or parametric path made total on the real line."""

    source: object
    policy: str = ""
    period: Optional[float] = field(init=False, default=None)

    def __post_init__(self):
        policy = self.policy or (PERIODIC if self.source.closed else CLAMP)
        if policy not in (CLAMP, PERIODIC):
            raise ValueError(f"unknown extension policy {policy!r}")
        if policy == PERIODIC:
            if not self.source.closed:
                raise ValueError("periodic extension requires a closed path")
            a, b = self.source.domain
            object.__setattr__(self, "period", b - a)
        object.__setattr__(self, "policy", policy)

    @property
    def dimension(self) -> int:
        return self.source.dimension

    @property
    def domain(self):
        return self.source.domain

    @property
    def is_waypoint(self) -> bool:
        return isinstance(self.source, WaypointPath)

    def wrap(self, t):
        """Map ``t`` into the source's native domain."""
        t = np.asarray(t, dtype=float)
        if self.domain is None:
            return t
        a, b = self.domain
        if self.policy == PERIODIC:
            return a + np.mod(t - a, self.period)
        return np.clip(t, a, b)

    def __call__(self, t):
        tw = self.wrap(t)
        if self.is_waypoint:
            return _interp(self.source.vertices, tw)
        return self.source.evaluate(tw)

    def component(self, i: int, t):
        if self.is_waypoint:
            return self(t)[..., i]
        return self.source.component(i, self.wrap(t))

    def _base_breaks(self) -> np.ndarray:
        if self.is_waypoint:
            return np.arange(self.source.n_segments + 1, dtype=float)
        pts = list(self.source.kinks)
        if self.domain is not None:
            pts.extend(self.domain)
        return np.unique(np.asarray(pts, dtype=float))

    def breakpoints(self, lo: float, hi: float) -> np.ndarray:
        """Knots, kinks and extension boundaries lying in ``[lo, hi]``."""
        base = self._base_breaks()
        if base.size == 0:
            return base
        if self.policy == PERIODIC:
            a = self.domain[0]
            k0 = math.floor((lo - a) / self.period) - 1
            k1 = math.ceil((hi - a) / self.period) + 1
            shifts = np.arange(k0, k1 + 1) * self.period
            base = np.unique((base[None, :] + shifts[:, None]).ravel())
        return base[(base >= lo) & (base <= hi)]


def extend(path, policy: str = "") -> ExtendedPath:
    """Clamp open paths, repeat closed ones (unless ``policy`` says otherwise)."""
    if isinstance(path, ExtendedPath):
        return path
    return ExtendedPath(path, policy)


def eval_path(path: ExtendedPath, t):
    return extend(path)(t)


def two_segment_path(p0: Sequence[float], p1: Sequence[float], p2: Sequence[float]) -> WaypointPath:
    return WaypointPath(np.array([p0, p1, p2], dtype=float))


def _heart_radius(t):
    s = np.sin(t)
    return 2.0 - 2.0 * s + s * np.sqrt(np.abs(np.cos(t))) / (s + 1.4)


def heart_path() -> ParametricPath:
    """Closed heart curve ``r(t) (cos t, sin t)`` on ``[0, 2 pi)``.

    ``r`` has square-root kinks where ``cos t = 0``.
    """
    return ParametricPath(
        components=(lambda t: _heart_radius(t) * np.cos(t),
                    lambda t: _heart_radius(t) * np.sin(t)),
        domain=(0.0, 2.0 * math.pi),
        kinks=(0.5 * math.pi, 1.5 * math.pi),
        closed=True,
        name="heart",
    )


def staircase_path(steps: int) -> ParametricPath:
    """1D stair of ``steps`` unit jumps at ``t = 0, 1, ..., steps - 1``.

    Each jump is the open-interval indicator ``1{t > k}``.
    """
    if int(steps) != steps or steps < 1:
        raise ValueError(f"steps must be a positive integer, got {steps}")
    steps = int(steps)

    def stair(t):
        t = np.asarray(t, dtype=float)
        return np.clip(np.ceil(t), 0, steps).astype(float)

    return ParametricPath(components=(stair,), domain=(-1.0, float(steps)),
                          kinks=tuple(range(steps)), name=f"staircase{steps}")


# Gray-code tour: every step flips one coordinate, so all 7 edges have length 1.
CUBE_TOUR = (
    (0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0),
    (0, 1, 1), (1, 1, 1), (1, 0, 1), (0, 0, 1),
)


def cube_path() -> WaypointPath:
    """Open tour of the eight unit-cube vertices along cube edges."""
    return WaypointPath(np.array(CUBE_TOUR, dtype=float))


def function_path(fn: Callable, kinks: Sequence[float] = (), name: str = "") -> ParametricPath:
    """Wrap a scalar function of the whole line as a 1D path."""
    return ParametricPath(components=(fn,), kinks=tuple(kinks), name=name)
