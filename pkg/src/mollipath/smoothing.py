"""Componentwise mollification of extended paths.

Component ``i`` of the smoothed path is

    F_i(t) = integral over s in [-eps_i, eps_i] of f_i(t - s) * phi_eps_i(s) ds

and derivatives swap ``phi_eps_i`` for its analytic derivative, so the source
path is never differentiated.  The integration window is split wherever
``t - s`` crosses a knot, kink, or extension boundary.
"""

from __future__ import annotations

from typing import Sequence, Union

import numpy as np

from ._accel import backend
from .geometry import wedge_norm
from .kernel import BUMP, kernel_derivative
from .paths import ExtendedPath, extend
from .quadrature import DEFAULT_SPEC, MERGE_TOL, QuadratureSpec, integrate_batch


class MollifiedPath:
    """An extended path convolved with one scaled bump kernel per component.

    Args:
        source: a ``WaypointPath``, ``ParametricPath`` or ``ExtendedPath``;
            bare paths are extended with their default policy.
        epsilons: kernel half-width, either one value for all components or
            one per component.
        spec: quadrature tolerance for every evaluation.
    """

    def __init__(self, source, epsilons: Union[float, Sequence[float]],
                 spec: QuadratureSpec = DEFAULT_SPEC):
        self.source: ExtendedPath = extend(source)
        n = self.source.dimension
        eps = np.atleast_1d(np.asarray(epsilons, dtype=float))
        if eps.size == 1:
            eps = np.full(n, eps[0])
        if eps.shape != (n,):
            raise ValueError(f"expected 1 or {n} epsilons, got {eps.size}")
        if not np.all(eps > 0):
            raise ValueError(f"every epsilon must be positive, got {eps.tolist()}")
        eps.setflags(write=False)
        self.epsilons = eps
        self.spec = spec

    def __repr__(self):
        return f"MollifiedPath({self.source.source!r}, epsilons={self.epsilons.tolist()})"

    @property
    def dimension(self) -> int:
        return self.source.dimension

    @property
    def domain(self):
        return self.source.domain

    def sample(self, ts, order: int = 0) -> np.ndarray:
        """Position (``order=0``) or derivative rows at each parameter in ``ts``.

        Returns an array of shape ``(len(ts), dimension)``.
        """
        if order not in (0, 1, 2):
            raise ValueError(f"unsupported derivative order {order}")
        ts = np.atleast_1d(np.asarray(ts, dtype=float)).ravel()
        src = self.source
        if src.is_waypoint:
            return backend.polyline_convolve(
                src.source.vertices, src.policy == "periodic", self.epsilons, ts,
                order, BUMP.normalization, self.spec.tolerance, self.spec.max_depth)
        return np.stack([self._convolve_component(i, ts, order)
                         for i in range(self.dimension)], axis=-1)

    def _convolve_component(self, i, ts, order):
        eps = float(self.epsilons[i])
        edges = [_window_edges(t, eps, self.source.breakpoints(t - eps, t + eps)) for t in ts]
        src = self.source
        if order == 0:
            def weight(s):
                return BUMP.scaled(eps)(s)
        else:
            def weight(s):
                return kernel_derivative(s, eps, order)

        def integrand(item, s):
            return src.component(i, ts[item] - s) * weight(s)

        return integrate_batch(integrand, edges, self.spec)

    def __call__(self, t):
        out = self.sample(t, 0)
        return out[0] if np.ndim(t) == 0 else out

    def derivative(self, t, order: int = 1):
        out = self.sample(t, order)
        return out[0] if np.ndim(t) == 0 else out

    def curvature(self, ts) -> np.ndarray:
        """``|F'' ^ F'| / |F'|**3`` at each parameter (2D and 3D paths)."""
        if self.dimension not in (2, 3):
            raise ValueError("curvature needs a 2D or 3D path")
        d1 = self.sample(ts, 1)
        d2 = self.sample(ts, 2)
        return curvature_from_derivatives(d1, d2)


def curvature_from_derivatives(d1, d2) -> np.ndarray:
    speed = np.linalg.norm(d1, axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return wedge_norm(d2, d1) / speed**3


def _window_edges(t, eps, breaks):
    # kernel variable s = t - break, ascending
    s = np.sort(t - np.asarray(breaks, dtype=float))
    edges = [-eps]
    for x in s:
        if x - edges[-1] > MERGE_TOL and eps - x > MERGE_TOL:
            edges.append(x)
    edges.append(eps)
    return np.asarray(edges)


def eval_mollified(path: MollifiedPath, t):
    return path(t)


def eval_mollified_derivative(path: MollifiedPath, t, order: int):
    if order not in (1, 2):
        raise ValueError(f"unsupported derivative order {order}; expected 1 or 2")
    return path.derivative(t, order)


def second_derivative_two_segment(corner, eps: float, t):
    """Closed form ``phi_eps(t - knot) * (P2~ - P1~)`` around an isolated corner.

    The kernel mass on the outgoing segment grows at rate ``phi_eps(t - knot)``,
    so the acceleration points from the incoming toward the outgoing direction.
    """
    weight = BUMP.scaled(eps)(np.asarray(t, dtype=float) - corner.knot)
    diff = corner.p_tilde2 - corner.p_tilde1
    return np.multiply.outer(weight, diff)
