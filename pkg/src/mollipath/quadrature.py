"""Adaptive Gauss-Legendre quadrature on compact intervals.

Integrands are assumed smooth between breakpoints.  Kinks and jumps must be
passed in as breakpoints; they are never detected automatically.

The engine is batched: :func:`integrate_batch` advances many independent
integrals at once, bisecting only the panels that have not converged.  A
15-point rule is applied to a panel and to its two halves; the panel is
accepted when the two estimates agree to within the panel's share of the
tolerance and its parent panel was already close to agreement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

GL_ORDER = 15
GL_NODES, GL_WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)

# breakpoints closer than this are merged
MERGE_TOL = 1e-14

_ROUNDING_FLOOR = 4.0 * np.finfo(float).eps

# child panels get tol / sqrt(2), not tol / 2, so panels next to a
# square-root kink still converge within the depth cap
SPLIT_FACTOR = 2.0 ** -0.5

# A panel is accepted only if its parent's difference was also within this
# factor of the parent's tolerance.  The coarse/fine difference of a single
# panel can cross zero by accident (for example, when the integrand is a
# linear function times the kernel, it is linear in the shift), so one small
# difference on its own is not evidence of convergence.
PARENT_RATIO = 1e3


class QuadratureError(ArithmeticError):
    """Adaptive subdivision hit ``max_depth`` before reaching the tolerance."""

    def __init__(self, message: str, estimate: float = float("nan"),
                 error: float = float("nan")):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class QuadratureSpec:
    tolerance: float = 1e-10
    max_depth: int = 40

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if int(self.max_depth) != self.max_depth or self.max_depth < 1:
            raise ValueError(f"max_depth must be a positive integer, got {self.max_depth}")


DEFAULT_SPEC = QuadratureSpec()


def panel_edges(a: float, b: float, breakpoints: Sequence[float] = ()) -> np.ndarray:
    """Sorted edges of the smooth pieces of ``[a, b]``.

    Breakpoints outside ``(a, b)`` are dropped, and points within
    ``MERGE_TOL`` of each other or of the ends are merged.
    """
    if b < a:
        raise ValueError(f"integration bounds out of order: a={a} > b={b}")
    inner = np.sort(np.asarray(breakpoints, dtype=float).ravel())
    inner = inner[(inner > a + MERGE_TOL) & (inner < b - MERGE_TOL)]
    edges = [float(a)]
    for x in inner:
        if x - edges[-1] > MERGE_TOL:
            edges.append(float(x))
    if b - edges[-1] <= MERGE_TOL and len(edges) > 1:
        edges.pop()
    edges.append(float(b))
    return np.asarray(edges)


def _gauss(fn, owner, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    x = mid[:, None] + half[:, None] * GL_NODES
    vals = fn(np.broadcast_to(owner[:, None], x.shape), x)
    return half * (np.asarray(vals, dtype=float) @ GL_WEIGHTS)


def integrate_batch(fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
                    edges: Sequence[np.ndarray],
                    spec: QuadratureSpec = DEFAULT_SPEC) -> np.ndarray:
    """Integrate many functions at once.

    Args:
        fn: vectorized integrand ``fn(item, x)``; ``item`` holds the integer
            index of the integral each abscissa in ``x`` belongs to (same
            shape as ``x``).
        edges: for each integral, the sorted edges of its smooth pieces (as
            returned by :func:`panel_edges`).
        spec: tolerance and depth cap, applied to each integral separately.

    Returns:
        Array with one value per integral.

    Raises:
        QuadratureError: some panel still disagrees after ``spec.max_depth``
            bisections.
    """
    n_items = len(edges)
    result = np.zeros(n_items)
    if n_items == 0:
        return result

    owners, lo, hi, tol = [], [], [], []
    for k, e in enumerate(edges):
        e = np.asarray(e, dtype=float)
        width = e[-1] - e[0]
        if width <= 0 or e.size < 2:
            continue
        owners.append(np.full(e.size - 1, k))
        lo.append(e[:-1])
        hi.append(e[1:])
        tol.append(spec.tolerance * (e[1:] - e[:-1]) / width)
    if not owners:
        return result
    owner = np.concatenate(owners)
    a = np.concatenate(lo)
    b = np.concatenate(hi)
    tol = np.concatenate(tol)

    coarse = _gauss(fn, owner, a, b)
    parent_ok = np.zeros(owner.size, dtype=bool)
    depth = 0
    while owner.size:
        m = 0.5 * (a + b)
        left = _gauss(fn, owner, a, m)
        right = _gauss(fn, owner, m, b)
        fine = left + right
        err = np.abs(fine - coarse)
        done = parent_ok & ((err <= tol) | (err <= _ROUNDING_FLOOR * np.abs(fine)))
        np.add.at(result, owner[done], fine[done])
        if done.all():
            break
        todo = ~done
        if depth >= spec.max_depth:
            bad = owner[todo]
            np.add.at(result, bad, fine[todo])
            first = int(bad[0])
            raise QuadratureError(
                f"no convergence after {spec.max_depth} bisections "
                f"({int(todo.sum())} panels unresolved)",
                estimate=float(result[first]),
                error=float(err[todo][bad == first].sum()),
            )
        owner = np.concatenate([owner[todo], owner[todo]])
        a, b = np.concatenate([a[todo], m[todo]]), np.concatenate([m[todo], b[todo]])
        coarse = np.concatenate([left[todo], right[todo]])
        near = err[todo] <= PARENT_RATIO * np.maximum(tol[todo], _ROUNDING_FLOOR * np.abs(fine[todo]))
        parent_ok = np.concatenate([near, near])
        tol = np.concatenate([tol[todo], tol[todo]]) * SPLIT_FACTOR
        depth += 1
    return result


def integrate(fn: Callable[[np.ndarray], np.ndarray], a: float, b: float,
              breakpoints: Sequence[float] = (),
              spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Integral of ``fn`` over ``[a, b]``, split first at ``breakpoints``.

    ``fn`` should accept a numpy array; scalar-only callables are tolerated
    and evaluated element by element.
    """
    edges = panel_edges(a, b, breakpoints)
    vectorized = _as_vectorized(fn)
    return float(integrate_batch(lambda _item, x: vectorized(x), [edges], spec)[0])


def _as_vectorized(fn):
    def wrapped(x):
        try:
            out = np.asarray(fn(x), dtype=float)
            if out.shape == x.shape:
                return out
            if out.ndim == 0:
                return np.full(x.shape, float(out))
        except (TypeError, ValueError):
            pass
        return np.vectorize(lambda v: float(fn(v)), otypes=[float])(x)
    return wrapped
