"""Wedge norms, polyline lengths, and convex-hull containment."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.spatial import ConvexHull, QhullError


def wedge_norm(u, v):
    """Norm of ``u ^ v``: ``|u1 v2 - u2 v1|`` in 2D, ``|u x v|`` in 3D.

    Broadcasts over leading axes.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape[-1] != v.shape[-1]:
        raise ValueError(f"dimension mismatch: {u.shape[-1]} vs {v.shape[-1]}")
    n = u.shape[-1]
    if n == 2:
        return np.abs(u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0])
    if n == 3:
        return np.linalg.norm(np.cross(u, v), axis=-1)
    raise ValueError(f"wedge norm is only defined here for 2D or 3D vectors, got {n}D")


@dataclass(frozen=True, eq=False)
class SampledCurve:
    parameters: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.parameters, dtype=float)
        p = np.asarray(self.points, dtype=float)
        if p.ndim == 1:
            p = p[:, None]
        if t.shape[0] != p.shape[0]:
            raise ValueError("parameters and points differ in length")
        if np.any(np.diff(t) <= 0):
            raise ValueError("parameters must be strictly increasing")
        object.__setattr__(self, "parameters", t)
        object.__setattr__(self, "points", p)


def _norm_order(p):
    if p in (1, 2):
        return p
    if p in ("inf", np.inf, float("inf")):
        return np.inf
    raise ValueError(f"unsupported norm {p!r}; use 1, 2 or inf")


def polyline_length(curve, p=2) -> float:
    """Sum of consecutive ``l_p`` distances between samples.

    ``curve`` is a :class:`SampledCurve` or an ``(N, n)`` array of points.
    """
    pts = curve.points if isinstance(curve, SampledCurve) else np.asarray(curve, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.shape[0] < 2:
        raise ValueError("need at least 2 samples for a length")
    return float(np.linalg.norm(np.diff(pts, axis=0), ord=_norm_order(p), axis=1).sum())


class LengthNotConverged(RuntimeError):
    pass


def refine_length(path: Callable, domain, p=2, tol: float = 1e-6,
                  initial: int = 64, max_iter: int = 24) -> float:
    """Length of ``path`` over ``domain`` by repeated uniform refinement.

    Doubles the number of intervals (reusing earlier samples) until two
    successive estimates differ by less than ``tol``.  ``path`` maps an array
    of parameters to an ``(N, n)`` array of points.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    order = _norm_order(p)
    a, b = (float(v) for v in domain)
    ts = np.linspace(a, b, initial + 1)
    pts = np.asarray(path(ts), dtype=float).reshape(ts.size, -1)
    prev = polyline_length(pts, order)
    for _ in range(max_iter):
        mids = 0.5 * (ts[:-1] + ts[1:])
        new = np.asarray(path(mids), dtype=float).reshape(mids.size, -1)
        merged_t = np.empty(ts.size + mids.size)
        merged_t[0::2], merged_t[1::2] = ts, mids
        merged = np.empty((merged_t.size, pts.shape[1]))
        merged[0::2], merged[1::2] = pts, new
        ts, pts = merged_t, merged
        cur = polyline_length(pts, order)
        if abs(cur - prev) < tol:
            return cur
        prev = cur
    raise LengthNotConverged(f"length not converged after {max_iter} refinements "
                             f"(last change {abs(cur - prev):.3g}, {ts.size} samples)")


def monotone_chain(points) -> np.ndarray:
    """Counter-clockwise 2D hull vertices (Andrew's monotone chain)."""
    pts = np.unique(np.asarray(points, dtype=float), axis=0)
    if pts.shape[0] <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for q in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], q) <= 0:
            lower.pop()
        lower.append(q)
    for q in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], q) <= 0:
            upper.pop()
        upper.append(q)
    return np.array(lower[:-1] + upper[:-1])


def _segment_distances(queries, a, b):
    """Distance from each query to each segment ``a[j] -> b[j]``; min over j."""
    ab = b - a
    denom = np.einsum("ij,ij->i", ab, ab)
    best = np.full(queries.shape[0], np.inf)
    for j in range(a.shape[0]):
        d = queries - a[j]
        lam = np.clip(d @ ab[j] / denom[j], 0.0, 1.0) if denom[j] > 0 else np.zeros(len(d))
        best = np.minimum(best, np.linalg.norm(d - lam[:, None] * ab[j], axis=1))
    return best


def _distance_to_polygon(queries, hull):
    """Distance from 2D queries to a CCW convex polygon (0 inside)."""
    if hull.shape[0] == 1:
        return np.linalg.norm(queries - hull[0], axis=1)
    a, b = hull, np.roll(hull, -1, axis=0)
    if hull.shape[0] == 2:
        return _segment_distances(queries, hull[:1], hull[1:])
    edge = b - a
    # outward normal of a CCW polygon edge is (dy, -dx)
    normal = np.stack([edge[:, 1], -edge[:, 0]], axis=1)
    normal /= np.linalg.norm(normal, axis=1)[:, None]
    signed = np.einsum("qkj,kj->qk", queries[:, None, :] - a[None, :, :], normal)
    outside = signed.max(axis=1) > 0
    dist = np.zeros(queries.shape[0])
    if outside.any():
        dist[outside] = _segment_distances(queries[outside], a, b)
    return dist


def _point_segment(q, a, b):
    # q: (Q, 1, 3); a, b: (T, 3) -> (Q, T)
    ab = b - a
    denom = np.einsum("tj,tj->t", ab, ab)
    d = q - a
    lam = np.clip(np.einsum("qtj,tj->qt", d, ab) / np.where(denom > 0, denom, 1.0), 0.0, 1.0)
    return np.linalg.norm(d - lam[..., None] * ab, axis=-1)


def _distance_to_triangles(queries, tri, chunk=256):
    """Exact distance from 3D queries to the union of triangles ``tri`` (T, 3, 3)."""
    a, b, c = tri[:, 0], tri[:, 1], tri[:, 2]
    normal = np.cross(b - a, c - a)
    area = np.linalg.norm(normal, axis=1)
    unit = normal / np.where(area > 0, area, 1.0)[:, None]
    out = np.empty(queries.shape[0])
    for start in range(0, queries.shape[0], chunk):
        q = queries[start:start + chunk, None, :]
        height = np.einsum("qtj,tj->qt", q - a, unit)
        foot = q - height[..., None] * unit
        inside = area > 0
        for p0, p1 in ((a, b), (b, c), (c, a)):
            inside = inside & (np.einsum("qtj,tj->qt", np.cross(p1 - p0, foot - p0), unit) >= 0)
        best = np.where(inside, np.abs(height), np.inf)
        for p0, p1 in ((a, b), (b, c), (c, a)):
            best = np.minimum(best, _point_segment(q, p0, p1))
        out[start:start + chunk] = best.min(axis=1)
    return out


def _affine_frame(cloud, rel_tol=1e-9):
    """Centroid, orthonormal basis and dimension of the cloud's affine hull."""
    centre = cloud.mean(axis=0)
    _, sv, vt = np.linalg.svd(cloud - centre, full_matrices=False)
    if sv[0] == 0:
        return centre, vt[:0], 0
    rank = int(np.sum(sv > rel_tol * sv[0]))
    return centre, vt[:rank], rank


def distance_to_hull(cloud, queries) -> np.ndarray:
    """Euclidean distance from each query to the convex hull of ``cloud``."""
    cloud = np.asarray(cloud, dtype=float)
    if cloud.ndim != 2 or cloud.shape[0] == 0:
        raise ValueError("cloud must be a non-empty (N, n) array")
    n = cloud.shape[1]
    if n not in (2, 3):
        raise ValueError(f"hull containment supports 2D and 3D, got {n}D")
    queries = np.asarray(queries, dtype=float).reshape(-1, n)

    centre, basis, rank = _affine_frame(cloud)
    local_q = (queries - centre) @ basis.T
    perp = np.linalg.norm((queries - centre) - local_q @ basis, axis=1)
    if rank == 0:
        return np.linalg.norm(queries - centre, axis=1)
    local_c = (cloud - centre) @ basis.T
    if rank == 1:
        lo, hi = local_c[:, 0].min(), local_c[:, 0].max()
        along = np.maximum(np.maximum(lo - local_q[:, 0], local_q[:, 0] - hi), 0.0)
        return np.hypot(along, perp)
    if rank == 2:
        hull = monotone_chain(local_c)
        return np.hypot(_distance_to_polygon(local_q, hull), perp)
    return _distance_to_polytope(cloud, queries)


def _distance_to_polytope(cloud, queries):
    try:
        hull = ConvexHull(cloud)
    except QhullError:
        # nearly flat clouds: joggled input still gives a usable hull
        hull = ConvexHull(cloud, qhull_options="QJ")
    normals, offsets = hull.equations[:, :-1], hull.equations[:, -1]
    signed = queries @ normals.T + offsets
    worst = signed.max(axis=1)
    dist = np.where(worst <= 0, 0.0, worst)
    # facet-plane distance is only a lower bound near edges and vertices
    near = worst > 0
    if near.any():
        dist[near] = _distance_to_triangles(queries[near], cloud[hull.simplices])
    return dist


def convex_hull_contains(cloud, query, slack: float = 0.0):
    """Whether ``query`` lies within ``slack`` of ``co(cloud)``.

    Accepts a single point (returns ``bool``) or an array of points (returns
    a boolean array).
    """
    if slack < 0:
        raise ValueError("slack must be non-negative")
    q = np.asarray(query, dtype=float)
    dist = distance_to_hull(cloud, q)
    # absorb rounding in the projections
    floor = 64 * np.finfo(float).eps * max(1.0, float(np.abs(cloud).max()))
    inside = dist <= slack + floor
    return bool(inside[0]) if q.ndim == 1 else inside
