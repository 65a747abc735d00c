"""Pure numpy implementations of the hot kernels.

Same signatures and same adaptive algorithm as the compiled ``_core``
module; selected automatically when the extension is not built.
"""

import numpy as np

from .quadrature import MERGE_TOL, QuadratureSpec, integrate_batch

# |u| beyond this is treated as outside the support
SUPPORT_GUARD = 1.0 - 1e-12


def bump_derivative(u, order, c1):
    u = np.asarray(u, dtype=float)
    out = np.zeros(u.shape)
    inside = np.abs(u) < SUPPORT_GUARD
    v = u[inside]
    q = 1.0 - v * v
    base = c1 * np.exp(-1.0 / q)
    if order == 0:
        out[inside] = base
    elif order == 1:
        out[inside] = base * (-2.0 * v / (q * q))
    elif order == 2:
        out[inside] = base * (4.0 * v * v / q**4 - 2.0 / q**2 - 8.0 * v * v / q**3)
    else:
        raise ValueError(f"unsupported derivative order {order}")
    return out


def bump(u, c1):
    return bump_derivative(u, 0, c1)


def bump_cdf(u, c1, tol, max_depth):
    u = np.asarray(u, dtype=float)
    flat = u.ravel()
    out = np.where(flat >= 1.0, 1.0, 0.0)
    inner = np.flatnonzero(np.abs(flat) < 1.0)
    edges = []
    for k in inner:
        x = flat[k]
        if abs(x) <= MERGE_TOL:
            edges.append(np.array([-1.0, x]))
        elif x > 0:
            edges.append(np.array([-1.0, 0.0, x]))
        else:
            edges.append(np.array([-1.0, x]))
    if edges:
        vals = integrate_batch(lambda _k, v: bump_derivative(v, 0, c1), edges,
                               QuadratureSpec(tol, max_depth))
        out[inner] = np.clip(vals, 0.0, 1.0)
    return out.reshape(u.shape)


def polyline_eval(vertices, closed, comp, tau):
    """Component ``comp`` of the extended polyline at parameters ``tau``."""
    n_seg = vertices.shape[0] - 1
    if closed:
        tau = tau - n_seg * np.floor(tau / n_seg)
    else:
        tau = np.clip(tau, 0.0, n_seg)
    i = np.clip(np.floor(tau).astype(np.intp), 0, n_seg - 1)
    col = vertices[:, comp]
    return col[i] + (tau - i) * (col[i + 1] - col[i])


def knot_edges(t, eps, n_seg, closed):
    """Panel edges in the kernel variable for a window centred at ``t``."""
    lo = int(np.ceil(t - eps))
    hi = int(np.floor(t + eps))
    if not closed:
        lo, hi = max(lo, 0), min(hi, n_seg)
    edges = [-eps]
    for j in range(hi, lo - 1, -1):
        s = t - j
        if s - edges[-1] > MERGE_TOL and eps - s > MERGE_TOL:
            edges.append(s)
    edges.append(eps)
    return np.asarray(edges)


def polyline_convolve(vertices, closed, eps, ts, order, c1, tol, max_depth):
    vertices = np.ascontiguousarray(vertices, dtype=float)
    ts = np.asarray(ts, dtype=float)
    eps = np.asarray(eps, dtype=float)
    n_seg = vertices.shape[0] - 1
    spec = QuadratureSpec(tol, max_depth)
    out = np.empty((ts.size, vertices.shape[1]))
    for comp in range(vertices.shape[1]):
        e = float(eps[comp])
        scale = e ** (-1.0 - order)
        edges = [knot_edges(t, e, n_seg, closed) for t in ts]

        def integrand(item, s, e=e, scale=scale, comp=comp):
            path = polyline_eval(vertices, closed, comp, ts[item] - s)
            return path * bump_derivative(s / e, order, c1) * scale

        out[:, comp] = integrate_batch(integrand, edges, spec)
    return out
