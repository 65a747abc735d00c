# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: bump evaluation, its CDF, and polyline convolution.

Mirrors ``_fallback`` exactly (same panels, same acceptance test) so the two
backends agree to rounding.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, fabs, floor, ceil
from libc.float cimport DBL_EPSILON

from mollipath.quadrature import (GL_NODES, GL_WEIGHTS, MERGE_TOL, PARENT_RATIO, SPLIT_FACTOR,
                                  QuadratureError)

cnp.import_array()

DEF NGL = 15
DEF MAX_EDGES = 4096

cdef double GL_X[NGL]
cdef double GL_W[NGL]
for _k in range(NGL):
    GL_X[_k] = GL_NODES[_k]
    GL_W[_k] = GL_WEIGHTS[_k]

cdef double SUPPORT_GUARD = 1.0 - 1e-12
cdef double MERGE = MERGE_TOL
cdef double ROUND_FLOOR = 4.0 * DBL_EPSILON
cdef double SPLIT = SPLIT_FACTOR
cdef double PARENT = PARENT_RATIO

ctypedef double (*integrand_t)(void*, double) noexcept nogil


cdef inline double _bump_d(double u, int order, double c1) noexcept nogil:
    cdef double q, base
    if fabs(u) >= SUPPORT_GUARD:
        return 0.0
    q = 1.0 - u * u
    base = c1 * exp(-1.0 / q)
    if order == 0:
        return base
    if order == 1:
        return base * (-2.0 * u / (q * q))
    return base * (4.0 * u * u / (q * q * q * q) - 2.0 / (q * q) - 8.0 * u * u / (q * q * q))


ctypedef struct QuadState:
    int max_depth
    int failed
    double unresolved


cdef double _gauss(integrand_t f, void* ctx, double a, double b) noexcept nogil:
    cdef double half = 0.5 * (b - a), mid = 0.5 * (a + b), acc = 0.0
    cdef int k
    for k in range(NGL):
        acc += GL_W[k] * f(ctx, mid + half * GL_X[k])
    return half * acc


cdef double _adapt(integrand_t f, void* ctx, double a, double b, double whole,
                   double tol, int parent_ok, int depth, QuadState* st) noexcept nogil:
    cdef double m = 0.5 * (a + b)
    cdef double left = _gauss(f, ctx, a, m)
    cdef double right = _gauss(f, ctx, m, b)
    cdef double fine = left + right
    cdef double err = fabs(fine - whole)
    cdef double floor_ = ROUND_FLOOR * fabs(fine)
    cdef int near
    if parent_ok and (err <= tol or err <= floor_):
        return fine
    if depth >= st.max_depth:
        st.failed = 1
        st.unresolved += err
        return fine
    near = err <= PARENT * (tol if tol > floor_ else floor_)
    return (_adapt(f, ctx, a, m, left, SPLIT * tol, near, depth + 1, st)
            + _adapt(f, ctx, m, b, right, SPLIT * tol, near, depth + 1, st))


cdef double _integrate_edges(integrand_t f, void* ctx, double* edges, int n_edges,
                             double tol, QuadState* st) noexcept nogil:
    cdef double width = edges[n_edges - 1] - edges[0]
    cdef double total = 0.0, a, b
    cdef int k
    if width <= 0.0:
        return 0.0
    for k in range(n_edges - 1):
        a = edges[k]
        b = edges[k + 1]
        total += _adapt(f, ctx, a, b, _gauss(f, ctx, a, b), tol * (b - a) / width, 0, 0, st)
    return total


# --- bump -----------------------------------------------------------------

ctypedef struct BumpCtx:
    double c1


cdef double _bump_integrand(void* ctx, double u) noexcept nogil:
    return _bump_d(u, 0, (<BumpCtx*>ctx).c1)


def bump_derivative(u, int order, double c1):
    if order < 0 or order > 2:
        raise ValueError(f"unsupported derivative order {order}")
    cdef cnp.ndarray[double, ndim=1] flat = np.ascontiguousarray(u, dtype=float).ravel()
    cdef cnp.ndarray[double, ndim=1] out = np.empty(flat.shape[0])
    cdef Py_ssize_t i
    for i in range(flat.shape[0]):
        out[i] = _bump_d(flat[i], order, c1)
    return out.reshape(np.shape(u))


def bump(u, double c1):
    return bump_derivative(u, 0, c1)


def bump_cdf(u, double c1, double tol, int max_depth):
    cdef cnp.ndarray[double, ndim=1] flat = np.ascontiguousarray(u, dtype=float).ravel()
    cdef cnp.ndarray[double, ndim=1] out = np.empty(flat.shape[0])
    cdef BumpCtx ctx
    cdef QuadState st
    cdef double edges[3]
    cdef double x, v
    cdef int n_edges
    cdef Py_ssize_t i
    ctx.c1 = c1
    st.max_depth = max_depth
    st.failed = 0
    st.unresolved = 0.0
    for i in range(flat.shape[0]):
        x = flat[i]
        if x >= 1.0:
            out[i] = 1.0
            continue
        if x <= -1.0:
            out[i] = 0.0
            continue
        edges[0] = -1.0
        if x > MERGE:
            edges[1] = 0.0
            edges[2] = x
            n_edges = 3
        else:
            edges[1] = x
            n_edges = 2
        v = _integrate_edges(_bump_integrand, &ctx, edges, n_edges, tol, &st)
        out[i] = 0.0 if v < 0.0 else (1.0 if v > 1.0 else v)
    if st.failed:
        raise QuadratureError(f"kernel CDF: no convergence after {max_depth} bisections",
                              error=st.unresolved)
    return out.reshape(np.shape(u))


# --- polyline convolution -------------------------------------------------

ctypedef struct PolyCtx:
    double* verts
    int n_seg
    int dim
    int comp
    int closed
    int order
    double t
    double eps
    double scale
    double c1


cdef inline double _poly_eval(PolyCtx* c, double tau) noexcept nogil:
    cdef int i
    cdef double lo, hi
    if c.closed:
        tau = tau - c.n_seg * floor(tau / c.n_seg)
    elif tau < 0.0:
        tau = 0.0
    elif tau > c.n_seg:
        tau = c.n_seg
    i = <int>floor(tau)
    if i > c.n_seg - 1:
        i = c.n_seg - 1
    if i < 0:
        i = 0
    lo = c.verts[i * c.dim + c.comp]
    hi = c.verts[(i + 1) * c.dim + c.comp]
    return lo + (tau - i) * (hi - lo)


cdef double _poly_integrand(void* ctx, double s) noexcept nogil:
    cdef PolyCtx* c = <PolyCtx*>ctx
    return _poly_eval(c, c.t - s) * _bump_d(s / c.eps, c.order, c.c1) * c.scale


cdef int _knot_edges(double t, double eps, int n_seg, int closed, double* edges) noexcept nogil:
    cdef long lo = <long>ceil(t - eps)
    cdef long hi = <long>floor(t + eps)
    cdef long j
    cdef int n = 1
    cdef double s
    if not closed:
        if lo < 0:
            lo = 0
        if hi > n_seg:
            hi = n_seg
    edges[0] = -eps
    j = hi
    while j >= lo and n < MAX_EDGES - 1:
        s = t - j
        if s - edges[n - 1] > MERGE and eps - s > MERGE:
            edges[n] = s
            n += 1
        j -= 1
    edges[n] = eps
    return n + 1


def polyline_convolve(vertices, bint closed, eps, ts, int order, double c1,
                      double tol, int max_depth):
    if order < 0 or order > 2:
        raise ValueError(f"unsupported derivative order {order}")
    cdef cnp.ndarray[double, ndim=2] verts = np.ascontiguousarray(vertices, dtype=float)
    cdef cnp.ndarray[double, ndim=1] e = np.ascontiguousarray(eps, dtype=float).ravel()
    cdef cnp.ndarray[double, ndim=1] tt = np.ascontiguousarray(ts, dtype=float).ravel()
    cdef int dim = verts.shape[1]
    cdef cnp.ndarray[double, ndim=2] out = np.empty((tt.shape[0], dim))
    cdef PolyCtx ctx
    cdef QuadState st
    cdef double edges[MAX_EDGES]
    cdef int n_edges, comp
    cdef Py_ssize_t i
    if 2.0 * e.max() + 2 >= MAX_EDGES:
        raise ValueError("kernel width too large for the compiled backend")
    ctx.verts = &verts[0, 0]
    ctx.n_seg = verts.shape[0] - 1
    ctx.dim = dim
    ctx.closed = closed
    ctx.order = order
    ctx.c1 = c1
    st.max_depth = max_depth
    st.failed = 0
    st.unresolved = 0.0
    with nogil:
        for comp in range(dim):
            ctx.comp = comp
            ctx.eps = e[comp]
            ctx.scale = 1.0 / ctx.eps
            if order >= 1:
                ctx.scale /= ctx.eps
            if order == 2:
                ctx.scale /= ctx.eps
            for i in range(tt.shape[0]):
                ctx.t = tt[i]
                n_edges = _knot_edges(ctx.t, ctx.eps, ctx.n_seg, closed, edges)
                out[i, comp] = _integrate_edges(_poly_integrand, &ctx, edges, n_edges, tol, &st)
    if st.failed:
        raise QuadratureError(f"polyline convolution: no convergence after {max_depth} bisections",
                              error=st.unresolved)
    return out
