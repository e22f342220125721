# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: Airy evaluation and barycentric interpolation.

Same API as ``_kernels_py``; both read their tables from ``_airy_table``.
"""

import numpy as np

from libc.math cimport cos, exp, fabs, floor, sin, sqrt, M_PI

from . import _airy_table as _tab

cdef double[:, ::1] _taylor = _tab.TAYLOR
cdef double[::1] _asym_u = np.ascontiguousarray(_tab.ASYM_U)
cdef double[::1] _asym_v = np.ascontiguousarray(_tab.ASYM_V)
cdef int _n_centers = _tab.N_CENTERS
cdef int _n_taylor = _tab.N_TAYLOR
cdef int _n_asym = _tab.N_ASYMPTOTIC
cdef double _first = _tab.FIRST_CENTER
cdef double _step = _tab.STEP
cdef double _left = _tab.LEFT_EDGE
cdef double _right = _tab.RIGHT_EDGE


cdef inline void _asym_right(double x, double* ai, double* aip) noexcept nogil:
    cdef double zeta = 2.0 / 3.0 * x * sqrt(x)
    cdef double s = 0.0, sp = 0.0, term = 1.0, e
    cdef int k
    for k in range(_n_asym):
        s += _asym_u[k] * term
        sp += _asym_v[k] * term
        term *= -1.0 / zeta
        if fabs(_asym_u[k] * term) < 1e-17 * fabs(s):
            break
    e = exp(-zeta) / (2.0 * sqrt(M_PI))
    ai[0] = e * s / sqrt(sqrt(x))
    aip[0] = -e * sp * sqrt(sqrt(x))


cdef inline void _asym_left(double x, double* ai, double* aip) noexcept nogil:
    cdef double ax = -x
    cdef double zeta = 2.0 / 3.0 * ax * sqrt(ax)
    cdef double p = 0.0, q = 0.0, pp = 0.0, qp = 0.0
    cdef double term = 1.0, sgn, th, r
    cdef int k
    for k in range(_n_asym):
        sgn = 1.0 if (k // 2) % 2 == 0 else -1.0
        if k % 2 == 0:
            p += sgn * _asym_u[k] * term
            pp += sgn * _asym_v[k] * term
        else:
            q += sgn * _asym_u[k] * term
            qp += sgn * _asym_v[k] * term
        term /= zeta
        if _asym_u[k] * term < 1e-17:
            break
    th = zeta + 0.25 * M_PI
    r = sqrt(sqrt(ax))
    ai[0] = (sin(th) * p - cos(th) * q) / (sqrt(M_PI) * r)
    aip[0] = -r / sqrt(M_PI) * (cos(th) * pp + sin(th) * qp)


cdef inline void _airy_one(double x, double* ai, double* aip) noexcept nogil:
    cdef int k, j
    cdef double h, v, d
    if x >= _right:
        _asym_right(x, ai, aip)
        return
    if x < _left:
        _asym_left(x, ai, aip)
        return
    k = <int>floor((x - _first) / _step + 0.5)
    if k < 0:
        k = 0
    elif k >= _n_centers:
        k = _n_centers - 1
    h = x - (_first + k * _step)
    v = 0.0
    d = 0.0
    for j in range(_n_taylor - 1, 0, -1):
        v = v * h + _taylor[k, j]
        d = d * h + j * _taylor[k, j]
    ai[0] = v * h + _taylor[k, 0]
    aip[0] = d


def airy_scalar(double x):
    """Return ``(Ai(x), Ai'(x))`` for a finite float."""
    cdef double ai, aip
    _airy_one(x, &ai, &aip)
    return ai, aip


def airy_array(x):
    """Vectorised ``(Ai, Ai')`` over an array of any shape."""
    arr = np.ascontiguousarray(x, dtype=np.float64)
    flat = arr.reshape(-1)
    ai = np.empty_like(flat)
    aip = np.empty_like(flat)
    cdef double[::1] xs = flat
    cdef double[::1] a = ai
    cdef double[::1] ap = aip
    cdef Py_ssize_t i, n = xs.shape[0]
    with nogil:
        for i in range(n):
            _airy_one(xs[i], &a[i], &ap[i])
    return ai.reshape(arr.shape), aip.reshape(arr.shape)


def barycentric_eval(const double[::1] nodes, const double[::1] weights,
                     const double[::1] values, targets):
    """Second-form barycentric interpolation at ``targets`` (exact at nodes)."""
    arr = np.ascontiguousarray(targets, dtype=np.float64)
    flat = arr.reshape(-1)
    out = np.empty_like(flat)
    cdef double[::1] ts = flat
    cdef double[::1] o = out
    cdef Py_ssize_t i, j, n = nodes.shape[0], m = ts.shape[0]
    cdef double num, den, c, diff
    cdef bint hit
    with nogil:
        for i in range(m):
            num = 0.0
            den = 0.0
            hit = False
            for j in range(n):
                diff = ts[i] - nodes[j]
                if diff == 0.0:
                    o[i] = values[j]
                    hit = True
                    break
                c = weights[j] / diff
                num += c * values[j]
                den += c
            if not hit:
                o[i] = num / den
    return out.reshape(arr.shape)
