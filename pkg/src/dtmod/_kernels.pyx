# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: term-table evaluation and masked symmetric differences.

Mirror of dtmod._kernels_py; the backend selector picks whichever imports.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, fabs, pow, sqrt

cnp.import_array()

BACKEND_NAME = "compiled"

cdef int K_POLY = 0
cdef int K_EXP = 1
cdef int K_POWABS = 2
cdef int K_POWSGN = 3
cdef int K_POWTRUNC = 4


cdef double _eval_point(const cnp.int64_t[:] kinds, const double[:] coefs,
                        const double[:] p0, const double[:] p1,
                        const double[:] pool, const cnp.int64_t[:] offs,
                        double x) noexcept nogil:
    cdef double out = 0.0, acc, d
    cdef Py_ssize_t t, j
    cdef long long kind
    for t in range(kinds.shape[0]):
        kind = kinds[t]
        if kind == K_POLY:
            acc = 0.0
            for j in range(offs[t + 1] - 1, offs[t] - 1, -1):
                acc = acc * x + pool[j]
            out += coefs[t] * acc
        elif kind == K_EXP:
            out += coefs[t] * exp(p0[t] * x)
        elif kind == K_POWABS:
            out += coefs[t] * pow(fabs(x - p0[t]), p1[t])
        elif kind == K_POWSGN:
            d = x - p0[t]
            if d > 0.0:
                out += coefs[t] * pow(d, p1[t])
            elif d < 0.0:
                out -= coefs[t] * pow(-d, p1[t])
        elif kind == K_POWTRUNC:
            d = x - p0[t]
            if d > 0.0:
                out += coefs[t] * pow(d, p1[t])
    return out


def eval_table(kinds, coefs, p0, p1, pool, offs, x):
    """Evaluate the term table at points ``x`` (1-d float64 array)."""
    cdef const cnp.int64_t[:] kv = kinds
    cdef const double[:] cv = coefs, p0v = p0, p1v = p1, poolv = pool
    cdef const cnp.int64_t[:] ov = offs
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty_like(xv)
    cdef Py_ssize_t i
    for i in range(xv.shape[0]):
        out[i] = _eval_point(kv, cv, p0v, p1v, poolv, ov, xv[i])
    return out


def diff_table(kinds, coefs, p0, p1, pool, offs, k, h, x, phi_step):
    """Masked symmetric difference of width ``k`` with step h (or h*phi(x))."""
    cdef const cnp.int64_t[:] kv = kinds
    cdef const double[:] cv = coefs, p0v = p0, p1v = p1, poolv = pool
    cdef const cnp.int64_t[:] ov = offs
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros_like(xv)
    cdef int kk = k
    cdef double hh = h
    cdef bint use_phi = phi_step
    cdef cnp.ndarray[cnp.float64_t, ndim=1] binom = np.empty(kk + 1, dtype=np.float64)
    cdef Py_ssize_t i, j
    cdef double step, half, xi, acc, sign
    for j in range(kk + 1):
        sign = -1.0 if (kk - j) % 2 else 1.0
        binom[j] = sign * _comb(kk, j)
    cdef const double[:] bv = binom
    for i in range(xv.shape[0]):
        xi = xv[i]
        if use_phi:
            step = 1.0 - xi * xi
            step = hh * sqrt(step if step > 0.0 else 0.0)
        else:
            step = hh
        half = 0.5 * kk * step
        if xi - half < -1.0 or xi + half > 1.0:
            continue
        acc = 0.0
        for j in range(kk + 1):
            acc += bv[j] * _eval_point(kv, cv, p0v, p1v, poolv, ov,
                                       xi + 0.5 * (2 * j - kk) * step)
        out[i] = acc
    return out


cdef double _comb(int n, int r) noexcept nogil:
    cdef double out = 1.0
    cdef int i
    if r > n - r:
        r = n - r
    for i in range(r):
        out = out * (n - i) / (i + 1)
    return out


def phi_values(x):
    """sqrt(1 - x^2), clipped at 0 for round-off beyond the endpoints."""
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty_like(xv)
    cdef Py_ssize_t i
    cdef double s
    for i in range(xv.shape[0]):
        s = 1.0 - xv[i] * xv[i]
        out[i] = sqrt(s if s > 0.0 else 0.0)
    return out
