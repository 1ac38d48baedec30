# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops. Must stay operation-for-operation identical to ``_kernels_py``."""

import numpy as np

from libc.math cimport INFINITY

cdef double EPS = 1e-12


def lift_coverage(const double[::1] xs, const double[::1] ys,
                  const double[:, ::1] origins, const double[:, ::1] axes,
                  const double[:, ::1] normals, const double[::1] lengths,
                  const double[:, ::1] profiles, const double[::1] weights):
    cdef Py_ssize_t H = ys.shape[0], W = xs.shape[0]
    cdef Py_ssize_t L = origins.shape[0], N = profiles.shape[1]
    cdef Py_ssize_t i, j, l, k
    cdef double x, y, dx, dy, s, t, pos, h, acc
    out = np.zeros((H, W), dtype=np.float64)
    cdef double[:, ::1] res = out
    for i in range(H):
        y = ys[i]
        for j in range(W):
            x = xs[j]
            acc = 0.0
            for l in range(L):
                dx = x - origins[l, 0]
                dy = y - origins[l, 1]
                s = (dx * axes[l, 0] + dy * axes[l, 1]) / lengths[l]
                t = dx * normals[l, 0] + dy * normals[l, 1]
                if s < -EPS or s > 1.0 + EPS or t < -EPS:
                    continue
                if s < 0.0:
                    s = 0.0
                elif s > 1.0:
                    s = 1.0
                pos = s * (N - 1)
                k = <Py_ssize_t>pos
                if k >= N - 1:
                    h = profiles[l, N - 1]
                else:
                    h = profiles[l, k] + (pos - k) * (profiles[l, k + 1] - profiles[l, k])
                if t <= h + EPS:
                    acc = acc + weights[l]
            res[i, j] = acc
    return out


def fiber_intervals(const double[:, ::1] points, const double[:, ::1] A,
                    const double[::1] at, const double[::1] b, double tol):
    cdef Py_ssize_t P = points.shape[0], d = points.shape[1], m = A.shape[0]
    cdef Py_ssize_t p, j, k
    cdef double lo, hi, r, v
    cdef bint empty
    lo_arr = np.empty(P, dtype=np.float64)
    hi_arr = np.empty(P, dtype=np.float64)
    st_arr = np.zeros(P, dtype=np.int8)
    cdef double[::1] lo_v = lo_arr, hi_v = hi_arr
    cdef signed char[::1] st = st_arr
    for p in range(P):
        lo = -INFINITY
        hi = INFINITY
        empty = False
        for j in range(m):
            r = b[j]
            for k in range(d):
                r = r - A[j, k] * points[p, k]
            if at[j] > tol:
                v = r / at[j]
                if v < hi:
                    hi = v
            elif at[j] < -tol:
                v = r / at[j]
                if v > lo:
                    lo = v
            elif r < -tol:
                empty = True
        if empty or lo > hi + tol:
            st[p] = 1
        elif lo == -INFINITY or hi == INFINITY:
            st[p] = 2
        lo_v[p] = lo
        hi_v[p] = hi
    return lo_arr, hi_arr, st_arr
