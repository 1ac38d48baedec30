"""Numpy fallback for the compiled kernels in ``_kernels.pyx``.

Every arithmetic step follows the compiled loop in the same order, so both
backends return identical arrays (no fused multiply-add on either side).
"""

import numpy as np

EPS = 1e-12


def lift_coverage(xs, ys, origins, axes, normals, lengths, profiles, weights):
    X, Y = np.meshgrid(np.asarray(xs, dtype=np.float64), np.asarray(ys, dtype=np.float64))
    out = np.zeros(X.shape, dtype=np.float64)
    N = profiles.shape[1]
    for l in range(origins.shape[0]):
        dx = X - origins[l, 0]
        dy = Y - origins[l, 1]
        s = (dx * axes[l, 0] + dy * axes[l, 1]) / lengths[l]
        t = dx * normals[l, 0] + dy * normals[l, 1]
        ok = (s >= -EPS) & (s <= 1.0 + EPS) & (t >= -EPS)
        s = np.clip(s, 0.0, 1.0)
        pos = s * (N - 1)
        k = pos.astype(np.intp)
        last = k >= N - 1
        k0 = np.minimum(k, N - 1)
        k1 = np.minimum(k + 1, N - 1)
        prof = profiles[l]
        h = np.where(last, prof[N - 1], prof[k0] + (pos - k0) * (prof[k1] - prof[k0]))
        hit = ok & (t <= h + EPS)
        out = np.where(hit, out + weights[l], out)
    return out


def fiber_intervals(points, A, at, b, tol):
    P = points.shape[0]
    lo = np.full(P, -np.inf)
    hi = np.full(P, np.inf)
    empty = np.zeros(P, dtype=bool)
    for j in range(A.shape[0]):
        r = np.full(P, b[j])
        for k in range(points.shape[1]):
            r = r - A[j, k] * points[:, k]
        if at[j] > tol:
            hi = np.minimum(hi, r / at[j])
        elif at[j] < -tol:
            lo = np.maximum(lo, r / at[j])
        else:
            empty |= r < -tol
    status = np.zeros(P, dtype=np.int8)
    unbounded = np.isinf(lo) | np.isinf(hi)
    status[unbounded] = 2
    status[empty | (lo > hi + tol)] = 1
    return lo, hi, status
