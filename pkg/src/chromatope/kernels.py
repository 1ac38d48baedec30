"""Backend selection for the raster and fiber inner loops.

The compiled extension is used when it was built; setting
``CHROMATOPE_PURE_PYTHON=1`` forces the numpy fallback.
"""

import os

import numpy as np

from chromatope import _kernels_py

_compiled = None
if os.environ.get("CHROMATOPE_PURE_PYTHON", "") != "1":
    try:
        from chromatope import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def available_backends():
    return ("python", "cython") if _compiled is not None else ("python",)


def _impl(backend):
    if backend is None:
        backend = BACKEND
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled
    if backend == "python":
        return _kernels_py
    raise ValueError(f"unknown backend {backend!r}")


def _c(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def lift_coverage(xs, ys, origins, axes, normals, lengths, profiles, weights, backend=None):
    """Accumulate layer weights over the pixel grid ``ys x xs``.

    Layer ``l`` covers the points ``origin + s*length*axis + t*normal`` with
    ``0 <= s <= 1`` and ``0 <= t <= profile(s)``, the profile being linearly
    interpolated between equally spaced nodes. Returns an ``(len(ys), len(xs))``
    float array of summed weights.
    """
    profiles = _c(profiles)
    if profiles.ndim != 2 or profiles.shape[1] < 2:
        raise ValueError("profiles must be (layers, nodes>=2)")
    return _impl(backend).lift_coverage(
        _c(xs), _c(ys), _c(origins).reshape(-1, 2), _c(axes).reshape(-1, 2),
        _c(normals).reshape(-1, 2), _c(lengths).ravel(), profiles, _c(weights).ravel())


def fiber_intervals(points, A, at, b, tol=1e-12, backend=None):
    """Intersect ``A @ x + at * t <= b`` with each vertical line through ``points``.

    Returns ``(lo, hi, status)`` with status 0 = bounded interval, 1 = empty,
    2 = unbounded.
    """
    at = _c(at).ravel()
    A = _c(A).reshape(len(at), -1)
    points = _c(points).reshape(-1, A.shape[1])
    return _impl(backend).fiber_intervals(points, A, at, _c(b).ravel(), float(tol))
