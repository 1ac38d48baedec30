"""Time the compiled and numpy kernel backends on representative workloads.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--res N]
"""

import argparse
import time

import numpy as np

from chromatope import kernels
from chromatope.polytope import build_simplex, halfspaces
from chromatope.star import StarSpec, star_frame, star_layers


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def coverage_job(res):
    frame = star_frame(7, res)
    layers = star_layers(StarSpec(7, 3))
    parts = [pf for layer in layers for pf in layer.parts]
    args = (
        frame.xs, frame.ys,
        [pf.origin for pf in parts], [pf.axis for pf in parts], [pf.normal for pf in parts],
        [pf.length for pf in parts], [pf.field.values for pf in parts], [pf.weight for pf in parts],
    )
    return lambda backend: kernels.lift_coverage(*args, backend=backend)


def fiber_job(res):
    A, b = halfspaces(build_simplex(4))
    g = np.linspace(0, 1, res)
    pts = np.stack(np.meshgrid(g, g, g, indexing="ij"), axis=-1).reshape(-1, 3)
    return lambda backend: kernels.fiber_intervals(pts, A[:, :-1], A[:, -1], b, backend=backend)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--res", type=int, default=1024, help="star raster side in pixels")
    args = ap.parse_args(argv)
    jobs = [
        (f"lift_coverage 7/3 star {args.res}^2", coverage_job(args.res)),
        ("fiber_intervals 4-simplex 65^3", fiber_job(65)),
    ]
    backends = kernels.available_backends()
    print(f"{'workload':<36}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for name, job in jobs:
        results = [job(b) for b in backends]
        first = results[0] if isinstance(results[0], tuple) else (results[0],)
        for r in results[1:]:
            r = r if isinstance(r, tuple) else (r,)
            assert all(np.array_equal(x, y) for x, y in zip(first, r)), f"{name}: backends disagree"
        t = {b: best_of(lambda: job(b), args.repeat) for b in backends}
        speed = f"{t['python'] / t['cython']:>9.1f}x" if "cython" in t else f"{'n/a':>10}"
        print(f"{name:<36}" + "".join(f"{t[b]:>11.4f}s" for b in backends) + speed)


if __name__ == "__main__":
    main()
