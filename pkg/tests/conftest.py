"""Independent oracles shared by the test modules."""

from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from chromatope import kernels


def hull_faces(points: np.ndarray) -> list[set[frozenset[int]]]:
    """Face lattice of the convex hull of ``points`` by brute force.

    Facets come from the hull's supporting hyperplanes; every other face is
    an intersection of facets, ranked by the affine dimension of its points.
    Returns ``faces[k]`` as a set of vertex-index sets for ``k < dim``.
    """
    pts = np.asarray(points, dtype=np.float64)
    dim = pts.shape[1]
    if dim == 1:
        order = np.argsort(pts[:, 0])
        return [{frozenset([int(order[0])]), frozenset([int(order[-1])])}]
    hull = ConvexHull(pts)
    facets = set()
    for normal_off in hull.equations:
        normal, off = normal_off[:-1], normal_off[-1]
        on = np.flatnonzero(np.abs(pts @ normal + off) < 1e-9)
        facets.add(frozenset(int(i) for i in on))
    everything = set(facets)
    frontier = set(facets)
    while frontier:
        new = set()
        for a in frontier:
            for b in facets:
                c = a & b
                if c and c not in everything:
                    new.add(c)
        everything |= new
        frontier = new

    def rank(face):
        sub = pts[sorted(face)]
        return int(np.linalg.matrix_rank(sub[1:] - sub[0], tol=1e-9)) if len(face) > 1 else 0

    faces = [set() for _ in range(dim)]
    for f in everything:
        r = rank(f)
        if r < dim:
            faces[r].add(f)
    return faces


def lattice_faces(P) -> list[set[frozenset[int]]]:
    return [{frozenset(f) for f in P.faces[k]} for k in range(P.dim)]


def point_in_triangle(p, a, b, c) -> bool:
    def side(u, v, w):
        return (v[0] - u[0]) * (w[1] - u[1]) - (v[1] - u[1]) * (w[0] - u[0])

    d = (side(a, b, p), side(b, c, p), side(c, a, p))
    return not (min(d) < 0 < max(d))


def subset_count(d: int, m: int) -> int:
    """Kept sub-boxes of the (d, m) rule by enumerating every offset tuple."""
    from itertools import product

    return sum(1 for off in product(range(3), repeat=d) if sum(x == 1 for x in off) <= m)


def pairs(seq):
    return combinations(seq, 2)


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    return request.param


# -- acceptance reporting ------------------------------------------------------------

_ACCEPTANCE: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    for key, value in report.user_properties:
        if key == "criterion":
            _ACCEPTANCE.append((value, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for line, verdict in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{line}: {verdict}")
