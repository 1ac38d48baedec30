"""Exact face lattices for cubes, simplices, their products, truncations and corners.

Vertex coordinates are stored as rational coefficients. The real coordinate
on axis ``j`` is ``coefficient * sqrt(scales[j])`` where ``scales[j]`` is a
positive rational; cubes and corners use unit scales, the regular simplex uses
the squared heights of its recursive lift. Squared distances and facet
inequalities are therefore exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from math import comb, gcd, lcm

import numpy as np

MAX_DIM = 5

__all__ = [
    "DegenerateTruncation",
    "DimensionUnsupported",
    "FaceLattice",
    "UnsupportedFamily",
    "build_cube",
    "build_simplex",
    "cartesian_product",
    "check_lattice",
    "closed_form_f_vector",
    "cube_corner",
    "euler_boundary",
    "facet_inequalities",
    "halfspaces",
    "product_f_vector",
    "read_lattice",
    "truncate_vertices",
    "truncated_f_vector",
    "write_lattice",
]


class DimensionUnsupported(ValueError):
    pass


class UnsupportedFamily(ValueError):
    pass


class DegenerateTruncation(ValueError):
    pass


Face = tuple[int, ...]


@dataclass(frozen=True)
class FaceLattice:
    """Combinatorial polytope with exact vertex coordinates.

    ``faces[k]`` lists the rank-``k`` faces as sorted vertex-index tuples, in
    lexicographic order. ``faces[dim]`` is the polytope itself.
    """

    dim: int
    vertices: tuple[tuple[Fraction, ...], ...]
    faces: tuple[tuple[Face, ...], ...]
    scales: tuple[Fraction, ...]
    family: str = "polytope"
    name: str = ""

    @property
    def f_vector(self) -> tuple[int, ...]:
        """Boundary element counts ``(f_0, ..., f_{dim-1})``."""
        return tuple(len(self.faces[k]) for k in range(self.dim))

    @property
    def extended_f_vector(self) -> tuple[int, ...]:
        return tuple(len(fs) for fs in self.faces)

    @cached_property
    def face_index(self) -> dict[Face, tuple[int, int]]:
        return {f: (k, i) for k, fs in enumerate(self.faces) for i, f in enumerate(fs)}

    @cached_property
    def covers(self) -> tuple[tuple[tuple[int, ...], ...], ...]:
        """``covers[k][i]``: indices of rank-(k+1) faces containing face ``faces[k][i]``."""
        out = []
        for k in range(self.dim):
            upper = [frozenset(g) for g in self.faces[k + 1]]
            row = []
            for f in self.faces[k]:
                fs = frozenset(f)
                row.append(tuple(j for j, g in enumerate(upper) if fs < g))
            out.append(tuple(row))
        return tuple(out)

    @cached_property
    def edges_at(self) -> tuple[tuple[int, ...], ...]:
        """Indices into ``faces[1]`` of the edges at each vertex."""
        at = [[] for _ in self.vertices]
        for i, (a, b) in enumerate(self.faces[1] if self.dim >= 1 else ()):
            at[a].append(i)
            at[b].append(i)
        return tuple(tuple(x) for x in at)

    def real_vertices(self) -> np.ndarray:
        root = np.sqrt(np.array([float(s) for s in self.scales]))
        coef = np.array([[float(c) for c in v] for v in self.vertices], dtype=np.float64)
        return coef.reshape(len(self.vertices), self.dim) * root

    def sq_distance(self, i: int, j: int) -> Fraction:
        return sum(((a - b) ** 2 * s for a, b, s in zip(self.vertices[i], self.vertices[j], self.scales)),
                   Fraction(0))

    def facets_containing(self, face: Face) -> int:
        fs = set(face)
        return sum(1 for g in self.faces[self.dim - 1] if fs <= set(g))

    def subface_counts(self, face: Face) -> tuple[int, ...]:
        """Extended f-vector of ``face`` read off the lattice."""
        fs = set(face)
        k = self.face_index[tuple(face)][0]
        return tuple(sum(1 for g in self.faces[r] if set(g) <= fs) for r in range(k + 1))


def _check_dim(n: int, lo: int, hi: int) -> None:
    if not isinstance(n, (int, np.integer)) or not lo <= n <= hi:
        raise DimensionUnsupported(f"dimension {n!r} outside [{lo}, {hi}]")


def _sorted_faces(faces_by_rank):
    return tuple(tuple(sorted(set(tuple(sorted(f)) for f in fs))) for fs in faces_by_rank)


def build_cube(n: int) -> FaceLattice:
    """Unit n-cube on ``{0,1}^n``; rank-k faces fix ``n-k`` coordinates."""
    _check_dim(n, 1, MAX_DIM)
    verts = tuple(tuple(Fraction(x) for x in v) for v in product((0, 1), repeat=n))
    index = {v: i for i, v in enumerate(verts)}
    faces = []
    for k in range(n + 1):
        fs = []
        for fixed in combinations(range(n), n - k):
            for vals in product((0, 1), repeat=n - k):
                pin = dict(zip(fixed, vals))
                fs.append([i for v, i in index.items() if all(v[a] == x for a, x in pin.items())])
        faces.append(fs)
    return FaceLattice(n, verts, _sorted_faces(faces), (Fraction(1),) * n, "cube", f"cube{n}")


def _simplex_faces(nv: int):
    return _sorted_faces([list(combinations(range(nv), k + 1)) for k in range(nv)])


def build_simplex(n: int) -> FaceLattice:
    """Regular unit-edge n-simplex by recursive lift.

    Vertex ``k`` sits above the centroid of vertices ``0..k-1`` at height
    ``sqrt((k+1)/(2k))`` along axis ``k``; that squared height is the axis scale.
    """
    _check_dim(n, 1, MAX_DIM)
    verts = [[Fraction(0)] * n]
    for k in range(1, n + 1):
        v = [sum((verts[i][j] for i in range(k)), Fraction(0)) / k for j in range(n)]
        v[k - 1] = Fraction(1)
        verts.append(v)
    scales = tuple(Fraction(k + 1, 2 * k) for k in range(1, n + 1))
    return FaceLattice(n, tuple(tuple(v) for v in verts), _simplex_faces(n + 1), scales,
                       "simplex", f"simplex{n}")


def cube_corner(n: int) -> FaceLattice:
    """Orthoscheme corner: origin plus the ``n`` unit basis points."""
    _check_dim(n, 2, 4)
    verts = [tuple(Fraction(0) for _ in range(n))]
    for i in range(n):
        verts.append(tuple(Fraction(int(j == i)) for j in range(n)))
    return FaceLattice(n, tuple(verts), _simplex_faces(n + 1), (Fraction(1),) * n,
                       "corner", f"corner{n}")


def cartesian_product(P: FaceLattice, Q: FaceLattice) -> FaceLattice:
    """Product polytope; its faces are products of nonempty faces of the factors."""
    if P.dim + Q.dim > MAX_DIM:
        raise DimensionUnsupported(f"product dimension {P.dim + Q.dim} exceeds {MAX_DIM}")
    nq = len(Q.vertices)
    verts = tuple(p + q for p in P.vertices for q in Q.vertices)
    n = P.dim + Q.dim
    faces = [[] for _ in range(n + 1)]
    for a, fps in enumerate(P.faces):
        for b, fqs in enumerate(Q.faces):
            for F in fps:
                for G in fqs:
                    faces[a + b].append([i * nq + j for i in F for j in G])
    name = f"{P.name}x{Q.name}" if P.name and Q.name else ""
    return FaceLattice(n, verts, _sorted_faces(faces), P.scales + Q.scales, "product", name)


def product_f_vector(P: FaceLattice, Q: FaceLattice) -> tuple[int, ...]:
    """Boundary f-vector of ``P x Q`` from the convolution of extended f-vectors."""
    fp, fq = P.extended_f_vector, Q.extended_f_vector
    n = P.dim + Q.dim
    conv = [sum(fp[a] * fq[k - a] for a in range(len(fp)) if 0 <= k - a < len(fq)) for k in range(n + 1)]
    return tuple(conv[:n])


def truncate_vertices(P: FaceLattice, t=Fraction(1, 4)) -> FaceLattice:
    """Cut every vertex of a cube or simplex at parameter ``t`` along its edges.

    New vertex ``(v, e)`` lies at ``v + t (w - v)`` for each edge ``e = vw``.
    Faces are the shrunken originals plus one vertex figure per (vertex,
    face) incidence. Coinciding new vertices (``t = 1/2``) are rejected.
    """
    t = Fraction(t)
    if not 0 < t <= Fraction(1, 2):
        raise ValueError(f"truncation parameter {t} outside (0, 1/2]")
    if P.family not in ("cube", "simplex"):
        raise UnsupportedFamily(f"cannot truncate family {P.family!r}")
    _check_dim(P.dim, 1, 4)
    edges = P.faces[1]
    new_index: dict[tuple[int, int], int] = {}
    verts = []
    for v in range(len(P.vertices)):
        for e in P.edges_at[v]:
            w = edges[e][0] if edges[e][1] == v else edges[e][1]
            pv, pw = P.vertices[v], P.vertices[w]
            new_index[(v, e)] = len(verts)
            verts.append(tuple(a + t * (b - a) for a, b in zip(pv, pw)))
    if len(set(verts)) != len(verts):
        raise DegenerateTruncation(f"t={t} merges truncation vertices")
    edge_sets = [set(e) for e in edges]

    def corner(v, F):
        fs = set(F)
        return [new_index[(v, e)] for e in P.edges_at[v] if edge_sets[e] <= fs]

    faces = [[] for _ in range(P.dim + 1)]
    for k in range(1, P.dim + 1):
        for F in P.faces[k]:
            faces[k].append([i for v in F for i in corner(v, F)])
            for v in F:
                faces[k - 1].append(corner(v, F))
    return FaceLattice(P.dim, tuple(verts), _sorted_faces(faces), P.scales,
                       "truncated", f"truncated-{P.name}")


def euler_boundary(P: FaceLattice) -> int:
    return sum((-1) ** k * f for k, f in enumerate(P.f_vector))


# -- exact linear algebra over the coefficient space ------------------------

def _rref(rows):
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def affine_rank(points) -> int:
    pts = [tuple(Fraction(x) for x in p) for p in points]
    if len(pts) <= 1:
        return 0
    diffs = [[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]
    return len(_rref(diffs)[1])


def _nullspace(rows, ncols):
    red, pivots = _rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def _primitive(vec):
    den = lcm(*(x.denominator for x in vec))
    ints = [int(x * den) for x in vec]
    g = gcd(*ints) or 1
    return [Fraction(x // g) for x in ints]


def facet_inequalities(P: FaceLattice) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    """Exact facet inequalities ``alpha . c <= beta`` in coefficient space.

    ``alpha`` is a primitive integer vector; the order follows ``faces[dim-1]``.
    """
    n = P.dim
    centroid = [sum((v[j] for v in P.vertices), Fraction(0)) / len(P.vertices) for j in range(n)]
    out = []
    for F in P.faces[n - 1]:
        c0 = P.vertices[F[0]]
        rows = [[a - b for a, b in zip(P.vertices[i], c0)] for i in F[1:]]
        ns = _nullspace(rows, n)
        if len(ns) != 1:
            raise ValueError(f"facet {F} does not span a hyperplane")
        alpha = _primitive(ns[0])
        beta = sum((a * c for a, c in zip(alpha, c0)), Fraction(0))
        if sum((a * c for a, c in zip(alpha, centroid)), Fraction(0)) > beta:
            alpha = [-a for a in alpha]
            beta = -beta
        out.append((tuple(alpha), beta))
    return out


def halfspaces(P: FaceLattice) -> tuple[np.ndarray, np.ndarray]:
    """Facet half-spaces ``A x <= b`` in real coordinates."""
    root = np.sqrt(np.array([float(s) for s in P.scales]))
    ineq = facet_inequalities(P)
    A = np.array([[float(a) for a in alpha] for alpha, _ in ineq]) / root
    b = np.array([float(beta) for _, beta in ineq])
    return A, b


def check_lattice(P: FaceLattice) -> None:
    """Raise ``AssertionError`` if a structural invariant fails."""
    n = P.dim
    assert len(P.faces) == n + 1
    assert P.faces[n] == (tuple(range(len(P.vertices))),)
    assert P.faces[0] == tuple((i,) for i in range(len(P.vertices)))
    for k in range(n + 1):
        for F in P.faces[k]:
            assert affine_rank([P.vertices[i] for i in F]) == k, (k, F)
    for k in range(n):
        upper = [set(g) for g in P.faces[k + 1]]
        for F, cov in zip(P.faces[k], P.covers[k]):
            assert cov, (k, F)
            assert all(set(F) < upper[j] for j in cov)
            assert sum(1 for g in upper if set(F) < g) == len(cov)


# -- text export ------------------------------------------------------------

def write_lattice(P: FaceLattice) -> str:
    lines = [f"dim {P.dim}", f"family {P.family}", f"name {P.name or '-'}",
             "scale " + " ".join(str(s) for s in P.scales), f"vertices {len(P.vertices)}"]
    lines += [" ".join(str(c) for c in v) for v in P.vertices]
    for k, fs in enumerate(P.faces):
        lines += [f"face {k}: " + " ".join(map(str, F)) for F in fs]
    return "\n".join(lines) + "\n"


def read_lattice(text: str) -> FaceLattice:
    lines = iter(text.splitlines())
    header = {}
    for _ in range(4):
        key, _, val = next(lines).partition(" ")
        header[key] = val
    n = int(header["dim"])
    nv = int(next(lines).split()[1])
    verts = tuple(tuple(Fraction(x) for x in next(lines).split()) for _ in range(nv))
    faces = [[] for _ in range(n + 1)]
    for line in lines:
        if not line.strip():
            continue
        head, _, body = line.partition(":")
        faces[int(head.split()[1])].append(tuple(int(x) for x in body.split()))
    scales = tuple(Fraction(x) for x in header["scale"].split())
    name = "" if header["name"] == "-" else header["name"]
    return FaceLattice(n, verts, tuple(tuple(fs) for fs in faces), scales, header["family"], name)


def closed_form_f_vector(family: str, n: int) -> tuple[int, ...]:
    if family == "cube":
        return tuple(comb(n, k) * 2 ** (n - k) for k in range(n))
    if family in ("simplex", "corner"):
        return tuple(comb(n + 1, k + 1) for k in range(n))
    raise UnsupportedFamily(family)


def truncated_f_vector(family: str, n: int) -> tuple[int, ...]:
    """f-vector after cutting every vertex of a simple polytope below the edge midpoints.

    Each vertex becomes ``n`` new vertices, and its vertex figure, an
    (n-1)-simplex, adds ``C(n, k+1)`` faces of rank ``k``.
    """
    f = closed_form_f_vector(family, n)
    return (n * f[0],) + tuple(f[k] + f[0] * comb(n, k + 1) for k in range(1, n))
