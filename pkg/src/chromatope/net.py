"""Geometrical nets of cubes and simplices and the counting-by-net arithmetic.

Cubes unfold as a cross: the facet ``x_{n-1} = 0`` in the middle, the
``2(n-1)`` side facets hinged on it, and the facet ``x_{n-1} = 1`` chained
onto the side facet ``x_{n-2} = 1``. Simplices unfold as a star: the facet
opposite the last vertex in the middle and every other facet reflected
across the ridge it shares with it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from chromatope.polytope import Face, FaceLattice, UnsupportedFamily

__all__ = [
    "CellColor",
    "ColoredNet",
    "Gluing",
    "Net",
    "NetCell",
    "NonUniformIncidence",
    "PUBLISHED_ARITHMETIC",
    "color_net",
    "count_via_net",
    "facet_incidence_divisor",
    "net_arithmetic",
    "unfold",
    "write_net",
]

Point = tuple[Fraction, ...]

# (family, n, k) -> (cells, per-cell count, divisor) as printed in the source
# text; (cube, 5, 1) carries a misprinted divisor.
PUBLISHED_ARITHMETIC = {
    ("cube", 3, 1): (6, 4, 2),
    ("cube", 4, 2): (8, 6, 2),
    ("cube", 4, 1): (8, 12, 3),
    ("cube", 5, 3): (10, 8, 2),
    ("cube", 5, 2): (10, 24, 3),
    ("cube", 5, 1): (10, 32, 3),
    ("simplex", 3, 1): (4, 3, 2),
    ("simplex", 4, 2): (5, 4, 2),
    ("simplex", 4, 1): (5, 6, 3),
    ("simplex", 5, 3): (6, 5, 2),
    ("simplex", 5, 2): (6, 10, 3),
    ("simplex", 5, 1): (6, 10, 4),
}


class NonUniformIncidence(ValueError):
    pass


@dataclass(frozen=True)
class NetCell:
    facet: int
    vertices: tuple[int, ...]
    images: tuple[Point, ...]
    parent: int | None = None
    hinge: Face | None = None

    def image(self, v: int) -> Point:
        return self.images[self.vertices.index(v)]


@dataclass(frozen=True)
class Gluing:
    """Cells ``a < b`` both carry source face ``face``; ``hinged`` if their images already coincide."""

    a: int
    b: int
    face: Face
    rank: int
    hinged: bool


@dataclass(frozen=True)
class Net:
    source: FaceLattice
    scales: tuple[Fraction, ...]
    cells: tuple[NetCell, ...]
    gluings: tuple[Gluing, ...]

    @property
    def dim(self) -> int:
        return self.source.dim - 1

    def real_images(self, i: int) -> np.ndarray:
        root = np.sqrt(np.array([float(s) for s in self.scales]))
        pts = np.array([[float(c) for c in p] for p in self.cells[i].images], dtype=np.float64)
        return pts.reshape(len(self.cells[i].images), self.dim) * root

    def placement(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        """``(origin, frame)`` with ``image(x) = origin + frame @ (x - x0)`` for source points
        ``x`` of the facet, ``x0`` being its first vertex."""
        cell = self.cells[i]
        src = self.source.real_vertices()[list(cell.vertices)]
        img = self.real_images(i)
        D = src[1:] - src[0]
        Y = img[1:] - img[0]
        # the facet normal goes to zero so the frame is fixed uniquely
        _, _, vt = np.linalg.svd(D)
        normal = vt[-1]
        D = np.vstack([D, normal])
        Y = np.vstack([Y, np.zeros(self.dim)])
        M, *_ = np.linalg.lstsq(D, Y, rcond=None)
        return img[0], M.T

    def gluing_classes(self) -> dict[int, list[set[tuple[int, Face]]]]:
        """Transitive closure of the gluings on ``(cell, face)`` nodes, grouped by rank."""
        parent: dict[tuple[int, Face], tuple[int, Face]] = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        src = self.source
        for ci, cell in enumerate(self.cells):
            cs = set(cell.vertices)
            for k in range(src.dim):
                for F in src.faces[k]:
                    if set(F) <= cs:
                        parent[(ci, F)] = (ci, F)
        for g in self.gluings:
            ra, rb = find((g.a, g.face)), find((g.b, g.face))
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        classes: dict[tuple[int, Face], set] = {}
        for node in parent:
            classes.setdefault(find(node), set()).add(node)
        by_rank: dict[int, list[set]] = {}
        for root, members in classes.items():
            by_rank.setdefault(src.face_index[root[1]][0], []).append(members)
        return by_rank


def _facet_of(P: FaceLattice, verts) -> int:
    return P.faces[P.dim - 1].index(tuple(sorted(verts)))


def _cube_cells(P: FaceLattice) -> list[NetCell]:
    n = P.dim
    V = P.vertices
    last = n - 1

    def facet(axis, val):
        return [i for i, v in enumerate(V) if v[axis] == val]

    def make(axis, val, place, parent=None):
        vs = facet(axis, val)
        hinge = None
        if parent is not None:
            hinge = tuple(sorted(set(vs) & set(cells[parent].vertices)))
        return NetCell(_facet_of(P, vs), tuple(vs), tuple(place(V[i]) for i in vs), parent, hinge)

    cells: list[NetCell] = []
    cells.append(make(last, 0, lambda x: tuple(x[:last])))
    for i in range(last):
        def low(x, i=i):
            y = list(x[:last])
            y[i] = -x[last]
            return tuple(y)

        def high(x, i=i):
            y = list(x[:last])
            y[i] = 1 + x[last]
            return tuple(y)

        cells.append(make(i, 0, low, 0))
        cells.append(make(i, 1, high, 0))
    hinge_cell = 2 * (last - 1) + 2  # the x_{n-2} = 1 side cell

    def far(x):
        y = list(x[:last])
        y[last - 1] = 3 - x[last - 1]
        return tuple(y)

    cells.append(make(last, 1, far, hinge_cell))
    return cells


def _simplex_cells(P: FaceLattice) -> list[NetCell]:
    n = P.dim
    V = P.vertices
    apex = n

    def drop(x):
        return tuple(x[: n - 1])

    central = tuple(range(n))
    cells = [NetCell(_facet_of(P, central), central, tuple(drop(V[i]) for i in central))]
    for i in range(n):
        vs = tuple(j for j in range(n + 1) if j != i)
        hinge = tuple(j for j in vs if j != apex)
        centre = [sum((V[j][a] for j in hinge), Fraction(0)) / len(hinge) for a in range(n - 1)]
        mirrored = tuple(2 * c - x for c, x in zip(centre, V[i][: n - 1]))
        imgs = tuple(mirrored if j == apex else drop(V[j]) for j in vs)
        cells.append(NetCell(_facet_of(P, vs), vs, imgs, 0, hinge))
    return cells


def unfold(P: FaceLattice) -> Net:
    """Place the facets of a 2..5-dimensional cube or simplex into ``(n-1)``-space."""
    if P.family not in ("cube", "simplex"):
        raise UnsupportedFamily(f"no unfolding for family {P.family!r}")
    if not 2 <= P.dim <= 5:
        raise UnsupportedFamily(f"no unfolding in dimension {P.dim}")
    cells = _cube_cells(P) if P.family == "cube" else _simplex_cells(P)
    scales = P.scales[: P.dim - 1]
    gluings = []
    for a in range(len(cells)):
        sa = set(cells[a].vertices)
        for b in range(a + 1, len(cells)):
            common = sa & set(cells[b].vertices)
            if not common:
                continue
            for k in range(P.dim - 1):
                for F in P.faces[k]:
                    if set(F) <= common:
                        hinged = all(cells[a].image(v) == cells[b].image(v) for v in F)
                        gluings.append(Gluing(a, b, F, k, hinged))
    return Net(P, scales, tuple(cells), tuple(gluings))


def facet_incidence_divisor(P: FaceLattice, k: int) -> int:
    """Number of facets through a rank-``k`` face, required to be the same for all of them."""
    if not 0 <= k <= P.dim - 2:
        raise ValueError(f"rank {k} outside [0, {P.dim - 2}]")
    counts = {P.facets_containing(F) for F in P.faces[k]}
    if len(counts) != 1:
        raise NonUniformIncidence(f"rank-{k} faces lie in {sorted(counts)} facets")
    return counts.pop()


def count_via_net(P: FaceLattice, k: int) -> int:
    """``f_{n-1} * f_k(facet) / divisor``, the count of rank-``k`` faces read off the net."""
    cells, per_cell, div = net_arithmetic(P, k)
    if (cells * per_cell) % div:
        raise ArithmeticError(f"{cells}*{per_cell} is not divisible by {div}")
    return cells * per_cell // div


def net_arithmetic(P: FaceLattice, k: int) -> tuple[int, int, int]:
    div = facet_incidence_divisor(P, k)
    facets = P.faces[P.dim - 1]
    per = {P.subface_counts(F)[k] for F in facets}
    if len(per) != 1:
        raise NonUniformIncidence(f"facets carry {sorted(per)} rank-{k} faces")
    return len(facets), per.pop(), div


@dataclass(frozen=True)
class CellColor:
    cell: int
    layer: str
    style: str
    base: Face
    peak: float


@dataclass(frozen=True)
class ColoredNet:
    net: Net
    colors: tuple[CellColor, ...]
    positions: tuple[tuple[int, ...], ...]

    def multiplicity(self, cell: int) -> int:
        return next(len(g) for g in self.positions if cell in g)


def _base_position(net: Net, cell: int, base: Face) -> frozenset:
    c = net.cells[cell]
    return frozenset(c.image(v) for v in base)


def color_net(net: Net) -> ColoredNet:
    """Color every net cell by the representation of its base ridge.

    Cube cells are uniformly colored on the ridge lowest along the last net
    axis. Simplex cells are gradated: the central cell on its ridge opposite
    its top vertex with the standard layer, the others on their hinge with
    the reverse layer. Coinciding bases are kept as a multiplicity group.
    """
    P = net.source
    n = P.dim
    colors = []
    if P.family == "cube":
        ridges = P.faces[n - 2]
        for ci, cell in enumerate(net.cells):
            cs = set(cell.vertices)
            low = min(img[-1] for img in cell.images)
            base = next(R for R in ridges if set(R) <= cs and all(cell.image(v)[-1] == low for v in R))
            colors.append(CellColor(ci, "standard", "uniform", base, 1.0))
    else:
        height = float(np.sqrt(n / (2 * (n - 1))))
        for ci, cell in enumerate(net.cells):
            if cell.parent is None:
                base = tuple(v for v in cell.vertices if v != n - 1)
                colors.append(CellColor(ci, "standard", "gradated", base, height))
            else:
                colors.append(CellColor(ci, "reverse", "gradated", cell.hinge, height))
    groups: dict[frozenset, list[int]] = {}
    for col in colors:
        groups.setdefault(_base_position(net, col.cell, col.base), []).append(col.cell)
    positions = tuple(sorted(tuple(g) for g in groups.values()))
    return ColoredNet(net, tuple(colors), positions)


def write_net(net: Net, colored: ColoredNet | None = None) -> str:
    P = net.source
    lines = [f"net {P.name or P.family}", f"dim {net.dim}",
             "scale " + " ".join(str(s) for s in net.scales), f"cells {len(net.cells)}"]
    for i, c in enumerate(net.cells):
        parent = "-" if c.parent is None else str(c.parent)
        hinge = "-" if c.hinge is None else " ".join(map(str, c.hinge))
        lines.append(f"cell {i} facet {c.facet} parent {parent} hinge {hinge}")
        origin, frame = net.placement(i)
        lines.append("  origin " + " ".join(f"{x:.12g}" for x in origin))
        for row in frame:
            lines.append("  frame " + " ".join(f"{x:.12g}" for x in row + 0.0))
        for v, img in zip(c.vertices, c.images):
            lines.append(f"  v {v}: " + " ".join(str(x) for x in img))
    lines.append(f"gluings {len(net.gluings)}")
    for g in net.gluings:
        lines.append(f"glue {g.a} {g.b} rank {g.rank} {'hinged' if g.hinged else 'folded'}: "
                     + " ".join(map(str, g.face)))
    if colored is not None:
        lines.append(f"colors {len(colored.colors)}")
        for col in colored.colors:
            lines.append(f"color {col.cell} {col.layer} {col.style} peak {col.peak:.12g} "
                         f"multiplicity {colored.multiplicity(col.cell)}: " + " ".join(map(str, col.base)))
    return "\n".join(lines) + "\n"
