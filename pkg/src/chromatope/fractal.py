"""Triadic box fractals: Cantor sets and dusts, Sierpinski carpet, Menger sponges.

A rule ``(d, m)`` splits every box into ``3^d`` sub-boxes and keeps those
with at most ``m`` middle coordinates. ``(1, 0)`` is the Cantor set, ``(d, 0)``
the d-dimensional Cantor dust, ``(2, 1)`` the Sierpinski carpet, ``(3, 1)`` the
Menger sponge, ``(3, 2)`` the Sierpinski cube and ``(4, 2)`` the
four-dimensional Menger sponge with 72 of 81 sub-boxes kept.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, log

import numpy as np

from chromatope.chroma import COLOR, UNCOLOR, ColorField, ColorRep

__all__ = [
    "FoldLayer",
    "FractalColorRep",
    "LevelCeilingExceeded",
    "MengerRule",
    "TriadicBoxSet",
    "UnsupportedRule",
    "write_boxset",
    "read_boxset",
    "fractal_color_rep",
    "fractal_dimension",
    "iterate",
    "kept_count",
    "measure_proxy",
    "product",
]

# level ceilings by dimension (memory bound)
MAX_LEVEL = {1: 6, 2: 6, 3: 4, 4: 3}


class LevelCeilingExceeded(ValueError):
    pass


class UnsupportedRule(ValueError):
    pass


@dataclass(frozen=True)
class MengerRule:
    d: int
    m: int

    def __post_init__(self):
        if not 1 <= self.d <= 4:
            raise UnsupportedRule(f"dimension {self.d} outside [1, 4]")
        if not 0 <= self.m < self.d:
            raise UnsupportedRule(f"need 0 <= m < d, got m={self.m}, d={self.d}")

    def offsets(self) -> np.ndarray:
        """Kept sub-box offsets in ``{0,1,2}^d``, lexicographic."""
        grid = np.array(list(itertools.product(range(3), repeat=self.d)), dtype=np.int64)
        return grid[(grid == 1).sum(axis=1) <= self.m]


def kept_count(d: int, m: int) -> int:
    """``N(d, m) = sum_{k <= m} C(d, k) 2^(d-k)``."""
    return sum(comb(d, k) * 2 ** (d - k) for k in range(m + 1))


def _lexsort_unique(cells: np.ndarray) -> np.ndarray:
    if len(cells) == 0:
        return cells.reshape(0, cells.shape[1])
    return np.unique(cells, axis=0)


@dataclass(frozen=True, eq=False)
class TriadicBoxSet:
    """Closed boxes of side ``3^-level``, one integer tuple per box, sorted and unique."""

    dim: int
    level: int
    cells: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.cells, dtype=np.int64).reshape(-1, self.dim)
        side = 3 ** self.level
        if c.size and (c.min() < 0 or c.max() >= side):
            raise ValueError("cell index outside the level grid")
        c = _lexsort_unique(c)
        c.setflags(write=False)
        object.__setattr__(self, "cells", c)

    def __len__(self) -> int:
        return len(self.cells)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TriadicBoxSet):
            return NotImplemented
        return (self.dim, self.level) == (other.dim, other.level) and np.array_equal(self.cells, other.cells)

    __hash__ = None

    @classmethod
    def full(cls, dim: int) -> TriadicBoxSet:
        return cls(dim, 0, np.zeros((1, dim), dtype=np.int64))

    def as_tuples(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in row) for row in self.cells]

    def to_raster(self) -> np.ndarray:
        """Boolean occupancy on the ``(3^level)^dim`` cell grid."""
        side = 3 ** self.level
        out = np.zeros((side,) * self.dim, dtype=bool)
        out[tuple(self.cells.T)] = True
        return out

    def side(self) -> Fraction:
        return Fraction(1, 3 ** self.level)


def _check_level(d: int, n: int) -> None:
    if n < 0:
        raise ValueError("level must be >= 0")
    if n > MAX_LEVEL[d]:
        raise LevelCeilingExceeded(f"level {n} exceeds the ceiling {MAX_LEVEL[d]} for d={d}")


def iterate(rule: MengerRule, n: int) -> TriadicBoxSet:
    _check_level(rule.d, n)
    cells = np.zeros((1, rule.d), dtype=np.int64)
    offs = rule.offsets()
    for _ in range(n):
        cells = (cells[:, None, :] * 3 + offs[None, :, :]).reshape(-1, rule.d)
    return TriadicBoxSet(rule.d, n, cells)


def product(a: TriadicBoxSet, b: TriadicBoxSet) -> TriadicBoxSet:
    if a.level != b.level:
        raise ValueError(f"level mismatch: {a.level} vs {b.level}")
    d = a.dim + b.dim
    if d > 4:
        raise UnsupportedRule(f"product dimension {d} exceeds 4")
    left = np.repeat(a.cells, len(b.cells), axis=0)
    right = np.tile(b.cells, (len(a.cells), 1))
    return TriadicBoxSet(d, a.level, np.hstack([left, right]))


def fractal_dimension(rule: MengerRule) -> float:
    return log(kept_count(rule.d, rule.m)) / log(3)


def measure_proxy(rule: MengerRule, k: int, n: int) -> Fraction:
    """Total k-volume ``N^n 3^(-kn)`` of the level-n boxes."""
    if not 0 < k <= rule.d:
        raise ValueError(f"need 0 < k <= {rule.d}")
    return Fraction(kept_count(rule.d, rule.m) ** n, 3 ** (k * n))


# -- color representation ---------------------------------------------------

@dataclass(frozen=True, eq=False)
class FoldLayer:
    """A field folded onto the facet ``x_axis = side`` of the unit box.

    ``field`` lives on the remaining coordinates in increasing order. Its
    value measures depth from that facet along ``axis``: an uncoloring erases
    that depth, a coloring adds it.
    """

    axis: int
    side: int
    field: ColorField


@dataclass(frozen=True, eq=False)
class FractalColorRep:
    rule: MengerRule
    level: int
    base: ColorRep
    folds: tuple[FoldLayer, ...]

    def lift(self) -> np.ndarray:
        """Occupancy of the ``(3^level)^d`` cell grid represented by the base and folds."""
        d = self.rule.d
        side = 3 ** self.level
        centres = (np.arange(side) + 0.5) / side
        t = centres.reshape((1,) * (d - 1) + (side,))
        hi = self.base.hi.values[..., None]
        lo = self.base.lo.values[..., None]
        occ = (t >= lo) & (t <= hi) & (hi > lo)
        grids = np.meshgrid(*([centres] * d), indexing="ij")
        erased = np.zeros_like(occ)
        for fold in self.folds:
            e = np.expand_dims(fold.field.values, axis=fold.axis)
            depth = grids[fold.axis] if fold.side == 0 else 1.0 - grids[fold.axis]
            if fold.field.sign == UNCOLOR:
                erased |= depth <= e
            else:
                occ |= depth <= e
        return occ & ~erased


def _middle_free(shape_cells: int, dims: int, axis: int) -> np.ndarray:
    """Indicator on the level-1 grid that coordinate ``axis`` is not the middle third."""
    idx = np.indices((shape_cells,) * dims)[axis]
    return (idx != 1).astype(np.float64)


def fractal_color_rep(rule: MengerRule, n: int) -> FractalColorRep:
    """Express the level-n set of ``rule`` through lower-dimensional colorings.

    For ``m <= d - 2`` the base colors the level-n set of ``(d-1, m)`` with
    unit pink along the last axis, and every side facet ``x_i = 0`` and
    ``x_i = 1`` for ``i < d-1`` receives a folded pink uncoloring of that
    set's complement. A box survives exactly when each of its d coordinate
    projections survives one dimension down, which for ``m <= d - 2`` is the
    rule itself.

    For ``m = d - 1`` only level 1 is covered: the set is the union of the
    slabs where some coordinate avoids the middle third, given by a base
    coloring of the ``(d-1, d-2)`` set plus a colored fold on ``x_0 = 0``
    that fills the slabs of the last coordinate.
    """
    d, m = rule.d, rule.m
    if d < 2:
        raise UnsupportedRule("the Cantor set has no lower-dimensional base")
    domain = ((0.0, 1.0),) * (d - 1)
    if m == d - 1:
        if n != 1:
            raise UnsupportedRule(f"rule ({d}, {m}) is covered at level 1 only")
        inside = iterate(MengerRule(d - 1, d - 2), 1).to_raster().astype(np.float64)
        base = ColorRep.from_hi(ColorField(domain, inside, 1.0, sign=COLOR, centered=True))
        slab = ColorField(domain, _middle_free(3, d - 1, d - 2), 1.0, sign=COLOR, centered=True)
        return FractalColorRep(rule, n, base, (FoldLayer(0, 0, slab),))
    inside = iterate(MengerRule(d - 1, m), n).to_raster().astype(np.float64)
    base = ColorRep.from_hi(ColorField(domain, inside, 1.0, sign=COLOR, centered=True))
    erase = ColorField(domain, 1.0 - inside, 1.0, sign=UNCOLOR, centered=True)
    folds = tuple(FoldLayer(axis, side, erase) for axis in range(d - 1) for side in (0, 1))
    return FractalColorRep(rule, n, base, folds)


def write_boxset(box: TriadicBoxSet) -> str:
    """Text export: ``n d`` header, then one cell tuple per line."""
    lines = [f"{box.level} {box.dim}"]
    lines += [" ".join(str(int(x)) for x in row) for row in box.cells]
    return "\n".join(lines) + "\n"


def read_boxset(text: str) -> TriadicBoxSet:
    rows = [ln.split() for ln in text.strip().splitlines()]
    level, dim = int(rows[0][0]), int(rows[0][1])
    cells = np.array([[int(x) for x in r] for r in rows[1:]], dtype=np.int64).reshape(-1, dim)
    return TriadicBoxSet(dim, level, cells)
