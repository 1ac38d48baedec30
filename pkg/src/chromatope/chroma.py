"""Scalar color fields and the coloring, uncoloring and 1/n-coloring operations.

A colored base point ``x`` with value ``h`` stands for the segment ``[0, h]``
in one extra, nonnegative coordinate. A :class:`ColorRep` pairs a colored
field ``hi`` with an uncolored field ``lo`` so that ``x`` stands for
``[lo(x), hi(x)]``.

Fields sample their box domain on grid nodes (endpoints included) unless
``centered`` is set, in which case samples sit at cell centres.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from chromatope import kernels
from chromatope.polytope import FaceLattice, build_simplex, halfspaces

STANDARD = "standard"
REVERSE = "reverse"
COLOR = "color"
UNCOLOR = "uncolor"

# overlay membership threshold: accumulated weight >= 1 - EPSILON
EPSILON = 1e-9

# value tolerance when checking samples against [0, vmax]
_VTOL = 1e-9


class GridMismatch(ValueError):
    pass


class UnboundedFiber(ValueError):
    pass


def default_grid(base_dim: int) -> tuple[int, ...]:
    """1024 intervals per axis up to 2D bases, 128 for 3D bases (nodes = intervals + 1)."""
    n = 1025 if base_dim <= 2 else 129
    return (n,) * base_dim


def axis_coordinates(lo: float, hi: float, n: int, centered: bool = False) -> np.ndarray:
    i = np.arange(n, dtype=np.float64)
    if centered:
        return lo + (hi - lo) * (i + 0.5) / n
    if n == 1:
        return np.array([lo], dtype=np.float64)
    return lo + (hi - lo) * i / (n - 1)


@dataclass(frozen=True, eq=False)
class ColorField:
    domain: tuple[tuple[float, float], ...]
    values: np.ndarray
    vmax: float
    weight_den: int = 1
    layer: str = STANDARD
    sign: str = COLOR
    centered: bool = False

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64)
        if vals.ndim != len(self.domain):
            raise ValueError(f"{vals.ndim}-d values on a {len(self.domain)}-d domain")
        if not self.vmax > 0:
            raise ValueError("vmax must be positive")
        if self.weight_den < 1:
            raise ValueError("weight denominator must be >= 1")
        if self.layer not in (STANDARD, REVERSE) or self.sign not in (COLOR, UNCOLOR):
            raise ValueError(f"bad tag {self.layer!r}/{self.sign!r}")
        if vals.size and (vals.min() < -_VTOL or vals.max() > self.vmax * (1 + _VTOL)):
            raise ValueError(f"samples outside [0, {self.vmax}]")
        vals = np.clip(vals, 0.0, self.vmax) + 0.0
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "domain", tuple((float(a), float(b)) for a, b in self.domain))

    @property
    def grid(self) -> tuple[int, ...]:
        return self.values.shape

    @property
    def base_dim(self) -> int:
        return len(self.domain)

    def coordinates(self) -> list[np.ndarray]:
        return [axis_coordinates(a, b, n, self.centered) for (a, b), n in zip(self.domain, self.grid)]

    def points(self) -> np.ndarray:
        """All sample positions, row-major, shape ``(size, base_dim)``."""
        axes = self.coordinates()
        if not axes:
            return np.zeros((1, 0))
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def same_frame(self, other: ColorField) -> bool:
        return (self.domain == other.domain and self.grid == other.grid
                and self.vmax == other.vmax and self.centered == other.centered)

    def evolve(self, **changes) -> ColorField:
        return replace(self, **changes)


FIELD_MAGIC = "chromatope-field 1"


def encode_field(field: ColorField) -> bytes:
    """Text header, one ``key value`` per line, ending ``data f8le``, then the samples.

    Samples are row-major little-endian float64. Floats in the header use
    ``repr`` so they round-trip exactly.
    """
    lo_hi = " ".join(f"{a!r} {b!r}" for a, b in field.domain)
    header = [
        FIELD_MAGIC,
        f"dims {field.base_dim}",
        "grid " + " ".join(str(n) for n in field.grid),
        f"domain {lo_hi}",
        f"vmax {float(field.vmax)!r}",
        f"weightDen {field.weight_den}",
        f"layer {field.layer}",
        f"sign {field.sign}",
        f"centered {int(field.centered)}",
        "data f8le",
    ]
    body = np.ascontiguousarray(field.values, dtype="<f8").tobytes()
    return ("\n".join(header) + "\n").encode("ascii") + body


def decode_field(blob: bytes) -> ColorField:
    lines = blob.split(b"\n", 10)
    if lines[0].decode() != FIELD_MAGIC or lines[9] != b"data f8le":
        raise ValueError("not a field export")
    meta = dict(ln.decode().split(" ", 1) for ln in lines[1:9])
    dims = int(meta["dims"])
    grid = tuple(int(x) for x in meta["grid"].split()) if dims else ()
    nums = [float(x) for x in meta["domain"].split()]
    domain = tuple((nums[2 * i], nums[2 * i + 1]) for i in range(dims))
    values = np.frombuffer(lines[10], dtype="<f8").reshape(grid)
    return ColorField(domain, values, float(meta["vmax"]), int(meta["weightDen"]),
                      meta["layer"], meta["sign"], bool(int(meta["centered"])))


@dataclass(frozen=True, eq=False)
class ColorRep:
    hi: ColorField
    lo: ColorField

    def __post_init__(self):
        if not self.hi.same_frame(self.lo):
            raise GridMismatch("hi and lo fields differ in domain, grid or vmax")
        if self.hi.sign != COLOR or self.lo.sign != UNCOLOR:
            raise ValueError("ColorRep needs a colored hi field and an uncolored lo field")

    @classmethod
    def from_hi(cls, hi: ColorField) -> ColorRep:
        return cls(hi, hi.evolve(values=np.zeros(hi.grid), sign=UNCOLOR))

    @property
    def base_dim(self) -> int:
        return self.hi.base_dim

    def length(self) -> np.ndarray:
        return np.maximum(self.hi.values - self.lo.values, 0.0)

    def restrict(self, axis: int, index: int) -> ColorRep:
        """Fix base axis ``axis`` at sample ``index``: the representation on that slice."""
        dom = self.hi.domain[:axis] + self.hi.domain[axis + 1:]

        def cut(f):
            return f.evolve(domain=dom, values=np.take(f.values, index, axis=axis))

        return ColorRep(cut(self.hi), cut(self.lo))

    def lift(self, ts: np.ndarray) -> np.ndarray:
        """Membership of ``(x, t)`` for every base sample ``x`` and every ``t`` in ``ts``."""
        t = np.asarray(ts, dtype=np.float64).reshape((1,) * self.base_dim + (-1,))
        hi = self.hi.values[..., None]
        lo = self.lo.values[..., None]
        return (t >= lo) & (t <= hi) & (hi > lo)


def solid_coloring(domain, value: float, vmax: float = 1.0, grid=None,
                   layer: str = STANDARD) -> ColorField:
    """Uniform coloring of a box: the box times ``[0, value]``."""
    if not 0 <= value <= vmax:
        raise ValueError(f"value {value} outside [0, {vmax}]")
    domain = tuple(domain)
    grid = default_grid(len(domain)) if grid is None else tuple(grid)
    return ColorField(domain, np.full(grid, float(value)), vmax, layer=layer)


def simplex_profile(points: np.ndarray, vertices: np.ndarray, peak: float) -> np.ndarray:
    """Tent height ``peak * (m+1) * min_i lambda_i(x)`` over an m-simplex, 0 outside."""
    vertices = np.asarray(vertices, dtype=np.float64)
    m = vertices.shape[0] - 1
    T = np.vstack([vertices.T, np.ones(m + 1)])
    pts = np.asarray(points, dtype=np.float64).reshape(-1, m)
    lam = np.linalg.solve(T, np.vstack([pts.T, np.ones(len(pts))]))
    return peak * (m + 1) * np.maximum(lam.min(axis=0), 0.0)


def simplex_gradient(m: int = 1, peak: float | None = None, vmax: float | None = None,
                     grid=None, layer: str = STANDARD) -> ColorField:
    """Gradated coloring of the unit m-simplex: the color representation of the (m+1)-simplex.

    By default the peak is that simplex's height, ``sqrt((m+2) / (2(m+1)))``.
    """
    height = float(np.sqrt((m + 2) / (2 * (m + 1))))
    peak = height if peak is None else peak
    vmax = peak if vmax is None else vmax
    if peak > vmax:
        raise ValueError(f"peak {peak} exceeds vmax {vmax}")
    verts = build_simplex(m).real_vertices()
    domain = tuple(zip(verts.min(axis=0), verts.max(axis=0)))
    grid = default_grid(m) if grid is None else tuple(grid)
    proto = ColorField(domain, np.zeros(grid), vmax, layer=layer)
    vals = simplex_profile(proto.points(), verts, peak).reshape(grid)
    return proto.evolve(values=np.minimum(vals, vmax))


def uncolor_apply(rep: ColorRep, erase: ColorField) -> ColorRep:
    """Erase each fiber from below up to ``erase``; the result never goes past ``hi``."""
    if not rep.hi.same_frame(erase):
        raise GridMismatch("erase field does not share the representation's grid")
    lo = np.minimum(np.maximum(rep.lo.values, erase.values), rep.hi.values)
    return ColorRep(rep.hi, rep.lo.evolve(values=lo))


# -- 1/n-coloring -----------------------------------------------------------

@dataclass(frozen=True)
class Frame:
    """Pixel grid over ``[xmin, xmax] x [ymin, ymax]``; row 0 is the top."""

    xmin: float
    xmax: float
    ymin: float
    ymax: float
    width: int
    height: int

    @property
    def xs(self) -> np.ndarray:
        return axis_coordinates(self.xmin, self.xmax, self.width, centered=True)

    @property
    def ys(self) -> np.ndarray:
        return axis_coordinates(self.ymax, self.ymin, self.height, centered=True)

    @classmethod
    def square(cls, center, half: float, res: int) -> Frame:
        cx, cy = center
        return cls(cx - half, cx + half, cy - half, cy + half, res, res)

    def pixel_of(self, x: float, y: float) -> tuple[int, int]:
        col = int(np.floor((x - self.xmin) / (self.xmax - self.xmin) * self.width))
        row = int(np.floor((self.ymax - y) / (self.ymax - self.ymin) * self.height))
        return row, col


@dataclass(frozen=True, eq=False)
class PlacedField:
    """A 1D-base field laid on the segment ``origin -> origin + length*axis`` of the plane.

    Its lifted region rises along ``normal``.
    """

    field: ColorField
    origin: tuple[float, float]
    axis: tuple[float, float] = (1.0, 0.0)
    normal: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        if self.field.base_dim != 1 or self.field.centered:
            raise ValueError("placed fields need a node-sampled 1D base")

    @property
    def length(self) -> float:
        a, b = self.field.domain[0]
        return b - a

    @property
    def weight(self) -> float:
        return 1.0 / self.field.weight_den


@dataclass(frozen=True, eq=False)
class AccumulatedField:
    frame: Frame
    weights: np.ndarray

    def represented(self) -> np.ndarray:
        return self.weights >= 1.0 - EPSILON


def lift_weights(layers: Sequence[PlacedField], frame: Frame, weights=None, backend=None) -> np.ndarray:
    grids = {pf.field.grid for pf in layers}
    if len(grids) != 1:
        raise GridMismatch("placed layers must share one profile grid")
    w = [pf.weight for pf in layers] if weights is None else weights
    return kernels.lift_coverage(
        frame.xs, frame.ys,
        np.array([pf.origin for pf in layers]), np.array([pf.axis for pf in layers]),
        np.array([pf.normal for pf in layers]), np.array([pf.length for pf in layers]),
        np.stack([pf.field.values for pf in layers]), np.asarray(w, dtype=np.float64),
        backend=backend)


def overlay(layers: Sequence[PlacedField], frame: Frame, backend=None) -> AccumulatedField:
    """Sum ``1/n`` weights of the lifted regions; weight 1 marks the represented set."""
    if not layers:
        raise ValueError("overlay needs at least one layer")
    return AccumulatedField(frame, lift_weights(layers, frame, backend=backend))


def regular_polygon(p: int, edge: float = 1.0) -> np.ndarray:
    """Counterclockwise vertices of the regular p-gon with a horizontal bottom edge, centred at 0."""
    R = edge / (2 * np.sin(np.pi / p))
    k = np.arange(p)
    ang = -np.pi / 2 - np.pi / p + 2 * np.pi * k / p
    return np.stack([R * np.cos(ang), R * np.sin(ang)], axis=-1)


def polygon_folding(fields: Sequence[ColorField], p: int | None = None) -> list[PlacedField]:
    """Lay successive 1D fields on successive edges of a regular polygon, lifting inward."""
    p = len(fields) if p is None else p
    V = regular_polygon(p, edge=fields[0].domain[0][1] - fields[0].domain[0][0])
    out = []
    for i, f in enumerate(fields):
        a, b = V[i % p], V[(i + 1) % p]
        u = (b - a) / np.hypot(*(b - a))
        out.append(PlacedField(f, tuple(a), tuple(u), (-u[1], u[0])))
    return out


# -- fibers of convex bodies -------------------------------------------------

def fiber_rep(body, axis: int = -1, grid=None, domain=None, vmax: float | None = None,
              tol: float = 1e-12, backend=None) -> ColorRep:
    """Color representation of a convex body along coordinate ``axis``.

    ``body`` is a :class:`FaceLattice` or a half-space pair ``(A, b)`` with
    ``A x <= b``; a bare half-space pair needs an explicit ``domain``. Over each
    base sample the fiber is the interval cut out of the line by the
    half-spaces; empty fibers give ``hi = lo = 0``.
    """
    if isinstance(body, FaceLattice):
        A, b = halfspaces(body)
        verts = body.real_vertices()
    else:
        A, b = (np.asarray(x, dtype=np.float64) for x in body)
        verts = None
    d = A.shape[1]
    axis = axis % d
    keep = [j for j in range(d) if j != axis]
    if domain is None:
        if verts is None:
            raise ValueError("domain is required for a half-space body")
        domain = tuple((float(verts[:, j].min()), float(verts[:, j].max())) for j in keep)
    grid = default_grid(d - 1) if grid is None else tuple(grid)
    proto = ColorField(tuple(domain), np.zeros(grid), 1.0, sign=UNCOLOR)
    lo, hi, status = kernels.fiber_intervals(proto.points(), A[:, keep], A[:, axis], b, tol,
                                             backend=backend)
    if np.any(status == 2):
        raise UnboundedFiber("body is unbounded along the fiber axis")
    empty = status == 1
    lo = np.where(empty, 0.0, lo)
    hi = np.where(empty, 0.0, hi)
    if lo.min(initial=0.0) < -1e-9:
        raise ValueError("body reaches below the base hyperplane")
    lo = np.clip(lo, 0.0, None) + 0.0
    hi = np.maximum(hi, lo) + 0.0
    top = float(hi.max(initial=0.0))
    vmax = (top if top > 0 else 1.0) if vmax is None else vmax
    hi_f = ColorField(tuple(domain), hi.reshape(grid), vmax)
    lo_f = ColorField(tuple(domain), lo.reshape(grid), vmax, sign=UNCOLOR)
    return ColorRep(hi_f, lo_f)


# -- palette -----------------------------------------------------------------

@dataclass(frozen=True)
class Palette:
    """Piecewise-linear ramps over the normalized value ``v / vmax``."""

    standard: tuple[tuple[float, tuple[int, int, int]], ...] = (
        (0.0, (0, 0, 0)),        # black
        (0.5, (139, 69, 19)),    # brown
        (1.0, (255, 105, 180)),  # pink
    )
    reverse: tuple[tuple[float, tuple[int, int, int]], ...] = (
        (0.0, (0, 0, 0)),        # black
        (0.5, (34, 100, 34)),    # dark green
        (1.0, (50, 205, 50)),    # green
    )
    hatch: tuple[int, int, int] = (255, 255, 255)

    def anchors(self, layer: str = STANDARD):
        return self.standard if layer == STANDARD else self.reverse

    def map_array(self, values, vmax: float, layer: str = STANDARD) -> np.ndarray:
        """uint8 RGB for every value; shape ``values.shape + (3,)``."""
        v = np.asarray(values, dtype=np.float64) / vmax
        if v.size and (v.min() < -_VTOL or v.max() > 1 + _VTOL):
            raise ValueError("value outside [0, vmax]")
        v = np.clip(v, 0.0, 1.0)
        table = self.anchors(layer)
        xs = np.array([a for a, _ in table])
        out = np.empty(v.shape + (3,), dtype=np.uint8)
        for c in range(3):
            ys = np.array([rgb[c] for _, rgb in table], dtype=np.float64)
            out[..., c] = np.floor(np.interp(v, xs, ys) + 0.5).astype(np.uint8)
        return out


DEFAULT_PALETTE = Palette()


def palette_map(value: float, vmax: float, layer: str = STANDARD,
                palette: Palette = DEFAULT_PALETTE) -> tuple[int, int, int]:
    if not 0 <= value <= vmax:
        raise ValueError(f"value {value} outside [0, {vmax}]")
    return tuple(int(c) for c in palette.map_array(np.array(value), vmax, layer))
