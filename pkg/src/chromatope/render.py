"""Deterministic raster and voxel output.

Images are written as binary PPM (P6, no comments, maxval 255). Boolean and
coverage rasters use the plain PBM (P1) and PGM (P2) formats. Pixel rows run
top to bottom, so the largest ``y`` sits in row 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from chromatope.chroma import (
    COLOR,
    DEFAULT_PALETTE,
    STANDARD,
    UNCOLOR,
    ColorField,
    ColorRep,
    Palette,
)
from chromatope.net import ColoredNet

__all__ = [
    "Raster",
    "VoxelGrid",
    "export_voxels",
    "hatch_mask",
    "pbm_bytes",
    "pgm_bytes",
    "ppm_bytes",
    "read_ppm",
    "read_voxels",
    "render_colorbar",
    "render_field",
    "render_net",
    "voxel_slice",
    "write_pbm",
    "write_pgm",
    "write_ppm",
]

STRIP_HEIGHT = 32
HATCH_PERIOD = 4
NET_OFFSET = 8


class RenderError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Raster:
    width: int
    height: int
    pixels: np.ndarray  # (height, width, 3) uint8

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise RenderError("raster dimensions must be positive")
        px = np.ascontiguousarray(self.pixels, dtype=np.uint8)
        if px.shape != (self.height, self.width, 3):
            raise RenderError(f"pixel array {px.shape} does not match {self.width}x{self.height}")
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @classmethod
    def from_array(cls, pixels: np.ndarray) -> Raster:
        return cls(pixels.shape[1], pixels.shape[0], pixels)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Raster):
            return NotImplemented
        return np.array_equal(self.pixels, other.pixels)

    __hash__ = None

    def tobytes(self) -> bytes:
        return self.pixels.tobytes()


# -- netpbm ----------------------------------------------------------------

def ppm_bytes(raster: Raster) -> bytes:
    return f"P6\n{raster.width} {raster.height}\n255\n".encode("ascii") + raster.tobytes()


def read_ppm(blob: bytes) -> Raster:
    parts = blob.split(maxsplit=4)
    if parts[0] != b"P6" or parts[3] != b"255":
        raise RenderError("expected a P6 pixmap with maxval 255")
    w, h = int(parts[1]), int(parts[2])
    data = np.frombuffer(parts[4][: 3 * w * h], dtype=np.uint8)
    return Raster(w, h, data.reshape(h, w, 3))


def pbm_bytes(mask: np.ndarray) -> bytes:
    """Plain bitmap; ``True`` pixels are written as 1 (black)."""
    m = np.asarray(mask, dtype=bool)
    rows = ["".join("1" if v else "0" for v in row) for row in m]
    return (f"P1\n{m.shape[1]} {m.shape[0]}\n" + "\n".join(rows) + "\n").encode("ascii")


def pgm_bytes(values: np.ndarray, maxval: int | None = None) -> bytes:
    """Plain graymap of nonnegative integers."""
    v = np.asarray(values)
    if v.size and v.min() < 0:
        raise RenderError("graymap values must be nonnegative")
    top = int(v.max()) if maxval is None else maxval
    top = max(top, 1)
    rows = [" ".join(str(int(x)) for x in row) for row in v]
    return (f"P2\n{v.shape[1]} {v.shape[0]}\n{top}\n" + "\n".join(rows) + "\n").encode("ascii")


def _write(path, blob: bytes) -> Path:
    path = Path(path)
    path.write_bytes(blob)
    return path


def write_ppm(raster: Raster, path) -> Path:
    return _write(path, ppm_bytes(raster))


def write_pbm(mask: np.ndarray, path) -> Path:
    return _write(path, pbm_bytes(mask))


def write_pgm(values: np.ndarray, path, maxval: int | None = None) -> Path:
    return _write(path, pgm_bytes(values, maxval))


# -- fields ----------------------------------------------------------------

def hatch_mask(height: int, width: int) -> np.ndarray:
    """One-pixel diagonal stripes every four pixels."""
    r, c = np.indices((height, width))
    return (r + c) % HATCH_PERIOD == 0


def _image_layout(values: np.ndarray, strip_height: int) -> np.ndarray:
    """Map base samples to pixel rows and columns: x to the right, y upward."""
    if values.ndim == 0:
        return np.full((strip_height, strip_height), float(values))
    if values.ndim == 1:
        return np.broadcast_to(values, (strip_height, values.shape[0]))
    return values.T[::-1]


def render_field(rep: ColorRep, palette: Palette = DEFAULT_PALETTE,
                 strip_height: int = STRIP_HEIGHT) -> Raster:
    """One pixel per base sample colored by ``hi``; uncolored samples get the hatch.

    A 0-dimensional base becomes a square swatch and a 1-dimensional base a
    horizontal strip ``strip_height`` pixels tall.
    """
    if rep.base_dim > 2:
        raise RenderError(f"base dimension {rep.base_dim} > 2; export voxels instead")
    hi = _image_layout(rep.hi.values, strip_height)
    lo = _image_layout(rep.lo.values, strip_height)
    px = palette.map_array(hi, rep.hi.vmax, rep.hi.layer)
    stripes = (lo > 0) & hatch_mask(*lo.shape)
    px[stripes] = palette.hatch
    return Raster.from_array(px)


# 3x5 bitmap glyphs for tick labels
_GLYPHS = {
    "0": ("111", "101", "101", "101", "111"),
    "1": ("010", "110", "010", "010", "111"),
    "2": ("111", "001", "111", "100", "111"),
    "3": ("111", "001", "111", "001", "111"),
    "4": ("101", "101", "111", "001", "001"),
    "5": ("111", "100", "111", "001", "111"),
    "6": ("111", "100", "111", "101", "111"),
    "7": ("111", "001", "001", "001", "001"),
    "8": ("111", "101", "111", "101", "111"),
    "9": ("111", "101", "111", "001", "111"),
    ".": ("000", "000", "000", "000", "010"),
}


def _draw_text(px: np.ndarray, text: str, row: int, col: int, rgb) -> None:
    h, w = px.shape[:2]
    for ch in text:
        for dr, line in enumerate(_GLYPHS[ch]):
            for dc, bit in enumerate(line):
                r, c = row + dr, col + dc
                if bit == "1" and 0 <= r < h and 0 <= c < w:
                    px[r, c] = rgb
        col += 4


def tick_label(value: float) -> str:
    return f"{value:.3f}"


def render_colorbar(vmax: float, palette: Palette = DEFAULT_PALETTE, height: int = 256,
                    width: int = 64, layer: str = STANDARD, ramp_width: int = 16) -> Raster:
    """Vertical legend: ``vmax`` at the top, 0 at the bottom, ticks at the palette anchors."""
    if not vmax > 0:
        raise RenderError("vmax must be positive")
    if height < 2 or width < ramp_width + 1:
        raise RenderError(f"colorbar of {width}x{height} is too small")
    px = np.full((height, width, 3), 255, dtype=np.uint8)
    values = vmax * (1.0 - np.arange(height) / (height - 1))
    ramp = palette.map_array(values, vmax, layer)
    px[:, :ramp_width] = ramp[:, None, :]
    for frac, _ in palette.anchors(layer):
        row = int(round((1.0 - frac) * (height - 1)))
        px[row, ramp_width:ramp_width + 3] = 0
        top = min(max(row - 2, 0), height - 5)
        _draw_text(px, tick_label(frac * vmax), top, ramp_width + 5, (0, 0, 0))
    return Raster.from_array(px)


# -- voxels ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class VoxelGrid:
    """Dense 3D samples of a color representation: ``hi`` and ``lo`` per voxel."""

    domain: tuple[tuple[float, float], ...]
    hi: np.ndarray
    lo: np.ndarray
    vmax: float
    layer: str = STANDARD
    centered: bool = False

    def __post_init__(self):
        hi = np.asarray(self.hi, dtype=np.float64)
        lo = np.asarray(self.lo, dtype=np.float64)
        if hi.ndim != 3 or min(hi.shape) < 1 or hi.shape != lo.shape:
            raise RenderError("voxel channels must be matching nonempty 3D arrays")
        for ch in (hi, lo):
            if ch.min() < 0 or ch.max() > self.vmax:
                raise RenderError("voxel values outside [0, vmax]")
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "lo", lo)

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.hi.shape

    def rep(self) -> ColorRep:
        hi = ColorField(self.domain, self.hi, self.vmax, layer=self.layer, sign=COLOR,
                        centered=self.centered)
        return ColorRep(hi, hi.evolve(values=self.lo, sign=UNCOLOR))


VOXEL_MAGIC = "chromatope-voxels 1"


def export_voxels(rep: ColorRep, stem, slices: bool = True,
                  palette: Palette = DEFAULT_PALETTE) -> VoxelGrid:
    """Write ``stem.vox.txt`` (header) and ``stem.vox.bin`` (hi then lo, little-endian f8).

    With ``slices`` the middle slice across each axis is rendered to
    ``stem.slice<axis>.ppm``.
    """
    if rep.base_dim != 3:
        raise RenderError(f"voxel export needs a 3-dimensional base, got {rep.base_dim}")
    grid = VoxelGrid(rep.hi.domain, rep.hi.values, rep.lo.values, rep.hi.vmax, rep.hi.layer,
                     rep.hi.centered)
    stem = Path(stem)
    dom = " ".join(f"{a!r} {b!r}" for a, b in grid.domain)
    header = [
        VOXEL_MAGIC,
        "dims " + " ".join(str(n) for n in grid.dims),
        f"domain {dom}",
        f"vmax {float(grid.vmax)!r}",
        f"layer {grid.layer}",
        f"centered {int(grid.centered)}",
        "channels hi lo",
        "data f8le",
    ]
    Path(f"{stem}.vox.txt").write_text("\n".join(header) + "\n")
    body = np.ascontiguousarray(grid.hi, "<f8").tobytes() + np.ascontiguousarray(grid.lo, "<f8").tobytes()
    Path(f"{stem}.vox.bin").write_bytes(body)
    if slices:
        for axis in range(3):
            k = grid.dims[axis] // 2
            write_ppm(voxel_slice(grid, axis, k, palette), f"{stem}.slice{axis}.ppm")
    return grid


def read_voxels(stem) -> VoxelGrid:
    lines = Path(f"{stem}.vox.txt").read_text().splitlines()
    if lines[0] != VOXEL_MAGIC:
        raise RenderError("not a voxel header")
    meta = dict(ln.split(" ", 1) for ln in lines[1:])
    dims = tuple(int(x) for x in meta["dims"].split())
    nums = [float(x) for x in meta["domain"].split()]
    domain = tuple((nums[2 * i], nums[2 * i + 1]) for i in range(3))
    data = np.frombuffer(Path(f"{stem}.vox.bin").read_bytes(), dtype="<f8")
    size = int(np.prod(dims))
    return VoxelGrid(domain, data[:size].reshape(dims), data[size:].reshape(dims),
                     float(meta["vmax"]), meta["layer"], bool(int(meta["centered"])))


def voxel_slice(grid: VoxelGrid, axis: int, index: int,
                palette: Palette = DEFAULT_PALETTE) -> Raster:
    return render_field(grid.rep().restrict(axis, index), palette)


# -- nets ------------------------------------------------------------------

def _projection(dim: int) -> np.ndarray:
    """Linear map from net space to the drawing plane; extra axes go oblique."""
    P = np.zeros((2, dim))
    P[0, 0] = 1.0
    if dim > 1:
        P[1, 1] = 1.0
    for k in range(2, dim):
        ang = np.pi / 6 + (k - 2) * np.pi / 4
        P[:, k] = 0.5 * np.array([np.cos(ang), np.sin(ang)])
    return P


def _hull(points: np.ndarray) -> np.ndarray:
    """Counter-clockwise convex hull (monotone chain) of 2D points."""
    pts = sorted({(round(float(x), 12), round(float(y), 12)) for x, y in points})
    if len(pts) <= 2:
        return np.array(pts)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


def _fill(px, hull: np.ndarray, X, Y, rgb, radius: float) -> None:
    """Fill a convex polygon; hulls with fewer than three corners are drawn thick."""
    if len(hull) >= 3:
        inside = np.ones(X.shape, dtype=bool)
        for i in range(len(hull)):
            a, b = hull[i], hull[(i + 1) % len(hull)]
            inside &= (b[0] - a[0]) * (Y - a[1]) - (b[1] - a[1]) * (X - a[0]) >= -1e-9
    elif len(hull) == 2:
        a, b = hull
        d = b - a
        s = np.clip(((X - a[0]) * d[0] + (Y - a[1]) * d[1]) / float(d @ d), 0.0, 1.0)
        inside = np.hypot(X - a[0] - s * d[0], Y - a[1] - s * d[1]) <= radius
    else:
        inside = np.hypot(X - hull[0][0], Y - hull[0][1]) <= radius
    px[inside] = rgb


def render_net(colored: ColoredNet, size: int = 512, palette: Palette = DEFAULT_PALETTE) -> Raster:
    """Draw every cell in gray and its colored base on top.

    Net spaces of dimension three or more are drawn in oblique projection.
    Bases sharing a position are shifted by eight pixels per repeat and
    marked with a white square beside the shifted copy.
    """
    net = colored.net
    proj = _projection(net.dim)

    def to_plane(pts):
        pts = pts.reshape(len(pts), net.dim)
        return pts @ proj.T

    cells = [to_plane(net.real_images(i)) for i in range(len(net.cells))]
    allpts = np.vstack(cells)
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    span = float(max(hi[0] - lo[0], hi[1] - lo[1], 1e-9))
    pad = 16 + NET_OFFSET * max(len(g) for g in colored.positions)
    scale = (size - 2 * pad) / span
    centre = (lo + hi) / 2

    def to_pixel(pts):
        xy = (pts - centre) * scale
        return np.column_stack([xy[:, 0] + size / 2, size / 2 - xy[:, 1]])

    cols, rows = np.meshgrid(np.arange(size) + 0.5, np.arange(size) + 0.5)
    px = np.zeros((size, size, 3), dtype=np.uint8)
    shift = {}
    for group in colored.positions:
        for rank, ci in enumerate(group):
            shift[ci] = rank * NET_OFFSET
    for pts in cells:
        _fill(px, _hull(to_pixel(pts)), cols, rows, (96, 96, 96), 1.5)
    # reverse-layer bases first so standard ones stay visible
    for color in sorted(colored.colors, key=lambda c: (c.layer == STANDARD, c.cell)):
        cell = net.cells[color.cell]
        img = net.real_images(color.cell)
        base = np.array([img[cell.vertices.index(v)] for v in color.base])
        off = np.array([shift[color.cell], shift[color.cell]])
        bpx = to_pixel(to_plane(base)) + off
        rgb = tuple(int(c) for c in palette.map_array(np.array(color.peak), color.peak, color.layer))
        _fill(px, _hull(bpx), cols, rows, rgb, 2.5)
        if shift[color.cell]:
            r, c = int(bpx[:, 1].min()) - 4, int(bpx[:, 0].min()) - 4
            px[max(r, 0):max(r + 3, 0), max(c, 0):max(c + 3, 0)] = 255
    return Raster.from_array(px)
