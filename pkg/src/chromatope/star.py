"""Star polygons from folded 1/n-colored segments, with a direct raster oracle.

Each edge of the unit regular p-gon carries a gradated 1/n-colored segment.
For odd p it lifts to the triangle over that edge with apex at the opposite
vertex (a tent profile). For even p the opposite side is an edge; the segment
lifts to the two triangles reaching its two endpoints (a rising and a falling
ramp), each with weight 1/n. In both cases the peak equals the distance from
the edge to the farthest point of the polygon.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import pi, sqrt, tan

import numpy as np

from chromatope.chroma import ColorField, Frame, PlacedField, lift_weights, regular_polygon

__all__ = [
    "SUPPORTED",
    "StarLayer",
    "StarSpec",
    "UnsupportedSpec",
    "agreement",
    "apex_distance",
    "coverage_raster",
    "layer_triangles",
    "polygon_raster",
    "reference_star",
    "rotation_agreement",
    "star_frame",
    "star_layers",
    "star_threshold",
]

# (p, q) -> weight denominator n
SUPPORTED = {(5, 2): 3, (6, 2): 4, (7, 3): 3, (8, 3): 4}

CLOSED_FORM_VMAX = {
    5: sqrt(5 + 2 * sqrt(5)) / 2,
    6: sqrt(3),
    7: 1 / (2 * tan(pi / 14)),
    8: 1 + sqrt(2),
}

PROFILE_NODES = 1025


class UnsupportedSpec(ValueError):
    pass


@dataclass(frozen=True)
class StarSpec:
    p: int
    q: int
    n: int | None = None

    def __post_init__(self):
        if (self.p, self.q) not in SUPPORTED:
            raise UnsupportedSpec(f"{{{self.p}/{self.q}}} is not one of {sorted(SUPPORTED)}")
        if self.n is None:
            object.__setattr__(self, "n", SUPPORTED[(self.p, self.q)])
        elif self.n < 2:
            raise UnsupportedSpec("weight denominator must be >= 2")

    @property
    def vmax(self) -> float:
        return CLOSED_FORM_VMAX[self.p]


@dataclass(frozen=True, eq=False)
class StarLayer:
    edge: int
    parts: tuple[PlacedField, ...]


def layer_triangles(p: int) -> list[list[np.ndarray]]:
    """Per edge, the lifted triangles ``(a, b, apex)`` read off the polygon vertices."""
    V = regular_polygon(p)
    out = []
    for i in range(p):
        a, b = V[i], V[(i + 1) % p]
        if p % 2:
            out.append([np.array([a, b, V[(i + 1 + p // 2) % p]])])
        else:
            out.append([np.array([a, b, V[(i + p // 2) % p]]),
                        np.array([a, b, V[(i + 1 + p // 2) % p]])])
    return out


def apex_distance(p: int) -> float:
    """Distance from the first edge's line to its lifted apex."""
    a, b, c = layer_triangles(p)[0][0]
    u = (b - a) / np.hypot(*(b - a))
    w = c - a
    return float(abs(u[0] * w[1] - u[1] * w[0]))


def star_layers(spec: StarSpec, nodes: int = PROFILE_NODES) -> list[StarLayer]:
    s = np.linspace(0.0, 1.0, nodes)
    vmax = spec.vmax
    if spec.p % 2:
        profiles = [vmax * (1.0 - np.abs(2.0 * s - 1.0))]
    else:
        profiles = [vmax * s, vmax * (1.0 - s)]
    V = regular_polygon(spec.p)
    layers = []
    for i in range(spec.p):
        a, b = V[i], V[(i + 1) % spec.p]
        u = (b - a) / np.hypot(*(b - a))
        parts = tuple(
            PlacedField(ColorField(((0.0, 1.0),), np.minimum(prof, vmax), vmax, weight_den=spec.n),
                        (float(a[0]), float(a[1])), (float(u[0]), float(u[1])), (float(-u[1]), float(u[0])))
            for prof in profiles)
        layers.append(StarLayer(i, parts))
    return layers


def star_frame(p: int, resolution: int = 1024, margin: float = 1.02) -> Frame:
    R = 1 / (2 * np.sin(np.pi / p))
    return Frame.square((0.0, 0.0), margin * R, resolution)


def coverage_raster(layers: list[StarLayer], frame: Frame, backend=None) -> np.ndarray:
    """Number of lifted layer triangles over each pixel centre."""
    parts = [pf for layer in layers for pf in layer.parts]
    w = lift_weights(parts, frame, weights=np.ones(len(parts)), backend=backend)
    return np.rint(w).astype(np.int32)


def star_threshold(coverage: np.ndarray, n: int) -> np.ndarray:
    return coverage >= n


def _in_triangles(frame: Frame, triangles) -> np.ndarray:
    X, Y = np.meshgrid(frame.xs, frame.ys)
    out = np.zeros(X.shape, dtype=bool)
    for a, b, c in triangles:
        d = [(q[0] - p_[0]) * (Y - p_[1]) - (q[1] - p_[1]) * (X - p_[0])
             for p_, q in ((a, b), (b, c), (c, a))]
        neg = (d[0] < 0) | (d[1] < 0) | (d[2] < 0)
        pos = (d[0] > 0) | (d[1] > 0) | (d[2] > 0)
        out |= ~(neg & pos)
    return out


def _chord_crossing(p1, p2, p3, p4):
    d1, d2 = p2 - p1, p4 - p3
    t = np.linalg.solve(np.array([d1, -d2]).T, p3 - p1)
    return p1 + t[0] * d1


def star_outline(p: int, q: int) -> np.ndarray:
    """The 2p outline vertices of the filled {p/q} star, alternating outer and inner."""
    V = regular_polygon(p)
    pts = []
    for i in range(p):
        pts.append(V[i])
        pts.append(_chord_crossing(V[i], V[(i + q) % p], V[(i + 1) % p], V[(i + 1 - q) % p]))
    return np.array(pts)


def reference_star(p: int, q: int, frame: Frame) -> np.ndarray:
    """Filled {p/q} star rasterized directly as a fan over its simple outline.

    Non-coprime pairs give the compound figure, e.g. {6/2} is two triangles.
    """
    if not 2 <= q < p / 2:
        raise UnsupportedSpec(f"need 2 <= q < p/2 for {{{p}/{q}}}")
    out = star_outline(p, q)
    centre = np.zeros(2)
    return _in_triangles(frame, [(centre, out[i], out[(i + 1) % len(out)]) for i in range(len(out))])


def polygon_raster(p: int, frame: Frame) -> np.ndarray:
    V = regular_polygon(p)
    centre = np.zeros(2)
    return _in_triangles(frame, [(centre, V[i], V[(i + 1) % p]) for i in range(p)])


def agreement(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.mean(a == b))


def rotation_agreement(raster: np.ndarray, frame: Frame, p: int) -> float:
    """Fraction of pixels whose value survives a 2*pi/p turn about the origin (nearest pixel)."""
    X, Y = np.meshgrid(frame.xs, frame.ys)
    c, s = np.cos(2 * np.pi / p), np.sin(2 * np.pi / p)
    RX, RY = c * X - s * Y, s * X + c * Y
    col = np.floor((RX - frame.xmin) / (frame.xmax - frame.xmin) * frame.width).astype(int)
    row = np.floor((frame.ymax - RY) / (frame.ymax - frame.ymin) * frame.height).astype(int)
    inside = (col >= 0) & (col < frame.width) & (row >= 0) & (row < frame.height)
    rotated = raster[row[inside], col[inside]]
    return float(np.mean(rotated == raster[inside]))
