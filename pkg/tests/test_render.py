import hashlib
import io
from math import sqrt

import numpy as np
import pytest
from PIL import Image

from chromatope.chroma import (
    DEFAULT_PALETTE,
    ColorField,
    ColorRep,
    fiber_rep,
    palette_map,
    solid_coloring,
)
from chromatope.net import color_net, unfold
from chromatope.polytope import build_cube, build_simplex, truncate_vertices
from chromatope.render import (
    Raster,
    RenderError,
    VoxelGrid,
    export_voxels,
    hatch_mask,
    pbm_bytes,
    pgm_bytes,
    ppm_bytes,
    read_ppm,
    read_voxels,
    render_colorbar,
    render_field,
    render_net,
    voxel_slice,
    write_ppm,
)

PINK = (255, 105, 180)
WHITE = (255, 255, 255)


# -- netpbm --------------------------------------------------------------------

def test_ppm_layout_and_pillow_decoding():
    rng = np.random.default_rng(7)
    px = rng.integers(0, 256, size=(5, 7, 3), dtype=np.uint8)
    blob = ppm_bytes(Raster.from_array(px))
    assert blob.startswith(b"P6\n7 5\n255\n")
    assert len(blob) == len(b"P6\n7 5\n255\n") + 3 * 7 * 5
    assert b"#" not in blob[:12]
    assert np.array_equal(np.asarray(Image.open(io.BytesIO(blob))), px)
    assert read_ppm(blob) == Raster.from_array(px)


def test_pbm_and_pgm_decode_with_pillow():
    mask = np.array([[True, False, True], [False, False, True]])
    img = np.asarray(Image.open(io.BytesIO(pbm_bytes(mask))))
    # PIL maps bit 1 (black) to False
    assert np.array_equal(~img.astype(bool), mask)
    counts = np.array([[0, 1, 2], [3, 4, 5]])
    assert np.array_equal(np.asarray(Image.open(io.BytesIO(pgm_bytes(counts)))), counts * 255 // 5)


def test_raster_validation():
    with pytest.raises(RenderError):
        Raster(0, 1, np.zeros((1, 0, 3)))
    with pytest.raises(RenderError):
        Raster(2, 2, np.zeros((2, 3, 3)))


# -- fields --------------------------------------------------------------------

def test_square_renders_as_a_pink_strip():
    rep = ColorRep.from_hi(solid_coloring(((0.0, 1.0),), 1.0))
    r = render_field(rep)
    assert (r.width, r.height) == (1025, 32)
    assert np.all(r.pixels == PINK)


def test_zero_field_renders_black():
    rep = ColorRep.from_hi(ColorField(((0, 1), (0, 1)), np.zeros((9, 9)), 1.0))
    assert np.all(render_field(rep).pixels == 0)


def test_colored_point_renders_a_swatch():
    r = render_field(ColorRep.from_hi(solid_coloring((), 0.5)))
    assert (r.width, r.height) == (32, 32)
    assert np.all(r.pixels == (139, 69, 19))


def test_image_orientation():
    vals = np.zeros((3, 2))
    vals[2, 1] = 1.0  # largest x, largest y
    r = render_field(ColorRep.from_hi(ColorField(((0, 1), (0, 1)), vals, 1.0)))
    assert (r.width, r.height) == (3, 2)
    assert tuple(r.pixels[0, 2]) == PINK
    assert r.pixels.sum() == sum(PINK)


def expected_truncated_square(rep):
    hi = np.broadcast_to(rep.hi.values, (32, rep.hi.grid[0]))
    lo = np.broadcast_to(rep.lo.values, (32, rep.hi.grid[0]))
    px = np.zeros(hi.shape + (3,), dtype=np.uint8)
    for r in range(hi.shape[0]):
        for c in range(hi.shape[1]):
            if lo[r, c] > 0 and (r + c) % 4 == 0:
                px[r, c] = WHITE
            else:
                px[r, c] = palette_map(hi[r, c], rep.hi.vmax)
    return px


def test_truncated_square_gradated_top_hatched_sides():
    rep = fiber_rep(truncate_vertices(build_cube(2)), grid=(129,))
    r = render_field(rep)
    assert np.array_equal(r.pixels, expected_truncated_square(rep))
    sides = rep.lo.values > 0
    assert sides[0] and sides[-1] and not sides[64]
    # hatching appears only over the uncolored sides
    white = np.all(r.pixels == WHITE, axis=-1)
    assert white[:, sides].any() and not white[:, ~sides].any()
    # golden image
    digest = hashlib.sha256(ppm_bytes(r)).hexdigest()
    assert digest == GOLDEN_TRUNCATED_SQUARE


GOLDEN_TRUNCATED_SQUARE = "3eb9ed6cf10fc5a108bbcc5405a0891f7bbd1b3aa29b9dbbbbc074c479755a62"


def test_hatch_mask():
    m = hatch_mask(8, 8)
    assert m.sum() == 16
    assert m[0, 0] and m[1, 3] and not m[0, 1]


def test_render_field_rejects_solid_bases():
    rep = fiber_rep(build_cube(4), grid=(5, 5, 5))
    with pytest.raises(RenderError):
        render_field(rep)


def test_render_is_deterministic():
    rep = fiber_rep(build_simplex(3), grid=(65, 65))
    assert ppm_bytes(render_field(rep)) == ppm_bytes(render_field(rep))


# -- color bar -----------------------------------------------------------------

def test_colorbar_ramp():
    bar = render_colorbar(1.0)
    ramp = bar.pixels[:, 0].astype(int)
    assert tuple(ramp[0]) == PINK
    assert tuple(ramp[-1]) == (0, 0, 0)
    mid = (bar.height - 1) // 2
    assert tuple(ramp[mid]) == pytest.approx((139, 69, 19), abs=2)


def test_colorbar_is_monotone_between_anchors():
    bar = render_colorbar(1.0, height=301)
    ramp = bar.pixels[:, 0].astype(int)
    for seg in (ramp[:151], ramp[150:]):
        d = np.diff(seg, axis=0)
        for ch in range(3):
            assert np.all(d[:, ch] >= 0) or np.all(d[:, ch] <= 0)


def test_colorbar_rescaled_ticks():
    a = render_colorbar(1.0)
    b = render_colorbar(sqrt(3) / 2)
    assert np.array_equal(a.pixels[:, :16], b.pixels[:, :16])
    assert not np.array_equal(a.pixels[:, 16:], b.pixels[:, 16:])


def test_colorbar_errors():
    with pytest.raises(RenderError):
        render_colorbar(1.0, height=1)
    with pytest.raises(RenderError):
        render_colorbar(0.0)


# -- voxels ----------------------------------------------------------------------

def test_tesseract_voxels_are_constant(tmp_path):
    rep = fiber_rep(build_cube(4), grid=(128,) * 3)
    grid = export_voxels(rep, tmp_path / "cube4", slices=False)
    assert grid.dims == (128, 128, 128)
    assert np.all(grid.hi == 1.0) and np.all(grid.lo == 0.0)
    header = (tmp_path / "cube4.vox.txt").read_text().splitlines()
    assert header[0] == "chromatope-voxels 1"
    assert header[1] == "dims 128 128 128"
    assert (tmp_path / "cube4.vox.bin").stat().st_size == 2 * 8 * 128 ** 3


def test_simplex_voxels_peak_on_the_centroid_ray(tmp_path):
    rep = fiber_rep(build_simplex(4), grid=(33,) * 3)
    grid = export_voxels(rep, tmp_path / "s4", slices=False)
    pts = rep.hi.points()
    best = pts[np.argmax(grid.hi.ravel())]
    centroid = build_simplex(4).real_vertices()[:4, :3].mean(axis=0)
    assert np.linalg.norm(best - centroid) <= np.sqrt(3) / 32
    assert grid.hi.max() <= sqrt(5 / 8) + 1e-12


def test_empty_body_gives_zero_grid(tmp_path):
    rep = ColorRep.from_hi(ColorField(((0, 1),) * 3, np.zeros((4, 4, 4)), 1.0))
    grid = export_voxels(rep, tmp_path / "empty", slices=False)
    assert not grid.hi.any()


def test_voxel_round_trip_and_slice_consistency(tmp_path):
    rep = fiber_rep(truncate_vertices(build_cube(4)), grid=(17,) * 3)
    export_voxels(rep, tmp_path / "t4")
    back = read_voxels(tmp_path / "t4")
    assert np.array_equal(back.hi, rep.hi.values) and np.array_equal(back.lo, rep.lo.values)
    for axis in range(3):
        for k in (0, 8, 16):
            assert voxel_slice(back, axis, k) == render_field(rep.restrict(axis, k))
        written = read_ppm((tmp_path / f"t4.slice{axis}.ppm").read_bytes())
        assert written == render_field(rep.restrict(axis, 8))


def test_voxel_errors(tmp_path):
    with pytest.raises(RenderError):
        export_voxels(fiber_rep(build_cube(3), grid=(5, 5)), tmp_path / "x")
    with pytest.raises(RenderError):
        VoxelGrid(((0, 1),) * 3, np.full((2, 2, 2), 2.0), np.zeros((2, 2, 2)), 1.0)


# -- nets ----------------------------------------------------------------------------

def test_net_render_is_deterministic(tmp_path):
    c = color_net(unfold(build_cube(3)))
    a = write_ppm(render_net(c), tmp_path / "a.ppm").read_bytes()
    b = write_ppm(render_net(c), tmp_path / "b.ppm").read_bytes()
    assert a == b


def test_cube_net_shows_pink_bases():
    r = render_net(color_net(unfold(build_cube(3))), size=256)
    assert np.any(np.all(r.pixels == PINK, axis=-1))
    assert not np.any(np.all(r.pixels == WHITE, axis=-1))


def test_double_centre_is_marked():
    r = render_net(color_net(unfold(build_simplex(3))), size=256)
    assert np.any(np.all(r.pixels == WHITE, axis=-1))
    assert np.any(np.all(r.pixels == PINK, axis=-1))
    assert np.any(np.all(r.pixels == DEFAULT_PALETTE.reverse[-1][1], axis=-1))
