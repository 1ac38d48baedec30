"""Command-line entry point: build, net, star, fractal, render and figures.

Every command writes its files under the output directory (``--out``, else
``$CHROMATOPE_OUT``, else ``./chromatope-out``), prints a short report and
saves it as ``key=value`` lines. The exit status is 0 when every check
passes, 1 when a check fails and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from chromatope import chroma, fractal, net, polytope, render, star

OUT_ENV = "CHROMATOPE_OUT"
DEFAULT_OUT = "chromatope-out"

RANK_NAMES = {0: "vertices", 1: "edges", 2: "faces", 3: "cells"}
_SUPERSCRIPT = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")

# flat config keys and their types; command-line flags override them
CONFIG_KEYS = {"res": int, "out": str, "level": int, "t": Fraction, "weight": int,
               "vmax": float, "size": int}


class UsageError(Exception):
    pass


class Report:
    """Collects printed rows and ``key=value`` pairs for one command."""

    def __init__(self, name: str):
        self.name = name
        self.rows: list[str] = []
        self.values: dict[str, str] = {}
        self.ok = True

    def row(self, text: str) -> None:
        self.rows.append(text)
        print(text)

    def set(self, key: str, value) -> None:
        self.values[key] = str(value)

    def check(self, key: str, passed: bool) -> bool:
        self.set(key, "pass" if passed else "fail")
        self.ok &= passed
        return passed

    def save(self, out: Path) -> Path:
        self.set("status", "pass" if self.ok else "fail")
        path = out / f"{self.name}.report"
        path.write_text("".join(f"{k}={v}\n" for k, v in self.values.items()))
        return path


def rank_name(k: int) -> str:
    return RANK_NAMES.get(k, f"{k}-faces")


def read_config(path) -> dict:
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    conf = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (s.strip() for s in line.partition("="))
        if not sep or key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown setting {line!r}")
        try:
            conf[key] = CONFIG_KEYS[key](value)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: {exc}") from None
    return conf


def _setting(args, conf, key, default):
    value = getattr(args, key, None)
    if value is not None:
        return value
    return conf.get(key, default)


# -- build -----------------------------------------------------------------

def _construct(family: str, n: int, t):
    try:
        if family == "cube":
            P = polytope.build_cube(n)
        elif family == "simplex":
            P = polytope.build_simplex(n)
        elif family == "corner":
            P = polytope.cube_corner(n)
        else:
            raise UsageError(f"unknown family {family!r}")
        if t is not None:
            if family == "corner":
                raise UsageError("truncation applies to cubes and simplices")
            return polytope.truncate_vertices(P, t), polytope.truncated_f_vector(family, n)
    except (polytope.DimensionUnsupported, polytope.DegenerateTruncation) as exc:
        raise UsageError(str(exc)) from None
    return P, polytope.closed_form_f_vector(family, n)


def cmd_build(args, conf, out: Path) -> int:
    t = _setting(args, conf, "t", None)
    P, formula = _construct(args.family, args.n, t)
    stem = f"build_{args.family}{args.n}" + ("_truncated" if t is not None else "")
    rep = Report(stem)
    (out / f"{stem}.lattice.txt").write_text(polytope.write_lattice(P))
    for k, (want, got) in enumerate(zip(formula, P.f_vector)):
        ok = rep.check(f"f{k}", want == got)
        rep.set(f"f{k}_value", got)
        rep.row(f"{rank_name(k)}: {want} = {got} {'OK' if ok else 'MISMATCH'}")
    chi = polytope.euler_boundary(P)
    want = 1 - (-1) ** P.dim
    ok = rep.check("euler", chi == want)
    rep.row(f"euler: {want} = {chi} {'OK' if ok else 'MISMATCH'}")
    rep.save(out)
    return 0 if rep.ok else 1


# -- net -------------------------------------------------------------------

def cmd_net(args, conf, out: Path) -> int:
    if args.family not in ("cube", "simplex"):
        raise UsageError(f"nets are built for cubes and simplices, not {args.family!r}")
    if not 2 <= args.n <= 5:
        raise UsageError("net dimension must be in [2, 5]")
    P = polytope.build_cube(args.n) if args.family == "cube" else polytope.build_simplex(args.n)
    the_net = net.unfold(P)
    colored = net.color_net(the_net)
    stem = f"net_{args.family}{args.n}"
    rep = Report(stem)
    (out / f"{stem}.net.txt").write_text(net.write_net(the_net, colored))
    size = _setting(args, conf, "size", 512)
    render.write_ppm(render.render_net(colored, size), out / f"{stem}.ppm")
    for k in range(P.dim - 1):
        cells, per, div = net.net_arithmetic(P, k)
        count = net.count_via_net(P, k)
        ok = rep.check(f"k{k}", count == P.f_vector[k])
        rep.set(f"k{k}_count", count)
        line = f"k={k}: {cells}×{per}/{div}={count}"
        published = net.PUBLISHED_ARITHMETIC.get((args.family, args.n, k))
        if published is not None and published[2] != div:
            rep.set(f"k{k}_published_divisor", published[2])
            line += f" [published divisor /{published[2]}: FLAGGED]"
        if not ok:
            line += f" MISMATCH f{k}={P.f_vector[k]}"
        rep.row(line)
    rep.row("divisor source: facet incidence in the face lattice")
    centre = colored.multiplicity(0)
    rep.set("cells", len(the_net.cells))
    rep.set("center_multiplicity", centre)
    rep.row(f"cells: {len(the_net.cells)}; center multiplicity {centre}")
    rep.save(out)
    return 0 if rep.ok else 1


# -- star ------------------------------------------------------------------

UNION_THRESHOLD = 0.995
STAR_THRESHOLD = 0.99


def cmd_star(args, conf, out: Path) -> int:
    weight = _setting(args, conf, "weight", None)
    try:
        spec = star.StarSpec(args.p, args.q, weight)
    except star.UnsupportedSpec as exc:
        raise UsageError(str(exc)) from None
    res = _setting(args, conf, "res", 1024)
    frame = star.star_frame(spec.p, res)
    cov = star.coverage_raster(star.star_layers(spec), frame)
    thr = star.star_threshold(cov, spec.n)
    ref = star.reference_star(spec.p, spec.q, frame)
    union = star.agreement(cov > 0, star.polygon_raster(spec.p, frame))
    agree = star.agreement(thr, ref)
    stem = f"star_{spec.p}_{spec.q}"
    rep = Report(stem)
    render.write_pgm(cov, out / f"{stem}.coverage.pgm")
    render.write_pbm(thr, out / f"{stem}.threshold.pbm")
    render.write_pbm(ref, out / f"{stem}.reference.pbm")
    rel = abs(star.apex_distance(spec.p) - spec.vmax) / spec.vmax
    ok = rep.check("vmax", rel < 1e-12)
    rep.set("vmax_value", repr(spec.vmax))
    rep.row(f"vmax {spec.vmax:.12f} {'OK' if ok else 'MISMATCH'}")
    ok = rep.check("union", union >= UNION_THRESHOLD)
    rep.set("union_agreement", f"{union:.6f}")
    rep.row(f"union vs polygon {100 * union:.2f}% {'PASS' if ok else 'FAIL'}")
    ok = rep.check("threshold", agree >= STAR_THRESHOLD)
    rep.set("agreement", f"{agree:.6f}")
    rep.row(f"agreement {100 * agree:.2f}% {'PASS' if ok else 'FAIL'}")
    rep.save(out)
    return 0 if rep.ok else 1


# -- fractal ---------------------------------------------------------------

def _slices(box: fractal.TriadicBoxSet) -> np.ndarray:
    """First two axes at the middle cell of every other axis, y upward."""
    occ = box.to_raster()
    if box.dim == 1:
        occ = occ[:, None]
    mid = occ.shape[0] // 2
    while occ.ndim > 2:
        occ = occ[..., mid]
    return occ.T[::-1]


def cmd_fractal(args, conf, out: Path) -> int:
    level = _setting(args, conf, "level", 1)
    try:
        rule = fractal.MengerRule(args.d, args.m)
        box = fractal.iterate(rule, level)
    except (fractal.UnsupportedRule, fractal.LevelCeilingExceeded, ValueError) as exc:
        raise UsageError(str(exc)) from None
    N = fractal.kept_count(rule.d, rule.m)
    stem = f"fractal_{rule.d}_{rule.m}_L{level}"
    rep = Report(stem)
    (out / f"{stem}.boxes.txt").write_text(fractal.write_boxset(box))
    render.write_pbm(_slices(box), out / f"{stem}.slice.pbm")
    count_ok = rep.check("cells", len(box) == N ** level)
    rep.set("cells_value", len(box))
    rep.set("dimension", f"{fractal.fractal_dimension(rule):.6f}")
    if rule.d == 1:
        length = fractal.measure_proxy(rule, 1, level)
        rep.set("length", length)
        rep.row(f"cells {len(box)}; length {length}")
    else:
        k = rule.d - 1
        seq = [fractal.measure_proxy(rule, k, j) for j in range(level + 1)]
        if N > 3 ** k:
            trend = "increasing"
        elif N < 3 ** k:
            trend = "decreasing"
        else:
            trend = "constant"
        rep.set(f"measure{k}", seq[-1])
        rep.set(f"measure{k}_trend", trend)
        verdict = "OK" if count_ok else "MISMATCH"
        rep.row(f"cells {len(box)} = {N}{str(level).translate(_SUPERSCRIPT)} {verdict}; "
                f"{k}-measure {seq[-1]} {trend}")
    rep.row(f"dimension log3({N}) = {fractal.fractal_dimension(rule):.4f}")
    try:
        crep = fractal.fractal_color_rep(rule, level)
    except fractal.UnsupportedRule:
        crep = None
    if crep is not None:
        ok = rep.check("color_rep", np.array_equal(crep.lift(), box.to_raster()))
        rep.row(f"color representation lift {'OK' if ok else 'MISMATCH'}")
        if rule.d - 1 <= 2:
            render.write_ppm(render.render_field(crep.base), out / f"{stem}.base.ppm")
    rep.save(out)
    return 0 if rep.ok else 1


# -- render ----------------------------------------------------------------

def cmd_render(args, conf, out: Path) -> int:
    if args.what == "colorbar":
        vmax = _setting(args, conf, "vmax", 1.0)
        if not vmax > 0:
            raise UsageError("vmax must be positive")
        rep = Report(f"render_colorbar_{vmax:.4f}")
        raster = render.render_colorbar(vmax)
        render.write_ppm(raster, out / f"{rep.name}.ppm")
        rep.set("vmax", repr(vmax))
        rep.row(f"colorbar vmax {vmax:g} written")
    else:
        if args.family is None or args.n is None:
            raise UsageError("render field needs a family and a dimension")
        t = _setting(args, conf, "t", None)
        rep = Report(f"render_field_{args.family}{args.n}" + ("_truncated" if t is not None else ""))
        P, _ = _construct(args.family, args.n, t)
        res = _setting(args, conf, "res", None)
        grid = None if res is None else (res + 1,) * (P.dim - 1)
        crep = chroma.fiber_rep(P, grid=grid)
        if crep.base_dim <= 2:
            render.write_ppm(render.render_field(crep), out / f"{rep.name}.ppm")
        else:
            render.export_voxels(crep, out / rep.name)
        rep.set("vmax", repr(float(crep.hi.vmax)))
        rep.set("grid", "x".join(str(g) for g in crep.hi.grid))
        rep.row(f"field {args.family}{args.n}: grid {rep.values['grid']}, vmax {crep.hi.vmax:.6f}")
    rep.save(out)
    return 0


# -- figures ---------------------------------------------------------------

def _quiet(fn, *a):
    """Run a command while discarding its printed rows."""
    stdout = sys.stdout
    sys.stdout = open(os.devnull, "w")
    try:
        return fn(*a)
    finally:
        sys.stdout.close()
        sys.stdout = stdout


def cmd_figures(args, conf, out: Path) -> int:
    """Regenerate the gallery in ``out/figures`` and index it in ``MANIFEST``."""
    gallery = out / "figures"
    gallery.mkdir(parents=True, exist_ok=True)
    res = _setting(args, conf, "res", None)
    ns = argparse.Namespace
    jobs = [
        (cmd_render, ns(what="colorbar", family=None, n=None, vmax=1.0, t=None, res=None)),
        (cmd_render, ns(what="colorbar", family=None, n=None, vmax=float(np.sqrt(3) / 2), t=None, res=None)),
    ]
    for fam, n in [("cube", 2), ("cube", 3), ("simplex", 2), ("simplex", 3), ("corner", 2), ("corner", 3)]:
        jobs.append((cmd_render, ns(what="field", family=fam, n=n, t=None, res=res)))
    jobs.append((cmd_render, ns(what="field", family="cube", n=3, t=Fraction(1, 4), res=res)))
    for fam in ("cube", "simplex"):
        jobs.append((cmd_render, ns(what="field", family=fam, n=4, t=None, res=64 if res is None else res)))
    for fam in ("cube", "simplex"):
        for n in range(2, 6):
            jobs.append((cmd_build, ns(family=fam, n=n, t=None)))
            jobs.append((cmd_net, ns(family=fam, n=n, size=None)))
    for p, q in sorted(star.SUPPORTED):
        jobs.append((cmd_star, ns(p=p, q=q, weight=None, res=res)))
    for d, m, level in [(1, 0, 4), (2, 0, 3), (2, 1, 4), (3, 1, 3), (3, 2, 2), (4, 2, 2)]:
        jobs.append((cmd_fractal, ns(d=d, m=m, level=level)))
    status = 0
    for fn, a in jobs:
        status = max(status, _quiet(fn, a, {}, gallery))
    lines = []
    for path in sorted(p for p in gallery.rglob("*") if p.is_file() and p.name != "MANIFEST"):
        digest = hashlib.sha256(path.read_bytes()).hexdigest()
        lines.append(f"{digest}  {path.relative_to(gallery).as_posix()}")
    (gallery / "MANIFEST").write_text("\n".join(lines) + "\n")
    print(f"figures: {len(lines)} files, status {'pass' if status == 0 else 'fail'}")
    return status


# -- argument parsing --------------------------------------------------------

def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _dimension(lo: int, hi: int):
    def parse(text: str) -> int:
        value = int(text)
        if not lo <= value <= hi:
            raise argparse.ArgumentTypeError(f"must be in [{lo}, {hi}]")
        return value
    return parse


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--res", type=_positive, help="raster resolution in pixels or grid intervals")
    common.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./{DEFAULT_OUT})")
    common.add_argument("--config", help="flat key=value settings file; flags win")

    parser = argparse.ArgumentParser(prog="chromatope", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="face lattice and f-vector report")
    p.add_argument("family", choices=["cube", "simplex", "corner"])
    p.add_argument("n", type=_dimension(1, polytope.MAX_DIM))
    p.add_argument("--t", type=Fraction, help="truncate every vertex at this edge fraction")

    p = sub.add_parser("net", parents=[common], help="unfolding, counting identities, colored net")
    p.add_argument("family", choices=["cube", "simplex"])
    p.add_argument("n", type=_dimension(2, 5))
    p.add_argument("--size", type=_positive, help="net image size in pixels")

    p = sub.add_parser("star", parents=[common], help="star polygon from 1/n-colored segments")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.add_argument("--weight", type=int, help="weight denominator n")

    p = sub.add_parser("fractal", parents=[common], help="triadic box fractal iteration")
    p.add_argument("d", type=_dimension(1, 4))
    p.add_argument("m", type=int)
    p.add_argument("--level", type=int)

    p = sub.add_parser("render", parents=[common], help="color bar or polytope color field")
    p.add_argument("what", choices=["colorbar", "field"])
    p.add_argument("family", nargs="?", choices=["cube", "simplex", "corner"])
    p.add_argument("n", nargs="?", type=_dimension(1, 4))
    p.add_argument("--vmax", type=float)
    p.add_argument("--t", type=Fraction)

    sub.add_parser("figures", parents=[common], help="regenerate the full gallery with a manifest")
    return parser


COMMANDS = {"build": cmd_build, "net": cmd_net, "star": cmd_star, "fractal": cmd_fractal,
            "render": cmd_render, "figures": cmd_figures}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        conf = read_config(args.config) if args.config else {}
        out = Path(args.out or conf.get("out") or os.environ.get(OUT_ENV) or DEFAULT_OUT)
        out.mkdir(parents=True, exist_ok=True)
        return COMMANDS[args.command](args, conf, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"chromatope: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"chromatope: I/O error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
