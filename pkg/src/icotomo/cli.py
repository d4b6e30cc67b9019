"""Command line front end.

Machine-readable JSON goes to stdout (or --out); human summaries go to
stderr.  All geometry stays exact; seeds make every run reproducible.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import serialize
from .errors import IcotomoError, Infeasible
from .golden import GoldenInt, GoldenRat
from .linalg import vec3
from .modelset import enumerate_patch, icosahedron_window
from .xrays import Direction, grid_from_images, switching_pair, xray

_GOLDEN_TERM = re.compile(
    r"^([+-]?)(?:(\d+)?(tau)(?:/(\d+))?|(\d+)(?:/(\d+))?)$")


def parse_golden(text: str) -> GoldenRat:
    """Parse scalars like '2', '-1/2', 'tau', '2tau/3', '1+tau', '2-tau'."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    parts = re.findall(r"[+-]?[^+-]+", s)
    total = GoldenRat(0)
    for part in parts:
        m = _GOLDEN_TERM.match(part)
        if not m:
            raise ValueError(f"cannot parse golden scalar {part!r}")
        sign, coef, tau, den1, num, den2 = m.groups()
        neg = sign == "-"
        if tau:
            c = GoldenRat(GoldenInt(0, int(coef) if coef else 1),
                          int(den1) if den1 else 1)
        else:
            c = GoldenRat(GoldenInt(int(num)), int(den2) if den2 else 1)
        total = total - c if neg else total + c
    return total


def parse_vec(text: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError("vectors need three comma-separated components")
    return vec3(*(parse_golden(p) for p in parts))


def parse_fraction_vec(text: str):
    return tuple(Fraction(p) for p in text.split(","))


def _emit(payload, args) -> None:
    text = serialize.dumps(payload)
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
        print(f"wrote {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def _load_json(path):
    return json.loads(Path(path).read_text())


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("ICOTOMO_SEED")
    return int(env) if env else 0


def cmd_generate(args) -> int:
    window = icosahedron_window(parse_fraction_vec(args.shift))
    patch = enumerate_patch(args.type, window, Fraction(args.radius),
                            center=parse_vec(args.center),
                            t=parse_vec(args.t))
    print(f"{args.type}-type patch, radius {args.radius}: "
          f"{patch.size} points, {patch.boundary_hits} boundary hits",
          file=sys.stderr)
    _emit(serialize.patch_json(patch), args)
    if args.csv:
        serialize.patch_csv(patch, args.csv)
        print(f"wrote {args.csv}", file=sys.stderr)
    if args.plot:
        from .plotting import plot_patch
        plot_patch(patch, args.plot)
        print(f"wrote {args.plot}", file=sys.stderr)
    return 0


def cmd_slice(args) -> int:
    from .slices import height_of, slice_patch
    patch = serialize.patch_from(_load_json(args.patch))
    lam = patch.point(args.lambda_index)
    points, window = slice_patch(patch, lam)
    lam_coord = tuple(a + b for a, b in zip(patch.t, lam.value()))
    height = height_of(lam_coord)
    print(f"slice at height {height}: {len(points)} points, "
          f"window polygon with {len(window.vertices)} vertices",
          file=sys.stderr)
    _emit(serialize.slice_json(height, points, window), args)
    if args.csv:
        serialize.slice_csv(points, args.csv)
        print(f"wrote {args.csv}", file=sys.stderr)
    if args.plot:
        from .plotting import plot_slice
        plot_slice(points, window, args.plot)
        print(f"wrote {args.plot}", file=sys.stderr)
    return 0


def cmd_xray(args) -> int:
    patch = serialize.patch_from(_load_json(args.patch))
    u = Direction.from_vector(parse_vec(args.dir))
    image = xray(patch.iter_coords(), u)
    print(f"X-ray in {args.dir}: {len(image.counts)} lines, "
          f"total {image.total}", file=sys.stderr)
    _emit(serialize.xray_json(image), args)
    return 0


def cmd_grid(args) -> int:
    images = [serialize.xray_from(_load_json(p)) for p in args.xrays]
    points = sorted(grid_from_images(images))
    print(f"grid of {len(images)} images: {len(points)} points",
          file=sys.stderr)
    _emit({"points": serialize.points_json(points)}, args)
    return 0


def cmd_reconstruct(args) -> int:
    from .reconstruct import reconstruct
    data = _load_json(args.instance)
    patch = serialize.patch_from(_load_json(
        Path(args.instance).parent / data["patch"]))
    inst = serialize.instance_from(data, patch)
    try:
        points = reconstruct(inst)
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        _emit({"feasible": False}, args)
        return 0
    print(f"reconstructed {len(points)} points", file=sys.stderr)
    _emit({"feasible": True, "points": serialize.points_json(points)}, args)
    return 0


def cmd_uniq_instance(args) -> int:
    from .reconstruct import uniqueness
    data = _load_json(args.instance)
    patch = serialize.patch_from(_load_json(
        Path(args.instance).parent / data["patch"]))
    inst = serialize.instance_from(data, patch)
    try:
        verdict, witness = uniqueness(inst)
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        _emit({"feasible": False}, args)
        return 0
    payload = {"feasible": True, "verdict": verdict}
    if witness is not None:
        payload["witness"] = [serialize.points_json(w) for w in witness]
    print(f"uniqueness verdict: {verdict}", file=sys.stderr)
    _emit(payload, args)
    return 0


def cmd_uniq(args) -> int:
    from .experiments import run_uniqueness_experiment
    patch = serialize.patch_from(_load_json(args.patch))
    if args.directions != "u5":
        print(f"unknown direction set {args.directions!r}", file=sys.stderr)
        return 2
    report = run_uniqueness_experiment(patch, args.mode, args.samples,
                                       _seed(args), workers=args.workers)
    print(f"{report['samples']} samples, "
          f"{len(report['collisions'])} collisions", file=sys.stderr)
    _emit(report, args)
    if args.figdir:
        from .plotting import plot_cardinality_hist
        Path(args.figdir).mkdir(parents=True, exist_ok=True)
        fig = Path(args.figdir) / f"uniq_{args.mode}_cardinalities.png"
        plot_cardinality_hist(report, fig)
        print(f"wrote {fig}", file=sys.stderr)
    return 1 if report["collisions"] else 0


def cmd_weyl(args) -> int:
    from .experiments import ExperimentConfig, weyl_experiment
    config = ExperimentConfig(
        kind=args.type,
        radii=tuple(Fraction(r) for r in args.radii.split(",")),
        shift=parse_fraction_vec(args.shift),
        threshold=args.threshold,
    )
    report = weyl_experiment(config)
    print("deviations: "
          + ", ".join(f"{d:.5f}" for d in report["deviations"]),
          file=sys.stderr)
    _emit(report, args)
    if args.csv:
        serialize.weyl_csv(report, args.csv)
        print(f"wrote {args.csv}", file=sys.stderr)
    if args.figdir:
        from .plotting import plot_centroid_trend
        Path(args.figdir).mkdir(parents=True, exist_ok=True)
        fig = Path(args.figdir) / "weyl_trend.png"
        plot_centroid_trend(report, fig)
        print(f"wrote {fig}", file=sys.stderr)
    return 0


def cmd_switching(args) -> int:
    window = icosahedron_window(parse_fraction_vec(args.shift))
    if args.dirs:
        dirs = [Direction.from_vector(parse_vec(d))
                for d in args.dirs.split(";")]
        if len(dirs) != args.k:
            print(f"--dirs must list exactly {args.k} vectors",
                  file=sys.stderr)
            return 2
    else:
        from .convexity import dense_directions_3d
        dirs = dense_directions_3d()[:args.k]
    f, g, power, anchor = switching_pair(dirs, window, args.type)
    print(f"switching pair with k={args.k}: cardinality {len(f)} each, "
          f"scale tau^{power}", file=sys.stderr)
    _emit({
        "F": serialize.points_json(f),
        "Fprime": serialize.points_json(g),
        "directions": [serialize.direction_json(u) for u in dirs],
        "scale_power": power,
        "anchor": serialize.points_json([anchor.value()])[0],
    }, args)
    return 0


def cmd_selftest(args) -> int:
    from .experiments import selftest
    results = selftest()
    ok = True
    for name, passed, detail in results:
        status = "pass" if passed else "FAIL"
        print(f"{status:4} {name}: {detail}", file=sys.stderr)
        ok &= passed
    _emit({"results": [{"name": n, "passed": p, "detail": d}
                       for n, p, d in results],
           "ok": ok}, args)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="icotomo",
        description="discrete tomography workbench for icosahedral and "
                    "cyclotomic model sets")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed (fallback: ICOTOMO_SEED)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="enumerate a model set patch")
    p.add_argument("--type", choices="BF", default="B")
    p.add_argument("--radius", default="10")
    p.add_argument("--shift", default="1/1000,1/1000,1/1000")
    p.add_argument("--center", default="0,0,0")
    p.add_argument("--t", default="0,0,0")
    p.add_argument("--out")
    p.add_argument("--csv")
    p.add_argument("--plot")
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("slice", help="cut one slice out of a patch")
    p.add_argument("patch")
    p.add_argument("--lambda-index", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--csv")
    p.add_argument("--plot")
    p.set_defaults(fn=cmd_slice)

    p = sub.add_parser("xray", help="X-ray a patch in one direction")
    p.add_argument("patch")
    p.add_argument("--dir", required=True, help="e.g. 'tau,0,1'")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_xray)

    p = sub.add_parser("grid", help="grid of two or more X-ray images")
    p.add_argument("--xrays", nargs="+", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_grid)

    p = sub.add_parser("reconstruct", help="solve a two-direction instance")
    p.add_argument("instance")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_reconstruct)

    p = sub.add_parser("uniq-instance",
                       help="uniqueness verdict for an instance")
    p.add_argument("instance")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_uniq_instance)

    p = sub.add_parser("uniq", help="convex uniqueness experiment")
    p.add_argument("patch")
    p.add_argument("--directions", default="u5")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--mode", choices=("slice", "3d"), default="slice")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--figdir")
    p.set_defaults(fn=cmd_uniq)

    p = sub.add_parser("weyl", help="star-centroid convergence experiment")
    p.add_argument("--type", choices="BF", default="B")
    p.add_argument("--radii", default="10,20,40")
    p.add_argument("--shift", default="1/1000,1/1000,1/1000")
    p.add_argument("--threshold", type=float, default=0.05)
    p.add_argument("--out")
    p.add_argument("--csv")
    p.add_argument("--figdir")
    p.set_defaults(fn=cmd_weyl)

    p = sub.add_parser("switching", help="embedded switching component")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--type", choices="BF", default="B")
    p.add_argument("--shift", default="1/1000,1/1000,1/1000")
    p.add_argument("--dirs", default="", help="semicolon-separated vectors")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_switching)

    p = sub.add_parser("selftest", help="run the invariant suite")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except IcotomoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
