"""JSON and CSV encodings of the exact data model.

GoldenInt serialises as [a, b], GoldenRat as [a, b, den]; every format
round-trips losslessly.  JSON output is canonical (sorted keys, compact
separators, trailing newline) so identical inputs give byte-identical
files.
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction

import numpy as np

from .golden import GoldenInt, GoldenRat
from .linalg import Vec3, vec3
from .modelset import ModelSetPatch, Window
from .reconstruct import TomographyInstance
from .slices import CycPoint, SliceWindow
from .xrays import Direction, XRayImage


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def golden_int_json(x: GoldenInt) -> list[int]:
    return [x.a, x.b]


def golden_int_from(data) -> GoldenInt:
    a, b = data
    return GoldenInt(int(a), int(b))


def golden_rat_json(x: GoldenRat) -> list[int]:
    return [x.num.a, x.num.b, x.den]


def golden_rat_from(data) -> GoldenRat:
    a, b, den = data
    return GoldenRat(GoldenInt(int(a), int(b)), int(den))


def vec3_json(v: Vec3) -> list:
    return [golden_rat_json(c) for c in v]


def vec3_from(data) -> Vec3:
    return vec3(*(golden_rat_from(c) for c in data))


def fraction_json(f) -> list[int]:
    f = Fraction(f)
    return [f.numerator, f.denominator]


def fraction_from(data) -> Fraction:
    return Fraction(int(data[0]), int(data[1]))


# -- patches -------------------------------------------------------------

def window_json(w: Window) -> dict:
    if w.shift is None:
        raise ValueError("only exact-shift windows serialise")
    return {"vertices": [vec3_json(v) for v in w.vertices],
            "shift": vec3_json(w.shift)}


def window_from(data) -> Window:
    return Window([vec3_from(v) for v in data["vertices"]],
                  shift=vec3_from(data["shift"]))


def patch_json(p: ModelSetPatch) -> dict:
    return {
        "type": p.kind,
        "t": vec3_json(p.t),
        "window": window_json(p.window),
        "radius": fraction_json(p.radius),
        "center": vec3_json(p.center),
        "points": [[golden_int_json(n) for n in pt.num] for pt in p.points],
        "boundary_hits": p.boundary_hits,
    }


def patch_from(data) -> ModelSetPatch:
    from .icosian import module_basis
    from .linalg import solve_linear
    kind = data["type"]
    window = window_from(data["window"])
    tag_points = [tuple(golden_int_from(n) for n in pt)
                  for pt in data["points"]]
    # recover lattice coefficients: solve the doubled numerators against
    # the module basis, exactly
    from .modelset import _KIND_TO_TAG
    tag = _KIND_TO_TAG[kind]
    basis = module_basis(tag.base())
    rows = [[basis[j][i] for j in range(3)] for i in range(3)]
    coeffs = np.zeros((len(tag_points), 6), dtype=np.int64)
    for r, nums in enumerate(tag_points):
        sol = solve_linear(rows, [GoldenRat(n) for n in nums])
        assert sol is not None
        for i, c in enumerate(sol):
            gi = c.to_golden_int()
            coeffs[r, i] = gi.a
            coeffs[r, 3 + i] = gi.b
    patch = ModelSetPatch(kind, window, fraction_from(data["radius"]),
                          vec3_from(data["center"]), vec3_from(data["t"]),
                          coeffs, boundary_hits=int(data.get("boundary_hits", 0)))
    return patch


def patch_csv(p: ModelSetPatch, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["na1", "nb1", "na2", "nb2", "na3", "nb3",
                         "x", "y", "z"])
        for pt in p.points:
            coords = [c.embed() for c in pt.value()]
            row = []
            for n in pt.num:
                row.extend([n.a, n.b])
            writer.writerow(row + [f"{c:.12f}" for c in coords])


# -- slices ---------------------------------------------------------------

def cyc_json(z: CycPoint) -> list:
    return [golden_rat_json(z.alpha), golden_rat_json(z.beta)]


def cyc_from(data) -> CycPoint:
    return CycPoint(golden_rat_from(data[0]), golden_rat_from(data[1]))


def slice_json(height: GoldenRat, points: list[CycPoint],
               window: SliceWindow) -> dict:
    return {
        "height": golden_rat_json(height),
        "points": [cyc_json(z) for z in points],
        "window_polygon": [[golden_rat_json(c) for c in v]
                           for v in window.vertices],
    }


def slice_from(data):
    height = golden_rat_from(data["height"])
    points = [cyc_from(z) for z in data["points"]]
    window = SliceWindow([tuple(golden_rat_from(c) for c in v)
                          for v in data["window_polygon"]])
    return height, points, window


def slice_csv(points: list[CycPoint], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["alpha_a", "alpha_b", "beta_a", "beta_b", "re", "im"])
        for z in points:
            w = z.embed()
            writer.writerow([z.alpha.num.a, z.alpha.num.b,
                             z.beta.num.a, z.beta.num.b,
                             f"{w.real:.12f}", f"{w.imag:.12f}"])


# -- directions and X-ray images ------------------------------------------

def direction_json(u: Direction) -> dict:
    if u.dim == 3:
        return {"dim": 3, "rep": [golden_int_json(c) for c in u.rep]}
    return {"dim": 2, "rep": [golden_rat_json(u.rep.alpha),
                              golden_rat_json(u.rep.beta)]}


def direction_from(data) -> Direction:
    if data["dim"] == 3:
        rep = vec3(*(GoldenRat(golden_int_from(c)) for c in data["rep"]))
        return Direction.from_vector(rep)
    return Direction.from_cyc(CycPoint(golden_rat_from(data["rep"][0]),
                                       golden_rat_from(data["rep"][1])))


def xray_json(im: XRayImage) -> dict:
    lines = []
    if im.direction.dim == 3:
        for key, count in im.counts.items():
            lines.append({"key": [golden_rat_json(c) for c in key],
                          "count": count})
        lines.sort(key=lambda e: e["key"])
    else:
        for key, count in im.counts.items():
            lines.append({"key": golden_rat_json(key), "count": count})
        lines.sort(key=lambda e: e["key"])
    return {"direction": direction_json(im.direction), "lines": lines}


def xray_from(data) -> XRayImage:
    u = direction_from(data["direction"])
    counts = {}
    for entry in data["lines"]:
        if u.dim == 3:
            key = vec3(*(golden_rat_from(c) for c in entry["key"]))
        else:
            key = golden_rat_from(entry["key"])
        counts[key] = int(entry["count"])
    return XRayImage(u, counts)


# -- instances -------------------------------------------------------------

def instance_json(inst: TomographyInstance, patch_path: str) -> dict:
    return {
        "u1": direction_json(inst.u1),
        "u2": direction_json(inst.u2),
        "xray1": xray_json(inst.image1),
        "xray2": xray_json(inst.image2),
        "patch": patch_path,
    }


def instance_from(data, patch: ModelSetPatch) -> TomographyInstance:
    return TomographyInstance(direction_from(data["u1"]),
                              direction_from(data["u2"]),
                              xray_from(data["xray1"]),
                              xray_from(data["xray2"]), patch)


def points_json(points) -> list:
    out = []
    for p in points:
        out.append(vec3_json(p) if not isinstance(p, CycPoint) else cyc_json(p))
    return out


def rotation_group_json(which: str) -> list:
    """Exact matrices of a rotation group, sorted canonically."""
    from .icosian import rotation_group
    mats = sorted(rotation_group(which),
                  key=lambda m: tuple((e.num.a, e.num.b, e.den)
                                      for row in m for e in row))
    return [[[golden_rat_json(e) for e in row] for row in m] for m in mats]


def weyl_csv(report: dict, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["radius", "cardinality", "cx", "cy", "cz",
                         "deviation"])
        for r, n, c, d in zip(report["radii"], report["cardinalities"],
                              report["centroids"], report["deviations"]):
            writer.writerow([r, n] + [f"{x:.9f}" for x in c] + [f"{d:.9f}"])
