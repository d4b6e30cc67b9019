"""Centroid experiments and packaged experiment runs.

The star images of a regular model set distribute uniformly over the
window, so ball-patch star centroids converge to the window centroid.
For the centrally symmetric window the exact centroid is its shift, so
the drift of finite-patch star centroids measures the convergence and,
read backwards, estimates an unknown window position from data.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .convexity import (
    dense_directions_2d,
    dense_directions_3d,
    sample_convex_subsets_2d,
    sample_convex_subsets_3d,
    uniqueness_experiment,
)
from .errors import EmptyWindowInterior
from .golden import GoldenInt, GoldenRat
from .icosian import ModuleTag
from .linalg import vec3
from .modelset import ModelSetPatch, Window, enumerate_patch, icosahedron_window

_TAU_F = (1 + 5 ** 0.5) / 2


@dataclass
class ExperimentConfig:
    kind: str = "B"
    radii: tuple = (10, 20, 40)
    shift: tuple = (Fraction(1, 1000),) * 3
    seed: int = 0
    samples: int = 200
    workers: int = 1
    threshold: float = 0.05

    def __post_init__(self):
        radii = tuple(Fraction(r) for r in self.radii)
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError("radii must be strictly increasing")
        self.radii = radii
        self.shift = tuple(Fraction(s) for s in self.shift)


def _star_centroid_stream(kind: str, window: Window, radius) -> tuple[int, list[float]]:
    state = {"n": 0, "sa": [0, 0, 0], "sb": [0, 0, 0]}

    def fold(rows, ai, bi):
        state["n"] += len(rows)
        for j in range(3):
            state["sa"][j] += int(ai[:, j].sum())
            state["sb"][j] += int(bi[:, j].sum())

    enumerate_patch(kind, window, radius, keep_points=False, on_chunk=fold)
    n = state["n"]
    if n == 0:
        raise EmptyWindowInterior("patch is empty at this radius")
    centroid = [(state["sa"][j] + state["sb"][j] * _TAU_F) / (2 * n)
                for j in range(3)]
    return n, centroid


def weyl_experiment(config: ExperimentConfig, window: Window | None = None) -> dict:
    """Star centroids of ball patches against the exact window centroid.

    The deviations are expected to shrink with the radius;
    `threshold` is an engineering choice recorded in the report, not an
    asserted constant of the underlying convergence statement.
    """
    if window is None:
        window = icosahedron_window(config.shift)
    exact_centre = window.center_of_symmetry()
    if exact_centre is None:
        raise ValueError("window centroid is only exact for symmetric bodies")
    wc = [c.embed() for c in exact_centre]
    radii, cards, centroids, deviations = [], [], [], []
    for r in config.radii:
        n, c = _star_centroid_stream(config.kind, window, r)
        dev = sum((a - b) ** 2 for a, b in zip(c, wc)) ** 0.5
        radii.append(float(r))
        cards.append(n)
        centroids.append(c)
        deviations.append(dev)
    return {
        "kind": config.kind,
        "radii": radii,
        "cardinalities": cards,
        "centroids": centroids,
        "window_centroid": wc,
        "window_centroid_exact": [[c.num.a, c.num.b, c.den]
                                  for c in exact_centre],
        "deviations": deviations,
        "threshold": config.threshold,
        "strictly_decreasing": all(b < a for a, b in
                                   zip(deviations, deviations[1:])),
        "final_below_threshold": deviations[-1] < config.threshold,
    }


def recover_window_shift(patch: ModelSetPatch, candidates) -> dict:
    """Estimate the window shift from a ball-shaped patch.

    The star centroid of the patch approximates the centroid of the true
    window; subtracting the base body centroid (zero for the symmetric
    icosahedron) leaves the shift.  Candidates are scored by distance.
    """
    a, b = patch.doubled_coords()
    n = len(a)
    if n == 0:
        raise EmptyWindowInterior("empty patch")
    ai = a + b
    bi = -b
    est = [(int(ai[:, j].sum()) + int(bi[:, j].sum()) * _TAU_F) / (2 * n)
           for j in range(3)]
    scored = []
    for cand in candidates:
        cf = [float(Fraction(c)) for c in cand]
        d = sum((x - y) ** 2 for x, y in zip(est, cf)) ** 0.5
        scored.append((d, [Fraction(c) for c in cand]))
    scored.sort(key=lambda t: t[0])
    return {
        "estimate": est,
        "residuals": [float(d) for d, _ in scored],
        "best": [[c.numerator, c.denominator] for c in scored[0][1]],
        "best_residual": float(scored[0][0]),
    }


def _uniq_worker(args):
    mode, patch_data, samples, seed, max_radius = args
    rng = random.Random(seed)
    if mode == "slice":
        return sample_convex_subsets_2d(patch_data, samples, rng,
                                        max_radius=max_radius)
    return sample_convex_subsets_3d(patch_data, samples, rng,
                                    max_radius=max_radius)


def run_uniqueness_experiment(patch: ModelSetPatch, mode: str, samples: int,
                              seed: int, workers: int = 1,
                              max_radius: float = 5.0) -> dict:
    """Sample convex subsets and compare X-ray signatures in the four
    distinguished directions; zero collisions expected."""
    if mode == "slice":
        from .modelset import IcoPoint
        from .slices import slice_patch
        zero = IcoPoint((GoldenInt(0), GoldenInt(0), GoldenInt(0)), patch.tag)
        pts, _ = slice_patch(patch, zero)
        directions = dense_directions_2d()
        source = pts
    elif mode == "3d":
        directions = dense_directions_3d(patch.tag)
        source = patch
    else:
        raise ValueError("mode must be 'slice' or '3d'")

    if workers <= 1:
        chunks = [_uniq_worker((mode, source, samples, seed, max_radius))]
    else:
        import multiprocessing as mp
        per = (samples + workers - 1) // workers
        jobs = [(mode, source, per, seed + 7919 * w, max_radius)
                for w in range(workers)]
        with mp.Pool(workers) as pool:
            chunks = pool.map(_uniq_worker, jobs)
    merged = []
    seen = set()
    for chunk in chunks:
        for sample in chunk:
            key = frozenset(_hashable(p) for p in sample)
            if key not in seen:
                seen.add(key)
                merged.append(sample)
    merged = merged[:samples]
    report = uniqueness_experiment(merged, directions)
    report["mode"] = mode
    report["seed"] = seed
    report["directions"] = "u5" if mode == "slice" else "u5_preimage"
    return report


def _hashable(p):
    from .slices import CycPoint
    return p if isinstance(p, CycPoint) else tuple(p)


def selftest(verbose: bool = False) -> list[tuple[str, bool, str]]:
    """Quick end-to-end invariant run used by the command line."""
    results = []

    def record(name, fn):
        try:
            detail = fn()
            results.append((name, True, detail or ""))
        except Exception as exc:  # noqa: BLE001 - report, do not crash
            results.append((name, False, f"{type(exc).__name__}: {exc}"))

    def icosian_group_order():
        from .icosian import icosian_group
        group = icosian_group()
        assert len(group) == 120
        one = GoldenRat(1)
        assert all(q.nr() == one for q in group)
        return "order 120, reduced norms 1"

    def module_index_check():
        from .icosian import ModuleTag, module_index
        assert module_index(ModuleTag.FACE, ModuleTag.BODY) == 4
        return "[body : face] = 4"

    def rotation_orders():
        from .icosian import rotation_group
        assert len(rotation_group("Y")) == 60
        assert len(rotation_group("Yhstar")) == 120
        return "|Y| = 60, |Yh*| = 120"

    def slice_identity():
        from .modelset import IcoPoint
        from .slices import cyclotomic_patch, slice_patch
        window = icosahedron_window()
        patch = enumerate_patch("B", window, 6)
        zero = IcoPoint((GoldenInt(0), GoldenInt(0), GoldenInt(0)),
                        ModuleTag.IM_ICOSIAN)
        pts, sw = slice_patch(patch, zero)
        r = Fraction(59, 10)
        direct = set(cyclotomic_patch(sw, r))
        r2 = GoldenRat(GoldenInt(r.numerator ** 2), r.denominator ** 2)
        mine = {z for z in pts if (z.length_sq() - r2).sign() < 0}
        assert mine == direct
        return f"{len(direct)} slice points agree"

    def reconstruction_roundtrip():
        from .reconstruct import TomographyInstance, reconstruct
        from .xrays import Direction, xray
        window = icosahedron_window()
        patch = enumerate_patch("B", window, 5)
        rng = random.Random(1)
        pts = [patch.coords(i)
               for i in rng.sample(range(patch.size), 12)]
        u1 = Direction.from_vector(vec3(0, 1, 0))
        u2 = Direction.from_vector(vec3(GoldenRat(-1, 2),
                                        GoldenRat(GoldenInt(-1, 1), 2),
                                        GoldenRat(GoldenInt(0, 1), 2)))
        inst = TomographyInstance.from_points(pts, u1, u2, patch)
        got = reconstruct(inst)
        assert xray(got, u1) == inst.image1
        assert xray(got, u2) == inst.image2
        return f"round trip with {len(pts)} points"

    record("icosian-group", icosian_group_order)
    record("module-index", module_index_check)
    record("rotation-groups", rotation_orders)
    record("slice-identity", slice_identity)
    record("reconstruction", reconstruction_roundtrip)
    return results
