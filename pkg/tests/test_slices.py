"""Plane isometries, slice windows and the cyclotomic slice identity."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from icotomo.errors import NotInPlane
from icotomo.golden import TAU, TAU_CONJ, GoldenInt, GoldenRat
from icotomo.icosian import ModuleTag
from icotomo.linalg import add3, normsq3, scale3, vec3
from icotomo.modelset import (
    Containment,
    IcoPoint,
    enumerate_patch,
    icosahedron_window,
)
from icotomo.slices import (
    CycPoint,
    cross_section,
    cyclotomic_patch,
    plane_embed,
    plane_embed_inv,
    plane_embed_star,
    plane_embed_star_inv,
    slice_basis_check,
    slice_patch,
    star_length_sq,
)

TAU_R = GoldenRat(TAU)
TAU_CONJ_R = GoldenRat(TAU_CONJ)
HALF = GoldenRat(1, 2)

E1 = vec3(0, 1, 0)
E2 = (-HALF, -TAU_CONJ_R * HALF, TAU_R * HALF)
E2_STAR = (-HALF, -TAU_R * HALF, TAU_CONJ_R * HALF)


@pytest.fixture(scope="module")
def window():
    return icosahedron_window()


@pytest.fixture(scope="module")
def patch8(window):
    return enumerate_patch("B", window, 8)


def rand_plane_point(rng):
    r = GoldenRat(GoldenInt(rng.randint(-30, 30), rng.randint(-30, 30)),
                  rng.randint(1, 6))
    s = GoldenRat(GoldenInt(rng.randint(-30, 30), rng.randint(-30, 30)),
                  rng.randint(1, 6))
    v = add3(scale3(r, E1), scale3(s, E2))
    return r, s, v


def test_plane_embed_basis_images():
    assert plane_embed(E1) == CycPoint(1, 0)
    assert plane_embed(E2) == CycPoint(0, 1)
    assert plane_embed_star(E1) == (GoldenRat(1), GoldenRat(0))
    assert plane_embed_star(E2_STAR) == (GoldenRat(0), GoldenRat(1))


def test_plane_embed_rejects_off_plane_points():
    with pytest.raises(NotInPlane):
        plane_embed(vec3(1, 0, 0))
    with pytest.raises(NotInPlane):
        plane_embed_star(vec3(1, 0, 0))


def test_isometry_identity_symbolic():
    # ||r e1 + s e2||^2 == r^2 + s^2 - r s tau', exactly
    rng = random.Random(71)
    for _ in range(1000):
        r, s, v = rand_plane_point(rng)
        z = plane_embed(v)
        assert z == CycPoint(r, s)
        assert normsq3(v) == r * r + s * s - r * s * TAU_CONJ_R
        assert normsq3(v) == z.length_sq()
        assert plane_embed_inv(z) == v


def test_star_isometry_identity_symbolic():
    rng = random.Random(72)
    for _ in range(500):
        r = GoldenRat(GoldenInt(rng.randint(-20, 20), rng.randint(-20, 20)),
                      rng.randint(1, 5))
        s = GoldenRat(GoldenInt(rng.randint(-20, 20), rng.randint(-20, 20)),
                      rng.randint(1, 5))
        v = add3(scale3(r, E1), scale3(s, E2_STAR))
        p = plane_embed_star(v)
        assert p == (r, s)
        assert normsq3(v) == r * r + s * s - r * s * TAU_R
        assert normsq3(v) == star_length_sq(p)
        assert plane_embed_star_inv(p) == v


def test_one_plus_zeta_length_is_tau():
    # |1 + zeta5|^2 = 2 - tau' = 1 + tau = tau^2
    z = CycPoint(1, 1)
    assert z.length_sq() == GoldenRat(GoldenInt(1, 1))
    assert z.length_sq() == TAU_R * TAU_R


def test_star5_compatible_with_coordinate_conjugation():
    # embedding then star5 equals starring then star-plane embedding
    rng = random.Random(73)
    for _ in range(300):
        pa = GoldenRat(GoldenInt(rng.randint(-9, 9), rng.randint(-9, 9)))
        pb = GoldenRat(GoldenInt(rng.randint(-9, 9), rng.randint(-9, 9)))
        v = add3(scale3(pa, E1), scale3(pb, E2))
        z = plane_embed(v)
        starred = tuple(c.conj() for c in v)
        assert plane_embed_star(starred) == z.star5()


def test_slice_basis_check_both_modules():
    assert slice_basis_check(ModuleTag.IM_ICOSIAN, box=2)
    assert slice_basis_check(ModuleTag.ICOSIAN0, box=2)


def test_central_slice_window_is_decagon(window):
    sw = cross_section(window, vec3(0, 0, 0))
    assert len(sw.vertices) == 10


def test_central_slice_identity(patch8):
    zero = IcoPoint((GoldenInt(0), GoldenInt(0), GoldenInt(0)),
                    ModuleTag.IM_ICOSIAN)
    pts, sw = slice_patch(patch8, zero)
    assert CycPoint(0, 0) in pts
    assert all(p.is_integral() for p in pts)
    assert all(sw.contains(p.star5()) is Containment.INTERIOR for p in pts)
    r = Fraction(79, 10)  # strictly inside the patch radius 8
    direct = cyclotomic_patch(sw, r)
    r2 = GoldenRat(GoldenInt(r.numerator ** 2), r.denominator ** 2)
    from_slice = {p for p in pts if (p.length_sq() - r2).sign() < 0}
    assert from_slice == set(direct)


def _common_radius(patch, lam) -> Fraction:
    lam_norm = float(normsq3(lam.value()).embed()) ** 0.5
    r = float(patch.radius) - lam_norm
    return Fraction(int(r * 0.98 * 100), 100)


def test_slice_identity_off_centre(patch8):
    groups = patch8.heights()
    keys = sorted(groups.keys())
    tested = 0
    for key in keys:
        if tested >= 4:
            break
        if key == (0, 0) or len(groups[key]) < 12:
            continue
        idx = min(groups[key],
                  key=lambda i: normsq3(patch8.point(i).value()).embed())
        lam = patch8.point(idx)
        r = _common_radius(patch8, lam)
        if r <= 2:
            continue
        pts, sw = slice_patch(patch8, lam)
        assert CycPoint(0, 0) in pts
        direct = cyclotomic_patch(sw, r)
        r2 = GoldenRat(GoldenInt(r.numerator ** 2), r.denominator ** 2)
        from_slice = {p for p in pts if (p.length_sq() - r2).sign() < 0}
        assert from_slice == set(direct), f"slice mismatch at height {key}"
        tested += 1
    assert tested >= 3


def test_slices_partition_patch(patch8):
    groups = patch8.heights()
    assert sum(len(ix) for ix in groups.values()) == patch8.size
    # mapping each slice back through its anchor reproduces the patch
    total = set()
    count = 0
    for key, idx in itertools.islice(sorted(groups.items()), 6):
        lam = patch8.point(idx[0])
        pts, _ = slice_patch(patch8, lam)
        assert len(pts) == len(idx)
        lamv = lam.value()
        for z in pts:
            total.add(tuple(a + b for a, b in zip(plane_embed_inv(z), lamv)))
        count += len(idx)
    assert len(total) == count


def test_cyclotomic_patch_against_brute_force(window):
    sw = cross_section(window, vec3(0, 0, 0))
    r = Fraction(3)
    fast = set(cyclotomic_patch(sw, r))
    slow = set()
    r2 = GoldenRat(9)
    for pa, pb, qa, qb in itertools.product(range(-6, 7), repeat=4):
        z = CycPoint(GoldenRat(GoldenInt(pa, pb)), GoldenRat(GoldenInt(qa, qb)))
        if (z.length_sq() - r2).sign() < 0 \
                and sw.contains(z.star5()) is Containment.INTERIOR:
            slow.add(z)
    assert fast == slow


def test_cyclotomic_patch_tiny_window_contains_origin_only():
    eps = GoldenRat(1, 20)
    square = [(eps, eps), (-eps, eps), (-eps, -eps), (eps, -eps)]
    from icotomo.slices import SliceWindow
    sw = SliceWindow(square)
    pts = cyclotomic_patch(sw, 2)
    assert pts == [CycPoint(0, 0)]


def test_degenerate_slice_window_yields_empty():
    from icotomo.slices import SliceWindow
    sw = SliceWindow([(GoldenRat(0), GoldenRat(0)), (GoldenRat(1), GoldenRat(0))])
    assert sw.is_degenerate()
    assert cyclotomic_patch(sw, 5) == []


def test_slice_heights_match_module_structure(patch8, window):
    # body-centred heights are half-integral in Z[tau]; face-centred are
    # integral
    groups = patch8.heights()
    assert all(isinstance(k, tuple) for k in groups)
    pf = enumerate_patch("F", window, 6)
    for key in pf.heights():
        assert key[0] % 2 == 0 and key[1] % 2 == 0
