"""Convex subset decisions, distinguished directions and experiments."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from icotomo.convexity import (
    HullOracle3D,
    dense_direction_elements,
    dense_directions_2d,
    dense_directions_3d,
    grid_integrality,
    hexagon_pair,
    is_convex_subset,
    is_convex_subset_2d,
    is_h_convex,
    localize_collision_to_slice,
    patch_ball_indices,
    sample_convex_subsets_2d,
    sample_convex_subsets_3d,
    three_direction_search,
    uniqueness_experiment,
    unit_determinant,
    xray_signature,
)
from icotomo.errors import HullTouchesPatchBoundary
from icotomo.golden import TAU, GoldenInt, GoldenRat
from icotomo.icosian import ModuleTag, module_contains
from icotomo.linalg import cross2, vec3
from icotomo.modelset import IcoPoint, enumerate_patch, icosahedron_window
from icotomo.slices import CycPoint, plane_embed_inv, slice_patch
from icotomo.xrays import Direction, same_xrays


@pytest.fixture(scope="module")
def window():
    return icosahedron_window()


@pytest.fixture(scope="module")
def patch4(window):
    return enumerate_patch("B", window, 4)


@pytest.fixture(scope="module")
def central_slice(window):
    patch = enumerate_patch("B", window, 7)
    zero = IcoPoint((GoldenInt(0), GoldenInt(0), GoldenInt(0)),
                    ModuleTag.IM_ICOSIAN)
    pts, _ = slice_patch(patch, zero)
    return pts


def test_unit_determinant_examples():
    o = dense_direction_elements()
    d, unit = unit_determinant(o[0], o[2])
    assert d == GoldenInt(1, 2)  # tau^3
    assert unit and d.norm() == -1
    d, unit = unit_determinant(o[2], o[3])
    assert d == GoldenInt(0, -1) and unit
    d, unit = unit_determinant(o[0], o[1])
    assert d == GoldenInt(2) and not unit and d.norm() == 4


def test_dense_directions_pairwise_non_parallel():
    os = dense_direction_elements()
    for i in range(4):
        for j in range(i + 1, 4):
            assert cross2(os[i].coeffs(), os[j].coeffs()).sign() != 0
    assert len(set(dense_directions_2d())) == 4


def test_dense_directions_3d_are_module_directions():
    for tag in (ModuleTag.IM_ICOSIAN, ModuleTag.ICOSIAN0):
        dirs = dense_directions_3d(tag)
        assert len(set(dirs)) == 4
        for u in dirs:
            assert u.in_slice_plane()
            assert module_contains(u.rep, tag)
    # preimages of the planar elements stay parallel to their sources
    for o, u in zip(dense_direction_elements(), dense_directions_3d()):
        v = plane_embed_inv(o)
        assert Direction.from_vector(v) == u


def test_grid_integrality_random_sets():
    rng = random.Random(17)
    dirs = dense_directions_2d()
    for _ in range(25):
        f = [CycPoint(GoldenRat(GoldenInt(rng.randint(-5, 5),
                                          rng.randint(-5, 5))),
                      GoldenRat(GoldenInt(rng.randint(-5, 5),
                                          rng.randint(-5, 5))))
             for _ in range(rng.randint(1, 6))]
        assert grid_integrality(f, dirs)


def test_is_convex_subset_2d_basics(central_slice):
    pts = central_slice
    z0 = CycPoint(0, 0)
    assert is_convex_subset_2d([z0], pts)
    disk = [z for z in pts if (z.length_sq() - GoldenRat(4)).sign() < 0]
    assert is_convex_subset_2d(disk, pts)
    hole = [z for z in disk if z != z0]
    assert not is_convex_subset_2d(hole, pts)


def test_is_convex_subset_3d_ball_cap(patch4):
    coords = list(patch4.iter_coords())
    idx = patch_ball_indices(patch4, (0, 0, 0), Fraction(4))
    cap = [patch4.coords(int(i)) for i in idx]
    assert is_convex_subset(cap, coords)
    mid = tuple(cap[len(cap) // 2])
    holed = [p for p in cap if tuple(p) != mid]
    assert not is_convex_subset(holed, coords)


def test_is_convex_subset_region_guard(patch4):
    coords = list(patch4.iter_coords())
    idx = patch_ball_indices(patch4, (0, 0, 0), Fraction(4))
    cap = [patch4.coords(int(i)) for i in idx]
    with pytest.raises(HullTouchesPatchBoundary):
        is_convex_subset(cap, coords, region=(vec3(0, 0, 0), Fraction(1)))
    assert is_convex_subset(cap, coords, region=(vec3(0, 0, 0), Fraction(4)))


def test_hull_oracle_degenerate_cases(patch4):
    # coplanar points: decisions fall back to exact planar geometry
    zero = IcoPoint((GoldenInt(0),) * 3, ModuleTag.IM_ICOSIAN)
    pts, _ = slice_patch(patch4, zero)
    plane = [plane_embed_inv(z) for z in pts[:12]]
    oracle = HullOracle3D(plane)
    assert oracle.basis.rank <= 2
    for p in plane:
        assert oracle.contains(p)
    assert not oracle.contains(vec3(0, 0, 1))
    # collinear and single-point cases
    line = [vec3(0, 0, 0), vec3(2, 0, 0), vec3(4, 0, 0)]
    o2 = HullOracle3D(line)
    assert o2.contains(vec3(1, 0, 0))
    assert not o2.contains(vec3(5, 0, 0))
    assert not o2.contains(vec3(1, 1, 0))
    o3 = HullOracle3D([vec3(1, 2, 3)])
    assert o3.contains(vec3(1, 2, 3))
    assert not o3.contains(vec3(1, 2, 4))


def test_h_convex_allows_stacked_slices(patch4):
    # singletons at two different heights: each slice is trivially convex,
    # so the union is H-convex even though it need not be convex in 3-space
    groups = sorted(patch4.heights().items())
    keys = [k for k, ix in groups if len(ix) >= 8]
    c1 = [patch4.coords(patch4.heights()[keys[0]][0])]
    c2 = [patch4.coords(patch4.heights()[keys[1]][0])]
    assert is_h_convex(c1, patch4)
    assert is_h_convex(c2, patch4)
    assert is_h_convex(c1 + c2, patch4)


def test_h_convex_rejects_slice_with_hole(patch4):
    idx = patch_ball_indices(patch4, (0, 0, 0), Fraction(4))
    cap = [patch4.coords(int(i)) for i in idx]
    by_height = {}
    for p in cap:
        h = (p[0] * GoldenRat(TAU) + p[2]) * 2
        by_height.setdefault((h.num.a, h.num.b), []).append(p)
    key, pts = max(by_height.items(), key=lambda kv: len(kv[1]))
    # drop an interior point of the largest slice
    inner = min(pts, key=lambda p: sum(c.embed() ** 2 for c in p))
    holed = [p for p in cap if tuple(p) != tuple(inner)]
    assert not is_h_convex(holed, patch4)


def test_sampling_2d_produces_convex_subsets(central_slice):
    rng = random.Random(3)
    samples = sample_convex_subsets_2d(central_slice, 12, rng)
    assert len(samples) == 12
    keys = {frozenset(s) for s in samples}
    assert len(keys) == 12  # deduplicated
    for s in samples[:6]:
        assert is_convex_subset_2d(s, central_slice)


def test_sampling_3d_produces_convex_subsets(patch4):
    rng = random.Random(5)
    samples = sample_convex_subsets_3d(patch4, 6, rng, max_radius=2.5)
    assert len(samples) == 6
    coords = list(patch4.iter_coords())
    for s in samples[:3]:
        assert is_convex_subset(s, coords)


def test_uniqueness_experiment_no_collisions_small(central_slice):
    rng = random.Random(9)
    dirs = dense_directions_2d()
    samples = sample_convex_subsets_2d(central_slice, 40, rng)
    report = uniqueness_experiment(samples, dirs)
    assert report["samples"] == 40
    assert report["collisions"] == []
    assert report["distinct_signatures"] == 40


def test_uniqueness_experiment_flags_true_collisions():
    # a switching component must collide: guards against a vacuous test
    from icotomo.xrays import switching_component
    dirs = dense_directions_2d()[:2]
    f, g = switching_component(dirs)
    report = uniqueness_experiment([f, g], dirs)
    assert report["collisions"] == [(0, 1)]


def test_xray_signature_translation_sensitivity(central_slice):
    dirs = dense_directions_2d()
    a = central_slice[:5]
    b = [p + CycPoint(1, 0) for p in a]
    assert xray_signature(a, dirs) != xray_signature(b, dirs)


def test_hexagon_pair_switches_xrays():
    dirs = dense_directions_2d()[:3]
    seed = CycPoint(0, 0)
    f, g = hexagon_pair(dirs, seed)
    assert len(f) == len(g) == 3
    assert set(f) != set(g)
    assert same_xrays(f, g, dirs)
    for p in f + g:
        assert p.is_integral()


def test_three_direction_search_budget_zero(central_slice):
    rng = random.Random(1)
    dirs = dense_directions_2d()[:3]
    assert three_direction_search(central_slice, dirs, 0, rng) is None


def test_three_direction_search_verifies_when_found(central_slice):
    rng = random.Random(2)
    dirs = dense_directions_2d()[:3]
    found = three_direction_search(central_slice, dirs, 120, rng)
    if found is not None:
        f, g = found
        assert same_xrays(f, g, dirs)
        assert is_convex_subset_2d(f, central_slice)
        assert is_convex_subset_2d(g, central_slice)
        assert set(f) != set(g)


def test_localize_collision_reports_differing_heights(patch4):
    a = [patch4.coords(i) for i in range(6)]
    b = [patch4.coords(i) for i in range(1, 7)]
    diff = localize_collision_to_slice(a, b)
    assert diff  # the sets differ somewhere
    assert localize_collision_to_slice(a, a) == []
