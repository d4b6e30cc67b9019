"""Centroid experiments, configs and the packaged uniqueness runs."""

from __future__ import annotations

from fractions import Fraction

import pytest

from icotomo.experiments import (
    ExperimentConfig,
    recover_window_shift,
    run_uniqueness_experiment,
    selftest,
    weyl_experiment,
)
from icotomo.modelset import enumerate_patch, icosahedron_window


@pytest.fixture(scope="module")
def window():
    return icosahedron_window()


def test_config_requires_increasing_radii():
    with pytest.raises(ValueError):
        ExperimentConfig(radii=(10, 10))
    cfg = ExperimentConfig(radii=(2, 4), shift=("1/1000",) * 3)
    assert cfg.radii == (Fraction(2), Fraction(4))


def test_weyl_small_radii_structure(window):
    cfg = ExperimentConfig(radii=(4, 8), threshold=0.5)
    report = weyl_experiment(cfg, window)
    assert report["window_centroid_exact"] == [[1, 0, 1000]] * 3
    assert len(report["deviations"]) == 2
    assert report["cardinalities"][1] > report["cardinalities"][0]
    assert all(d >= 0 for d in report["deviations"])
    # the centroid at radius 8 sits near the shift already
    assert report["deviations"][1] < 0.05


def test_weyl_window_centroid_is_shift(window):
    # the exact window centroid is the shift, by central symmetry
    cfg = ExperimentConfig(radii=(3, 5), shift=(Fraction(1, 100),) * 3,
                           threshold=1.0)
    report = weyl_experiment(cfg)
    assert report["window_centroid"] == pytest.approx([0.01] * 3)


def test_recover_shift_difference_between_patches():
    # two model sets whose windows differ by a translation produce
    # centroid estimates differing by about that translation
    s1 = (Fraction(1, 1000),) * 3
    s2 = (Fraction(1, 1000) + Fraction(3, 100), Fraction(1, 1000),
          Fraction(1, 1000) - Fraction(2, 100))
    p1 = enumerate_patch("B", icosahedron_window(s1), 8)
    p2 = enumerate_patch("B", icosahedron_window(s2), 8)
    r1 = recover_window_shift(p1, [s1])
    r2 = recover_window_shift(p2, [s2])
    diff = [b - a for a, b in zip(r1["estimate"], r2["estimate"])]
    expect = [float(b - a) for a, b in zip(s1, s2)]
    for d, e in zip(diff, expect):
        assert abs(d - e) < 0.02


def test_recover_window_shift(window):
    patch = enumerate_patch("B", window, 8)
    true = (Fraction(1, 1000),) * 3
    decoys = [(Fraction(1, 10),) * 3, (Fraction(-3, 100),) * 3,
              (Fraction(0),) * 3, true]
    report = recover_window_shift(patch, decoys)
    assert report["best"] == [[1, 1000]] * 3
    assert report["best_residual"] < 0.05
    # larger data reduces the residual against the true shift
    small = enumerate_patch("B", window, 4)
    rep_small = recover_window_shift(small, [true])
    rep_large = recover_window_shift(patch, [true])
    assert rep_large["best_residual"] <= rep_small["best_residual"] + 1e-9


def test_uniqueness_experiment_runs_both_modes(window):
    patch = enumerate_patch("B", window, 5)
    rep = run_uniqueness_experiment(patch, "slice", 15, seed=3)
    assert rep["samples"] == 15
    assert rep["collisions"] == []
    rep3 = run_uniqueness_experiment(patch, "3d", 6, seed=3, max_radius=2.5)
    assert rep3["samples"] == 6
    assert rep3["collisions"] == []
    with pytest.raises(ValueError):
        run_uniqueness_experiment(patch, "planar", 3, seed=0)


def test_uniqueness_experiment_workers_deterministic(window):
    patch = enumerate_patch("B", window, 4)
    a = run_uniqueness_experiment(patch, "slice", 8, seed=11, workers=1)
    b = run_uniqueness_experiment(patch, "slice", 8, seed=11, workers=1)
    assert a == b


def test_selftest_all_pass():
    results = selftest()
    assert results
    for name, ok, detail in results:
        assert ok, f"{name}: {detail}"
