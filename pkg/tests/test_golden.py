"""Ring and field arithmetic checks for the golden-ratio core."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from icotomo.golden import (
    ONE,
    TAU,
    TAU_CONJ,
    TAU_INV_SQ,
    GoldenInt,
    GoldenRat,
    golden_gcd,
    sign_root5,
    tau_power,
    unit_exponent,
)

# Oracle: compute in the p + q*sqrt5 representation with Fraction
# coefficients, independently of the tau-basis ring law.


def to_sqrt5(x: GoldenInt) -> tuple[Fraction, Fraction]:
    return Fraction(2 * x.a + x.b, 2), Fraction(x.b, 2)


def from_sqrt5(p: Fraction, q: Fraction) -> GoldenInt:
    a, b = p - q, 2 * q
    assert a.denominator == 1 and b.denominator == 1
    return GoldenInt(int(a), int(b))


def oracle_mul(x: GoldenInt, y: GoldenInt) -> GoldenInt:
    p1, q1 = to_sqrt5(x)
    p2, q2 = to_sqrt5(y)
    return from_sqrt5(p1 * p2 + 5 * q1 * q2, p1 * q2 + q1 * p2)


gint = st.builds(GoldenInt, st.integers(-999, 999), st.integers(-999, 999))


def test_defining_relation():
    assert TAU * TAU == GoldenInt(1, 1)


def test_mul_example_one_plus_tau_times_one_minus_tau():
    # expanded independently: (1+tau)(1-tau) = 1 - tau^2 = -tau
    x = GoldenInt(1, 1)
    y = GoldenInt(1, -1)
    assert oracle_mul(x, y) == GoldenInt(0, -1)
    assert x * y == GoldenInt(0, -1)


def test_mul_identity():
    x = GoldenInt(7, -3)
    assert x * ONE == x
    assert ONE * x == x


@settings(max_examples=300, deadline=None)
@given(gint, gint)
def test_mul_matches_sqrt5_oracle(x, y):
    assert x * y == oracle_mul(x, y)


def test_conjugate_examples():
    assert TAU.conj() == GoldenInt(1, -1)  # tau' = 1 - tau
    assert GoldenInt(1, 2).conj() == GoldenInt(3, -2)
    assert GoldenInt(17).conj() == GoldenInt(17)


@settings(max_examples=300, deadline=None)
@given(gint, gint)
def test_conjugate_is_ring_hom_and_involution(x, y):
    assert (x * y).conj() == x.conj() * y.conj()
    assert (x + y).conj() == x.conj() + y.conj()
    assert x.conj().conj() == x


def test_norm_examples():
    assert TAU.norm() == -1
    assert GoldenInt(1, 2).norm() == -1
    assert TAU ** 3 == GoldenInt(1, 2)  # so 1+2tau is the unit tau^3
    assert GoldenInt(2).norm() == 4


@settings(max_examples=300, deadline=None)
@given(gint, gint)
def test_norm_multiplicative(x, y):
    assert (x * y).norm() == x.norm() * y.norm()


def test_norm_multiplicative_bulk():
    rng = random.Random(20260808)
    for _ in range(10_000):
        x = GoldenInt(rng.randint(-999, 999), rng.randint(-999, 999))
        y = GoldenInt(rng.randint(-999, 999), rng.randint(-999, 999))
        assert (x * y).norm() == x.norm() * y.norm()


def test_tau_relations_exact():
    assert TAU * TAU_CONJ == GoldenInt(-1)
    assert TAU + TAU_CONJ == ONE


def test_sign_examples():
    assert GoldenInt(1, -1).sign() == -1  # 1 - tau < 0
    assert GoldenInt(0).sign() == 0
    # 5 - 3tau > 0 because 10 > 3 + 3*sqrt5, i.e. 49 > 45
    assert GoldenInt(5, -3).sign() == 1


def test_sign_root5_cases():
    assert sign_root5(0, 0) == 0
    assert sign_root5(-9, 4) == -1  # 81 > 80
    assert sign_root5(-2, 1) == 1  # 5 > 4
    assert sign_root5(7, -3) == 1  # 49 > 45
    assert sign_root5(2, -1) == -1


def test_sign_agrees_with_embedding():
    rng = random.Random(7)
    for _ in range(10_000):
        x = GoldenRat(GoldenInt(rng.randint(-400, 400), rng.randint(-400, 400)),
                      rng.randint(1, 60))
        f = x.embed(1e-12)
        if abs(f) > 1e-9:
            assert x.sign() == (1 if f > 0 else -1)


def test_embed_values():
    assert abs(TAU.embed() - 1.618033988749895) < 1e-12
    assert GoldenRat(0).embed() == 0.0
    assert abs(TAU_CONJ.embed() + 0.618033988749895) < 1e-12


def test_unit_recovery():
    for k in range(-12, 13):
        for s in (1, -1):
            x = tau_power(k) * s
            xi = x.num if x.den == 1 else None
            if xi is None:
                # negative powers still land in Z[tau] since tau is a unit
                raise AssertionError("tau powers must be integral")
            assert unit_exponent(xi) == (s, k)
    assert unit_exponent(GoldenInt(2)) is None
    assert unit_exponent(GoldenInt(1, 1).conj() * GoldenInt(3)) is None


def test_unit_iff_norm_pm1():
    rng = random.Random(99)
    for _ in range(2000):
        x = GoldenInt(rng.randint(-50, 50), rng.randint(-50, 50))
        assert x.is_unit() == (x.norm() in (1, -1))
        if x.is_unit():
            s, k = unit_exponent(x)
            y = tau_power(k) * s
            assert y.den == 1 and y.num == x


def test_golden_rat_canonical_form():
    x = GoldenRat(GoldenInt(2, 4), -6)
    assert x.den == 3
    assert x.num == GoldenInt(-1, -2)
    assert GoldenRat(GoldenInt(0, 0), 5) == GoldenRat(0)


def test_golden_rat_field_ops():
    rng = random.Random(5)
    for _ in range(500):
        x = GoldenRat(GoldenInt(rng.randint(-99, 99), rng.randint(-99, 99)),
                      rng.randint(1, 20))
        y = GoldenRat(GoldenInt(rng.randint(-99, 99), rng.randint(-99, 99)),
                      rng.randint(1, 20))
        if y:
            assert (x / y) * y == x
        assert x + y == y + x
        assert x * y == y * x
        assert (x - y) + y == x


def test_golden_rat_comparisons():
    assert GoldenRat(TAU) > 1
    assert GoldenRat(TAU_CONJ) < 0
    assert GoldenRat(GoldenInt(1), 2) < GoldenRat(TAU) - 1
    assert TAU_INV_SQ == GoldenRat(1) / (GoldenRat(TAU) ** 2)


def test_gcd_divides_and_is_maximal():
    rng = random.Random(11)
    for _ in range(300):
        g = GoldenInt(rng.randint(-9, 9), rng.randint(-9, 9))
        if not g:
            continue
        x = g * GoldenInt(rng.randint(-20, 20), rng.randint(-20, 20))
        y = g * GoldenInt(rng.randint(-20, 20), rng.randint(-20, 20))
        if not x and not y:
            continue
        d = golden_gcd(x, y)
        assert d
        # d divides both arguments and is divisible by the planted factor
        if x:
            x.divide_exact(d)
        if y:
            y.divide_exact(d)
        d.divide_exact(g)


def test_divmod_remainder_smaller_norm():
    rng = random.Random(13)
    for _ in range(1000):
        x = GoldenInt(rng.randint(-200, 200), rng.randint(-200, 200))
        y = GoldenInt(rng.randint(-200, 200), rng.randint(-200, 200))
        if not y:
            continue
        q, r = x.divmod_nearest(y)
        assert q * y + r == x
        assert abs(r.norm()) < abs(y.norm())


def test_pow_negative_rejected_for_ints():
    with pytest.raises(ValueError):
        TAU ** -1


def test_fraction_interop():
    x = GoldenRat.from_fraction(Fraction(3, 4))
    assert x + Fraction(1, 4) == 1
    assert x.to_fraction() == Fraction(3, 4)
    with pytest.raises(ValueError):
        GoldenRat(TAU).to_fraction()
