"""Exact arithmetic in Z[tau] and Q(tau), tau = (1+sqrt5)/2.

Every coordinate in this package is a GoldenInt (a + b*tau with integer
a, b) or a GoldenRat (GoldenInt numerator over a positive integer
denominator, kept in lowest terms).  Signs, comparisons and containment
decisions are made by integer arithmetic only; floating point appears
solely in `embed` and in reporting code.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache


def sign_root5(p: int, q: int) -> int:
    """Exact sign of p + q*sqrt(5) for integers (or Fractions) p, q."""
    if p >= 0 and q >= 0:
        return 1 if (p != 0 or q != 0) else 0
    if p <= 0 and q <= 0:
        return -1 if (p != 0 or q != 0) else 0
    # mixed signs: compare p^2 against 5 q^2, the greater magnitude wins
    lhs = p * p
    rhs = 5 * q * q
    if p > 0:  # q < 0
        return 1 if lhs > rhs else -1
    return 1 if rhs > lhs else -1


@lru_cache(maxsize=8)
def _sqrt5_fraction(bits: int) -> Fraction:
    # floor(sqrt(5 * 4^bits)) / 2^bits, within 2^-bits of sqrt(5)
    scaled = math.isqrt(5 << (2 * bits))
    return Fraction(scaled, 1 << bits)


class GoldenInt:
    """Element a + b*tau of the ring Z[tau]; tau^2 = tau + 1."""

    __slots__ = ("a", "b")

    def __init__(self, a: int, b: int = 0):
        self.a = a
        self.b = b

    def __repr__(self) -> str:
        return f"GoldenInt({self.a}, {self.b})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}t"
        return f"{self.a}{self.b:+}t"

    def __eq__(self, other) -> bool:
        other = _as_golden_int(other)
        if other is None:
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    def __neg__(self) -> GoldenInt:
        return GoldenInt(-self.a, -self.b)

    def __add__(self, other):
        other = _as_golden_int(other)
        if other is None:
            return NotImplemented
        return GoldenInt(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_golden_int(other)
        if other is None:
            return NotImplemented
        return GoldenInt(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_golden_int(other)
        if other is None:
            return NotImplemented
        a, b, c, d = self.a, self.b, other.a, other.b
        return GoldenInt(a * c + b * d, a * d + b * c + b * d)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> GoldenInt:
        if n < 0:
            raise ValueError("negative powers leave Z[tau]; use GoldenRat")
        result = GoldenInt(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> GoldenInt:
        """Galois conjugate: tau maps to 1 - tau."""
        return GoldenInt(self.a + self.b, -self.b)

    def norm(self) -> int:
        """Field norm x * conj(x) = a^2 + ab - b^2, an ordinary integer."""
        return self.a * self.a + self.a * self.b - self.b * self.b

    def sign(self) -> int:
        return sign_root5(2 * self.a + self.b, self.b)

    def is_unit(self) -> bool:
        return self.norm() in (1, -1)

    def mod2(self) -> tuple[int, int]:
        """Residue in Z[tau]/2Z[tau], one of (0,0),(1,0),(0,1),(1,1)."""
        return (self.a & 1, self.b & 1)

    def divmod_nearest(self, other: GoldenInt) -> tuple[GoldenInt, GoldenInt]:
        """Division with remainder of norm strictly smaller than norm(other)."""
        if not other:
            raise ZeroDivisionError("division by zero in Z[tau]")
        n = other.norm()
        prod = self * other.conj()
        qa = _round_div(prod.a, n)
        qb = _round_div(prod.b, n)
        q = GoldenInt(qa, qb)
        return q, self - q * other

    def divide_exact(self, other: GoldenInt) -> GoldenInt:
        q, r = self.divmod_nearest(other)
        if r:
            raise ValueError(f"{self} is not divisible by {other} in Z[tau]")
        return q

    def embed(self, precision: float = 1e-15) -> float:
        return golden_value(self.a, self.b, 1, precision)


def _round_div(p: int, q: int) -> int:
    # nearest integer to p/q, ties toward +infinity; q may be negative
    if q < 0:
        p, q = -p, -q
    return (2 * p + q) // (2 * q)


def _as_golden_int(x):
    if isinstance(x, GoldenInt):
        return x
    if isinstance(x, int):
        return GoldenInt(x)
    return None


TAU = GoldenInt(0, 1)
TAU_CONJ = GoldenInt(1, -1)
ONE = GoldenInt(1)


def golden_gcd(x: GoldenInt, y: GoldenInt) -> GoldenInt:
    """A greatest common divisor in Z[tau], determined up to a unit."""
    while y:
        _, r = x.divmod_nearest(y)
        x, y = y, r
    return x


def unit_exponent(x: GoldenInt):
    """For a unit x = s * tau^k return (s, k) with s in {1,-1}; else None.

    The full unit group of Z[tau] is {+-tau^k}; callers that follow the
    positive-powers convention can insist on s == 1.
    """
    if not x.is_unit():
        return None
    s = x.sign()
    y = x if s > 0 else -x
    k = 0
    # 1/tau = tau - 1 stays integral, so walk toward 1 exactly
    tau_inv = GoldenInt(-1, 1)
    guard = 0
    while y != ONE:
        if sign_root5(2 * y.a + y.b - 2, y.b) > 0:  # y > 1
            y = y * tau_inv
            k += 1
        else:
            y = y * TAU
            k -= 1
        guard += 1
        if guard > 10_000:
            raise ArithmeticError("unit exponent recovery did not terminate")
    return s, k


def golden_value(a, b, den=1, precision: float = 1e-15) -> float:
    """Float approximation of (a + b*tau)/den within the given precision."""
    if b == 0:
        return float(Fraction(a, den))
    bits = 64
    target = Fraction(abs(b), abs(den)) / 2
    while target / (1 << bits) > Fraction(precision).limit_denominator(10**30):
        bits += 32
    s5 = _sqrt5_fraction(bits)
    return float((Fraction(2 * a + b) + b * s5) / (2 * den))


class GoldenRat:
    """Element of Q(tau): GoldenInt numerator over a positive denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den: int = 1):
        if isinstance(num, int):
            num = GoldenInt(num)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        g = math.gcd(math.gcd(abs(num.a), abs(num.b)), den)
        if g > 1:
            num = GoldenInt(num.a // g, num.b // g)
            den //= g
        self.num = num
        self.den = den

    @classmethod
    def from_fraction(cls, f) -> GoldenRat:
        f = Fraction(f)
        return cls(GoldenInt(f.numerator), f.denominator)

    @classmethod
    def of(cls, x) -> GoldenRat:
        r = _as_golden_rat(x)
        if r is None:
            raise TypeError(f"cannot interpret {x!r} as GoldenRat")
        return r

    def __repr__(self) -> str:
        return f"GoldenRat({self.num!r}, {self.den})"

    def __str__(self) -> str:
        return str(self.num) if self.den == 1 else f"({self.num})/{self.den}"

    def __eq__(self, other) -> bool:
        other = _as_golden_rat(other)
        if other is None:
            return NotImplemented
        return self.den == other.den and self.num == other.num

    def __hash__(self):
        return hash((self.num.a, self.num.b, self.den))

    def __bool__(self) -> bool:
        return bool(self.num)

    def __neg__(self) -> GoldenRat:
        return GoldenRat(-self.num, self.den)

    def __add__(self, other):
        other = _as_golden_rat(other)
        if other is None:
            return NotImplemented
        return GoldenRat(self.num * other.den + other.num * self.den,
                         self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_golden_rat(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_golden_rat(other)
        if other is None:
            return NotImplemented
        return GoldenRat(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_golden_rat(other)
        if other is None:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division by zero in Q(tau)")
        n = other.num.norm()
        num = self.num * other.num.conj() * other.den
        if n < 0:
            num, n = -num, -n
        return GoldenRat(num, self.den * n)

    def __rtruediv__(self, other):
        other = _as_golden_rat(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int) -> GoldenRat:
        if n < 0:
            return GoldenRat(1) / self ** (-n)
        result = GoldenRat(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> GoldenRat:
        return GoldenRat(self.num.conj(), self.den)

    def norm(self) -> Fraction:
        return Fraction(self.num.norm(), self.den * self.den)

    def sign(self) -> int:
        return self.num.sign()

    def __lt__(self, other):
        other = _as_golden_rat(other)
        if other is None:
            return NotImplemented
        return (self - other).sign() < 0

    def __le__(self, other):
        other = _as_golden_rat(other)
        if other is None:
            return NotImplemented
        return (self - other).sign() <= 0

    def __gt__(self, other):
        other = _as_golden_rat(other)
        if other is None:
            return NotImplemented
        return (self - other).sign() > 0

    def __ge__(self, other):
        other = _as_golden_rat(other)
        if other is None:
            return NotImplemented
        return (self - other).sign() >= 0

    def is_integral(self) -> bool:
        return self.den == 1

    def is_rational(self) -> bool:
        return self.num.b == 0

    def to_fraction(self) -> Fraction:
        if self.num.b != 0:
            raise ValueError(f"{self} is irrational")
        return Fraction(self.num.a, self.den)

    def to_golden_int(self) -> GoldenInt:
        if self.den != 1:
            raise ValueError(f"{self} is not in Z[tau]")
        return self.num

    def embed(self, precision: float = 1e-15) -> float:
        return golden_value(self.num.a, self.num.b, self.den, precision)


def _as_golden_rat(x):
    if isinstance(x, GoldenRat):
        return x
    if isinstance(x, GoldenInt):
        return GoldenRat(x)
    if isinstance(x, int):
        return GoldenRat(GoldenInt(x))
    if isinstance(x, Fraction):
        return GoldenRat.from_fraction(x)
    return None


TAU_R = GoldenRat(TAU)
TAU_CONJ_R = GoldenRat(TAU_CONJ)
ZERO_R = GoldenRat(0)
ONE_R = GoldenRat(1)

# 1/tau^2 = 2 - tau, used by the internal-space contraction identities
TAU_INV_SQ = GoldenRat(GoldenInt(2, -1))


def tau_power(k: int) -> GoldenRat:
    """tau^k in Q(tau) for any integer k."""
    return TAU_R ** k
