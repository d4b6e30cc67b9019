"""Quaternions over Q(tau), the icosian group, and the icosahedral modules.

The 120-element icosian group is generated by the unit quaternions

    ((+-1,0,0,0))^A,  1/2(+-1,+-1,+-1,+-1)^A,  1/2(0,+-1,+-tau',tau)^A

where ^A allows all even coordinate permutations.  The icosahedral
Z[tau]-modules in R^3 are characterised by congruences mod 2Z[tau]:

    body-centred:  tau^2 b + tau c + d = 0
    face-centred:  b = tau c = tau^2 d    (equivalently: body-centred
                   members with even coordinate sum)
    primitive:     body-centred members with coordinate sum 0 or tau

and the halved variants are the imaginary icosians Im(I) = (1/2) M_body
and the pure imaginary icosians I_0 = (1/2) M_face.
"""

from __future__ import annotations

import itertools
from enum import Enum
from functools import lru_cache

from .golden import TAU, TAU_CONJ, GoldenInt, GoldenRat
from .linalg import Mat3, Vec3, conj_mat3, identity3, matmul3, matvec3, vec3

_HALF = GoldenRat(1, 2)
_TAU_SQ = GoldenInt(1, 1)


class GoldenQuaternion:
    """Quaternion a + bi + cj + dk with components in Q(tau)."""

    __slots__ = ("w", "x", "y", "z")

    def __init__(self, w, x, y, z):
        self.w = GoldenRat.of(w)
        self.x = GoldenRat.of(x)
        self.y = GoldenRat.of(y)
        self.z = GoldenRat.of(z)

    def components(self):
        return (self.w, self.x, self.y, self.z)

    def __repr__(self):
        return f"GoldenQuaternion({self.w}, {self.x}, {self.y}, {self.z})"

    def __eq__(self, other):
        if not isinstance(other, GoldenQuaternion):
            return NotImplemented
        return self.components() == other.components()

    def __hash__(self):
        return hash(self.components())

    def __neg__(self):
        return GoldenQuaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if not isinstance(other, GoldenQuaternion):
            return NotImplemented
        a1, b1, c1, d1 = self.components()
        a2, b2, c2, d2 = other.components()
        return GoldenQuaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def conj(self) -> GoldenQuaternion:
        return GoldenQuaternion(self.w, -self.x, -self.y, -self.z)

    def nr(self) -> GoldenRat:
        """Reduced norm q * conj(q)."""
        return (self.w * self.w + self.x * self.x
                + self.y * self.y + self.z * self.z)

    def tr(self) -> GoldenRat:
        return self.w + self.w

    def re(self) -> GoldenRat:
        return self.w

    def im(self) -> Vec3:
        return (self.x, self.y, self.z)


QUAT_ONE = GoldenQuaternion(1, 0, 0, 0)


def _perm_parity(perm) -> int:
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm))
              if perm[i] > perm[j])
    return inv % 2


EVEN_PERMS = tuple(p for p in itertools.permutations(range(4))
                   if _perm_parity(p) == 0)


def _even_perm_orbit(vec) -> set[tuple]:
    return {tuple(vec[i] for i in perm) for perm in EVEN_PERMS}


def icosian_generators() -> list[GoldenQuaternion]:
    """The listed generating quaternions, 72 in total."""
    half = _HALF
    items: set[tuple] = set()
    for s in (1, -1):
        items |= _even_perm_orbit((GoldenRat(s), GoldenRat(0), GoldenRat(0),
                                   GoldenRat(0)))
    for signs in itertools.product((1, -1), repeat=4):
        items |= _even_perm_orbit(tuple(GoldenRat(s) * half for s in signs))
    for s1, s2 in itertools.product((1, -1), repeat=2):
        base = (GoldenRat(0), GoldenRat(s1) * half,
                GoldenRat(TAU_CONJ) * s2 * half, GoldenRat(TAU) * half)
        items |= _even_perm_orbit(base)
    return [GoldenQuaternion(*t) for t in sorted(
        items, key=lambda t: tuple((c.num.a, c.num.b, c.den) for c in t))]


def mulclose(generators, limit: int = 100_000) -> set:
    """Closure of a finite generator set under multiplication."""
    seen = set(generators)
    frontier = list(seen)
    while frontier:
        new = []
        for g in generators:
            for h in frontier:
                p = g * h
                if p not in seen:
                    seen.add(p)
                    new.append(p)
                    if len(seen) > limit:
                        raise RuntimeError("group closure exceeded limit")
        frontier = new
    return seen


@lru_cache(maxsize=1)
def icosian_group() -> frozenset[GoldenQuaternion]:
    return frozenset(mulclose(icosian_generators(), limit=1000))


class ModuleTag(Enum):
    BODY = "body"            # M_B
    FACE = "face"            # M_F
    PRIMITIVE = "primitive"  # M_P, membership test only
    IM_ICOSIAN = "im_icosian"    # (1/2) M_B
    ICOSIAN0 = "icosian0"        # (1/2) M_F

    def halved(self) -> bool:
        return self in (ModuleTag.IM_ICOSIAN, ModuleTag.ICOSIAN0)

    def base(self) -> "ModuleTag":
        if self is ModuleTag.IM_ICOSIAN:
            return ModuleTag.BODY
        if self is ModuleTag.ICOSIAN0:
            return ModuleTag.FACE
        return self


def _congruence_holds(b: GoldenInt, c: GoldenInt, d: GoldenInt,
                      tag: ModuleTag) -> bool:
    if tag is ModuleTag.BODY:
        return (_TAU_SQ * b + TAU * c + d).mod2() == (0, 0)
    if tag is ModuleTag.FACE:
        return ((b - TAU * c).mod2() == (0, 0)
                and (TAU * c - _TAU_SQ * d).mod2() == (0, 0))
    if tag is ModuleTag.PRIMITIVE:
        if not _congruence_holds(b, c, d, ModuleTag.BODY):
            return False
        return (b + c + d).mod2() in ((0, 0), (0, 1))
    raise ValueError(f"no congruence for {tag}")


def module_contains(v, tag: ModuleTag) -> bool:
    """Exact membership of a Q(tau)^3 vector in the tagged module."""
    coords = [GoldenRat.of(c) for c in v]
    if tag.halved():
        coords = [c + c for c in coords]
        tag = tag.base()
    if any(not c.is_integral() for c in coords):
        return False
    b, c, d = (x.to_golden_int() for x in coords)
    return _congruence_holds(b, c, d, tag)


_RESIDUES = [GoldenInt(a, b) for a in (0, 1) for b in (0, 1)]


@lru_cache(maxsize=None)
def module_residues(tag: ModuleTag) -> frozenset:
    """Residue classes of the module inside Z[tau]^3 / 2Z[tau]^3."""
    tag = tag.base()
    out = set()
    for b in _RESIDUES:
        for c in _RESIDUES:
            for d in _RESIDUES:
                if _congruence_holds(b, c, d, tag):
                    out.add((b.mod2(), c.mod2(), d.mod2()))
    return frozenset(out)


def module_index(sub: ModuleTag, sup: ModuleTag) -> int:
    """Subgroup index computed by residue enumeration mod 2Z[tau]^3."""
    rs, rS = module_residues(sub), module_residues(sup)
    if not rs <= rS:
        raise ValueError(f"{sub} is not contained in {sup}")
    return len(rS) // len(rs)


# Rotation groups.  Y is generated by an order-2 and an order-5 rotation;
# the starred groups conjugate every entry, and the h-variants adjoin -I.

def rotation_generators() -> tuple[Mat3, Mat3]:
    r = GoldenRat
    half = _HALF
    g2 = ((r(-1), r(0), r(0)),
          (r(0), r(-1), r(0)),
          (r(0), r(0), r(1)))
    g5 = ((r(TAU) * half, r(-1) * half, r(TAU_CONJ) * -half),
          (r(1) * half, r(TAU_CONJ) * -half, r(TAU) * -half),
          (r(TAU_CONJ) * -half, r(TAU) * half, r(1) * half))
    return g2, g5


def _mat_closure(gens) -> frozenset[Mat3]:
    seen = set(gens)
    frontier = list(seen)
    while frontier:
        new = []
        for g in gens:
            for h in frontier:
                p = matmul3(g, h)
                if p not in seen:
                    seen.add(p)
                    new.append(p)
        frontier = new
    return frozenset(seen)


@lru_cache(maxsize=None)
def rotation_group(which: str) -> frozenset[Mat3]:
    """One of 'Y', 'Ystar', 'Yh', 'Yhstar'."""
    g2, g5 = rotation_generators()
    if which in ("Ystar", "Yhstar"):
        g2, g5 = conj_mat3(g2), conj_mat3(g5)
    elif which not in ("Y", "Yh"):
        raise ValueError(f"unknown rotation group {which!r}")
    group = _mat_closure((g2, g5))
    if which in ("Yh", "Yhstar"):
        minus = tuple(tuple(-e for e in row) for row in identity3())
        group = frozenset(group | {matmul3(minus, m) for m in group})
    return group


def orbit(group, v: Vec3) -> set[Vec3]:
    return {matvec3(m, v) for m in group}


def matrix_order(m: Mat3, cap: int = 20) -> int:
    p = m
    ident = identity3()
    for k in range(1, cap + 1):
        if p == ident:
            return k
        p = matmul3(p, m)
    raise ValueError("order exceeds cap")


# Z[tau]-bases of the body- and face-centred modules, used both for
# patch enumeration and as an independent membership oracle.

def module_basis(tag: ModuleTag) -> tuple[Vec3, Vec3, Vec3]:
    tag = tag.base()
    if tag is ModuleTag.BODY:
        return (vec3(2, 0, 0), vec3(1, 1, 1), vec3(GoldenRat(TAU), 0, 1))
    if tag is ModuleTag.FACE:
        return (vec3(2, 0, 0),
                vec3(GoldenRat(GoldenInt(1, 1)), GoldenRat(TAU), 1),
                vec3(0, 0, 2))
    raise ValueError(f"no Z[tau] basis for {tag}")
