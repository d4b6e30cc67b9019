"""Planar slices of icosahedral patches and cyclotomic model sets.

Patches decompose into slices orthogonal to (tau, 0, 1).  Each slice,
translated through one of its points, maps isometrically onto a planar
point set with coordinates in Z[zeta5] = Z[tau] + Z[tau]*zeta5; its
star image lives in the plane orthogonal to (tau', 0, 1) and is taken in
the {1, zeta5^3} basis.  Both bases are handled as exact coefficient
pairs; the quadratic forms

    |r + s*zeta5|^2   = r^2 + s^2 - r*s*tau'
    |r + s*zeta5^3|^2 = r^2 + s^2 - r*s*tau

replace the Euclidean norm in coefficient coordinates.
"""

from __future__ import annotations

import math

import numpy as np

from .boxenum import (
    INT64_LIMIT,
    iter_coeff_chunks,
    plan_box,
    sign_root5_arrays,
)
from .errors import NotInPlane
from .golden import TAU, TAU_CONJ, GoldenInt, GoldenRat
from .icosian import ModuleTag, module_contains
from .linalg import Vec2, Vec3, as_rat, dot3, sub3, vec3
from .modelset import Containment, IcoPoint, ModelSetPatch, Window
from .planar import hull2d, point_vs_hull, polygon_area_doubled

_TAU_R = GoldenRat(TAU)
_TAU_CONJ_R = GoldenRat(TAU_CONJ)
_HALF = GoldenRat(1, 2)

SLICE_NORMAL: Vec3 = vec3(GoldenRat(TAU), 0, 1)
SLICE_NORMAL_STAR: Vec3 = vec3(GoldenRat(TAU_CONJ), 0, 1)


def height_of(v: Vec3) -> GoldenRat:
    """Exact height <v, (tau,0,1)> labelling the slice through v."""
    return dot3(v, SLICE_NORMAL)


def star_height_of(v: Vec3) -> GoldenRat:
    return dot3(v, SLICE_NORMAL_STAR)


class CycPoint:
    """Element alpha + beta*zeta5 with Q(tau) coefficients."""

    __slots__ = ("alpha", "beta")

    def __init__(self, alpha, beta):
        self.alpha = as_rat(alpha)
        self.beta = as_rat(beta)

    def __repr__(self):
        return f"CycPoint({self.alpha}, {self.beta})"

    def __eq__(self, other):
        if not isinstance(other, CycPoint):
            return NotImplemented
        return self.alpha == other.alpha and self.beta == other.beta

    def __hash__(self):
        return hash((self.alpha, self.beta))

    def __add__(self, other):
        if not isinstance(other, CycPoint):
            return NotImplemented
        return CycPoint(self.alpha + other.alpha, self.beta + other.beta)

    def __sub__(self, other):
        if not isinstance(other, CycPoint):
            return NotImplemented
        return CycPoint(self.alpha - other.alpha, self.beta - other.beta)

    def __neg__(self):
        return CycPoint(-self.alpha, -self.beta)

    def scaled(self, c) -> CycPoint:
        c = as_rat(c)
        return CycPoint(c * self.alpha, c * self.beta)

    def is_integral(self) -> bool:
        return self.alpha.is_integral() and self.beta.is_integral()

    def length_sq(self) -> GoldenRat:
        return (self.alpha * self.alpha + self.beta * self.beta
                - self.alpha * self.beta * _TAU_CONJ_R)

    def star5(self) -> Vec2:
        """Image under zeta5 -> zeta5^3, as coefficients in {1, zeta5^3}."""
        return (self.alpha.conj(), self.beta.conj())

    def coeffs(self) -> Vec2:
        return (self.alpha, self.beta)

    def embed(self) -> complex:
        z5 = complex(math.cos(2 * math.pi / 5), math.sin(2 * math.pi / 5))
        return self.alpha.embed() + self.beta.embed() * z5

    def sort_key(self):
        return (self.alpha.num.a, self.alpha.num.b, self.alpha.den,
                self.beta.num.a, self.beta.num.b, self.beta.den)


def star_length_sq(p: Vec2) -> GoldenRat:
    """Squared length of r + s*zeta5^3 from star-basis coefficients."""
    r, s = p
    return r * r + s * s - r * s * _TAU_R


def plane_embed(v: Vec3) -> CycPoint:
    """Isometry of the slicing plane onto C: (0,1,0) -> 1 and
    (1/2)(-1,-tau',tau) -> zeta5."""
    if height_of(v).sign() != 0:
        raise NotInPlane(f"{v} is not orthogonal to (tau,0,1)")
    return CycPoint(v[1] - _TAU_CONJ_R * v[0], -(v[0] + v[0]))


def plane_embed_inv(z: CycPoint) -> Vec3:
    b = z.beta
    return (-b * _HALF, z.alpha - b * _TAU_CONJ_R * _HALF, b * _TAU_R * _HALF)


def plane_embed_star(v: Vec3) -> Vec2:
    """Isometry of the starred plane onto C: (0,1,0) -> 1 and
    (1/2)(-1,-tau,tau') -> zeta5^3; output in {1, zeta5^3} coefficients."""
    if star_height_of(v).sign() != 0:
        raise NotInPlane(f"{v} is not orthogonal to (tau',0,1)")
    return (v[1] - _TAU_R * v[0], -(v[0] + v[0]))


def plane_embed_star_inv(p: Vec2) -> Vec3:
    r, s = p
    return (-s * _HALF, r - s * _TAU_R * _HALF, s * _TAU_CONJ_R * _HALF)


def slice_basis_check(tag: ModuleTag, box: int = 3) -> bool:
    """The plane module is Z[tau](0,1,0) + Z[tau](1/2)(-1,-tau',tau) for
    both underlying modules, and the embedding maps it onto the integral
    cyclotomic points bijectively (checked within a coefficient box)."""
    e1 = vec3(0, 1, 0)
    e2 = (GoldenRat(-1, 2), -_TAU_CONJ_R * _HALF, _TAU_R * _HALF)
    for base in (e1, e2):
        if not module_contains(base, tag):
            return False
        if height_of(base).sign() != 0:
            return False
        if star_height_of((base[0].conj(), base[1].conj(),
                           base[2].conj())).sign() != 0:
            return False
    seen = set()
    for pa in range(-box, box + 1):
        for pb in range(-box, box + 1):
            for qa in range(-box, box + 1):
                for qb in range(-box, box + 1):
                    r = GoldenRat(GoldenInt(pa, pb))
                    s = GoldenRat(GoldenInt(qa, qb))
                    v = tuple(r * a + s * b for a, b in zip(e1, e2))
                    z = plane_embed(v)
                    if not z.is_integral():
                        return False
                    if (z.alpha, z.beta) != (r, s):
                        return False
                    if plane_embed_inv(z) != v:
                        return False
                    seen.add((z.alpha, z.beta))
    return len(seen) == (2 * box + 1) ** 4


class SliceWindow:
    """Convex polygon in star-basis coefficients: the window of one slice."""

    def __init__(self, vertices: list[Vec2]):
        self.vertices = hull2d(vertices)
        self._orient = polygon_area_doubled(self.vertices).sign() \
            if len(self.vertices) >= 3 else 0

    def is_degenerate(self) -> bool:
        return len(self.vertices) < 3

    def contains(self, p: Vec2) -> Containment:
        if self.is_degenerate():
            if any(p == v for v in self.vertices):
                return Containment.BOUNDARY
            return (point_vs_hull(p, self.vertices)
                    if len(self.vertices) == 2 else Containment.OUTSIDE)
        if self._orient < 0:
            hull = list(reversed(self.vertices))
        else:
            hull = self.vertices
        return point_vs_hull(p, hull)

    def float_bbox(self, pad: float = 1e-9):
        c3 = math.cos(6 * math.pi / 5)
        s3 = math.sin(6 * math.pi / 5)
        xs, ys = [], []
        for r, s in self.vertices:
            rf, sf = r.embed(), s.embed()
            xs.append(rf + sf * c3)
            ys.append(sf * s3)
        width = max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
        eps = pad * width
        return ((min(xs) - eps, min(ys) - eps), (max(xs) + eps, max(ys) + eps))

    def edge_int_forms(self):
        """Exact edge orientation forms, cleared to GoldenInt pairs.

        For star coefficients (x, y) given as golden pairs, the point is
        interior iff every form sign matches the polygon orientation.
        """
        n = len(self.vertices)
        forms = []
        for i in range(n):
            v = self.vertices[i]
            w = self.vertices[(i + 1) % n]
            ex, ey = w[0] - v[0], w[1] - v[1]
            cx = -ey                       # coefficient of x
            cy = ex                        # coefficient of y
            c0 = ey * v[0] - ex * v[1]     # constant term
            den = 1
            for e in (cx, cy, c0):
                den = den * e.den // math.gcd(den, e.den)
            pairs = []
            for e in (cx, cy, c0):
                scaled = e * den
                pairs.append((scaled.num.a, scaled.num.b))
            forms.append(pairs)
        return forms, self._orient


def cross_section(window: Window, anchor_star: Vec3) -> SliceWindow:
    """Exact intersection of the shifted window with the starred slice
    plane through anchor_star, translated and mapped to coefficients."""
    if window.shift is None:
        raise ValueError("cross sections need a window with an exact shift")
    h = star_height_of(anchor_star)
    verts = [tuple(c + s for c, s in zip(v, window.shift))
             for v in window.vertices]
    levels = [star_height_of(v) - h for v in verts]
    pts: set[Vec3] = set()
    for i, j in window.edges:
        si, sj = levels[i].sign(), levels[j].sign()
        if si == 0:
            pts.add(verts[i])
        if sj == 0:
            pts.add(verts[j])
        if si * sj < 0:
            t = levels[i] / (levels[i] - levels[j])
            pts.add(tuple(a + t * (b - a) for a, b in zip(verts[i], verts[j])))
    rel = [sub3(p, anchor_star) for p in pts]
    return SliceWindow([plane_embed_star(p) for p in rel])


def slice_patch(patch: ModelSetPatch, lam: IcoPoint | int):
    """Points of the patch at the height of lam, translated through lam
    and embedded; together with the exact slice window.

    Degenerate cross sections yield empty slices rather than errors.
    """
    if isinstance(lam, int):
        lam = patch.point(lam)
    lam_coord = tuple(a + b for a, b in zip(patch.t, lam.value()))
    h = height_of(lam_coord)
    target = (h * 2)
    assert target.is_integral()
    key = (target.num.a, target.num.b)
    groups = patch.heights()
    idx = groups.get(key, [])
    out = []
    for i in idx:
        rel = sub3(patch.coords(i), lam_coord)
        z = plane_embed(rel)
        out.append(z)
    out.sort(key=CycPoint.sort_key)
    sw = cross_section(patch.window, lam.star())
    return out, sw


_C72 = math.cos(2 * math.pi / 5)
_S72 = math.sin(2 * math.pi / 5)
_C216 = math.cos(6 * math.pi / 5)
_S216 = math.sin(6 * math.pi / 5)
_TAU_F = (1 + 5 ** 0.5) / 2
_TAU_CONJ_F = (1 - 5 ** 0.5) / 2


def _cyclotomic_embedding() -> np.ndarray:
    # columns: coefficients (p1, q1, p2, q2) of alpha + beta*zeta5 with
    # alpha = p1 + q1 tau, beta = p2 + q2 tau; rows: physical (Re, Im)
    # then starred (Re, Im)
    return np.array([
        [1.0, _TAU_F, _C72, _TAU_F * _C72],
        [0.0, 0.0, _S72, _TAU_F * _S72],
        [1.0, _TAU_CONJ_F, _C216, _TAU_CONJ_F * _C216],
        [0.0, 0.0, _S216, _TAU_CONJ_F * _S216],
    ])


def _pair_mul(pa, pb, qa, qb):
    # (pa + pb tau)(qa + qb tau) with tau^2 = tau + 1
    return pa * qa + pb * qb, pa * qb + pb * qa + pb * qb


def cyclotomic_patch(window: SliceWindow, radius, *,
                     max_rows: int | None = None) -> list[CycPoint]:
    """All integral points z with |z| < radius and star image strictly
    inside the slice window; a degenerate window yields no points."""
    from fractions import Fraction
    if window.is_degenerate():
        return []
    radius = Fraction(radius)
    if radius <= 0:
        return []
    rf = float(radius)
    (ilo_x, ilo_y), (ihi_x, ihi_y) = window.float_bbox()
    lo = [-rf, -rf, ilo_x, ilo_y]
    hi = [rf, rf, ihi_x, ihi_y]
    emb = _cyclotomic_embedding()
    unimod, constraints, ranges = plan_box(emb, lo, hi)
    forms, orient = window.edge_int_forms()
    if orient == 0:
        return []

    rn, rd = radius.numerator, radius.denominator
    rhs_ball = rn * rn
    margin = 1e-6 * (1.0 + rf)
    r_keep2 = (rf + margin) ** 2

    mmax = np.array([max(abs(r.start), abs(r.stop)) + 1 for r in ranges])
    nmax = int((np.abs(unimod) @ mmax).max()) + 1
    qbound = 3 * (2 * nmax) ** 2 * (rd * rd)
    form_bound = 0
    for pairs in forms:
        m = sum(abs(a) + abs(b) for a, b in pairs) * 3 * nmax
        form_bound = max(form_bound, m)
    use_int64 = max((2 * qbound) ** 2, (3 * form_bound) ** 2) < INT64_LIMIT

    ut = unimod.T
    out: list[CycPoint] = []
    kwargs = {} if max_rows is None else {"max_rows": max_rows}
    for mchunk in iter_coeff_chunks(constraints, lo, hi, ranges, **kwargs):
        n = mchunk @ ut
        emb_pts = n @ emb.T
        mask = (emb_pts[:, 0] ** 2 + emb_pts[:, 1] ** 2) <= r_keep2
        mask &= (emb_pts[:, 2] >= ilo_x - margin) & (emb_pts[:, 2] <= ihi_x + margin)
        mask &= (emb_pts[:, 3] >= ilo_y - margin) & (emb_pts[:, 3] <= ihi_y + margin)
        if not mask.any():
            continue
        n = n[mask]
        if not use_int64:
            n = n.astype(object)
        p1, q1, p2, q2 = n[:, 0], n[:, 1], n[:, 2], n[:, 3]
        # exact |z|^2 = alpha^2 + beta^2 - alpha beta tau'
        aa, ab = _pair_mul(p1, q1, p1, q1)
        ba, bb = _pair_mul(p2, q2, p2, q2)
        ca, cb = _pair_mul(p1, q1, p2, q2)
        # tau' * (ca + cb tau) = (ca - cb) - ca tau
        fa = aa + ba - (ca - cb)
        fb = ab + bb + ca
        dp = rhs_ball - fa * (rd * rd)
        dq = -fb * (rd * rd)
        mask = sign_root5_arrays(2 * dp + dq, dq) > 0
        if not mask.any():
            continue
        n = n[mask]
        p1, q1, p2, q2 = n[:, 0], n[:, 1], n[:, 2], n[:, 3]
        # star coefficients: alpha' = (p1+q1) - q1 tau, beta' likewise
        xa, xb = p1 + q1, -q1
        ya, yb = p2 + q2, -q2
        alive = np.ones(len(n), dtype=bool)
        strict = np.ones(len(n), dtype=bool)
        for (cxa, cxb), (cya, cyb), (c0a, c0b) in forms:
            ta, tb = _pair_mul(cxa, cxb, xa, xb)
            ua, ub = _pair_mul(cya, cyb, ya, yb)
            ga = ta + ua + c0a
            gb = tb + ub + c0b
            s = sign_root5_arrays(2 * ga + gb, gb) * orient
            alive &= s >= 0
            strict &= s > 0
            if not alive.any():
                break
        keep = alive & strict
        for row in np.asarray(n[keep], dtype=object if not use_int64 else np.int64):
            out.append(CycPoint(GoldenRat(GoldenInt(int(row[0]), int(row[1]))),
                                GoldenRat(GoldenInt(int(row[2]), int(row[3])))))
    out.sort(key=CycPoint.sort_key)
    return out


def slice_heights_with_points(patch: ModelSetPatch):
    """Sorted list of (height_key, first_point_index, count) per slice."""
    groups = patch.heights()
    out = []
    for key, idx in groups.items():
        out.append((key, idx[0], len(idx)))
    out.sort(key=lambda kv: (abs(kv[0][0] + kv[0][1] * _TAU_F), kv[0]))
    return out
