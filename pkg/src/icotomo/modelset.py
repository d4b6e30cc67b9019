"""Windows, module points and finite patches of icosahedral model sets.

A patch collects the points alpha in t + L with star image inside a
window and within a ball, where L is the halved body- or face-centred
module.  Enumeration walks integer coefficient vectors of the rank-6
embedding lattice {(x, x*)} inside a box obtained from the inverse of
the 6x6 basis matrix; the box is float-derived (with padding), every
membership decision is exact integer arithmetic.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .boxenum import (
    INT64_LIMIT,
    iter_coeff_chunks,
    plan_box,
    sign_root5_arrays,
)
from .errors import (
    ApproximateShift,
    EmbeddingFailed,
    EmptyWindowInterior,
    NoInteriorPoint,
)
from .golden import (
    TAU,
    TAU_CONJ,
    GoldenInt,
    GoldenRat,
    golden_gcd,
)
from .icosian import ModuleTag, module_basis, module_contains, rotation_group
from .linalg import (
    Vec3,
    add3,
    as_rat,
    cross3,
    dot3,
    is_zero3,
    normsq3,
    scale3,
    star3,
    sub3,
    vec3,
)

_TAU_F = (1 + 5 ** 0.5) / 2
_TAU_CONJ_F = (1 - 5 ** 0.5) / 2
_TAU_SQ = GoldenInt(1, 1)        # tau^2
_TAU_CONJ_SQ = GoldenInt(2, -1)  # tau'^2 = 1/tau^2
_TAU_4 = GoldenInt(2, 3)         # tau^4


class Containment(Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


def _pairs_of_vec(v: Vec3, den: int):
    """Integer (a, b) pairs of den * v_j, requiring exact divisibility."""
    out = []
    for c in v:
        if den % c.den:
            raise ValueError("denominator mismatch")
        m = den // c.den
        out.append((c.num.a * m, c.num.b * m))
    return out


class Window:
    """Convex polytope window with exact vertices and an exact shift.

    The stored polytope is the base body; `shift` translates it in
    internal space.  Facets carry outward normals: the base body is
    {x : <n, x> <= c} for every facet (n, c).
    """

    def __init__(self, vertices: list[Vec3], shift: Vec3 | None = None,
                 float_shift: tuple[float, float, float] | None = None):
        if shift is not None and float_shift is not None:
            raise ValueError("give either an exact or a float shift")
        self.vertices = [tuple(as_rat(c) for c in v) for v in vertices]
        self.shift = (tuple(as_rat(c) for c in shift)
                      if shift is not None else None)
        self.float_shift = float_shift
        if self.shift is None and float_shift is None:
            self.shift = vec3(0, 0, 0)
        self.facets = self._find_facets()
        self.edges = self._find_edges()

    # -- construction ------------------------------------------------

    def _find_facets(self):
        verts = self.vertices
        n = len(verts)
        seen = {}
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    nrm = cross3(sub3(verts[j], verts[i]),
                                 sub3(verts[k], verts[i]))
                    if is_zero3(nrm):
                        continue
                    c = dot3(nrm, verts[i])
                    pos = neg = 0
                    for m, v in enumerate(verts):
                        s = (dot3(nrm, v) - c).sign()
                        if s > 0:
                            pos += 1
                        elif s < 0:
                            neg += 1
                        if pos and neg:
                            break
                    if pos and neg:
                        continue
                    if pos:  # orient outward
                        nrm, c = scale3(-1, nrm), -c
                    nrm, c = _normalize_facet(nrm, c)
                    if (nrm, c) not in seen:
                        tight = tuple(m for m, v in enumerate(verts)
                                      if dot3(nrm, v) == c)
                        seen[(nrm, c)] = tight
        return [(nrm, c, tight) for (nrm, c), tight in sorted(
            seen.items(), key=lambda kv: _facet_sort_key(kv[0]))]

    def _find_edges(self):
        from collections import Counter
        pair_count = Counter()
        for _, _, tight in self.facets:
            for a in range(len(tight)):
                for b in range(a + 1, len(tight)):
                    pair_count[(tight[a], tight[b])] += 1
        return sorted(p for p, cnt in pair_count.items() if cnt >= 2)

    # -- queries -----------------------------------------------------

    def has_interior(self) -> bool:
        if len(self.vertices) < 4 or not self.facets:
            return False
        c = self._vertex_mean()
        return all((off - dot3(nrm, c)).sign() > 0
                   for nrm, off, _ in self.facets)

    def _vertex_mean(self) -> Vec3:
        acc = vec3(0, 0, 0)
        for v in self.vertices:
            acc = add3(acc, v)
        return scale3(GoldenRat(1, len(self.vertices)), acc)

    def center_of_symmetry(self) -> Vec3 | None:
        """Exact symmetry centre of the shifted window, if there is one."""
        c = self._vertex_mean()
        vset = set(self.vertices)
        if all(sub3(scale3(2, c), v) in vset for v in self.vertices):
            if self.shift is None:
                return None
            return add3(c, self.shift)
        return None

    def contains(self, y: Vec3) -> Containment:
        """Exact classification of a Q(tau)^3 point against the shifted body."""
        if self.shift is not None:
            rel = sub3(y, self.shift)
            on_boundary = False
            for nrm, c, _ in self.facets:
                s = (c - dot3(nrm, rel)).sign()
                if s < 0:
                    return Containment.OUTSIDE
                if s == 0:
                    on_boundary = True
            return Containment.BOUNDARY if on_boundary else Containment.INTERIOR
        return self._contains_float_shift(y)

    def _contains_float_shift(self, y: Vec3) -> Containment:
        sx, sy, sz = self.float_shift
        rel = (y[0].embed() - sx, y[1].embed() - sy, y[2].embed() - sz)
        on_boundary = False
        for nrm, c, _ in self.facets:
            nf = tuple(e.embed() for e in nrm)
            val = c.embed() - (nf[0] * rel[0] + nf[1] * rel[1] + nf[2] * rel[2])
            tol = 1e-9 * (1.0 + abs(val))
            if val < -tol:
                return Containment.OUTSIDE
            if val <= tol:
                raise ApproximateShift(
                    "interval straddles the facet; shift is not exact")
        return Containment.INTERIOR

    def float_bbox(self, pad: float = 1e-9):
        lo = [min(v[i].embed() for v in self.vertices) for i in range(3)]
        hi = [max(v[i].embed() for v in self.vertices) for i in range(3)]
        if self.shift is not None:
            sf = [c.embed() for c in self.shift]
        else:
            sf = list(self.float_shift)
        width = max(h - l for l, h in zip(lo, hi))
        eps = pad * (1.0 + width)
        return ([l + s - eps for l, s in zip(lo, sf)],
                [h + s + eps for h, s in zip(hi, sf)])

    def translated(self, shift: Vec3) -> Window:
        return Window(self.vertices, shift=shift)

    def facet_int_forms(self):
        """Per facet: shifted inequality cleared to GoldenInt pairs.

        A doubled internal point 2y = (A' + B' tau) componentwise lies
        inside facet k iff  sum_j (na+nb*tau)(A'_j+B'_j*tau) <= (ra+rb*tau).
        """
        if self.shift is None:
            raise ApproximateShift("integer facet forms need an exact shift")
        forms = []
        for nrm, c, _ in self.facets:
            rhs = c + dot3(nrm, self.shift)
            den = np.lcm.reduce([e.den for e in nrm] + [rhs.den])
            den = int(den)
            coef = _pairs_of_vec(nrm, den)
            r = rhs * (2 * den)
            assert r.den == 1
            forms.append((coef, (r.num.a, r.num.b)))
        return forms


def _normalize_facet(nrm: Vec3, c: GoldenRat):
    den = 1
    for e in list(nrm) + [c]:
        den = den * e.den // np.gcd(den, e.den)
    den = int(den)
    ints = [x.num * (den // x.den) for x in list(nrm) + [c]]
    g = None
    for x in ints:
        if x:
            g = x if g is None else golden_gcd(g, x)
    ints = [x.divide_exact(g) for x in ints]
    # make the content division canonical: scale back so the normal keeps
    # outward orientation (the gcd is unique only up to a unit)
    check = ints[:3]
    orig_sign_ref = next(e for e in nrm if e)
    new_ref = next(e for e in check if e)
    # orientation bookkeeping: recover the positive multiplier lambda with
    # nrm = lambda * ints; lambda = nrm_ref / ints_ref must be positive
    lam = orig_sign_ref / GoldenRat(new_ref)
    if lam.sign() < 0:
        ints = [-x for x in ints]
    return (GoldenRat(ints[0]), GoldenRat(ints[1]), GoldenRat(ints[2])), \
        GoldenRat(ints[3])


def _facet_sort_key(key):
    nrm, c = key
    return tuple((e.num.a, e.num.b, e.den) for e in (*nrm, c))


@lru_cache(maxsize=4)
def _window_vertex_orbit():
    v = vec3(GoldenRat(TAU_CONJ), 0, 1)
    from .linalg import matvec3
    return tuple(sorted({matvec3(m, v) for m in rotation_group("Yhstar")},
                        key=lambda u: tuple((e.num.a, e.num.b, e.den)
                                            for e in u)))


def icosahedron_window(shift=(Fraction(1, 1000),) * 3) -> Window:
    """The regular icosahedron window: the 12-point rotation orbit of
    (tau', 0, 1), with the standard small generic shift."""
    vertices = list(_window_vertex_orbit())
    return Window(vertices, shift=vec3(*shift))


# -- module points and patches ----------------------------------------

_KIND_TO_TAG = {"B": ModuleTag.IM_ICOSIAN, "F": ModuleTag.ICOSIAN0}


class IcoPoint:
    """Point of Im(I) or I_0 stored as a doubled numerator vector."""

    __slots__ = ("num", "tag")

    def __init__(self, num, tag: ModuleTag, check: bool = False):
        self.num = tuple(num)
        self.tag = tag
        if check and not module_contains(self.num, tag.base()):
            raise ValueError(f"{self.num} is not in {tag.base()}")

    @classmethod
    def from_value(cls, v: Vec3, tag: ModuleTag, check: bool = True):
        num = []
        for c in v:
            d = as_rat(c) * 2
            if not d.is_integral():
                raise ValueError(f"{v} has no doubled integral coordinates")
            num.append(d.to_golden_int())
        return cls(num, tag, check=check)

    def value(self) -> Vec3:
        return tuple(GoldenRat(n, 2) for n in self.num)

    def star(self) -> Vec3:
        return star3(self.value())

    def key(self):
        return tuple((n.a, n.b) for n in self.num)

    def __eq__(self, other):
        if not isinstance(other, IcoPoint):
            return NotImplemented
        return self.num == other.num and self.tag == other.tag

    def __hash__(self):
        return hash((self.num, self.tag))

    def __repr__(self):
        return f"IcoPoint({self.num}, {self.tag})"

    def __add__(self, other):
        if not isinstance(other, IcoPoint) or other.tag != self.tag:
            return NotImplemented
        return IcoPoint(tuple(a + b for a, b in zip(self.num, other.num)),
                        self.tag)

    def __sub__(self, other):
        if not isinstance(other, IcoPoint) or other.tag != self.tag:
            return NotImplemented
        return IcoPoint(tuple(a - b for a, b in zip(self.num, other.num)),
                        self.tag)

    def scaled(self, c: GoldenInt) -> IcoPoint:
        return IcoPoint(tuple(c * n for n in self.num), self.tag)


class ModelSetPatch:
    """Finite patch of a model set: exact points, their defining data and
    the genericity record of the enumeration."""

    def __init__(self, kind: str, window: Window, radius, center: Vec3,
                 t: Vec3, coeffs: np.ndarray, boundary_hits: int = 0):
        self.kind = kind
        self.tag = _KIND_TO_TAG[kind]
        self.window = window
        self.radius = Fraction(radius)
        self.center = center
        self.t = t
        self.coeffs = coeffs
        self.boundary_hits = boundary_hits
        self._points: list[IcoPoint] | None = None
        self._key_set = None

    @property
    def size(self) -> int:
        return len(self.coeffs)

    def point(self, i: int) -> IcoPoint:
        a, b = _doubled_coords_of_row(self.tag, self.coeffs[i])
        return IcoPoint(tuple(GoldenInt(int(x), int(y))
                              for x, y in zip(a, b)), self.tag)

    @property
    def points(self) -> list[IcoPoint]:
        if self._points is None:
            A, B = _doubled_coords(self.tag, self.coeffs)
            self._points = [
                IcoPoint((GoldenInt(int(A[i, 0]), int(B[i, 0])),
                          GoldenInt(int(A[i, 1]), int(B[i, 1])),
                          GoldenInt(int(A[i, 2]), int(B[i, 2]))), self.tag)
                for i in range(len(self.coeffs))]
        return self._points

    def coords(self, i: int) -> Vec3:
        return add3(self.t, self.point(i).value())

    def iter_coords(self):
        for p in self.points:
            yield add3(self.t, p.value())

    def doubled_coords(self):
        """Cached (A, B) int64 arrays with 2x_j = A[:, j] + B[:, j] tau."""
        if getattr(self, "_doubled", None) is None:
            self._doubled = _doubled_coords(self.tag, self.coeffs)
        return self._doubled

    def key_set(self) -> frozenset:
        """Doubled-numerator integer keys of the L-parts of all points."""
        if self._key_set is None:
            A, B = _doubled_coords(self.tag, self.coeffs)
            self._key_set = frozenset(
                ((int(A[i, 0]), int(B[i, 0])), (int(A[i, 1]), int(B[i, 1])),
                 (int(A[i, 2]), int(B[i, 2]))) for i in range(len(A)))
        return self._key_set

    def contains_coord(self, v: Vec3) -> bool:
        rel = sub3(v, self.t)
        key = []
        for c in rel:
            d = c * 2
            if not d.is_integral():
                return False
            key.append((d.num.a, d.num.b))
        return tuple(key) in self.key_set()

    def heights(self):
        """Group point indices by the exact height <x, (tau,0,1)>.

        Returns a dict mapping doubled height pairs (p, q), meaning
        (p + q*tau)/2, to sorted index lists.
        """
        A, B = _doubled_coords(self.tag, self.coeffs)
        # 2<x,(tau,0,1)> = tau*(A1+B1 tau) + (A3+B3 tau)
        #               = (B1 + A3) + (A1 + B1 + B3) tau
        hp = B[:, 0] + A[:, 2]
        hq = A[:, 0] + B[:, 0] + B[:, 2]
        groups: dict[tuple[int, int], list[int]] = {}
        for i in range(len(A)):
            groups.setdefault((int(hp[i]), int(hq[i])), []).append(i)
        return groups

    def height_of(self, i: int) -> GoldenRat:
        v = self.coords(i)
        return v[0] * GoldenRat(TAU) + v[2]


def lattice_int_basis(tag: ModuleTag):
    """Doubled physical coordinates of the 6 lattice basis vectors.

    Column i < 3 is the module basis vector B_i, column 3 + i is tau*B_i;
    the patch point for coefficients n is x = (1/2) sum n_i col_i.
    Returns (PA, PB) integer arrays with 2x_j = sum n_i (PA[i,j]+PB[i,j]tau).
    """
    basis = module_basis(tag.base())
    pa = np.zeros((6, 3), dtype=np.int64)
    pb = np.zeros((6, 3), dtype=np.int64)
    for i, vec in enumerate(basis):
        for j, c in enumerate(vec):
            assert c.den == 1
            pa[i, j], pb[i, j] = c.num.a, c.num.b
            # tau * (a + b tau) = b + (a+b) tau
            pa[i + 3, j], pb[i + 3, j] = c.num.b, c.num.a + c.num.b
    return pa, pb


def _doubled_coords(tag: ModuleTag, coeffs: np.ndarray):
    pa, pb = lattice_int_basis(tag)
    if len(coeffs) == 0:
        return np.zeros((0, 3), dtype=np.int64), np.zeros((0, 3), dtype=np.int64)
    return coeffs @ pa, coeffs @ pb


def _doubled_coords_of_row(tag: ModuleTag, row):
    pa, pb = lattice_int_basis(tag)
    row = np.asarray(row, dtype=np.int64)
    return row @ pa, row @ pb


def _embedding_matrix(tag: ModuleTag) -> np.ndarray:
    pa, pb = lattice_int_basis(tag)
    m = np.zeros((6, 6))
    for i in range(6):
        for j in range(3):
            m[j, i] = (pa[i, j] + pb[i, j] * _TAU_F) / 2
            m[3 + j, i] = (pa[i, j] + pb[i, j] * _TAU_CONJ_F) / 2
    return m


def _as_golden_pair(x: GoldenRat, mul: int):
    v = x * mul
    assert v.den == 1
    return v.num.a, v.num.b


def enumerate_patch(kind: str, window: Window, radius, center: Vec3 | None = None,
                    t: Vec3 | None = None, *, keep_points: bool = True,
                    on_chunk=None) -> ModelSetPatch:
    """Enumerate the patch of the model set within an open ball.

    Points alpha in t + L with (alpha - t)* strictly inside the shifted
    window and ||alpha - center|| < radius.  Stars that hit the window
    boundary exactly are excluded and counted in `boundary_hits`.
    """
    if kind not in _KIND_TO_TAG:
        raise ValueError(f"model set kind must be 'B' or 'F', got {kind!r}")
    if not window.has_interior():
        raise EmptyWindowInterior("window has no interior")
    tag = _KIND_TO_TAG[kind]
    center = vec3(0, 0, 0) if center is None else tuple(as_rat(c) for c in center)
    t = vec3(0, 0, 0) if t is None else tuple(as_rat(c) for c in t)
    radius = Fraction(radius)
    if radius <= 0:
        raise ValueError("radius must be positive")

    # ball for the L-part: ||x - (center - t)|| < radius
    ball_c = sub3(center, t)
    rf = float(radius)
    cf = [c.embed() for c in ball_c]
    lo_hi_int = window.float_bbox()
    lo6 = cf[0] - rf, cf[1] - rf, cf[2] - rf
    lo6 = list(lo6) + list(lo_hi_int[0])
    hi6 = [cf[0] + rf, cf[1] + rf, cf[2] + rf] + list(lo_hi_int[1])
    unimod, constraints, ranges = plan_box(_embedding_matrix(tag), lo6, hi6)

    pa, pb = lattice_int_basis(tag)
    facet_forms = window.facet_int_forms()

    # exact ball test constants: common denominator d for center coords,
    # and the radius as rn/rd
    d = 1
    for c in ball_c:
        d = d * c.den // np.gcd(d, c.den)
    d = int(d)
    cpairs = _pairs_of_vec(ball_c, d)
    rn, rd = radius.numerator, radius.denominator
    rhs_ball = (2 * d * rn) ** 2

    margin = 1e-6 * (1.0 + rf)
    r_keep2 = (rf + margin) ** 2
    int_lo = np.array(lo_hi_int[0])
    int_hi = np.array(lo_hi_int[1])

    # conservative int64 bound check for the exact stages
    mmax = np.array([max(abs(r.start), abs(r.stop)) + 1 for r in ranges])
    nmax = int((np.abs(unimod) @ mmax).max())
    coord_bound = nmax * int(np.abs(pa).sum() + np.abs(pb).sum())
    ball_term = d * coord_bound + 2 * max(
        (abs(a) + abs(b) for a, b in cpairs), default=0)
    ball_bound = max(3 * 2 * ball_term ** 2, rhs_ball) * (rd ** 2)
    sign_bound = (2 * ball_bound) ** 2
    facet_bound = 0
    for coef, rhs in facet_forms:
        m = sum(3 * (abs(a) + abs(b)) * coord_bound for a, b in coef) \
            + abs(rhs[0]) + abs(rhs[1])
        facet_bound = max(facet_bound, (3 * m) ** 2)
    use_int64 = max(sign_bound, facet_bound) < INT64_LIMIT

    kept_rows = []
    boundary_hits = 0
    ut = unimod.T
    upa = ut @ pa
    upb = ut @ pb
    for mchunk in iter_coeff_chunks(constraints, lo6, hi6, ranges):
        A = mchunk @ upa
        B = mchunk @ upb
        # float prefilter, reject-only with margin
        xf = (A + B * _TAU_F) * 0.5
        d2 = ((xf[:, 0] - cf[0]) ** 2 + (xf[:, 1] - cf[1]) ** 2
              + (xf[:, 2] - cf[2]) ** 2)
        mask = d2 <= r_keep2
        if not mask.any():
            continue
        Ai = A + B
        Bi = -B
        yf = (Ai + Bi * _TAU_F) * 0.5
        for j in range(3):
            mask &= (yf[:, j] >= int_lo[j] - margin) \
                & (yf[:, j] <= int_hi[j] + margin)
        if not mask.any():
            continue
        mchunk, A, B = mchunk[mask], A[mask], B[mask]
        Ai, Bi = Ai[mask], Bi[mask]
        if not use_int64:
            A = A.astype(object)
            B = B.astype(object)
            Ai = Ai.astype(object)
            Bi = Bi.astype(object)

        # exact open-ball test
        p_acc = np.zeros(len(A), dtype=A.dtype)
        q_acc = np.zeros(len(A), dtype=A.dtype)
        for j in range(3):
            e = d * A[:, j] - 2 * cpairs[j][0]
            f = d * B[:, j] - 2 * cpairs[j][1]
            p_acc = p_acc + e * e + f * f
            q_acc = q_acc + 2 * e * f + f * f
        # sign of rhs - (p + q tau), as integers: rd^2(p+q tau) < rhs_ball
        pdiff = rhs_ball - p_acc * (rd * rd)
        qdiff = -q_acc * (rd * rd)
        mask = sign_root5_arrays(2 * pdiff + qdiff, qdiff) > 0
        if not mask.any():
            continue
        mchunk, Ai, Bi = mchunk[mask], Ai[mask], Bi[mask]

        # exact facet tests on the doubled internal coordinates
        verdict = np.ones(len(mchunk), dtype=np.int8)  # 1 interior, 0 boundary
        alive = np.ones(len(mchunk), dtype=bool)
        for coef, rhs in facet_forms:
            gp = np.full(len(mchunk), rhs[0], dtype=Ai.dtype)
            gq = np.full(len(mchunk), rhs[1], dtype=Ai.dtype)
            for j in range(3):
                na, nb = coef[j]
                gp = gp - (na * Ai[:, j] + nb * Bi[:, j])
                gq = gq - (na * Bi[:, j] + nb * Ai[:, j] + nb * Bi[:, j])
            s = sign_root5_arrays(2 * gp + gq, gq)
            alive &= s >= 0
            verdict[s == 0] = 0
            if not alive.any():
                break
        interior = alive & (verdict == 1)
        boundary_hits += int((alive & (verdict == 0)).sum())
        if interior.any():
            rows = np.asarray(mchunk[interior], dtype=np.int64) @ ut
            if on_chunk is not None:
                on_chunk(rows, Ai[interior], Bi[interior])
            if keep_points:
                kept_rows.append(rows)

    if kept_rows:
        coeffs = np.vstack(kept_rows)
        order = np.lexsort(coeffs.T[::-1])
        coeffs = coeffs[order]
    else:
        coeffs = np.zeros((0, 6), dtype=np.int64)
    return ModelSetPatch(kind, window, radius, center, t, coeffs,
                         boundary_hits=boundary_hits)


def point_in_model_set(v: Vec3, kind: str, window: Window,
                       t: Vec3 | None = None) -> bool:
    """Exact single-point membership: v in t + L and (v - t)* inside."""
    t = vec3(0, 0, 0) if t is None else t
    rel = sub3(v, t)
    tag = _KIND_TO_TAG[kind]
    if not module_contains(rel, tag):
        return False
    return window.contains(star3(rel)) is Containment.INTERIOR


# -- directions --------------------------------------------------------

def canonical_direction3(v: Vec3) -> tuple[GoldenInt, GoldenInt, GoldenInt]:
    """Canonical primitive representative of the parallel class of v.

    Clears denominators, divides by the Z[tau] content, fixes the unit
    by forcing ||w||^2 / ||w*||^2 into [1, tau^4), then makes the first
    nonzero coordinate positive.
    """
    coords = [as_rat(c) for c in v]
    if not any(coords):
        raise ValueError("zero vector has no direction")
    den = 1
    for c in coords:
        den = den * c.den // np.gcd(den, c.den)
    w = [c.num * (int(den) // c.den) for c in coords]
    g = None
    for c in w:
        if c:
            g = c if g is None else golden_gcd(g, c)
    w = [c.divide_exact(g) for c in w]
    num = sum((c * c for c in w), GoldenInt(0))
    den_g = sum((c.conj() * c.conj() for c in w), GoldenInt(0))
    tau_inv = GoldenInt(-1, 1)
    guard = 0
    while (num - den_g).sign() < 0:
        w = [TAU * c for c in w]
        num, den_g = _TAU_SQ * num, _TAU_CONJ_SQ * den_g
        guard += 1
        assert guard < 10_000
    while (num - _TAU_4 * den_g).sign() >= 0:
        w = [tau_inv * c for c in w]
        num, den_g = _TAU_CONJ_SQ * num, _TAU_SQ * den_g
        guard += 1
        assert guard < 10_000
    first = next(c for c in w if c)
    if first.sign() < 0:
        w = [-c for c in w]
    return tuple(w)


def is_L_direction(v: Vec3, tag: ModuleTag):
    """Canonical primitive representative if some Q(tau) multiple of v
    lies in the module (always true for nonzero Q(tau)^3 input)."""
    rep = canonical_direction3(v)
    assert module_contains(rep, tag), "integral vectors lie in both modules"
    return rep


# -- contraction and embedding toolkit ---------------------------------

def star_contraction_pair(alpha: Vec3):
    """Exact pair (||(tau a)*||^2, ||a*||^2 / tau^2); the two agree."""
    from .golden import TAU_INV_SQ
    scaled = scale3(GoldenRat(TAU), alpha)
    return normsq3(star3(scaled)), TAU_INV_SQ * normsq3(star3(alpha))


def find_interior_anchor(window: Window, tag: ModuleTag,
                         search_radius: int = 3) -> IcoPoint:
    """Module point whose star lies strictly inside the shifted window."""
    zero = IcoPoint((GoldenInt(0), GoldenInt(0), GoldenInt(0)), tag)
    if window.contains(zero.star()) is Containment.INTERIOR:
        return zero
    basis = module_basis(tag.base())
    half = GoldenRat(1, 2)
    import itertools
    for radius in range(1, search_radius + 1):
        for coeff in itertools.product(range(-radius, radius + 1), repeat=6):
            if max(abs(c) for c in coeff) != radius:
                continue
            acc = vec3(0, 0, 0)
            for i in range(3):
                c = GoldenRat(GoldenInt(coeff[i], coeff[3 + i]))
                acc = add3(acc, scale3(c * half, basis[i]))
            if window.contains(star3(acc)) is Containment.INTERIOR:
                return IcoPoint.from_value(acc, tag, check=False)
    raise NoInteriorPoint(
        f"no anchor with interior star within radius {search_radius}")


def embed_finite_set(points: list[Vec3], window: Window, tag: ModuleTag,
                     max_power: int = 80):
    """Expansive homothety x -> tau^k x + a0 carrying a finite subset of
    the module into the model set; returns (k, anchor, images)."""
    for p in points:
        if not module_contains(p, tag):
            raise EmbeddingFailed(f"{p} is not a module point")
    anchor = find_interior_anchor(window, tag)
    a0 = anchor.value()
    a0_star = star3(a0)
    stars = [star3(p) for p in points]
    contract = GoldenRat(TAU_CONJ)
    factor = GoldenRat(1)
    for k in range(max_power + 1):
        if all(window.contains(add3(scale3(factor, s), a0_star))
               is Containment.INTERIOR for s in stars):
            lam = GoldenRat(TAU) ** k
            images = [add3(scale3(lam, p), a0) for p in points]
            return k, anchor, images
        factor = factor * contract
    raise EmbeddingFailed(f"no contraction power up to {max_power} fits")
