"""Convex subsets of patches and slices, and uniqueness experiments.

A finite C inside a point set S is a convex subset when conv(C) catches
no further point of S.  Planar decisions run entirely on exact hulls;
spatial decisions use float geometry only to propose certificates
(separating functionals or containing simplices) that are then verified
with exact arithmetic, with an exact feasibility solver as the last
resort.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .boxenum import sign_root5_arrays
from .errors import HullTouchesPatchBoundary
from .golden import TAU, GoldenInt, GoldenRat
from .icosian import ModuleTag
from .linalg import Vec3, as_rat, dot3, normsq3, solve_linear, sub3, vec3
from .modelset import Containment, ModelSetPatch
from .planar import hull2d, point_vs_hull
from .slices import CycPoint, plane_embed, plane_embed_inv
from .xrays import Direction, grid, same_xrays, xray

TAU_R = GoldenRat(TAU)


# -- distinguished directions -------------------------------------------

def dense_direction_elements() -> list[CycPoint]:
    """The four cyclotomic elements whose directions determine convex
    subsets of the plane sets and give densely occupied lines."""
    one = GoldenRat(1)
    return [
        CycPoint(GoldenRat(GoldenInt(1, 1)), one),        # (1+tau) + z5
        CycPoint(GoldenRat(GoldenInt(-1, 1)), one),       # (tau-1) + z5
        CycPoint(GoldenRat(GoldenInt(0, -1)), one),       # -tau + z5
        CycPoint(GoldenRat(GoldenInt(0, 2)), -one),       # 2tau - z5
    ]


def dense_directions_2d() -> list[Direction]:
    return [Direction.from_cyc(o) for o in dense_direction_elements()]


def dense_directions_3d(tag: ModuleTag = ModuleTag.IM_ICOSIAN) -> list[Direction]:
    """Preimages of the planar direction set inside the slicing plane."""
    return [Direction.from_vector(plane_embed_inv(o), tag)
            for o in dense_direction_elements()]


def unit_determinant(o: CycPoint, oo: CycPoint):
    """Coefficient determinant of two integral cyclotomic elements and
    whether it is a unit of Z[tau]."""
    det = (o.alpha * oo.beta - o.beta * oo.alpha)
    if not det.is_integral():
        raise ValueError("elements must be integral")
    d = det.to_golden_int()
    return d, d.is_unit()


def grid_integrality(points, directions) -> bool:
    """Grids of integral point sets stay integral when some direction
    pair has a unit determinant."""
    g = grid(points, directions)
    return all(isinstance(p, CycPoint) and p.is_integral() for p in g)


# -- convex subset decisions --------------------------------------------

def _check_region(c_points, region):
    if region is None:
        return
    center, radius = region
    r2 = GoldenRat(GoldenInt(Fraction(radius).numerator ** 2),
                   Fraction(radius).denominator ** 2)
    for p in c_points:
        d = normsq3(sub3(p, center)) if not isinstance(p, CycPoint) \
            else (p - center).length_sq()
        if (d - r2).sign() >= 0:
            raise HullTouchesPatchBoundary(
                "convex subset reaches the enumerated boundary")


def is_convex_subset_2d(c_points, s_points, region=None) -> bool:
    cset = set(c_points)
    if not cset <= set(s_points):
        raise ValueError("C must be a subset of S")
    if not cset:
        return True
    _check_region(cset, region)
    hull = hull2d([p.coeffs() for p in cset])
    for s in s_points:
        if s in cset:
            continue
        if point_vs_hull(s.coeffs(), hull) is not Containment.OUTSIDE:
            return False
    return True


class _EchelonBasis:
    """Fully reduced exact basis of a subspace of Q(tau)^3."""

    def __init__(self):
        self.rows: list[Vec3] = []
        self.pivots: list[int] = []

    def reduce(self, v: Vec3) -> Vec3:
        for row, piv in zip(self.rows, self.pivots):
            if v[piv]:
                f = v[piv]
                v = tuple(a - f * b for a, b in zip(v, row))
        return v

    def add(self, v: Vec3) -> bool:
        v = self.reduce(v)
        piv = next((i for i in range(3) if v[i]), None)
        if piv is None:
            return False
        v = tuple(a / v[piv] for a in v)
        for i, row in enumerate(self.rows):
            if row[piv]:
                f = row[piv]
                self.rows[i] = tuple(a - f * b for a, b in zip(row, v))
        self.rows.append(v)
        self.pivots.append(piv)
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)


def _barycentric_in_simplex(s: Vec3, verts: list[Vec3]):
    """Exact inclusive membership of s in the simplex spanned by verts
    (4 points); None when the simplex is degenerate."""
    rows = [[verts[j][i] for j in range(4)] for i in range(3)]
    rows.append([GoldenRat(1)] * 4)
    rhs = [s[0], s[1], s[2], GoldenRat(1)]
    sol = solve_linear(rows, rhs)
    if sol is None:
        return None
    return all(lam.sign() >= 0 for lam in sol)


def _feasible_combination(s, cols) -> bool:
    """Exact phase-1 simplex: is s a convex combination of cols?

    Columns and target are coordinate tuples extended with a final 1 for
    the affine constraint; Bland's rule guarantees termination.
    """
    m = len(s)
    n = len(cols)
    one = GoldenRat(1)
    zero = GoldenRat(0)
    a = [[as_rat(cols[j][i]) for j in range(n)] for i in range(m)]
    b = [as_rat(s[i]) for i in range(m)]
    for i in range(m):
        if b[i].sign() < 0:
            b[i] = -b[i]
            a[i] = [-x for x in a[i]]
    # artificial columns n..n+m-1 form the starting basis
    tab = [a[i] + [one if k == i else zero for k in range(m)] + [b[i]]
           for i in range(m)]
    basis = [n + i for i in range(m)]
    total = n + m
    guard = 0
    while True:
        guard += 1
        if guard > 20_000:
            raise ArithmeticError("simplex did not terminate")
        enter = None
        for j in range(total):
            rc = zero
            for i in range(m):
                if basis[i] >= n:
                    rc = rc - tab[i][j]
            if j >= n:
                rc = rc + one
            if rc.sign() < 0:
                enter = j
                break
        if enter is None:
            obj = zero
            for i in range(m):
                if basis[i] >= n:
                    obj = obj + tab[i][total]
            return obj.sign() == 0
        leave = None
        best = None
        for i in range(m):
            if tab[i][enter].sign() > 0:
                ratio = tab[i][total] / tab[i][enter]
                if best is None or ratio < best or \
                        (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return False  # unbounded phase-1 cannot happen; treat as infeasible
        pv = tab[leave][enter]
        tab[leave] = [x / pv for x in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter].sign() != 0:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
        basis[leave] = enter


class HullOracle3D:
    """Inclusive point-in-convex-hull queries with exact decisions.

    Float hulls and triangulations only nominate certificates; every
    accept/reject is verified with golden-ring arithmetic.
    """

    def __init__(self, points: list[Vec3]):
        self.points = list(points)
        self.basis = _EchelonBasis()
        self.base = self.points[0]
        for p in self.points[1:]:
            if self.basis.rank == 3:
                break
            self.basis.add(sub3(p, self.base))
        self._hull = None
        self._delaunay = None
        self._facet_max: dict[int, tuple] = {}
        if self.basis.rank == 3:
            from scipy.spatial import ConvexHull
            self._floats = np.array([[c.embed() for c in p]
                                     for p in self.points])
            self._hull = ConvexHull(self._floats)

    def contains(self, s: Vec3) -> bool:
        if self.basis.rank < 3:
            return self._contains_degenerate(s)
        eqs = self._hull.equations
        vals = eqs[:, :3] @ np.array([c.embed() for c in s]) + eqs[:, 3]
        worst = int(np.argmax(vals))
        scale = 1.0 + float(np.abs(vals).max())
        if vals[worst] > 1e-9 * scale:
            order = np.argsort(-vals)
            for fi in order[:4]:
                if vals[fi] <= 0:
                    break
                if self._certify_outside(int(fi), s):
                    return False
        if self._certify_inside(s):
            return True
        if self._certify_outside_search(s):
            return False
        cols = [p + (GoldenRat(1),) for p in self.points]
        return _feasible_combination(s + (GoldenRat(1),), cols)

    def _facet_data(self, fi: int):
        if fi not in self._facet_max:
            eq = self._hull.equations[fi]
            n = vec3(*(Fraction(float(x)).limit_denominator(10 ** 6)
                       for x in eq[:3]))
            best = None
            for p in self.points:
                v = dot3(n, p)
                if best is None or v > best:
                    best = v
            self._facet_max[fi] = (n, best)
        return self._facet_max[fi]

    def _certify_outside(self, fi: int, s: Vec3) -> bool:
        n, best = self._facet_data(fi)
        return dot3(n, s) > best

    def _certify_outside_search(self, s: Vec3) -> bool:
        for fi in range(len(self._hull.equations)):
            if self._certify_outside(fi, s):
                return True
        return False

    def _certify_inside(self, s: Vec3) -> bool:
        if self._delaunay is None:
            from scipy.spatial import Delaunay
            self._delaunay = Delaunay(self._floats)
        sf = np.array([c.embed() for c in s])
        si = int(self._delaunay.find_simplex(sf))
        if si >= 0:
            verts = [self.points[i] for i in self._delaunay.simplices[si]]
            got = _barycentric_in_simplex(s, verts)
            if got:
                return True
        return False

    def _contains_degenerate(self, s: Vec3) -> bool:
        rel = self.basis.reduce(sub3(s, self.base))
        if any(rel):
            return False  # not even in the affine span
        rank = self.basis.rank
        if rank == 0:
            return s == self.base
        piv = self.basis.pivots
        if rank == 1:
            ts = sorted(sub3(p, self.base)[piv[0]] / self.basis.rows[0][piv[0]]
                        for p in self.points)
            t = sub3(s, self.base)[piv[0]] / self.basis.rows[0][piv[0]]
            return ts[0] <= t <= ts[-1]
        proj = [(sub3(p, self.base)[piv[0]], sub3(p, self.base)[piv[1]])
                for p in self.points]
        hull = hull2d(proj)
        q = (sub3(s, self.base)[piv[0]], sub3(s, self.base)[piv[1]])
        return point_vs_hull(q, hull) is not Containment.OUTSIDE


def is_convex_subset_3d(c_points, s_points, region=None) -> bool:
    ckeys = {tuple(p) for p in c_points}
    if not c_points:
        return True
    _check_region(c_points, region)
    oracle = HullOracle3D(list(c_points))
    for s in s_points:
        if tuple(s) in ckeys:
            continue
        if oracle.contains(s):
            return False
    return True


def is_convex_subset(c_points, s_points, region=None) -> bool:
    c_points = list(c_points)
    if c_points and isinstance(c_points[0], CycPoint):
        return is_convex_subset_2d(c_points, s_points, region)
    return is_convex_subset_3d(c_points, s_points, region)


def is_h_convex(c_coords, patch: ModelSetPatch) -> bool:
    """True when every slice of C is a convex subset of the patch slice."""
    groups = patch.heights()
    by_height: dict = {}
    for p in c_coords:
        h = (p[0] * TAU_R + p[2]) * 2
        if not h.is_integral():
            raise ValueError("point is not on a module slice")
        by_height.setdefault((h.num.a, h.num.b), []).append(p)
    for key, cpts in by_height.items():
        idx = groups.get(key)
        if idx is None:
            return False
        anchor = cpts[0]
        cz = [plane_embed(sub3(p, anchor)) for p in cpts]
        sz = [plane_embed(sub3(patch.coords(i), anchor)) for i in idx]
        if not is_convex_subset_2d(cz, sz):
            return False
    return True


# -- random convex samples and signatures --------------------------------

def _rand_fraction(rng, lo: float, hi: float, den: int = 997) -> Fraction:
    return Fraction(rng.randint(int(lo * den), int(hi * den)), den)


def sample_convex_subsets_2d(slice_points: list[CycPoint], samples: int,
                             rng, max_radius: float = 6.0):
    """Random exact disks (optionally cut by a half plane) intersected
    with the slice; deduplicated, automatically convex subsets."""
    out = []
    seen = set()
    pts = list(slice_points)
    guard = 0
    while len(out) < samples and guard < samples * 30:
        guard += 1
        anchor = pts[rng.randrange(len(pts))]
        cx = anchor.alpha + GoldenRat.from_fraction(_rand_fraction(rng, -1, 1))
        cy = anchor.beta + GoldenRat.from_fraction(_rand_fraction(rng, -1, 1))
        center = CycPoint(cx, cy)
        r = _rand_fraction(rng, 0.4, max_radius)
        r2 = GoldenRat.from_fraction(r * r)
        sel = [z for z in pts if ((z - center).length_sq() - r2).sign() < 0]
        if rng.random() < 0.5 and sel:
            na = GoldenRat.from_fraction(_rand_fraction(rng, -1, 1))
            nb = GoldenRat.from_fraction(_rand_fraction(rng, -1, 1))
            if na.sign() or nb.sign():
                off = na * center.alpha + nb * center.beta \
                    + GoldenRat.from_fraction(_rand_fraction(rng, -0.5, 0.5))
                sel = [z for z in sel
                       if (na * z.alpha + nb * z.beta - off).sign() <= 0]
        if not sel:
            continue
        key = frozenset(sel)
        if key in seen:
            continue
        seen.add(key)
        out.append(sorted(sel, key=CycPoint.sort_key))
    return out


def patch_ball_indices(patch: ModelSetPatch, center, r2: Fraction) -> np.ndarray:
    """Indices of patch points inside an open rational ball, exactly."""
    a, b = patch.doubled_coords()
    if len(a) == 0:
        return np.zeros(0, dtype=np.int64)
    center = [Fraction(c) for c in center]
    den = 1
    for c in center:
        den = den * c.denominator // np.gcd(den, c.denominator)
    den = int(den)
    r2 = Fraction(r2)
    rn, rd = r2.numerator, r2.denominator
    # conservative magnitude bound decides between int64 and big ints
    coord_max = int(max(np.abs(a).max(), np.abs(b).max(), 1))
    off_max = max(abs(c.numerator * (den // c.denominator)) for c in center)
    term = den * coord_max + 2 * off_max
    value_bound = (6 * term * term + 4 * den * den * abs(rn)) * rd
    dtype = np.int64 if (3 * value_bound) ** 2 < (1 << 62) else object
    a = a.astype(dtype)
    b = b.astype(dtype)
    p_acc = np.zeros(len(a), dtype=dtype)
    q_acc = np.zeros(len(a), dtype=dtype)
    for j in range(3):
        e = den * a[:, j] - 2 * (center[j].numerator
                                 * (den // center[j].denominator))
        f = den * b[:, j]
        p_acc = p_acc + e * e + f * f
        q_acc = q_acc + 2 * e * f + f * f
    dp = 4 * den * den * rn - p_acc * rd
    dq = -q_acc * rd
    return np.nonzero(sign_root5_arrays(2 * dp + dq, dq) > 0)[0]


def sample_convex_subsets_3d(patch: ModelSetPatch, samples: int, rng,
                             max_radius: float = 4.0):
    """Random rational balls (optionally cut by a half space) intersected
    with the patch; returns lists of coordinate tuples.

    Centres and radii use denominator 8 so the exact ball tests stay on
    the fast integer path."""
    out = []
    seen = set()
    n = patch.size
    for _ in range(samples * 30):
        if len(out) >= samples:
            break
        i = rng.randrange(n)
        base = patch.coords(i)
        center = [Fraction(c.embed()).limit_denominator(8)
                  + _rand_fraction(rng, -1, 1, den=8) for c in base]
        r = _rand_fraction(rng, 0.8, max_radius, den=8)
        idx = patch_ball_indices(patch, center, r * r)
        if len(idx) == 0:
            continue
        coords = [patch.coords(int(k)) for k in idx]
        if rng.random() < 0.4:
            nrm = vec3(*(GoldenRat.from_fraction(_rand_fraction(rng, -1, 1))
                         for _ in range(3)))
            if any(nrm):
                cvec = vec3(*(GoldenRat.from_fraction(c) for c in center))
                off = dot3(nrm, cvec) \
                    + GoldenRat.from_fraction(_rand_fraction(rng, -0.5, 0.5))
                coords = [p for p in coords if (dot3(nrm, p) - off).sign() <= 0]
        if not coords:
            continue
        key = frozenset(map(tuple, coords))
        if key in seen:
            continue
        seen.add(key)
        out.append(sorted(coords))
    return out


def xray_signature(points, directions) -> tuple:
    sig = []
    for u in directions:
        im = xray(points, u)
        if u.dim == 2:
            items = sorted(((k.num.a, k.num.b, k.den), c)
                           for k, c in im.counts.items())
        else:
            items = sorted((tuple((x.num.a, x.num.b, x.den) for x in k), c)
                           for k, c in im.counts.items())
        sig.append(tuple(items))
    return tuple(sig)


def uniqueness_experiment(samples, directions) -> dict:
    """X-ray signatures of distinct convex samples; any collision between
    different sets is reported (and is a hard failure downstream)."""
    sigs: dict = {}
    collisions = []
    cards = []
    for idx, sample in enumerate(samples):
        pts = list(sample)
        cards.append(len(pts))
        key = frozenset(tuple(p) if not isinstance(p, CycPoint) else p
                        for p in pts)
        sig = xray_signature(pts, directions)
        if sig in sigs:
            prev_key, prev_idx = sigs[sig]
            if prev_key != key:
                collisions.append((prev_idx, idx))
        else:
            sigs[sig] = (key, idx)
    return {
        "samples": len(cards),
        "distinct_signatures": len(sigs),
        "collisions": collisions,
        "cardinalities": cards,
    }


def localize_collision_to_slice(f_coords, g_coords):
    """For a colliding 3D pair, the slice heights where the sets differ;
    the uniqueness argument predicts a planar collision there."""
    def by_height(coords):
        groups = {}
        for p in coords:
            h = (p[0] * TAU_R + p[2]) * 2
            groups.setdefault((h.num.a, h.num.b), set()).add(tuple(p))
        return groups

    gf, gg = by_height(f_coords), by_height(g_coords)
    return sorted(k for k in set(gf) | set(gg)
                  if gf.get(k, set()) != gg.get(k, set()))


# -- three-direction counterexample search -------------------------------

def hexagon_pair(directions, seed: CycPoint, shrink: int = 0):
    """Affinely regular hexagon with edges parallel to the three given
    planar directions, anchored at seed; returns the alternating vertex
    triples (F, F')."""
    if len(directions) != 3:
        raise ValueError("hexagons need exactly three directions")
    o1, o2, o3 = (u.rep for u in directions)
    det32 = (o3.alpha * o2.beta - o3.beta * o2.alpha).to_golden_int()
    det12 = (o1.alpha * o2.beta - o1.beta * o2.alpha).to_golden_int()
    a, c = det32, -det12
    from .golden import golden_gcd
    g = golden_gcd(a, c)
    a, c = a.divide_exact(g), c.divide_exact(g)
    tau_inv = GoldenInt(-1, 1)
    for _ in range(shrink):
        a, c = a * tau_inv, c * tau_inv
    e1 = o1.scaled(GoldenRat(a))
    e3 = o3.scaled(GoldenRat(c))
    e2 = e1 + e3
    h = [seed]
    for step in (e1, e2, e3):
        h.append(h[-1] + step)
    h.append(h[0] + e2 + e3)
    h.append(h[0] + e3)
    return [h[0], h[2], h[4]], [h[1], h[3], h[5]]


def three_direction_search(slice_points, directions, budget: int, rng):
    """Bounded search for two distinct convex subsets of the slice with
    equal X-rays in three directions, driven by hexagon seeds.

    Existence is guaranteed in the infinite set; within a finite patch
    the search is best effort and may return None."""
    pts = list(slice_points)
    if len(directions) != 3 or not pts:
        return None
    pset = set(pts)
    for _ in range(budget):
        seed = pts[rng.randrange(len(pts))]
        shrink = rng.randrange(3)
        f, g = hexagon_pair(directions, seed, shrink=shrink)
        if not all(p in pset for p in f + g):
            continue
        if set(f) == set(g):
            continue
        if not same_xrays(f, g, directions):
            continue
        if is_convex_subset_2d(f, pts) and is_convex_subset_2d(g, pts):
            return f, g
    return None
