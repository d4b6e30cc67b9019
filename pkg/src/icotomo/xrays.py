"""Discrete parallel X-rays, grids and switching components.

An X-ray assigns to each line in a fixed direction the number of set
points on it.  Lines are keyed by exact algebraic values (cross products
in 3-space, coefficient determinants in the cyclotomic plane), so image
equality is decidable.  Directions are canonical primitive module
representatives; X-rays in other directions are not meaningful for
model sets and are rejected.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import EmbeddingFailed, PreconditionViolated
from .golden import TAU, GoldenInt, GoldenRat, golden_gcd
from .icosian import ModuleTag, module_contains
from .linalg import (
    Vec3,
    add3,
    as_rat,
    cross2,
    cross3,
    is_zero3,
    normsq3,
    scale3,
    solve_linear,
    sub3,
    vec3,
)
from .modelset import Window, canonical_direction3, embed_finite_set, point_in_model_set
from .slices import CycPoint, height_of

_TAU_SQ = GoldenInt(1, 1)
_TAU_CONJ_SQ = GoldenInt(2, -1)
_TAU_4 = GoldenInt(2, 3)


def _canonical_cyc(o: CycPoint) -> CycPoint:
    """Canonical primitive representative of a cyclotomic direction."""
    if not (o.alpha or o.beta):
        raise ValueError("zero element has no direction")
    den = o.alpha.den * o.beta.den // __import__("math").gcd(o.alpha.den,
                                                             o.beta.den)
    a = o.alpha.num * (den // o.alpha.den)
    b = o.beta.num * (den // o.beta.den)
    g = a if not b else (b if not a else golden_gcd(a, b))
    a, b = a.divide_exact(g), b.divide_exact(g)
    num = a * a + b * b - (a * b) * GoldenInt(1, -1)     # |o|^2, tau' form
    den_g = (a.conj() * a.conj() + b.conj() * b.conj()
             - (a.conj() * b.conj()) * TAU)              # |o*|^2, tau form
    tau_inv = GoldenInt(-1, 1)
    guard = 0
    while (num - den_g).sign() < 0:
        a, b = TAU * a, TAU * b
        num, den_g = _TAU_SQ * num, _TAU_CONJ_SQ * den_g
        guard += 1
        assert guard < 10_000
    while (num - _TAU_4 * den_g).sign() >= 0:
        a, b = tau_inv * a, tau_inv * b
        num, den_g = _TAU_CONJ_SQ * num, _TAU_SQ * den_g
        guard += 1
        assert guard < 10_000
    first = a if a else b
    if first.sign() < 0:
        a, b = -a, -b
    return CycPoint(GoldenRat(a), GoldenRat(b))


class Direction:
    """Canonical primitive direction, planar (cyclotomic) or spatial."""

    __slots__ = ("dim", "rep")

    def __init__(self, dim: int, rep):
        self.dim = dim
        self.rep = rep

    @classmethod
    def from_vector(cls, v: Vec3, tag: ModuleTag = ModuleTag.IM_ICOSIAN):
        rep = canonical_direction3(v)
        assert module_contains(rep, tag)
        return cls(3, rep)

    @classmethod
    def from_cyc(cls, o: CycPoint):
        return cls(2, _canonical_cyc(o))

    def __eq__(self, other):
        if not isinstance(other, Direction):
            return NotImplemented
        return self.dim == other.dim and self.rep == other.rep

    def __hash__(self):
        if self.dim == 3:
            return hash(("d3", self.rep))
        return hash(("d2", self.rep.alpha, self.rep.beta))

    def __repr__(self):
        return f"Direction({self.dim}, {self.rep})"

    def rep_vec(self) -> Vec3:
        assert self.dim == 3
        return vec3(*(GoldenRat(c) for c in self.rep))

    def in_slice_plane(self) -> bool:
        """True when the direction lies in the plane orthogonal to
        (tau, 0, 1), so X-ray lines stay within single slices."""
        assert self.dim == 3
        return height_of(self.rep_vec()).sign() == 0

    def line_key(self, p):
        if self.dim == 3:
            return cross3(p, self.rep_vec())
        return cross2(p.coeffs(), self.rep.coeffs())

    def line_point(self, key):
        """Some exact point on the line with the given key."""
        if self.dim == 3:
            r = self.rep_vec()
            return scale3(GoldenRat(1) / normsq3(r), cross3(r, key))
        r1, r2 = self.rep.coeffs()
        n = r1 * r1 + r2 * r2
        return CycPoint(key * r2 / n, -key * r1 / n)

    def parallel_to(self, other: Direction) -> bool:
        return self == other


class XRayImage:
    """Finite keyed multiset: exact line key -> positive count."""

    __slots__ = ("direction", "counts")

    def __init__(self, direction: Direction, counts: dict):
        self.direction = direction
        self.counts = dict(counts)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def support(self):
        return set(self.counts)

    def __eq__(self, other):
        if not isinstance(other, XRayImage):
            return NotImplemented
        return self.direction == other.direction and self.counts == other.counts

    def __repr__(self):
        return f"XRayImage({self.direction}, {len(self.counts)} lines)"


def xray(points, direction: Direction) -> XRayImage:
    counts: dict = {}
    for p in points:
        k = direction.line_key(p)
        counts[k] = counts.get(k, 0) + 1
    return XRayImage(direction, counts)


def same_xrays(f, g, directions) -> bool:
    f = list(f)
    g = list(g)
    return all(xray(f, u) == xray(g, u) for u in directions)


def centroid(points):
    pts = list(points)
    n = len(pts)
    if n == 0:
        raise ValueError("empty set has no centroid")
    if isinstance(pts[0], CycPoint):
        acc = CycPoint(0, 0)
        for p in pts:
            acc = acc + p
        return acc.scaled(GoldenRat(1, n))
    acc = vec3(0, 0, 0)
    for p in pts:
        acc = add3(acc, p)
    return scale3(GoldenRat(1, n), acc)


def centroid_check(f, g, direction: Direction) -> bool:
    """Centroids of two sets with equal X-rays lie on one line in the
    X-ray direction."""
    f, g = list(f), list(g)
    if not same_xrays(f, g, [direction]):
        raise PreconditionViolated("sets do not share the X-ray image")
    if not f and not g:
        return True
    if direction.dim == 3:
        diff = sub3(centroid(f), centroid(g))
        return is_zero3(cross3(diff, direction.rep_vec()))
    diff = centroid(f) - centroid(g)
    return cross2(diff.coeffs(), direction.rep.coeffs()).sign() == 0


def apply_homothety(points, lam, t):
    lam = as_rat(lam)
    if lam.sign() <= 0:
        raise ValueError("homotheties scale by positive factors")
    out = []
    for p in points:
        if isinstance(p, CycPoint):
            out.append(p.scaled(lam) + t)
        else:
            out.append(add3(scale3(lam, p), t))
    return out


def homothety_transport(f, g, directions, lam, t) -> bool:
    """Equal X-rays are preserved by homotheties."""
    if not same_xrays(f, g, directions):
        raise PreconditionViolated("sets do not share the X-ray images")
    return same_xrays(apply_homothety(f, lam, t), apply_homothety(g, lam, t),
                      directions)


# -- grids --------------------------------------------------------------

def _intersect_lines_2d(u1: Direction, k1, u2: Direction, k2):
    r1a, r1b = u1.rep.coeffs()
    r2a, r2b = u2.rep.coeffs()
    sol = solve_linear([[r1b, -r1a], [r2b, -r2a]], [k1, k2])
    if sol is None:
        return None
    return CycPoint(sol[0], sol[1])


def _intersect_lines_3d(u1: Direction, k1, u2: Direction, k2):
    p1 = u1.line_point(k1)
    p2 = u2.line_point(k2)
    d1 = u1.rep_vec()
    d2 = u2.rep_vec()
    rhs = sub3(p2, p1)
    # solve t*d1 - s*d2 = rhs on two independent coordinates, verify third
    for (a, b) in ((0, 1), (0, 2), (1, 2)):
        det = d1[a] * (-d2[b]) - (-d2[a]) * d1[b]
        if det.sign() == 0:
            continue
        sol = solve_linear([[d1[a], -d2[a]], [d1[b], -d2[b]]],
                           [rhs[a], rhs[b]])
        if sol is None:
            continue
        t, s = sol
        c = 3 - a - b
        if (d1[c] * t - d2[c] * s) != rhs[c]:
            return None  # skew lines
        return add3(p1, scale3(t, d1))
    return None  # parallel directions


def grid_from_images(images: list[XRayImage]) -> set:
    """Exact grid: intersection over directions of the unions of
    supported lines, computed from pairwise line intersections of the
    first two images and filtered against the rest."""
    if len(images) < 2:
        raise ValueError("grids need at least two directions")
    dirs = [im.direction for im in images]
    for i in range(len(dirs)):
        for j in range(i + 1, len(dirs)):
            if dirs[i].parallel_to(dirs[j]):
                raise ValueError("directions must be pairwise non-parallel")
    dim = dirs[0].dim
    assert all(u.dim == dim for u in dirs)
    im1, im2 = images[0], images[1]
    candidates = set()
    if dim == 2:
        for k1 in im1.counts:
            for k2 in im2.counts:
                p = _intersect_lines_2d(im1.direction, k1, im2.direction, k2)
                if p is not None:
                    candidates.add(p)
    else:
        in_plane = all(u.in_slice_plane() for u in dirs[:2])
        lines2 = list(im2.counts)
        h2 = [height_of(im2.direction.line_point(k)) for k in lines2] \
            if in_plane else None
        for k1 in im1.counts:
            if in_plane:
                h1 = height_of(im1.direction.line_point(k1))
                pairs = [k2 for k2, h in zip(lines2, h2) if h == h1]
            else:
                pairs = lines2
            for k2 in pairs:
                p = _intersect_lines_3d(im1.direction, k1, im2.direction, k2)
                if p is not None:
                    candidates.add(tuple(p))
    out = set()
    for p in candidates:
        q = CycPoint(p.alpha, p.beta) if dim == 2 else p
        ok = True
        for im in images[2:]:
            if im.direction.line_key(q) not in im.counts:
                ok = False
                break
        if ok:
            out.add(q)
    return out


def grid(points, directions) -> set:
    return grid_from_images([xray(points, u) for u in directions])


def determine_small(points, directions) -> set:
    """Grid reconstruction: for card(F) <= k and k+1 pairwise non-parallel
    directions the grid collapses to F itself."""
    return grid(points, directions)


# -- switching components -----------------------------------------------

def switching_component(directions) -> tuple[list, list]:
    """Disjoint F, F' of cardinality 2^(k-1) in the module with the same
    X-rays in all k given directions, built by the doubling construction."""
    if not directions:
        raise ValueError("need at least one direction")
    dim = directions[0].dim
    if dim == 3:
        zero = vec3(0, 0, 0)
        f, g = [zero], [directions[0].rep_vec()]
    else:
        f, g = [CycPoint(0, 0)], [directions[0].rep]
    for u in directions[1:]:
        step = u.rep_vec() if dim == 3 else u.rep
        occupied = set(tuple(p) if dim == 3 else p for p in f + g)
        m = 1
        while True:
            if dim == 3:
                shift = scale3(GoldenRat(m), step)
                moved = [tuple(add3(p, shift)) for p in f + g]
            else:
                shift = step.scaled(GoldenRat(m))
                moved = [p + shift for p in f + g]
            if not occupied & set(moved):
                break
            m += 1
        if dim == 3:
            f, g = f + [add3(p, shift) for p in g], g + [add3(p, shift) for p in f]
        else:
            f, g = f + [p + shift for p in g], g + [p + shift for p in f]
    return f, g


def switching_pair(directions, window: Window, kind: str):
    """Switching component embedded into the model set by one expansive
    homothety; returns (F, F', exponent, anchor)."""
    tag = ModuleTag.IM_ICOSIAN if kind == "B" else ModuleTag.ICOSIAN0
    for u in directions:
        if u.dim != 3:
            raise ValueError("embedding applies to spatial directions")
    f, g = switching_component(directions)
    k, anchor, images = embed_finite_set(f + g, window, tag)
    ef, eg = images[:len(f)], images[len(f):]
    if set(map(tuple, ef)) & set(map(tuple, eg)):
        raise EmbeddingFailed("embedded halves are not disjoint")
    for p in images:
        if not point_in_model_set(p, kind, window):
            raise EmbeddingFailed("embedded point escaped the model set")
    if not same_xrays(ef, eg, directions):
        raise EmbeddingFailed("embedding broke the X-ray equality")
    return ef, eg, k, anchor


def complement_pair(f, g, ground, directions=None):
    """Complements of a switching pair inside a finite ground set
    (typically a convex region intersected with the patch)."""
    ground = list(ground)
    fs = set(tuple(p) if not isinstance(p, CycPoint) else p for p in f)
    gs = set(tuple(p) if not isinstance(p, CycPoint) else p for p in g)
    keyed = [(tuple(p) if not isinstance(p, CycPoint) else p, p)
             for p in ground]
    if not fs <= {k for k, _ in keyed} or not gs <= {k for k, _ in keyed}:
        raise PreconditionViolated("pair must lie inside the ground set")
    f1 = [p for k, p in keyed if k not in fs]
    f2 = [p for k, p in keyed if k not in gs]
    if directions is not None and not same_xrays(f1, f2, directions):
        raise PreconditionViolated("complement lost the X-ray equality")
    return f1, f2


def bounded_falsifier(radius, u1: Direction, u2: Direction, patch,
                      trials: int, rng) -> tuple[list, list] | None:
    """Randomised search for two distinct bounded subsets of the patch,
    of diameter below `radius`, sharing X-rays in both directions.

    Finding one falsifies that this particular direction pair determines
    the diameter-bounded subsets; None means the search failed."""
    radius = Fraction(radius)
    r2 = GoldenRat(GoldenInt(radius.numerator ** 2), radius.denominator ** 2)
    d1 = u1.rep_vec()
    d2 = u2.rep_vec()
    n = patch.size
    if n == 0:
        return None
    for _ in range(trials):
        a = patch.coords(rng.randrange(n))
        m1 = rng.randint(1, 3)
        m2 = rng.randint(1, 3)
        v1 = scale3(GoldenRat(m1), d1)
        v2 = scale3(GoldenRat(m2), d2)
        quad = [a, add3(a, v1), add3(a, v2), add3(add3(a, v1), v2)]
        if not all(patch.contains_coord(p) for p in quad[1:]):
            continue
        diam_f = normsq3(add3(v1, v2))
        diam_g = normsq3(sub3(v1, v2))
        if (diam_f - r2).sign() >= 0 or (diam_g - r2).sign() >= 0:
            continue
        f = [quad[0], quad[3]]
        g = [quad[1], quad[2]]
        if same_xrays(f, g, [u1, u2]):
            return f, g
    return None
