"""Exact planar geometry over Q(tau): hulls and convex polygon tests.

Points are pairs of GoldenRat.  All orientation decisions go through the
exact sign of 2x2 determinants, so the predicates stay valid in any
affine coordinate system (in particular in the cyclotomic coefficient
coordinates used for slices, where the basis is not orthonormal).
"""

from __future__ import annotations

from .golden import GoldenRat
from .linalg import Vec2, cross2, sub2
from .modelset import Containment


def orientation(a: Vec2, b: Vec2, c: Vec2) -> int:
    return cross2(sub2(b, a), sub2(c, a)).sign()


def hull2d(points) -> list[Vec2]:
    """Convex hull in counterclockwise coordinate order (monotone chain).

    Collinear non-extreme points are dropped; degenerate inputs yield a
    hull of fewer than three vertices.
    """
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Vec2] = []
    for p in pts:
        while len(lower) >= 2 and orientation(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Vec2] = []
    for p in reversed(pts):
        while len(upper) >= 2 and orientation(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:  # all points collinear
        return [pts[0], pts[-1]]
    return hull


def _on_segment(p: Vec2, a: Vec2, b: Vec2) -> bool:
    if orientation(a, b, p) != 0:
        return False
    lo0, hi0 = (a[0], b[0]) if a[0] <= b[0] else (b[0], a[0])
    lo1, hi1 = (a[1], b[1]) if a[1] <= b[1] else (b[1], a[1])
    return lo0 <= p[0] <= hi0 and lo1 <= p[1] <= hi1


def point_vs_hull(p: Vec2, hull: list[Vec2]) -> Containment:
    """Exact classification of a point against a convex hull."""
    if not hull:
        return Containment.OUTSIDE
    if len(hull) == 1:
        return Containment.BOUNDARY if p == hull[0] else Containment.OUTSIDE
    if len(hull) == 2:
        return (Containment.BOUNDARY if _on_segment(p, hull[0], hull[1])
                else Containment.OUTSIDE)
    on_edge = False
    n = len(hull)
    for i in range(n):
        s = orientation(hull[i], hull[(i + 1) % n], p)
        if s < 0:
            return Containment.OUTSIDE
        if s == 0:
            on_edge = True
    return Containment.BOUNDARY if on_edge else Containment.INTERIOR


def polygon_area_doubled(hull: list[Vec2]) -> GoldenRat:
    """Twice the signed area in the working coordinates."""
    acc = GoldenRat(0)
    n = len(hull)
    for i in range(n):
        acc = acc + cross2(hull[i], hull[(i + 1) % n])
    return acc
