"""Exact vector and matrix helpers over Q(tau).

Vectors are plain tuples of GoldenRat; 3x3 matrices are tuples of row
tuples.  Everything here is exact; callers needing floats go through
`golden.golden_value` / `.embed` themselves.
"""

from __future__ import annotations

from .golden import GoldenRat, ZERO_R

Vec3 = tuple[GoldenRat, GoldenRat, GoldenRat]
Vec2 = tuple[GoldenRat, GoldenRat]
Mat3 = tuple[tuple[GoldenRat, ...], ...]


def as_rat(x) -> GoldenRat:
    return x if isinstance(x, GoldenRat) else GoldenRat.of(x)


def vec3(x, y, z) -> Vec3:
    return (as_rat(x), as_rat(y), as_rat(z))


def vec2(x, y) -> Vec2:
    return (as_rat(x), as_rat(y))


def add3(u: Vec3, v: Vec3) -> Vec3:
    return (u[0] + v[0], u[1] + v[1], u[2] + v[2])


def sub3(u: Vec3, v: Vec3) -> Vec3:
    return (u[0] - v[0], u[1] - v[1], u[2] - v[2])


def neg3(u: Vec3) -> Vec3:
    return (-u[0], -u[1], -u[2])


def scale3(c, u: Vec3) -> Vec3:
    c = as_rat(c)
    return (c * u[0], c * u[1], c * u[2])


def dot3(u: Vec3, v: Vec3) -> GoldenRat:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def cross3(u: Vec3, v: Vec3) -> Vec3:
    return (u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0])


def normsq3(u: Vec3) -> GoldenRat:
    return dot3(u, u)


def star3(u: Vec3) -> Vec3:
    """Coordinatewise Galois conjugation, the star map into internal space."""
    return (u[0].conj(), u[1].conj(), u[2].conj())


def is_zero3(u: Vec3) -> bool:
    return not (u[0] or u[1] or u[2])


def add2(u: Vec2, v: Vec2) -> Vec2:
    return (u[0] + v[0], u[1] + v[1])


def sub2(u: Vec2, v: Vec2) -> Vec2:
    return (u[0] - v[0], u[1] - v[1])


def scale2(c, u: Vec2) -> Vec2:
    c = as_rat(c)
    return (c * u[0], c * u[1])


def cross2(u: Vec2, v: Vec2) -> GoldenRat:
    return u[0] * v[1] - u[1] * v[0]


def dot2(u: Vec2, v: Vec2) -> GoldenRat:
    return u[0] * v[0] + u[1] * v[1]


def matvec3(m: Mat3, v: Vec3) -> Vec3:
    return (dot3(m[0], v), dot3(m[1], v), dot3(m[2], v))


def matmul3(a: Mat3, b: Mat3) -> Mat3:
    cols = list(zip(*b))
    return tuple(tuple(dot3(row, col) for col in cols) for row in a)


def transpose3(m: Mat3) -> Mat3:
    return tuple(zip(*m))


def conj_mat3(m: Mat3) -> Mat3:
    return tuple(tuple(e.conj() for e in row) for row in m)


def identity3() -> Mat3:
    one, zero = GoldenRat(1), ZERO_R
    return ((one, zero, zero), (zero, one, zero), (zero, zero, one))


def det3(m: Mat3) -> GoldenRat:
    return dot3(m[0], cross3(m[1], m[2]))


def solve_linear(rows: list[list[GoldenRat]], rhs: list[GoldenRat]):
    """Solve a square system exactly by Gaussian elimination.

    Returns the solution list, or None when the matrix is singular.
    """
    n = len(rows)
    aug = [list(rows[i]) + [rhs[i]] for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [e / pv for e in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [e - f * p for e, p in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]
