"""Shared machinery for enumerating lattice coefficient vectors.

Given a float embedding matrix whose columns span a lattice and a target
box in embedding space, plan an enumeration: LLL-reduce the basis scaled
by the box anisotropy, bound the coefficient ranges, and walk them with
branch-and-prune interval propagation.  The float plan only controls
which candidates are visited; callers decide membership exactly, so
padding keeps the plan sound (no candidate inside the box is skipped).
"""

from __future__ import annotations

import numpy as np

MAX_CHUNK_ROWS = 1_500_000
INT64_LIMIT = 1 << 62


def sign_root5_arrays(p, q):
    """Vectorised exact sign of p + q*sqrt5 (int64 or object arrays)."""
    p2 = p * p
    q2 = 5 * (q * q)
    pos = ((p >= 0) & (q >= 0) & ((p > 0) | (q > 0))) \
        | ((p > 0) & (q < 0) & (p2 > q2)) \
        | ((p < 0) & (q > 0) & (q2 > p2))
    neg = ((p <= 0) & (q <= 0) & ((p < 0) | (q < 0))) \
        | ((p < 0) & (q > 0) & (p2 > q2)) \
        | ((p > 0) & (q < 0) & (q2 > p2))
    out = np.zeros(np.shape(p), dtype=np.int8)
    out[pos] = 1
    out[neg] = -1
    return out


def lll_columns(basis: np.ndarray, delta: float = 0.75) -> np.ndarray:
    """Unimodular U (int64) such that the columns of basis @ U are
    LLL-reduced.  Float inaccuracy only affects box tightness, never
    correctness, since any unimodular U enumerates the same lattice."""
    b = basis.astype(float).copy()
    n = b.shape[1]
    u = np.eye(n, dtype=np.int64)

    def gso():
        q = np.zeros_like(b)
        mu = np.zeros((n, n))
        for i in range(n):
            v = b[:, i].copy()
            for j in range(i):
                denom = q[:, j] @ q[:, j]
                mu[i, j] = (b[:, i] @ q[:, j]) / denom
                v -= mu[i, j] * q[:, j]
            q[:, i] = v
        return q, mu

    q, mu = gso()
    k = 1
    guard = 0
    while k < n:
        guard += 1
        if guard > 10_000:
            break
        for j in range(k - 1, -1, -1):
            r = round(mu[k, j])
            if r:
                b[:, k] -= r * b[:, j]
                u[:, k] -= r * u[:, j]
                q, mu = gso()
        if q[:, k] @ q[:, k] >= (delta - mu[k, k - 1] ** 2) * (q[:, k - 1] @ q[:, k - 1]):
            k += 1
        else:
            b[:, [k - 1, k]] = b[:, [k, k - 1]]
            u[:, [k - 1, k]] = u[:, [k, k - 1]]
            q, mu = gso()
            k = max(k - 1, 1)
    return u


def plan_box(embedding: np.ndarray, lo, hi, pad: float = 1e-6):
    """Enumeration plan for lattice points with embedding inside the box.

    Returns (U, constraints, ranges): iterate integer vectors m over
    `ranges`; the lattice coefficient vector is n = U @ m and the
    embedding is constraints @ m.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    center = (lo + hi) / 2
    half = (hi - lo) / 2
    scale = np.where(half > 1e-12, half, 1.0)
    u = lll_columns(embedding / scale[:, None])
    mu = embedding @ u
    minv = np.linalg.inv(mu)
    mid = minv @ center
    ranges = []
    for i in range(len(mid)):
        spread = float(np.abs(minv[i]) @ half)
        margin = pad * (1.0 + abs(mid[i]) + spread)
        ranges.append(range(int(np.floor(mid[i] - spread - margin)),
                            int(np.ceil(mid[i] + spread + margin)) + 1))
    return u, mu, ranges


def refine_ranges(constraints, lo_res, hi_res, ranges, pad: float = 1e-7):
    """Shrink integer ranges using interval propagation over the two-sided
    constraints lo_res <= constraints @ m <= hi_res.  Sound: bounds are
    padded outward, so no feasible integer point is ever dropped."""
    ranges = list(ranges)
    n = len(ranges)
    for _ in range(2):
        mins = np.array([r.start * 1.0 if len(r) else 0.0 for r in ranges])
        maxs = np.array([(r.stop - 1) * 1.0 if len(r) else 0.0 for r in ranges])
        for a in range(n):
            col = constraints[:, a]
            lo_a, hi_a = -np.inf, np.inf
            for j in range(len(constraints)):
                coef = col[j]
                if abs(coef) < 1e-12:
                    continue
                tail_lo = tail_hi = 0.0
                for i in range(n):
                    if i == a:
                        continue
                    c = constraints[j, i]
                    x, y = c * mins[i], c * maxs[i]
                    tail_lo += min(x, y)
                    tail_hi += max(x, y)
                blo = lo_res[j] - tail_hi
                bhi = hi_res[j] - tail_lo
                if coef > 0:
                    lo_a = max(lo_a, blo / coef)
                    hi_a = min(hi_a, bhi / coef)
                else:
                    lo_a = max(lo_a, bhi / coef)
                    hi_a = min(hi_a, blo / coef)
            eps = pad * (1.0 + abs(lo_a) + abs(hi_a))
            start = max(ranges[a].start, int(np.ceil(lo_a - eps)))
            stop = min(ranges[a].stop, int(np.floor(hi_a + eps)) + 1)
            ranges[a] = range(start, max(start, stop))
            if len(ranges[a]) == 0:
                return ranges
            mins[a], maxs[a] = ranges[a].start, ranges[a].stop - 1
    return ranges


def iter_coeff_chunks(constraints, lo_res, hi_res, ranges,
                      max_rows: int = MAX_CHUNK_ROWS):
    """Yield int64 arrays of candidate coefficient rows (full width),
    fixing leading coordinates one at a time and re-propagating bounds
    until the remaining mesh is small enough to vectorise."""
    total_dims = len(ranges)

    def rec(fixed, lo_r, hi_r, rest):
        rest = refine_ranges(constraints[:, len(fixed):], lo_r, hi_r, rest)
        if any(len(r) == 0 for r in rest):
            return
        prod = 1
        for r in rest:
            prod *= len(r)
        if prod <= max_rows:
            mesh = np.stack(np.meshgrid(*[np.asarray(r, dtype=np.int64)
                                          for r in rest],
                                        indexing="ij"), axis=-1)
            mesh = mesh.reshape(-1, len(rest))
            block = np.empty((len(mesh), total_dims), dtype=np.int64)
            if fixed:
                block[:, :len(fixed)] = fixed
            block[:, len(fixed):] = mesh
            yield block
            return
        col = constraints[:, len(fixed)]
        for v in rest[0]:
            yield from rec(fixed + [v], lo_r - col * v, hi_r - col * v,
                           rest[1:])

    yield from rec([], np.asarray(lo_res, float), np.asarray(hi_res, float),
                   list(ranges))
