"""Two-direction tomography on a fixed patch, solved per slice.

For two directions inside the slicing plane, line counts decompose by
exact slice height.  Within a slice, candidate positions are the
intersections of supported lines that land on patch points: choosing a
feasible point set is a transportation problem between the two line
families, solved by integral max flow.  A feasible flow of full value
is exactly a point set with the prescribed line counts; distinct
solutions correspond to alternating cycles in the residual graph.
"""

from __future__ import annotations

from collections import deque

from .errors import Infeasible, NotCoplanarDirections, TooLarge
from .modelset import ModelSetPatch
from .slices import height_of
from .xrays import Direction, XRayImage, _intersect_lines_3d, xray


class MaxFlow:
    """Dinic's algorithm with integer capacities."""

    def __init__(self, n: int):
        self.n = n
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, cap: int) -> int:
        eid = len(self.to)
        self.adj[u].append(eid)
        self.to.append(v)
        self.cap.append(cap)
        self.adj[v].append(eid + 1)
        self.to.append(u)
        self.cap.append(0)
        return eid

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        while True:
            level = [-1] * self.n
            level[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for eid in self.adj[u]:
                    v = self.to[eid]
                    if self.cap[eid] > 0 and level[v] < 0:
                        level[v] = level[u] + 1
                        queue.append(v)
            if level[t] < 0:
                return flow
            it = [0] * self.n

            def dfs(u: int, pushed: int) -> int:
                if u == t:
                    return pushed
                while it[u] < len(self.adj[u]):
                    eid = self.adj[u][it[u]]
                    v = self.to[eid]
                    if self.cap[eid] > 0 and level[v] == level[u] + 1:
                        got = dfs(v, min(pushed, self.cap[eid]))
                        if got:
                            self.cap[eid] -= got
                            self.cap[eid ^ 1] += got
                            return got
                    it[u] += 1
                return 0

            while True:
                pushed = dfs(s, 1 << 60)
                if not pushed:
                    break
                flow += pushed


class TomographyInstance:
    """Two line-count functions over a fixed patch domain."""

    def __init__(self, u1: Direction, u2: Direction, image1: XRayImage,
                 image2: XRayImage, patch: ModelSetPatch):
        if u1.parallel_to(u2):
            raise ValueError("directions must not be parallel")
        for u in (u1, u2):
            if not u.in_slice_plane():
                raise NotCoplanarDirections(
                    "both directions must lie in the slicing plane")
        self.u1, self.u2 = u1, u2
        self.image1, self.image2 = image1, image2
        self.patch = patch

    @classmethod
    def from_points(cls, points, u1: Direction, u2: Direction,
                    patch: ModelSetPatch) -> "TomographyInstance":
        return cls(u1, u2, xray(points, u1), xray(points, u2), patch)


class SliceProblem:
    """One height level: its lines, counts and candidate points."""

    def __init__(self, height, lines1, lines2, candidates):
        self.height = height
        self.lines1 = lines1            # list of (key, count)
        self.lines2 = lines2
        self.candidates = candidates    # dict (i, j) -> coordinate tuple

    @property
    def total1(self):
        return sum(c for _, c in self.lines1)

    @property
    def total2(self):
        return sum(c for _, c in self.lines2)


def split_by_slice(instance: TomographyInstance) -> list[SliceProblem]:
    """Assign every supported line its exact slice height and build the
    per-slice candidate grids (intersections lying on patch points)."""
    u1, u2 = instance.u1, instance.u2

    def lines_with_heights(image):
        out = {}
        for key, count in image.counts.items():
            h = height_of(image.direction.line_point(key))
            out.setdefault(h, []).append((key, count))
        return out

    h1 = lines_with_heights(instance.image1)
    h2 = lines_with_heights(instance.image2)
    problems = []
    for h in sorted(set(h1) | set(h2), key=lambda x: (x.num.a, x.num.b, x.den)):
        lines1 = sorted(h1.get(h, []), key=_line_sort_key)
        lines2 = sorted(h2.get(h, []), key=_line_sort_key)
        cands = {}
        for i, (k1, _) in enumerate(lines1):
            for j, (k2, _) in enumerate(lines2):
                p = _intersect_lines_3d(u1, k1, u2, k2)
                if p is not None and instance.patch.contains_coord(p):
                    cands[(i, j)] = p
        problems.append(SliceProblem(h, lines1, lines2, cands))
    return problems


def _line_sort_key(item):
    key, _ = item
    return tuple((c.num.a, c.num.b, c.den) for c in key)


class _SliceSolution:
    def __init__(self, problem, flow, edge_ids, n1, n2):
        self.problem = problem
        self.flow = flow
        self.edge_ids = edge_ids  # (i, j) -> edge id in the flow network
        self.n1, self.n2 = n1, n2

    def chosen_pairs(self):
        return [ij for ij, eid in self.edge_ids.items()
                if self.flow.cap[eid] == 0]


def _solve_slice(problem: SliceProblem) -> _SliceSolution:
    if problem.total1 != problem.total2:
        raise Infeasible(f"slice {problem.height}: line totals disagree")
    n1, n2 = len(problem.lines1), len(problem.lines2)
    flow = MaxFlow(2 + n1 + n2)
    src, snk = 0, 1
    for i, (_, count) in enumerate(problem.lines1):
        flow.add_edge(src, 2 + i, count)
    for j, (_, count) in enumerate(problem.lines2):
        flow.add_edge(2 + n1 + j, snk, count)
    edge_ids = {}
    for (i, j) in sorted(problem.candidates):
        edge_ids[(i, j)] = flow.add_edge(2 + i, 2 + n1 + j, 1)
    value = flow.max_flow(src, snk)
    if value != problem.total1:
        raise Infeasible(
            f"slice {problem.height}: only {value} of {problem.total1} "
            "points can be placed")
    return _SliceSolution(problem, flow, edge_ids, n1, n2)


def consistency(instance: TomographyInstance) -> bool:
    """Is there a subset of the patch with the prescribed line counts?"""
    if instance.image1.total != instance.image2.total:
        return False  # fast reject: equal X-rays force equal cardinality
    try:
        for problem in split_by_slice(instance):
            _solve_slice(problem)
    except Infeasible:
        return False
    return True


def reconstruct(instance: TomographyInstance):
    """One point set with the prescribed counts, or raise Infeasible.

    The result is re-verified against the given images exactly.
    """
    if instance.image1.total != instance.image2.total:
        raise Infeasible("line totals disagree")
    points = []
    for problem in split_by_slice(instance):
        sol = _solve_slice(problem)
        for ij in sol.chosen_pairs():
            points.append(problem.candidates[ij])
    points.sort()
    assert xray(points, instance.u1) == instance.image1
    assert xray(points, instance.u2) == instance.image2
    return points


def _find_residual_cycle(sol: _SliceSolution):
    """Directed cycle in the residual graph restricted to line nodes;
    None when the solution is unique on this slice."""
    fwd: dict[int, list[tuple[int, tuple]]] = {}
    for ij, eid in sol.edge_ids.items():
        i, j = ij
        a, b = i, sol.n1 + j
        if sol.flow.cap[eid] > 0:      # unused candidate: u1 -> u2
            fwd.setdefault(a, []).append((b, ij))
        else:                          # used: u2 -> u1
            fwd.setdefault(b, []).append((a, ij))
    color = {}
    stack_edges: list[tuple] = []

    def dfs(u):
        color[u] = 1
        for v, ij in fwd.get(u, []):
            if color.get(v, 0) == 1:
                # unwind to extract the cycle edge list
                cycle = [ij]
                for uu, e in reversed(stack_edges):
                    cycle.append(e)
                    if uu == v:
                        break
                return cycle
            if color.get(v, 0) == 0:
                stack_edges.append((u, ij))
                got = dfs(v)
                if got:
                    return got
                stack_edges.pop()
        color[u] = 2
        return None

    for node in sorted(fwd):
        if color.get(node, 0) == 0:
            got = dfs(node)
            if got:
                return got
    return None


def uniqueness(instance: TomographyInstance):
    """('unique', None) or ('nonunique', (F, F2)) for a consistent
    instance; the witness pair is verified to share both images."""
    if instance.image1.total != instance.image2.total:
        raise Infeasible("line totals disagree")
    problems = split_by_slice(instance)
    solutions = [_solve_slice(p) for p in problems]
    base_points = []
    for sol in solutions:
        for ij in sol.chosen_pairs():
            base_points.append(sol.problem.candidates[ij])
    base_points.sort()
    for k, sol in enumerate(solutions):
        cycle = _find_residual_cycle(sol)
        if cycle is None:
            continue
        toggled = set(sol.chosen_pairs()) ^ set(cycle)
        alt_points = []
        for kk, other in enumerate(solutions):
            pairs = toggled if kk == k else other.chosen_pairs()
            for ij in pairs:
                alt_points.append(other.problem.candidates[ij])
        alt_points.sort()
        assert alt_points != base_points
        assert xray(alt_points, instance.u1) == instance.image1
        assert xray(alt_points, instance.u2) == instance.image2
        return "nonunique", (base_points, alt_points)
    return "unique", None


def brute_force_oracle(instance: TomographyInstance, cap: int | None = None,
                       max_candidates: int = 24):
    """All solutions by exhaustive per-line backtracking; independent of
    the flow solver and used to validate it on small instances."""
    from itertools import combinations
    if instance.image1.total != instance.image2.total:
        return []
    problems = split_by_slice(instance)
    total_cands = sum(len(p.candidates) for p in problems)
    if total_cands > max_candidates:
        raise TooLarge(f"{total_cands} candidates exceed the oracle bound")

    per_slice: list[list[list]] = []
    for problem in problems:
        by_line: dict[int, list] = {}
        for (i, j) in sorted(problem.candidates):
            by_line.setdefault(i, []).append((i, j))
        need2 = {j: c for j, (_, c) in enumerate(problem.lines2)}
        slice_solutions: list[list] = []

        def backtrack(i: int, remaining: dict, chosen: list):
            if i == len(problem.lines1):
                if all(v == 0 for v in remaining.values()):
                    slice_solutions.append(list(chosen))
                return
            count = problem.lines1[i][1]
            options = by_line.get(i, [])
            if count > len(options):
                return
            for combo in combinations(options, count):
                if any(remaining[j] <= 0 for (_, j) in combo):
                    continue
                for (_, j) in combo:
                    remaining[j] -= 1
                chosen.extend(combo)
                backtrack(i + 1, remaining, chosen)
                del chosen[len(chosen) - len(combo):]
                for (_, j) in combo:
                    remaining[j] += 1

        if problem.total1 != problem.total2:
            per_slice.append([])
        else:
            backtrack(0, dict(need2), [])
            per_slice.append(slice_solutions)

    if any(not s for s in per_slice):
        return []
    solutions = []

    def assemble(k: int, acc: list):
        if cap is not None and len(solutions) >= cap:
            return
        if k == len(per_slice):
            pts = []
            for kk, pairs in enumerate(acc):
                for ij in pairs:
                    pts.append(problems[kk].candidates[ij])
            solutions.append(tuple(sorted(pts)))
            return
        for choice in per_slice[k]:
            assemble(k + 1, acc + [choice])

    assemble(0, [])
    return solutions
