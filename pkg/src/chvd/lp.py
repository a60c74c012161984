"""Fractional solutions via cutting planes over a dense simplex.

The LP ``min sum x(v) subject to x(P) >= 1 for every hole / terminal
path`` is solved through its dual, a packing LP whose slack basis is
feasible, so a single primal simplex pass with Bland's rule suffices per
restricted problem.  Constraints are generated lazily by the separation
oracles until none is violated; at that point the restricted optimum is
feasible for the full LP and hence optimal.

Thresholds downstream (1/4, 1/8, 1/10, 1/20, 1/2) compare against these
values; every such comparison treats ``>= t`` as ``>= t - 1e-9`` so float
drift cannot flip a rule.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .graphs import DiGraph, Graph, Hole, check, shortcut_walk, verify_hole

FEASIBILITY_TOL = 1e-6
THRESHOLD_SLACK = 1e-9


def at_least(value: float, threshold: float) -> bool:
    """Tolerant threshold comparison: value >= threshold - 1e-9."""
    return value >= threshold - THRESHOLD_SLACK


@dataclass(frozen=True)
class FractionalSolution:
    """Nonnegative vertex weights satisfying every generated constraint.

    ``values[v]`` defaults to 0 for vertices never assigned.
    """

    values: dict[int, float]
    tolerance: float = FEASIBILITY_TOL

    def value(self, v: int) -> float:
        return self.values.get(v, 0.0)

    def mass(self, vertices) -> float:
        return sum(self.values.get(v, 0.0) for v in vertices)

    @property
    def objective(self) -> float:
        return sum(self.values.values())

    def scaled(self, factor: float) -> "FractionalSolution":
        return FractionalSolution(
            {v: factor * w for v, w in self.values.items()}, self.tolerance
        )

    def restricted(self, vertices) -> "FractionalSolution":
        keep = set(vertices)
        return FractionalSolution(
            {v: w for v, w in self.values.items() if v in keep}, self.tolerance
        )

    def remapped(self, new_of: dict[int, int]) -> "FractionalSolution":
        return FractionalSolution(
            {new_of[v]: w for v, w in self.values.items() if v in new_of},
            self.tolerance,
        )


def simplex_min_cover(
    n: int,
    constraint_sets: Sequence[frozenset[int]],
    exact: bool = False,
) -> list:
    """Solve min sum x_v s.t. sum_{v in P} x_v >= 1 for each P, x >= 0.

    Works on the dual packing LP (slack basis feasible) and reads the
    primal solution off the slack reduced costs.  Bland's rule prevents
    cycling.  With ``exact`` the tableau runs on Fractions.
    """
    m = len(constraint_sets)
    zero = Fraction(0) if exact else 0.0
    one = Fraction(1) if exact else 1.0
    tol = Fraction(0) if exact else 1e-9
    if m == 0 or n == 0:
        return [zero] * n
    # Dual: max sum y_j s.t. for each vertex v: sum_{j: v in P_j} y_j <= 1.
    # Tableau rows = n vertex constraints; columns = m y-vars + n slacks + rhs.
    width = m + n + 1
    rows = []
    for v in range(n):
        row = [zero] * width
        for j, cset in enumerate(constraint_sets):
            if v in cset:
                row[j] = one
        row[m + v] = one
        row[-1] = one
        rows.append(row)
    zrow = [one] * m + [zero] * n + [zero]
    basis = [m + v for v in range(n)]

    max_pivots = 8000 + 40 * (n + m) * (n + m)
    for _ in range(max_pivots):
        enter = -1
        for j in range(m + n):
            if zrow[j] > tol:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(n):
            a = rows[i][enter]
            if a > tol:
                ratio = rows[i][-1] / a
                if best is None or ratio < best - tol or (
                    abs(ratio - best) <= tol
                    and (leave < 0 or basis[i] < basis[leave])
                ):
                    best = ratio
                    leave = i
        check(leave >= 0, "dual packing LP is unbounded, which cannot happen")
        piv = rows[leave][enter]
        rows[leave] = [a / piv for a in rows[leave]]
        for i in range(n):
            if i != leave and rows[i][enter] != zero:
                f = rows[i][enter]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[leave])]
        if zrow[enter] != zero:
            f = zrow[enter]
            zrow = [a - f * b for a, b in zip(zrow, rows[leave])]
        basis[leave] = enter
    else:
        check(False, "simplex exceeded its pivot budget")
    # Primal solution: x_v = -reduced cost of slack column v (shadow price).
    xs = []
    for v in range(n):
        val = -zrow[m + v]
        xs.append(val if val > zero else zero)
    return xs


def _dijkstra_vertex_weights(
    neighbors: Callable[[int], Sequence[int]],
    sources: Sequence[int],
    weight: Callable[[int], float],
    allowed: Optional[set[int]] = None,
) -> tuple[dict[int, float], dict[int, int]]:
    """Shortest vertex-weighted distances; path cost includes both endpoints."""
    dist: dict[int, float] = {}
    prev: dict[int, int] = {}
    heap = []
    for s in sorted(set(sources)):
        if allowed is not None and s not in allowed:
            continue
        d = weight(s)
        if s not in dist or d < dist[s]:
            dist[s] = d
            prev[s] = s
            heapq.heappush(heap, (d, s))
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist.get(u, float("inf")):
            continue
        for w in neighbors(u):
            if allowed is not None and w not in allowed:
                continue
            nd = d + weight(w)
            if nd < dist.get(w, float("inf")) - 1e-15:
                dist[w] = nd
                prev[w] = u
                heapq.heappush(heap, (nd, w))
    return dist, prev


def _extract_path(prev: dict[int, int], t: int) -> list[int]:
    path = [t]
    while prev[path[-1]] != path[-1]:
        path.append(prev[path[-1]])
    path.reverse()
    return path


def separate_chvd(g: Graph, x: FractionalSolution) -> Optional[Hole]:
    """A hole of weight < 1 - tolerance, or None.

    Scans all consecutive triples (v1, v2, v3) of a potential hole and
    finds the cheapest v1-v3 path avoiding N[v2]; the cheapest violated
    cycle found is shortcut to an induced one and returned.
    """
    best: Optional[Hole] = None
    best_weight = 1.0 - x.tolerance
    for v2 in g.vertices():
        nbrs = g.neighbors(v2)
        closed = g.closed_neighborhood(v2)
        allowed = set(g.vertices()) - closed
        for i, v1 in enumerate(nbrs):
            for v3 in nbrs[i + 1 :]:
                if g.has_edge(v1, v3):
                    continue
                local = allowed | {v1, v3}
                dist, prev = _dijkstra_vertex_weights(
                    g.neighbors, [v1], x.value, allowed=local
                )
                if v3 not in dist:
                    continue
                weight = dist[v3] + x.value(v2)
                if weight < best_weight - 1e-12:
                    path = _extract_path(prev, v3)
                    path = shortcut_walk(g, path)
                    hole = Hole(tuple([v2] + path)).canonical()
                    check(verify_hole(g, hole), "separation built a non-hole")
                    w = x.mass(hole.vertices)
                    if w < best_weight - 1e-12:
                        best = hole
                        best_weight = w
    return best


def separate_multicut(
    d: DiGraph, pairs: Sequence[tuple[int, int]], x: FractionalSolution
) -> Optional[list[int]]:
    """A terminal path of weight < 1 - tolerance, or None."""
    best: Optional[list[int]] = None
    best_weight = 1.0 - x.tolerance
    for s, t in pairs:
        dist, prev = _dijkstra_vertex_weights(d.out_neighbors, [s], x.value)
        if t in dist and dist[t] < best_weight - 1e-12:
            best = _extract_path(prev, t)
            best_weight = dist[t]
    return best


@dataclass(frozen=True)
class ChvdProblem:
    g: Graph

    @property
    def n(self) -> int:
        return self.g.n

    def separate(self, x: FractionalSolution) -> Optional[frozenset[int]]:
        hole = separate_chvd(self.g, x)
        return None if hole is None else hole.vertex_set()


@dataclass(frozen=True)
class MulticutProblem:
    d: DiGraph
    pairs: tuple[tuple[int, int], ...]

    @property
    def n(self) -> int:
        return self.d.n

    def separate(self, x: FractionalSolution) -> Optional[frozenset[int]]:
        path = separate_multicut(self.d, self.pairs, x)
        return None if path is None else frozenset(path)


def solve_fractional(
    problem,
    max_iters: int = 2000,
    exact: bool = False,
    pool_cap: Optional[int] = None,
    tolerance: float = FEASIBILITY_TOL,
) -> FractionalSolution:
    """Cutting-plane loop: restricted LP + separation until feasible.

    The constraint pool is capped at 10 n^2; when full, the constraints
    with the most slack are evicted (re-separation restores any evicted
    wrongly).  Raises InvariantError when the iteration cap is exceeded.
    """
    n = problem.n
    cap = pool_cap if pool_cap is not None else max(16, 10 * n * n)
    pool: list[frozenset[int]] = []
    x = FractionalSolution({v: 0.0 for v in range(n)}, tolerance)
    for _ in range(max_iters):
        violated = problem.separate(x)
        if violated is None:
            return x
        check(violated not in pool,
              "separation returned a constraint already in the pool")
        pool.append(violated)
        if len(pool) > cap:
            pool.sort(key=lambda c: (x.mass(c), sorted(c)))
            keep = pool[: cap - 1] + [violated]
            pool = list(dict.fromkeys(keep))
        xs = simplex_min_cover(n, pool, exact=exact)
        x = FractionalSolution({v: float(xs[v]) for v in range(n)}, tolerance)
    check(False, "cutting-plane iteration cap exceeded")
    raise AssertionError  # unreachable
