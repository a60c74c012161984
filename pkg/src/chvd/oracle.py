"""Exact desk-scale solvers: ChVD, annotated ChVD, and directed multicut.

These are the ground truth for every equivalence and ratio test.  The
branching solvers branch on the vertices of a shortest hole (or shortest
surviving terminal path), which keeps the branching factor small; a memo
on the canonicalized deleted-set avoids re-exploring permutations of the
same deletions.
"""
from __future__ import annotations

from dataclasses import dataclass
from collections import deque
from typing import Iterable, Optional

from .graphs import Graph, DiGraph, Hole, check, verify_hole


@dataclass(frozen=True)
class ExactResult:
    """Optimum size, one optimal solution, and search statistics."""

    optimum: int
    solution: frozenset[int]
    nodes_explored: int


def shortest_hole_avoiding(g: Graph, deleted: frozenset[int]) -> Optional[Hole]:
    """A shortest hole of g - deleted (vertices kept in g's ids)."""
    alive = [v for v in g.vertices() if v not in deleted]
    alive_set = set(alive)
    best: Optional[list[int]] = None
    for b in alive:
        nbrs = [u for u in g.neighbors(b) if u in alive_set]
        closed = set(nbrs) | {b}
        for i, a in enumerate(nbrs):
            for c in nbrs[i + 1 :]:
                if g.has_edge(a, c):
                    continue
                allowed = (alive_set - closed) | {a, c}
                path = _bfs(g, a, c, allowed)
                if path is None:
                    continue
                if best is None or len(path) + 1 < len(best):
                    best = [b] + path
    if best is None:
        return None
    hole = Hole(tuple(best))
    check(verify_hole(g, hole), "shortest-hole search produced a non-hole")
    return hole


def _bfs(g: Graph, s: int, t: int, allowed: set[int]) -> Optional[list[int]]:
    if s not in allowed or t not in allowed:
        return None
    prev = {s: s}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        if u == t:
            path = [t]
            while prev[path[-1]] != path[-1]:
                path.append(prev[path[-1]])
            path.reverse()
            return path
        for w in g.neighbors(u):
            if w in allowed and w not in prev:
                prev[w] = u
                queue.append(w)
    return None


class _Budgeted:
    """Depth-first hole branching with a visited-set memo per budget."""

    def __init__(self, g: Graph, forced_pairs: tuple[tuple[int, int], ...] = (),
                 forbidden: frozenset[int] = frozenset()):
        self.g = g
        self.forced = forced_pairs
        self.forbidden = forbidden
        self.nodes = 0
        self.seen: dict[frozenset[int], int] = {}

    def solve(self, deleted: frozenset[int], budget: int) -> Optional[frozenset[int]]:
        if self.seen.get(deleted, -1) >= budget:
            return None
        self.seen[deleted] = budget
        self.nodes += 1
        for x, y in self.forced:
            if x not in deleted and y not in deleted:
                if budget == 0:
                    return None
                for v in (x, y):
                    if v in self.forbidden:
                        continue
                    res = self.solve(deleted | {v}, budget - 1)
                    if res is not None:
                        return res
                return None
        hole = shortest_hole_avoiding(self.g, deleted)
        if hole is None:
            return deleted
        if budget == 0:
            return None
        for v in hole.vertices:
            if v in self.forbidden:
                continue
            res = self.solve(deleted | {v}, budget - 1)
            if res is not None:
                return res
        return None


def exact_chvd(g: Graph, k: int, node_budget: int = 2_000_000) -> Optional[ExactResult]:
    """Minimum chordal deletion set of size <= k, or None (no solution within k).

    Optimality is certified by trying budgets 0..k in order; the first
    success is a minimum.
    """
    if k < 0:
        return None
    solver = _Budgeted(g)
    for budget in range(k + 1):
        res = solver.solve(frozenset(), budget)
        check(solver.nodes <= node_budget, "exact search exceeded its node budget")
        if res is not None:
            return ExactResult(len(res), res, solver.nodes)
    return None


def exact_chvd_avoiding(
    g: Graph, k: int, forbidden: Iterable[int],
    node_budget: int = 2_000_000,
) -> Optional[ExactResult]:
    """Minimum hole-hitting set of size <= k avoiding the forbidden set."""
    if k < 0:
        return None
    solver = _Budgeted(g, forbidden=frozenset(forbidden))
    for budget in range(k + 1):
        res = solver.solve(frozenset(), budget)
        check(solver.nodes <= node_budget, "exact search exceeded its node budget")
        if res is not None:
            return ExactResult(len(res), res, solver.nodes)
    return None


def exact_chvd_forced(
    g: Graph,
    k: int,
    forced_pairs: tuple[tuple[int, int], ...] = (),
    node_budget: int = 2_000_000,
) -> Optional[ExactResult]:
    """Like exact_chvd with additional constraints: every forced pair must
    lose at least one endpoint."""
    if k < 0:
        return None
    solver = _Budgeted(g, tuple(forced_pairs))
    for budget in range(k + 1):
        res = solver.solve(frozenset(), budget)
        check(solver.nodes <= node_budget, "exact search exceeded its node budget")
        if res is not None:
            return ExactResult(len(res), res, solver.nodes)
    return None


def _shortest_surviving_path(
    d: DiGraph, pairs: list[tuple[int, int]], deleted: frozenset[int]
) -> Optional[list[int]]:
    best: Optional[list[int]] = None
    for s, t in pairs:
        if s in deleted or t in deleted:
            continue
        prev = {s: s}
        queue = deque([s])
        found = None
        while queue:
            u = queue.popleft()
            if u == t:
                path = [t]
                while prev[path[-1]] != path[-1]:
                    path.append(prev[path[-1]])
                path.reverse()
                found = path
                break
            for w in d.out_neighbors(u):
                if w not in prev and w not in deleted:
                    prev[w] = u
                    queue.append(w)
        if found is not None and (best is None or len(found) < len(best)):
            best = found
    return best


class _MulticutBudgeted:
    def __init__(self, d: DiGraph, pairs: list[tuple[int, int]]):
        self.d = d
        self.pairs = pairs
        self.nodes = 0
        self.seen: dict[frozenset[int], int] = {}

    def solve(self, deleted: frozenset[int], budget: int) -> Optional[frozenset[int]]:
        if self.seen.get(deleted, -1) >= budget:
            return None
        self.seen[deleted] = budget
        self.nodes += 1
        path = _shortest_surviving_path(self.d, self.pairs, deleted)
        if path is None:
            return deleted
        if budget == 0:
            return None
        # terminals are deletable, but internal vertices usually cut more
        for v in path[1:-1] + [path[0], path[-1]]:
            res = self.solve(deleted | {v}, budget - 1)
            if res is not None:
                return res
        return None


def exact_multicut(
    d: DiGraph, pairs: list[tuple[int, int]], k: int,
    node_budget: int = 2_000_000,
) -> Optional[ExactResult]:
    """Minimum vertex multicut of size <= k (terminals deletable), or None."""
    if k < 0:
        return None
    solver = _MulticutBudgeted(d, list(pairs))
    for budget in range(k + 1):
        res = solver.solve(frozenset(), budget)
        check(solver.nodes <= node_budget, "exact search exceeded its node budget")
        if res is not None:
            return ExactResult(len(res), res, solver.nodes)
    return None
