"""Core graph types: undirected graphs, directed graphs, and holes.

Vertices are dense integers 0..n-1.  Graphs are immutable after
construction; every mutating operation (vertex deletion, edge addition,
induced subgraph) returns a new object.  Deletions remap vertex ids, and
the remapping is always returned alongside the new graph so provenance
survives chains of reductions.
"""
from __future__ import annotations

from dataclasses import dataclass
from collections import deque
from typing import Iterable, Iterator, Optional, Sequence


class InvariantError(AssertionError):
    """A runtime invariant promised by the library was violated."""


def check(condition: bool, message: str) -> None:
    """Raise InvariantError unless condition holds."""
    if not condition:
        raise InvariantError(message)


class Graph:
    """Simple undirected graph on vertex ids 0..n-1.

    Adjacency is stored as one sorted tuple per vertex, which gives
    deterministic iteration order (several marking rules depend on it)
    and O(log d) membership via binary search -- in practice we keep a
    parallel frozenset per vertex for O(1) membership.
    """

    __slots__ = ("_adj", "_adjset", "_m")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        adj: list[set[int]] = [set() for _ in range(n)]
        m = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) outside vertex range 0..{n - 1}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if v in adj[u]:
                continue
            adj[u].add(v)
            adj[v].add(u)
            m += 1
        self._adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in adj)
        self._adjset: tuple[frozenset[int], ...] = tuple(frozenset(s) for s in adj)
        self._m = m

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def m(self) -> int:
        return self._m

    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def neighbor_set(self, v: int) -> frozenset[int]:
        return self._adjset[v]

    def closed_neighborhood(self, v: int) -> frozenset[int]:
        return self._adjset[v] | {v}

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adjset[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in self._adj[u]:
                if u < v:
                    yield (u, v)

    def add_edges(self, new_edges: Iterable[tuple[int, int]]) -> "Graph":
        return Graph(self.n, list(self.edges()) + list(new_edges))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __hash__(self) -> int:
        return hash(self._adj)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class Subgraph:
    """An induced subgraph together with its id remapping.

    ``old_of[new_id]`` is the id the vertex had in the parent graph.
    """

    graph: Graph
    old_of: tuple[int, ...]

    def new_of(self, old_id: int) -> int:
        return self._index()[old_id]

    def _index(self) -> dict[int, int]:
        return {old: new for new, old in enumerate(self.old_of)}

    def to_parent(self, new_ids: Iterable[int]) -> set[int]:
        return {self.old_of[v] for v in new_ids}

    def to_sub(self, old_ids: Iterable[int]) -> set[int]:
        idx = self._index()
        return {idx[v] for v in old_ids}


def induced_subgraph(g: Graph, s: Iterable[int]) -> Subgraph:
    """Induced subgraph on vertex set s, ids remapped to 0..|s|-1.

    The remapping preserves relative vertex order.
    """
    keep = sorted(set(s))
    for v in keep:
        if not (0 <= v < g.n):
            raise ValueError(f"unknown vertex id {v}")
    new_of = {old: new for new, old in enumerate(keep)}
    edges = [
        (new_of[u], new_of[v])
        for u, v in g.edges()
        if u in new_of and v in new_of
    ]
    return Subgraph(Graph(len(keep), edges), tuple(keep))


def delete_vertices(g: Graph, s: Iterable[int]) -> Subgraph:
    drop = set(s)
    return induced_subgraph(g, (v for v in g.vertices() if v not in drop))


def connected_components(g: Graph) -> list[frozenset[int]]:
    """Partition of V(g) into connected components, ordered by smallest member."""
    seen = [False] * g.n
    comps = []
    for start in g.vertices():
        if seen[start]:
            continue
        seen[start] = True
        queue = deque([start])
        comp = {start}
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                if not seen[w]:
                    seen[w] = True
                    comp.add(w)
                    queue.append(w)
        comps.append(frozenset(comp))
    return comps


def components_within(g: Graph, allowed: Iterable[int]) -> list[frozenset[int]]:
    """Connected components of g restricted to the given vertex set."""
    allowed_set = set(allowed)
    seen: set[int] = set()
    comps = []
    for start in sorted(allowed_set):
        if start in seen:
            continue
        seen.add(start)
        queue = deque([start])
        comp = {start}
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                if w in allowed_set and w not in seen:
                    seen.add(w)
                    comp.add(w)
                    queue.append(w)
        comps.append(frozenset(comp))
    return comps


def is_clique(g: Graph, s: Iterable[int]) -> bool:
    vs = sorted(set(s))
    return all(g.has_edge(u, v) for i, u in enumerate(vs) for v in vs[i + 1 :])


def bfs_path(
    g: Graph,
    source: int,
    targets: Iterable[int],
    allowed: Optional[Iterable[int]] = None,
) -> Optional[list[int]]:
    """Shortest path (fewest vertices) from source to any target.

    Restricted to ``allowed`` vertices when given (which must include the
    source and the reachable target).  Neighbors are explored in sorted
    order, so the returned path is deterministic.
    """
    target_set = set(targets)
    allowed_set = set(allowed) if allowed is not None else None
    if allowed_set is not None and source not in allowed_set:
        return None
    if source in target_set:
        return [source]
    prev = {source: source}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if w in prev:
                continue
            if allowed_set is not None and w not in allowed_set:
                continue
            prev[w] = u
            if w in target_set:
                path = [w]
                while path[-1] != source:
                    path.append(prev[path[-1]])
                path.reverse()
                return path
            queue.append(w)
    return None


@dataclass(frozen=True)
class Hole:
    """An induced cycle of length at least four, stored as a cyclic sequence."""

    vertices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    def canonical(self) -> "Hole":
        """Rotate/reflect so the smallest vertex comes first, then its smaller neighbor."""
        vs = self.vertices
        k = len(vs)
        i = vs.index(min(vs))
        fwd = tuple(vs[(i + j) % k] for j in range(k))
        bwd = tuple(vs[(i - j) % k] for j in range(k))
        return Hole(min(fwd, bwd))


def verify_hole(g: Graph, h: Hole) -> bool:
    """True iff h is a chordless cycle of length >= 4 in g with distinct vertices."""
    vs = h.vertices
    k = len(vs)
    if k < 4 or len(set(vs)) != k:
        return False
    if any(not (0 <= v < g.n) for v in vs):
        return False
    for i in range(k):
        for j in range(i + 1, k):
            consecutive = (j - i == 1) or (i == 0 and j == k - 1)
            if g.has_edge(vs[i], vs[j]) != consecutive:
                return False
    return True


def is_induced_path(g: Graph, path: Sequence[int]) -> bool:
    """Consecutive vertices adjacent, all other pairs non-adjacent, no repeats."""
    if len(set(path)) != len(path):
        return False
    for i in range(len(path)):
        for j in range(i + 1, len(path)):
            if g.has_edge(path[i], path[j]) != (j - i == 1):
                return False
    return True


def shortcut_walk(g: Graph, walk: Sequence[int]) -> list[int]:
    """Shortcut an st-walk to an induced st-path within the walk's vertices.

    A shortest st-path in g[V(walk)] is induced in g, so one BFS suffices.
    Raises InvariantError if s and t are disconnected in g[V(walk)], which
    cannot happen for a genuine walk and signals corrupted input.
    """
    if not walk:
        raise ValueError("empty walk")
    s, t = walk[0], walk[-1]
    path = bfs_path(g, s, [t], allowed=walk)
    check(path is not None, "walk endpoints disconnected within walk vertices")
    return path


@dataclass(frozen=True)
class DiSubgraph:
    graph: "DiGraph"
    old_of: tuple[int, ...]

    def to_parent(self, new_ids: Iterable[int]) -> set[int]:
        return {self.old_of[v] for v in new_ids}

    def to_sub(self, old_ids: Iterable[int]) -> set[int]:
        idx = {old: new for new, old in enumerate(self.old_of)}
        return {idx[v] for v in old_ids}


class DiGraph:
    """Directed graph on vertex ids 0..n-1 with out- and in-neighbor sets.

    Arcs are ordered pairs; no self-loops.  Acyclicity is not an invariant
    of the type and is checked by callers where required.
    """

    __slots__ = ("_out", "_in", "_outset", "_m")

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]] = ()):
        out: list[set[int]] = [set() for _ in range(n)]
        into: list[set[int]] = [set() for _ in range(n)]
        m = 0
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u},{v}) outside vertex range 0..{n - 1}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if v in out[u]:
                continue
            out[u].add(v)
            into[v].add(u)
            m += 1
        self._out = tuple(tuple(sorted(s)) for s in out)
        self._in = tuple(tuple(sorted(s)) for s in into)
        self._outset = tuple(frozenset(s) for s in out)
        self._m = m

    @property
    def n(self) -> int:
        return len(self._out)

    @property
    def m(self) -> int:
        return self._m

    def vertices(self) -> range:
        return range(self.n)

    def out_neighbors(self, v: int) -> tuple[int, ...]:
        return self._out[v]

    def in_neighbors(self, v: int) -> tuple[int, ...]:
        return self._in[v]

    def has_arc(self, u: int, v: int) -> bool:
        return v in self._outset[u]

    def arcs(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in self._out[u]:
                yield (u, v)

    def induced(self, s: Iterable[int]) -> DiSubgraph:
        keep = sorted(set(s))
        new_of = {old: new for new, old in enumerate(keep)}
        arcs = [
            (new_of[u], new_of[v])
            for u, v in self.arcs()
            if u in new_of and v in new_of
        ]
        return DiSubgraph(DiGraph(len(keep), arcs), tuple(keep))

    def is_acyclic(self) -> bool:
        indeg = [len(self._in[v]) for v in range(self.n)]
        queue = deque(v for v in range(self.n) if indeg[v] == 0)
        seen = 0
        while queue:
            u = queue.popleft()
            seen += 1
            for w in self._out[u]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
        return seen == self.n

    def __eq__(self, other: object) -> bool:
        return isinstance(other, DiGraph) and self._out == other._out

    def __hash__(self) -> int:
        return hash(self._out)

    def __repr__(self) -> str:
        return f"DiGraph(n={self.n}, m={self.m})"


def di_bfs_path(
    d: DiGraph,
    sources: Iterable[int],
    targets: Iterable[int],
    removed: Iterable[int] = (),
) -> Optional[list[int]]:
    """Shortest directed path from any source to any target avoiding removed."""
    removed_set = set(removed)
    target_set = set(targets) - removed_set
    prev: dict[int, int] = {}
    queue: deque[int] = deque()
    for s in sorted(set(sources)):
        if s in removed_set or s in prev:
            continue
        prev[s] = s
        if s in target_set:
            return [s]
        queue.append(s)
    while queue:
        u = queue.popleft()
        for w in d.out_neighbors(u):
            if w in prev or w in removed_set:
                continue
            prev[w] = u
            if w in target_set:
                path = [w]
                while prev[path[-1]] != path[-1]:
                    path.append(prev[path[-1]])
                path.reverse()
                return path
            queue.append(w)
    return None


def di_reachable(d: DiGraph, sources: Iterable[int], removed: Iterable[int] = (),
                 reverse: bool = False) -> set[int]:
    """Vertices reachable from sources (or reaching them when reverse=True)."""
    removed_set = set(removed)
    seen = set()
    queue: deque[int] = deque()
    for s in sorted(set(sources)):
        if s not in removed_set and s not in seen:
            seen.add(s)
            queue.append(s)
    while queue:
        u = queue.popleft()
        nbrs = d.in_neighbors(u) if reverse else d.out_neighbors(u)
        for w in nbrs:
            if w not in seen and w not in removed_set:
                seen.add(w)
                queue.append(w)
    return seen
