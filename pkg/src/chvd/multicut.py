"""Directed vertex multicut engines.

Three layers: a minimum vertex cut (vertex-split max-flow), Skew Multicut
(recursive halving over the source order, cost |x| * ceil(log2(a+1))),
and Multicut in downward-oriented chordal graphs (threshold deletion,
chordal auxiliary graph, clique cover, then one min cut plus one skew
instance per clique).  Every returned set is re-verified as a multicut.
"""
from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

from .graphs import DiGraph, Graph, check, di_bfs_path, di_reachable
from .chordal import CliqueTree, is_chordal, minimal_path, recognize, PEO
from .lp import FractionalSolution, at_least, separate_multicut


@dataclass(frozen=True)
class MulticutInstance:
    """Directed graph plus ordered terminal pairs."""

    d: DiGraph
    terminals: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for s, t in self.terminals:
            if not (0 <= s < self.d.n and 0 <= t < self.d.n):
                raise ValueError(f"terminal pair ({s},{t}) outside the graph")

    def is_multicut(self, removed) -> bool:
        removed_set = set(removed)
        return all(
            di_bfs_path(self.d, [s], [t], removed=removed_set) is None
            for s, t in self.terminals
        )


@dataclass(frozen=True)
class SkewInstance:
    """Multicut with a staircase pair structure between two ordered lists.

    Pairs are (source, target) with source in ``tu`` and target in ``tv``;
    whenever (tu[i], tv[j]) is a pair, so is (tu[i'], tv[j']) for every
    i' >= i and j' <= j.
    """

    base: MulticutInstance
    tu: tuple[int, ...]
    tv: tuple[int, ...]

    def __post_init__(self):
        iu = {u: i for i, u in enumerate(self.tu)}
        iv = {v: j for j, v in enumerate(self.tv)}
        pairset = set(self.base.terminals)
        for u, v in self.base.terminals:
            if u not in iu or v not in iv:
                raise ValueError("terminal pair endpoints outside tu x tv")
            for i2 in range(iu[u], len(self.tu)):
                for j2 in range(iv[v] + 1):
                    if (self.tu[i2], self.tv[j2]) not in pairset:
                        raise ValueError("pair family is not staircase-closed")


def min_vertex_cut(
    d: DiGraph,
    sources: Sequence[int],
    sinks: Sequence[int],
    deletable: Sequence[int],
    prefer_avoiding: Sequence[int] = (),
) -> frozenset[int]:
    """Minimum-cardinality deletable vertex set disconnecting sources from sinks.

    Vertex-split max-flow: v becomes v_in -> v_out with capacity one when
    deletable, unbounded otherwise.  Raises ValueError when no deletable
    cut exists (an all-undeletable path).

    ``prefer_avoiding`` is a soft secondary objective: among minimum
    cuts, one using the fewest listed vertices is returned (capacities
    are scaled so cardinality stays the primary criterion).
    """
    n = d.n
    deletable_set = set(deletable)
    avoid_set = set(prefer_avoiding) & deletable_set
    unit = n + 2
    inf = unit * (n + 1)
    # node 2v = v_in, 2v+1 = v_out; 2n = super source, 2n+1 = super sink
    size = 2 * n + 2
    cap: list[dict[int, int]] = [dict() for _ in range(size)]

    def add(a: int, b: int, c: int) -> None:
        cap[a][b] = cap[a].get(b, 0) + c
        cap[b].setdefault(a, 0)

    for v in range(n):
        if v in deletable_set:
            add(2 * v, 2 * v + 1, unit + 1 if v in avoid_set else unit)
        else:
            add(2 * v, 2 * v + 1, inf)
        for w in d.out_neighbors(v):
            add(2 * v + 1, 2 * w, inf)
    for s in set(sources):
        add(2 * n, 2 * s, inf)
    for t in set(sinks):
        add(2 * t + 1, 2 * n + 1, inf)

    src, dst = 2 * n, 2 * n + 1
    flow = 0
    while True:
        prev = {src: src}
        queue = deque([src])
        while queue and dst not in prev:
            a = queue.popleft()
            for b in sorted(cap[a]):
                if b not in prev and cap[a][b] > 0:
                    prev[b] = a
                    queue.append(b)
        if dst not in prev:
            break
        path = [dst]
        while path[-1] != src:
            path.append(prev[path[-1]])
        path.reverse()
        bottleneck = min(cap[a][b] for a, b in zip(path, path[1:]))
        for a, b in zip(path, path[1:]):
            cap[a][b] -= bottleneck
            cap[b][a] += bottleneck
        flow += bottleneck
        if flow >= inf:
            raise ValueError(
                "sources and sinks cannot be separated by deletable vertices"
            )
    reach = {src}
    queue = deque([src])
    while queue:
        a = queue.popleft()
        for b in cap[a]:
            if b not in reach and cap[a][b] > 0:
                reach.add(b)
                queue.append(b)
    cut = frozenset(
        v for v in range(n) if 2 * v in reach and 2 * v + 1 not in reach
    )
    cost = sum(unit + 1 if v in avoid_set else unit for v in cut)
    check(cost == flow, "max-flow / min-cut mismatch")
    return cut


def _cut_within(
    d: DiGraph, alive: set[int], sources, sinks, deletable,
    prefer_avoiding=(),
) -> frozenset[int]:
    """Minimum vertex cut computed inside the induced live subgraph."""
    sub = d.induced(sorted(alive))
    m = {old: new for new, old in enumerate(sub.old_of)}
    cut = min_vertex_cut(
        sub.graph,
        [m[s] for s in set(sources) if s in m],
        [m[t] for t in set(sinks) if t in m],
        [m[v] for v in set(deletable) if v in m],
        prefer_avoiding=[m[v] for v in set(prefer_avoiding) if v in m],
    )
    return frozenset(sub.old_of[v] for v in cut)


def skew_multicut(inst: SkewInstance, x: FractionalSolution) -> frozenset[int]:
    """Integral skew multicut of size at most |x| * ceil(log2(|tu| + 1)).

    The copy trick wires a fresh undeletable copy into every source and
    out of every target, so a cut always exists; originals (including the
    terminal lists themselves) stay deletable.
    """
    d, pairs = inst.base.d, list(inst.base.terminals)
    if separate_multicut(d, pairs, x) is not None:
        raise ValueError("fractional solution is infeasible for the instance")
    n = d.n
    a, b = len(inst.tu), len(inst.tv)
    # copy graph: source copy of tu[i] is n+i, target copy of tv[j] is n+a+j
    arcs = list(d.arcs())
    arcs += [(n + i, u) for i, u in enumerate(inst.tu)]
    arcs += [(v, n + a + j) for j, v in enumerate(inst.tv)]
    dd = DiGraph(n + a + b, arcs)
    iu = {u: i for i, u in enumerate(inst.tu)}
    iv = {v: j for j, v in enumerate(inst.tv)}
    index_pairs = [(iu[u], iv[v]) for u, v in pairs]
    side_masses: list[float] = []

    def src_copy(i: int) -> int:
        return n + i

    def dst_copy(j: int) -> int:
        return n + a + j

    def recurse(alive: set[int], active: list[tuple[int, int]]) -> frozenset[int]:
        removed = set(dd.vertices()) - alive
        live = [
            (i, j)
            for i, j in active
            if src_copy(i) in alive and dst_copy(j) in alive
            and di_bfs_path(dd, [src_copy(i)], [dst_copy(j)], removed=removed)
            is not None
        ]
        if not live:
            return frozenset()
        sources = sorted({i for i, _ in live})
        originals = [v for v in alive if v < n]
        terminal_members = (set(inst.tu) | set(inst.tv)) & alive
        if len(sources) == 1:
            i = sources[0]
            sinks = {dst_copy(j) for _, j in live}
            return _cut_within(dd, alive, [src_copy(i)], sinks, originals,
                               prefer_avoiding=terminal_members)
        mid = sources[len(sources) // 2]
        # largest target index over live pairs with source index <= mid:
        # staircase closure then pairs (i >= mid, j <= j_max) with the whole
        # original family, which is what the cut's LP bound needs
        j_max = max(j for i, j in live if i <= mid)
        tv1 = {dst_copy(j) for _, j in live if j <= j_max}
        tu2 = {src_copy(i) for i in sources if i >= mid}
        x0 = _cut_within(dd, alive, tu2, tv1, originals,
                         prefer_avoiding=terminal_members)
        alive2 = alive - x0
        removed2 = set(dd.vertices()) - alive2
        a1 = di_reachable(dd, sorted(tv1 & alive2), removed=removed2,
                          reverse=True)
        a2 = di_reachable(dd, sorted(tu2 & alive2), removed=removed2)
        check(not (a1 & a2), "reachability sides intersect after the cut")
        side_masses.append(
            x.mass(v for v in a1 if v < n) + x.mass(v for v in a2 if v < n)
        )
        pairs1 = [(i, j) for i, j in live if i < mid]
        pairs2 = [(i, j) for i, j in live if i > mid and j > j_max]
        return x0 | recurse(a1, pairs1) | recurse(a2, pairs2)

    solution = recurse(set(dd.vertices()), index_pairs)
    check(solution <= set(range(n)), "skew solution uses copy vertices")
    check(inst.base.is_multicut(solution), "skew solution is not a multicut")
    bound = x.objective * math.ceil(math.log2(a + 1)) if a else 0.0
    check(len(solution) <= bound + 1e-6, "skew solution exceeds the log bound")
    total = x.mass(range(n))
    for side in side_masses:
        check(side <= total + 1e-6,
              "recursion sides carry more mass than the whole instance")
    return solution


@dataclass(frozen=True)
class DownwardInstance:
    """A chordal graph oriented along a total order extending clique-tree
    ancestry, plus terminal pairs for the multicut."""

    g: Graph
    tree: CliqueTree
    order: tuple[int, ...]          # vertices sorted by the total order
    digraph: DiGraph
    terminals: tuple[tuple[int, int], ...] = ()

    def rank(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.order)}

    def with_terminals(self, terminals) -> "DownwardInstance":
        return DownwardInstance(
            self.g, self.tree, self.order, self.digraph, tuple(terminals)
        )


def build_downward(g: Graph, tree: CliqueTree) -> DownwardInstance:
    """Orient a chordal graph downward: by top-node depth, then vertex id."""
    order = sorted(g.vertices(), key=lambda v: (tree.depth(tree.top(v)), v))
    rank = {v: i for i, v in enumerate(order)}
    arcs = [(u, v) if rank[u] < rank[v] else (v, u) for u, v in g.edges()]
    d = DiGraph(g.n, arcs)
    check(d.is_acyclic(), "downward orientation is not acyclic")
    return DownwardInstance(g, tree, tuple(order), d)


def dist_from(
    d: DiGraph,
    x: FractionalSolution,
    source: int,
    alive: Optional[set[int]] = None,
) -> dict[int, float]:
    """Vertex-weighted distances from one source, endpoints included."""
    if alive is not None and source not in alive:
        return {}
    dist = {source: x.value(source)}
    heap = [(dist[source], source)]
    while heap:
        cost, u = heapq.heappop(heap)
        if cost > dist.get(u, float("inf")):
            continue
        for w in d.out_neighbors(u):
            if alive is not None and w not in alive:
                continue
            nd = cost + x.value(w)
            if nd < dist.get(w, float("inf")) - 1e-15:
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    return dist


def clique_cover_chordal(h: Graph) -> list[frozenset[int]]:
    """Partition a chordal graph into alpha(H) cliques (greedy over a PEO)."""
    res = recognize(h)
    if not isinstance(res, PEO):
        raise ValueError("clique cover requires a chordal graph")
    pos = res.position()
    assigned: dict[int, int] = {}
    cliques: list[set[int]] = []
    for v in res.ordering:
        if v in assigned:
            continue
        group = {v}
        assigned[v] = len(cliques)
        for u in h.neighbors(v):
            if pos[u] > pos[v] and u not in assigned:
                group.add(u)
                assigned[u] = len(cliques)
        cliques.append(group)
    out = [frozenset(c) for c in cliques]
    for c in out:
        check(all(h.has_edge(p, q) for p in c for q in c if p < q),
              "cover part is not a clique")
    check(sum(len(c) for c in out) == h.n and
          set().union(*out) == set(range(h.n)) if out else h.n == 0,
          "cover is not a partition")
    return out


def downward_multicut(
    inst: DownwardInstance, x: FractionalSolution
) -> frozenset[int]:
    """Integral multicut for a downward-oriented chordal instance.

    Stages: delete heavy vertices (x >= 1/8); build the auxiliary chordal
    graph H on surviving pairs via tree-interval overlap; cover H by
    cliques; per clique split pairs at fractional distance 1/2 from the
    shared bag and solve one min cut plus one skew multicut.
    """
    d = inst.digraph
    pairs = list(inst.terminals)
    if separate_multicut(d, pairs, x) is not None:
        raise ValueError("fractional solution is infeasible for the instance")
    rank = inst.rank()
    x0 = {v for v in d.vertices() if at_least(x.value(v), 1.0 / 8)}
    solution: set[int] = set(x0)

    alive = set(d.vertices()) - x0
    live_pairs = [
        (u, v)
        for u, v in pairs
        if u in alive and v in alive
        and di_bfs_path(d, [u], [v], removed=x0) is not None
    ]
    if not live_pairs:
        check(_verify(inst, solution), "threshold deletion missed a pair")
        return frozenset(solution)

    tree = inst.tree
    intervals: dict[tuple[int, int], frozenset[int]] = {}
    cores: dict[tuple[int, int], frozenset[int]] = {}
    for u, v in live_pairs:
        check(not inst.g.has_edge(u, v),
              "adjacent terminal pair survived the threshold deletion")
        nodes = minimal_path(tree, u, v)
        inner = frozenset(nodes[1:-1])
        check(len(inner) > 0, "terminal pair with no internal tree nodes")
        intervals[(u, v)] = inner
        path = di_bfs_path(d, [u], [v], removed=x0)
        cores[(u, v)] = frozenset(path[2:-2])
    hn = len(live_pairs)
    h = Graph(hn, [
        (i, j)
        for i in range(hn)
        for j in range(i + 1, hn)
        if intervals[live_pairs[i]] & intervals[live_pairs[j]]
    ])
    check(is_chordal(h), "auxiliary pair graph is not chordal")
    for i in range(hn):
        for j in range(i + 1, hn):
            if not h.has_edge(i, j):
                check(not (cores[live_pairs[i]] & cores[live_pairs[j]]),
                      "non-adjacent pairs share shortest-path cores")

    cover = clique_cover_chordal(h)
    check(len(cover) <= max(1.0, 2 * x.objective + 1e-6),
          "clique cover needs at least 2|x| parts")

    for part in sorted(cover, key=sorted):
        members = [live_pairs[i] for i in sorted(part)]
        common = frozenset.intersection(*(intervals[p] for p in members))
        check(len(common) > 0, "clique in H has no common tree node")
        s_node = min(common)
        bag = tree.bags[s_node]
        bag_alive = sorted(w for w in bag if w in alive)
        check(bool(bag_alive), "shared bag fully deleted under live pairs")
        up: list[tuple[int, int]] = []
        down: list[tuple[int, int, list[int]]] = []
        for u, v in members:
            check(u not in bag and v not in bag, "terminal inside the shared bag")
            du_map = dist_from(d, x, u, alive=alive)
            du = min((du_map.get(w, float("inf")) for w in bag_alive),
                     default=float("inf"))
            beta_p = sorted(
                (w for w in bag_alive if rank[u] <= rank[w]),
                key=lambda w: rank[w],
            )
            check(bool(beta_p), "live pair with an empty bag suffix")
            dv = float("inf")
            for w in beta_p:
                dv = min(dv, dist_from(d, x, w, alive=alive).get(v, float("inf")))
            check(min(du, 1.0) + min(dv, 1.0) >= 1.0 - 1e-6,
                  "distance split claim fails")
            if at_least(du, 0.5):
                up.append((u, v))
            else:
                check(dv >= 0.5 - 1e-6, "downward pair too close to its bag")
                down.append((u, v, beta_p))
        if up:
            cut = _cut_within(d, alive, [u for u, _ in up], bag_alive, alive)
            check(len(cut) <= 2 * x.objective + 1e-6,
                  "upward min cut exceeds twice the fractional mass")
            solution |= cut
        if down:
            sub = d.induced(sorted(alive))
            m = {old: new for new, old in enumerate(sub.old_of)}
            tu = [m[w] for w in sorted(bag_alive, key=lambda w: rank[w])]
            ordered = sorted(down, key=lambda item: (rank[item[0]], rank[item[1]]))
            seen_targets = set()
            tv = []
            skew_pairs = []
            for u, v, beta_p in ordered:
                if v in seen_targets:
                    continue
                seen_targets.add(v)
                tv.append(m[v])
                skew_pairs.extend((m[w], m[v]) for w in beta_p)
            base = MulticutInstance(sub.graph, tuple(skew_pairs))
            skew = SkewInstance(base, tuple(tu), tuple(tv))
            x_local = FractionalSolution(
                {m[v]: 2 * x.value(v) for v in sub.old_of}, tolerance=1e-5
            )
            cut = skew_multicut(skew, x_local)
            solution |= {sub.old_of[v] for v in cut}

    check(_verify(inst, solution), "assembled set is not a multicut")
    return frozenset(solution)


def _verify(inst: DownwardInstance, removed: set[int]) -> bool:
    return all(
        di_bfs_path(inst.digraph, [s], [t], removed=removed) is None
        for s, t in inst.terminals
    )
