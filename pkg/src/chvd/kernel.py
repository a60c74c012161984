"""The kernelization pipeline for annotated chordal vertex deletion.

An annotated instance carries a tidy modulator M (removing all but any
one member leaves a chordal graph) and forced pairs, of which every
solution must delete one endpoint.  Reductions fire lowest-numbered
first; each firing is recorded as one replayable trace event:

  1. force a nonadjacent modulator pair with k+2 independent common
     neighbors;
  2. force a pair connected through k+2 subtree-separated paths;
  3. delete an unmarked vertex of an oversized clique;
  4. absorb an unmarked nonneighbor component into a modulator vertex;
  5. delete a component unmarked by the toughness template around the
     separator bags;
  6. delete a component vertex appearing in no bag of its boundary path;
  7. bypass a component vertex outside the important set Z.

The toughness template also runs inside rule 4 with per-pair separators.
Every event preserves the instance answer; the acceptance suite checks
this against the exact oracle per event.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .graphs import (
    Graph,
    Subgraph,
    check,
    components_within,
    delete_vertices,
    induced_subgraph,
)
from .chordal import CliqueTree, build_clique_tree, clique_tree_of, is_chordal, \
    mis_chordal, recognize, PEO
from .flower import flower_and_cover


@dataclass(frozen=True)
class AChvdInstance:
    """Annotated instance (G, k, M, E^h)."""

    g: Graph
    k: int
    modulator: frozenset[int]
    forced: frozenset[frozenset[int]] = frozenset()

    def validate(self) -> None:
        m = self.modulator
        for pair in self.forced:
            check(len(pair) == 2, "forced pair is not a pair")
            x, y = sorted(pair)
            check(x in m and y in m, "forced pair outside the modulator")
            check(self.g.has_edge(x, y), "forced pair is not an edge")
        check(is_chordal(delete_vertices(self.g, m).graph),
              "graph minus modulator is not chordal")
        for v in sorted(m):
            rest = delete_vertices(self.g, m - {v})
            check(is_chordal(rest.graph), "modulator is not tidy")

    def forced_tuples(self) -> tuple[tuple[int, int], ...]:
        return tuple(tuple(sorted(p)) for p in sorted(self.forced, key=sorted))

    def core(self) -> Subgraph:
        return delete_vertices(self.g, self.modulator)

    def selector(self, positives: Iterable[int] = (),
                 negatives: Iterable[int] = ()) -> frozenset[int]:
        """V(x1..xa, !y1..!yb): nonmodulator common neighbors of the
        positives avoiding all neighborhoods of the negatives."""
        out = set(self.g.vertices()) - self.modulator
        for x in positives:
            out &= self.g.neighbor_set(x)
        for y in negatives:
            out -= self.g.neighbor_set(y)
        return frozenset(out)

    def nonneighbor_components(self, x: int) -> list[frozenset[int]]:
        """Connected components of G(not x)."""
        return components_within(self.g, self.selector(negatives=[x]))


@dataclass(frozen=True)
class KernelParams:
    """All marking thresholds, derived from (k, |M|)."""

    k: int
    m_size: int

    @property
    def omega_bound(self) -> int:
        k, m = self.k, self.m_size
        return (k + 1) * (m ** 3 + (k + 3) * m ** 2)

    @property
    def component_mark_bound(self) -> int:
        k, m = self.k, self.m_size
        return (k + 1) * ((k + 2) * self.omega_bound + m) ** 2 + 1

    @property
    def component_count_bound(self) -> int:
        k, m = self.k, self.m_size
        return (k + 1) * ((k + 2) * self.omega_bound + m) ** 2 \
            + (k + 1) * (m + m * m) + 1

    @property
    def z_bound(self) -> int:
        w = max(self.omega_bound, 1)
        q2 = 2 + 4 * w + 2 * (2 + 4 * w) * w
        return (2 * q2 - 1) * w

    @staticmethod
    def of(inst: AChvdInstance) -> "KernelParams":
        return KernelParams(inst.k, len(inst.modulator))


@dataclass(frozen=True)
class ReductionEvent:
    """One replayable reduction step, expressed in the ids current at the
    time of firing."""

    rule: str
    witness: tuple
    deleted: tuple[int, ...] = ()
    added_edges: tuple[tuple[int, int], ...] = ()
    forced_pair: Optional[tuple[int, int]] = None
    k_delta: int = 0
    counters: tuple[tuple[str, int], ...] = ()


def apply_event(inst: AChvdInstance, event: ReductionEvent) -> AChvdInstance:
    """Apply one event: add edges, force the pair, delete, adjust k."""
    g = inst.g
    forced = set(inst.forced)
    if event.added_edges:
        g = g.add_edges(event.added_edges)
    if event.forced_pair is not None:
        forced.add(frozenset(event.forced_pair))
    modulator = set(inst.modulator)
    if event.deleted:
        sub = delete_vertices(g, event.deleted)
        remap = {old: new for new, old in enumerate(sub.old_of)}
        g = sub.graph
        modulator = {remap[v] for v in modulator if v in remap}
        forced = {
            frozenset(remap[v] for v in pair)
            for pair in forced
            if all(v in remap for v in pair)
        }
    return AChvdInstance(g, inst.k + event.k_delta, frozenset(modulator),
                         frozenset(forced))


def _finish(inst: AChvdInstance, event: ReductionEvent) -> tuple[
        AChvdInstance, ReductionEvent]:
    out = apply_event(inst, event)
    counters = (("n", out.g.n), ("m", out.g.m),
                ("modulator", len(out.modulator)), ("forced", len(out.forced)))
    return out, ReductionEvent(event.rule, event.witness, event.deleted,
                               event.added_edges, event.forced_pair,
                               event.k_delta, counters)


def _modulator_pairs(inst: AChvdInstance, adjacent: bool) -> list[tuple[int, int]]:
    ms = sorted(inst.modulator)
    return [
        (x, y)
        for i, x in enumerate(ms)
        for y in ms[i + 1 :]
        if inst.g.has_edge(x, y) == adjacent
    ]


def rule1_common_neighbours(inst: AChvdInstance) -> Optional[
        tuple[AChvdInstance, ReductionEvent]]:
    """Force xy when G(x, y) holds an independent set of size k + 2."""
    for x, y in _modulator_pairs(inst, adjacent=False):
        common = inst.selector(positives=[x, y])
        if len(common) < inst.k + 2:
            continue
        sub = induced_subgraph(inst.g, common)
        if len(mis_chordal(sub.graph)) >= inst.k + 2:
            event = ReductionEvent(
                rule="rule1",
                witness=(x, y),
                added_edges=((x, y),),
                forced_pair=(x, y),
            )
            return _finish(inst, event)
    return None


def template_toughness(
    inst: AChvdInstance, separator: frozenset[int], label: str, witness: tuple
) -> Optional[tuple[AChvdInstance, ReductionEvent]]:
    """Mark components reachable between separator pairs; delete one
    unmarked component.  Sound for any separator containing the modulator."""
    check(inst.modulator <= separator, "template separator must contain M")
    comps = components_within(inst.g, set(inst.g.vertices()) - separator)
    if not comps:
        return None
    marked: set[int] = set()
    sep = sorted(separator)
    for i, x in enumerate(sep):
        for y in sep[i + 1 :]:
            if not inst.g.has_edge(x, y):
                budget = inst.k + 2
                eligible = [
                    idx for idx, comp in enumerate(comps)
                    if (inst.g.neighbor_set(x) & comp)
                    and (inst.g.neighbor_set(y) & comp)
                ]
            else:
                budget = inst.k + 1
                eligible = [
                    idx for idx, comp in enumerate(comps)
                    if _has_avoiding_path(inst.g, comp, x, y)
                ]
            for idx in eligible[:budget]:
                marked.add(idx)
    for idx, comp in enumerate(comps):
        if idx not in marked:
            event = ReductionEvent(
                rule=label,
                witness=witness + (min(comp),),
                deleted=tuple(sorted(comp)),
            )
            return _finish(inst, event)
    return None


def _has_avoiding_path(g: Graph, comp: frozenset[int], x: int, y: int) -> bool:
    """A path inside comp from N(x) to N(y) avoiding N(x) & N(y)."""
    shared = g.neighbor_set(x) & g.neighbor_set(y)
    for part in components_within(g, comp - shared):
        if (g.neighbor_set(x) & part) and (g.neighbor_set(y) & part):
            return True
    return False


def _xy_good_bottommost(
    inst: AChvdInstance, core: Subgraph, tree: CliqueTree, x: int, y: int
) -> list[int]:
    """Maximally bottommost nodes q admitting an xy-path whose interior
    stays in core vertices represented only inside the subtree of q."""
    top_of = {v: tree.top(v) for v in core.graph.vertices()}
    nx = inst.g.neighbor_set(x)
    ny = inst.g.neighbor_set(y)
    good: dict[int, bool] = {}
    for q in tree.nodes():
        allowed_nodes = tree.subtree_nodes(q)
        inside = {
            core.old_of[v]
            for v in core.graph.vertices()
            if top_of[v] in allowed_nodes
        }
        ok = False
        for part in components_within(inst.g, inside):
            if (nx & part) and (ny & part):
                ok = True
                break
        good[q] = ok
    return sorted(
        q for q in tree.nodes()
        if good[q] and not any(good[c] for c in tree.children(q))
    )


def rule2_xy_good(
    inst: AChvdInstance,
    core: Optional[Subgraph] = None,
    tree: Optional[CliqueTree] = None,
    label: str = "rule2",
) -> Optional[tuple[AChvdInstance, ReductionEvent]]:
    """Force xy when k + 2 maximally bottommost nodes carry xy-paths."""
    if core is None:
        core = inst.core()
        tree = clique_tree_of(core.graph)
    for x, y in _modulator_pairs(inst, adjacent=False):
        nodes = _xy_good_bottommost(inst, core, tree, x, y)
        if len(nodes) >= inst.k + 2:
            event = ReductionEvent(
                rule=label,
                witness=(x, y, len(nodes)),
                added_edges=((x, y),),
                forced_pair=(x, y),
            )
            return _finish(inst, event)
    return None


def _mark_up_to(candidates: list[int], budget: int, marked: set[int]) -> None:
    for v in candidates[: max(budget, 0)]:
        marked.add(v)


def rule3_reduce_clique(
    inst: AChvdInstance, clique: frozenset[int]
) -> Optional[tuple[AChvdInstance, ReductionEvent]]:
    """Delete an unmarked vertex of an oversized core clique.

    Re-checks the path-forcing rule against the re-rooted tree first (its
    bound is rooting-dependent), then marks per the four point classes and
    deletes the smallest unmarked clique vertex.
    """
    params = KernelParams.of(inst)
    check(len(clique) > params.omega_bound, "clique is not oversized")
    core = inst.core()
    base = clique_tree_of(core.graph)
    clique_core = frozenset(core.to_sub(clique))
    root = next(
        (node for node in base.nodes() if clique_core <= base.bags[node]), None
    )
    check(root is not None, "oversized clique not contained in any bag")
    tree = base.reroot(root)

    forced = rule2_xy_good(inst, core, tree, label="rule2")
    if forced is not None:
        return forced

    ms = sorted(inst.modulator)
    k = inst.k
    marked: set[int] = set()

    def dist_to_node(v: int, node: int) -> int:
        return tree.subtree_distance(core.new_of(v), node)

    # point (a): triples
    for x1 in ms:
        for x2 in ms:
            for y in ms:
                cands = sorted(clique & inst.selector([x1, x2], [y]))
                _mark_up_to(cands, k + 1, marked)
    # point (b): per nonadjacent pair and bottommost node, farthest first
    for x1, y1 in _modulator_pairs(inst, adjacent=False):
        nodes = _xy_good_bottommost(inst, core, tree, x1, y1)
        common = clique & inst.selector([x1, y1])
        for q in nodes:
            cands = sorted(common, key=lambda v: (-dist_to_node(v, q), v))
            _mark_up_to(cands, k + 1, marked)
    # points (c) and (d): nearest to the boundary node of A^y
    boundary_node: dict[int, int] = {}
    for y in ms:
        comp = next(
            (c for c in inst.nonneighbor_components(y)
             if c & frozenset(core.old_of[u] for u in base.bags[root])),
            None,
        )
        if comp is None:
            boundary_node[y] = root
            continue
        nbhd = frozenset(
            w
            for v in comp
            for w in inst.g.neighbors(v)
            if w not in inst.modulator and w not in comp
        )
        nbhd_core = frozenset(core.to_sub(nbhd))
        node = next(
            (q for q in tree.nodes() if nbhd_core <= tree.bags[q]), None
        )
        check(node is not None, "component boundary is not inside a bag")
        boundary_node[y] = node
    for x in ms:
        for y in ms:
            for selector_sets in ((clique & inst.selector([x], [y])),
                                  (clique & inst.selector([], [x, y]))):
                cands = sorted(
                    selector_sets,
                    key=lambda v: (dist_to_node(v, boundary_node[y]), v),
                )
                _mark_up_to(cands, k + 1, marked)

    check(len(marked & clique) <= params.omega_bound,
          "marking exceeded its combinatorial budget")
    unmarked = sorted(clique - marked)
    check(bool(unmarked), "oversized clique fully marked")
    event = ReductionEvent(
        rule="rule3",
        witness=(min(clique), len(clique)),
        deleted=(unmarked[0],),
    )
    return _finish(inst, event)


def find_oversized_clique(inst: AChvdInstance) -> Optional[frozenset[int]]:
    params = KernelParams.of(inst)
    core = inst.core()
    if core.graph.n == 0:
        return None
    tree = clique_tree_of(core.graph)
    oversized = [
        frozenset(core.old_of[v] for v in bag)
        for bag in tree.bags
        if len(bag) > params.omega_bound
    ]
    if not oversized:
        return None
    return sorted(oversized, key=lambda c: (-len(c), sorted(c)))[0]


def rule4_components(
    inst: AChvdInstance,
) -> Optional[tuple[AChvdInstance, ReductionEvent]]:
    """Bound the nonneighbor components of every modulator vertex.

    First the toughness template runs on the per-pair boundary separators;
    once those are stable, unmarked components are absorbed by adding all
    edges to x.
    """
    params = KernelParams.of(inst)
    ms = sorted(inst.modulator)
    for x in ms:
        comps_x = inst.nonneighbor_components(x)
        for y in ms:
            if y == x:
                continue
            boundary: set[int] = set()
            for comp in comps_x:
                if inst.g.neighbor_set(y) & comp:
                    for v in comp:
                        boundary.update(inst.g.neighbors(v))
                    boundary -= comp
            separator = frozenset(boundary) | inst.modulator
            fired = template_toughness(inst, separator, "template4", (x, y))
            if fired is not None:
                return fired
    for x in ms:
        comps = inst.nonneighbor_components(x)
        if len(comps) <= 1:
            continue
        marked: set[int] = set()
        for y in ms:
            if y == x:
                continue
            if not inst.g.has_edge(x, y):
                eligible = [
                    i for i, c in enumerate(comps)
                    if inst.g.neighbor_set(y) & c
                ]
                _mark_up_to(eligible, params.component_mark_bound, marked)
            else:
                eligible = [
                    i for i, c in enumerate(comps)
                    if (inst.g.neighbor_set(y) & c)
                    and _core_neighborhood(inst, c) - inst.g.neighbor_set(y)
                ]
                _mark_up_to(eligible, inst.k + 1, marked)
        for y1, y2 in _modulator_pairs(inst, adjacent=False):
            eligible = [
                i for i, c in enumerate(comps)
                if (inst.g.neighbor_set(y1) & c)
                and (inst.g.neighbor_set(y2) & c)
            ]
            _mark_up_to(eligible, inst.k + 1, marked)
        for i, comp in enumerate(comps):
            if i not in marked:
                event = ReductionEvent(
                    rule="rule4",
                    witness=(x, min(comp)),
                    added_edges=tuple((x, v) for v in sorted(comp)),
                )
                return _finish(inst, event)
    return None


def _core_neighborhood(inst: AChvdInstance, comp: frozenset[int]) -> frozenset[int]:
    """Neighborhood of the component inside the chordal core."""
    out: set[int] = set()
    for v in comp:
        out.update(inst.g.neighbors(v))
    return frozenset(out - comp - inst.modulator)


@dataclass(frozen=True)
class SeparatorSet:
    """Marked nodes, their LCA closure, and the union of their bags.

    ``ceilings`` logs the explicit numeric bounds implied by the marking
    budgets (marked-node count, separator size); they are asserted when
    the clique-size bound already holds.
    """

    core: Subgraph
    tree: CliqueTree
    marked_nodes: frozenset[int]
    closed_nodes: frozenset[int]
    vertices: frozenset[int]        # S_Q in instance ids
    ceilings: tuple[tuple[str, int], ...] = ()


def build_separator(inst: AChvdInstance) -> SeparatorSet:
    """Bags covering the maximal cliques of every G(x, y) and every
    nonneighbor component boundary, closed under LCA, plus the root."""
    core = inst.core()
    tree = clique_tree_of(core.graph)
    q0: set[int] = set()
    for x, y in _modulator_pairs(inst, adjacent=False):
        common = inst.selector([x, y])
        if not common:
            continue
        sub = induced_subgraph(inst.g, common)
        sub_tree = clique_tree_of(sub.graph)
        for bag in sub_tree.bags:
            if not bag:
                continue
            lifted = frozenset(core.to_sub(sub.old_of[v] for v in bag))
            node = next(
                (q for q in tree.nodes() if lifted <= tree.bags[q]), None
            )
            check(node is not None, "selector clique not inside a bag")
            q0.add(node)
    for x in sorted(inst.modulator):
        for comp in inst.nonneighbor_components(x):
            nbhd = _core_neighborhood(inst, comp)
            lifted = frozenset(core.to_sub(nbhd))
            node = next(
                (q for q in tree.nodes() if lifted <= tree.bags[q]), None
            )
            check(node is not None, "component boundary not inside a bag")
            q0.add(node)
    closed = set(q0) | {tree.root}
    frontier = sorted(closed)
    while True:
        extra = {
            tree.lca(p, q)
            for i, p in enumerate(frontier)
            for q in frontier[i + 1 :]
        }
        if extra <= closed:
            break
        closed |= extra
        frontier = sorted(closed)
    check(len(closed) <= 1 + 2 * len(q0), "LCA closure exceeded 1 + 2|Q0|")
    vertices = frozenset(
        core.old_of[v] for node in closed for v in tree.bags[node]
    )
    params = KernelParams.of(inst)
    k, m = params.k, params.m_size
    q0_ceiling = m * m * (k + 2) * params.omega_bound \
        + m * params.component_count_bound
    sep_ceiling = (1 + 2 * q0_ceiling) * params.omega_bound + m
    omega_core = max((len(bag) for bag in tree.bags), default=0)
    if omega_core <= params.omega_bound:
        check(len(q0) <= q0_ceiling, "marked-node count exceeds its ceiling")
        check(len(vertices | inst.modulator) <= sep_ceiling,
              "separator size exceeds its ceiling")
    return SeparatorSet(
        core, tree, frozenset(q0), frozenset(closed), vertices,
        ceilings=(("marked_nodes", q0_ceiling), ("separator", sep_ceiling)),
    )


def rule5_separator_template(
    inst: AChvdInstance, sep: SeparatorSet
) -> Optional[tuple[AChvdInstance, ReductionEvent]]:
    return template_toughness(
        inst, sep.vertices | inst.modulator, "rule5", ("separator",)
    )


DUMMY = -1


@dataclass(frozen=True)
class ComponentContext:
    """One component of the core minus the separator, with its boundary
    path and important-vertex machinery."""

    component: frozenset[int]        # instance ids
    q_up: int
    q_down: int                      # DUMMY for the virtual empty bag
    path_nodes: tuple[int, ...]      # q_up .. q_down along the tree, DUMMY last
    path_bags: tuple[frozenset[int], ...]  # instance ids
    q2_positions: tuple[int, ...]
    ridge_edges: tuple[int, ...]     # positions i: edge between bag i, i+1
    important: frozenset[int]        # Z, instance ids


def component_context(
    inst: AChvdInstance, sep: SeparatorSet, comp: frozenset[int]
) -> ComponentContext:
    core, tree = sep.core, sep.tree
    comp_core = {core.new_of(v) for v in comp}
    nodes_a: set[int] = set()
    for v in comp_core:
        nodes_a.update(tree.beta_inverse(v))
    # connectivity of the occupied subtree
    inside_parent = {p for p in nodes_a if tree.parent[p] in nodes_a}
    check(len(inside_parent) == len(nodes_a) - 1,
          "component bags do not form a subtree")
    topmost = min(nodes_a, key=lambda p: (tree.depth(p), p))
    check(tree.parent[topmost] is not None,
          "component occupies the root bag")
    q_up = tree.parent[topmost]
    carriers = []
    for q in tree.nodes():
        if q in nodes_a:
            continue
        touching = [p for p in nodes_a
                    if tree.parent[q] == p or tree.parent[p] == q]
        if not touching:
            continue
        check(len(touching) == 1, "boundary node touches the subtree twice")
        if tree.bags[q] & tree.bags[touching[0]]:
            carriers.append(q)
    others = [q for q in carriers if q != q_up]
    check(len(others) <= 1,
          "more than two adhesion-carrying boundary nodes")
    if others:
        q_down = others[0]
        node_path = tree.node_path(q_up, q_down)
        path_nodes = tuple(node_path)
    else:
        q_down = DUMMY
        leaves = [p for p in nodes_a
                  if not any(c in nodes_a for c in tree.children(p))]
        leaf = min(leaves)
        path_nodes = tuple(tree.node_path(q_up, leaf)) + (DUMMY,)

    def bag_of(node: int) -> frozenset[int]:
        if node == DUMMY:
            return frozenset()
        return frozenset(core.old_of[v] for v in tree.bags[node])

    path_bags = tuple(bag_of(q) for q in path_nodes)
    outside = frozenset(
        w
        for v in comp
        for w in inst.g.neighbors(v)
        if w not in comp
    )
    check(outside <= inst.modulator | path_bags[0] | path_bags[-1],
          "component neighborhood escapes the boundary bags")
    mod_nbhd = [inst.g.neighbor_set(v) & inst.modulator for v in sorted(comp)]
    check(all(nb == mod_nbhd[0] for nb in mod_nbhd),
          "component vertices disagree on modulator neighbors")
    if mod_nbhd and mod_nbhd[0]:
        anchor = sorted(mod_nbhd[0])
        check(all(inst.g.has_edge(a, b) for i, a in enumerate(anchor)
                  for b in anchor[i + 1 :]),
              "modulator neighborhood of the component is not a clique")

    positions = {0, len(path_nodes) - 1}
    for _ in range(2):
        layer = frozenset(
            v for i in positions for v in path_bags[i]
        )
        new_positions = set(positions)
        for u in sorted(layer):
            occ = [i for i, bag in enumerate(path_bags) if u in bag]
            if occ:
                new_positions.add(min(occ))
                new_positions.add(max(occ))
        positions = new_positions
    q2_positions = tuple(sorted(positions))
    z2 = frozenset(v for i in q2_positions for v in path_bags[i])
    ridge: list[int] = []
    for a, b in zip(q2_positions, q2_positions[1:]):
        best = None
        for i in range(a, b):
            adh = path_bags[i] & path_bags[i + 1]
            size = len(adh & comp)
            if best is None or size < best[0]:
                best = (size, i)
        if best is not None:
            ridge.append(best[1])
    adhesions = frozenset(
        v for i in ridge for v in path_bags[i] & path_bags[i + 1]
    )
    important = comp & (z2 | adhesions)
    params = KernelParams.of(inst)
    check(len(important) <= params.z_bound,
          "important set exceeds its marking-budget ceiling")
    return ComponentContext(
        component=comp,
        q_up=q_up,
        q_down=q_down,
        path_nodes=path_nodes,
        path_bags=path_bags,
        q2_positions=q2_positions,
        ridge_edges=tuple(ridge),
        important=important,
    )


def core_components_outside(inst: AChvdInstance,
                            sep: SeparatorSet) -> list[frozenset[int]]:
    remaining = set(inst.g.vertices()) - inst.modulator - sep.vertices
    return components_within(inst.g, remaining)


def rule6_irrelevant(
    inst: AChvdInstance, sep: SeparatorSet
) -> Optional[tuple[AChvdInstance, ReductionEvent]]:
    """Delete a component vertex whose bags all miss the boundary path."""
    for comp in core_components_outside(inst, sep):
        ctx = component_context(inst, sep, comp)
        on_path = frozenset(v for bag in ctx.path_bags for v in bag)
        stranded = sorted(comp - on_path)
        if stranded:
            event = ReductionEvent(
                rule="rule6",
                witness=(min(comp),),
                deleted=(stranded[0],),
            )
            return _finish(inst, event)
    return None


def rule7_bypass(
    inst: AChvdInstance, sep: SeparatorSet
) -> Optional[tuple[AChvdInstance, ReductionEvent]]:
    """Bypass a component vertex outside Z: cliquify its neighborhood,
    then delete it."""
    for comp in core_components_outside(inst, sep):
        ctx = component_context(inst, sep, comp)
        rest = sorted(comp - ctx.important)
        if not rest:
            continue
        v = rest[0]
        nbrs = sorted(inst.g.neighbors(v))
        fill = tuple(
            (a, b)
            for i, a in enumerate(nbrs)
            for b in nbrs[i + 1 :]
            if not inst.g.has_edge(a, b)
        )
        event = ReductionEvent(
            rule="rule7",
            witness=(min(comp), v),
            deleted=(v,),
            added_edges=fill,
        )
        return _finish(inst, event)
    return None


def canonical_yes_annotated() -> AChvdInstance:
    return AChvdInstance(Graph(1), 0, frozenset(), frozenset())


def canonical_no_graph() -> tuple[Graph, int]:
    return Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)]), 0


@dataclass(frozen=True)
class StructuralReport:
    """Post-exhaustion structural facts with their asserted ceilings."""

    omega_core: int
    omega_bound: int
    component_counts: tuple[tuple[int, int], ...]
    component_count_bound: int
    z_sizes: tuple[int, ...]
    z_bound: int

    def holds(self) -> bool:
        return (
            self.omega_core <= self.omega_bound
            and all(c <= self.component_count_bound
                    for _, c in self.component_counts)
            and all(z <= self.z_bound for z in self.z_sizes)
        )


def structural_report(inst: AChvdInstance) -> StructuralReport:
    params = KernelParams.of(inst)
    core = inst.core()
    omega = 0
    if core.graph.n:
        omega = max(len(bag) for bag in clique_tree_of(core.graph).bags)
    counts = tuple(
        (x, len(inst.nonneighbor_components(x))) for x in sorted(inst.modulator)
    )
    sep = build_separator(inst)
    z_sizes = tuple(
        len(component_context(inst, sep, comp).important)
        for comp in core_components_outside(inst, sep)
    )
    return StructuralReport(
        omega_core=omega,
        omega_bound=params.omega_bound,
        component_counts=counts,
        component_count_bound=params.component_count_bound,
        z_sizes=z_sizes,
        z_bound=params.z_bound,
    )


def kernelize_annotated(
    inst: AChvdInstance,
) -> tuple[AChvdInstance, list[ReductionEvent]]:
    """Apply the lowest-numbered applicable rule until none fires.

    Instances with k >= |M| are answered by the constant-size YES
    instance up front.  Termination: every event deletes a vertex or adds
    an edge, capped and checked.
    """
    trace: list[ReductionEvent] = []
    if inst.k >= len(inst.modulator):
        out, event = _finish(inst, ReductionEvent(
            rule="trivial-yes", witness=(inst.k, len(inst.modulator))))
        trace.append(event)
        return canonical_yes_annotated(), trace
    cap = 16 + 2 * (inst.g.n + inst.g.n * inst.g.n)
    while True:
        check(len(trace) <= cap, "reduction loop exceeded its firing bound")
        fired = rule1_common_neighbours(inst)
        if fired is None:
            fired = rule2_xy_good(inst)
        if fired is None:
            clique = find_oversized_clique(inst)
            if clique is not None:
                fired = rule3_reduce_clique(inst, clique)
        if fired is None:
            fired = rule4_components(inst)
        if fired is None:
            sep = build_separator(inst)
            fired = rule5_separator_template(inst, sep)
            if fired is None:
                fired = rule6_irrelevant(inst, sep)
            if fired is None:
                fired = rule7_bypass(inst, sep)
        if fired is None:
            break
        inst, event = fired
        trace.append(event)
    report = structural_report(inst)
    check(report.holds(), "structural postconditions fail after exhaustion")
    return inst, trace


def annotate(
    g: Graph, k: int, modulator: Iterable[int]
) -> Optional[tuple[AChvdInstance, list[ReductionEvent]]]:
    """Tidy the modulator via flowers; None means a certified no-instance.

    Vertices with a flower of order above k are deleted with a budget
    decrement; the hitting sets of the survivors join the modulator.
    """
    m0 = frozenset(modulator)
    rest = delete_vertices(g, m0)
    if not is_chordal(rest.graph):
        raise ValueError("graph minus the modulator is not chordal")
    trace: list[ReductionEvent] = []
    while True:
        restart = False
        hitting: dict[int, frozenset[int]] = {}
        for v in sorted(m0):
            sub = delete_vertices(g, m0 - {v})
            local_v = sub.new_of(v)
            flower, cover = flower_and_cover(sub.graph, local_v)
            if flower.order > k:
                inst0 = AChvdInstance(g, k, m0)
                event = ReductionEvent(
                    rule="annotate-delete",
                    witness=(v, flower.order),
                    deleted=(v,),
                    k_delta=-1,
                )
                nxt, event = _finish(inst0, event)
                trace.append(event)
                g, k, m0 = nxt.g, nxt.k, nxt.modulator
                if k < 0:
                    return None
                restart = True
                break
            hitting[v] = frozenset(sub.old_of[u] for u in cover)
        if not restart:
            break
    extended = set(m0)
    for v in sorted(hitting):
        extended |= hitting[v]
    check(len(extended) <= len(m0) * (12 * k + 1) if m0 else not extended,
          "tidy modulator exceeds |M0|(12k + 1)")
    inst = AChvdInstance(g, k, frozenset(extended), frozenset())
    inst.validate()
    event = ReductionEvent(
        rule="annotate", witness=tuple(sorted(extended)))
    _, event = _finish(inst, event)
    trace.append(event)
    return inst, trace


def gadgetize(inst: AChvdInstance) -> tuple[Graph, int, ReductionEvent]:
    """Replace every forced pair by a fresh four-cycle through it."""
    g = inst.g
    edges = list(g.edges())
    n = g.n
    added = []
    for x, y in inst.forced_tuples():
        xp, yp = n, n + 1
        n += 2
        edges += [(x, xp), (xp, yp), (yp, y)]
        added.append((x, y, xp, yp))
    event = ReductionEvent(rule="gadgetize", witness=tuple(added))
    return Graph(n, edges), inst.k, event


@dataclass(frozen=True)
class KernelResult:
    graph: Graph
    k: int
    verdict: str                    # "reduced" | "yes" | "no"
    trace: tuple[ReductionEvent, ...]
    annotated: Optional[AChvdInstance] = None


def kernelize(g: Graph, k: int, modulator: Iterable[int]) -> KernelResult:
    """Full pipeline: annotate, reduce, and replace annotations by gadgets.

    A certified no-instance comes back as the canonical C4 with budget
    zero; the trivial YES case as a single vertex with budget zero.
    """
    annotated = annotate(g, k, modulator)
    if annotated is None:
        no_graph, no_k = canonical_no_graph()
        return KernelResult(no_graph, no_k, "no", (ReductionEvent(
            rule="no-instance", witness=()),))
    inst, trace = annotated
    inst2, more = kernelize_annotated(inst)
    trace = trace + more
    if more and more[-1].rule == "trivial-yes":
        return KernelResult(inst2.g, inst2.k, "yes", tuple(trace),
                            annotated=inst2)
    out_graph, out_k, event = gadgetize(inst2)
    trace.append(event)
    return KernelResult(out_graph, out_k, "reduced", tuple(trace),
                        annotated=inst2)


def replay_trace(g: Graph, k: int,
                 trace: Iterable[ReductionEvent]) -> tuple[Graph, int]:
    """Fold the recorded events over the original input.

    Replaying never re-decides anything: deletions, edge additions,
    forced pairs, and the gadget construction are taken verbatim from
    the events, so the output reproduces the kernel bit-exactly.
    """
    inst = AChvdInstance(g, k, frozenset(), frozenset())
    for event in trace:
        if event.rule == "no-instance":
            no_graph, no_k = canonical_no_graph()
            return no_graph, no_k
        if event.rule == "trivial-yes":
            yes = canonical_yes_annotated()
            return yes.g, yes.k
        if event.rule == "annotate":
            inst = AChvdInstance(inst.g, inst.k, frozenset(event.witness),
                                 inst.forced)
            continue
        if event.rule == "gadgetize":
            edges = list(inst.g.edges())
            n = inst.g.n
            for x, y, xp, yp in event.witness:
                edges += [(x, xp), (xp, yp), (yp, y)]
                n = max(n, xp + 1, yp + 1)
            return Graph(n, edges), inst.k
        inst = apply_event(inst, event)
    return inst.g, inst.k
