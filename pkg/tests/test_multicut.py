"""Min vertex cut, skew multicut, and downward-oriented chordal multicut."""
import math
import random

import pytest

from chvd.graphs import DiGraph, Graph, di_bfs_path
from chvd.chordal import clique_tree_of
from chvd.lp import FractionalSolution, MulticutProblem, solve_fractional
from chvd.multicut import (
    DownwardInstance,
    MulticutInstance,
    SkewInstance,
    build_downward,
    clique_cover_chordal,
    downward_multicut,
    min_vertex_cut,
    skew_multicut,
)
from chvd.generate import (
    random_chordal,
    random_dag,
    random_diffuse_downward,
    random_staircase,
)
from chvd.lp import at_least
from chvd.oracle import exact_multicut
from bruteforce import bf_di_connected, bf_min_vertex_cut


def test_min_vertex_cut_single_path():
    d = DiGraph(3, [(0, 1), (1, 2)])
    assert min_vertex_cut(d, [0], [2], [1]) == frozenset({1})


def test_min_vertex_cut_disconnected():
    d = DiGraph(4, [(0, 1), (2, 3)])
    assert min_vertex_cut(d, [0], [3], range(4)) == frozenset()


def test_min_vertex_cut_infeasible_when_undeletable():
    d = DiGraph(2, [(0, 1)])
    with pytest.raises(ValueError):
        min_vertex_cut(d, [0], [1], [])


def test_min_vertex_cut_matches_bruteforce():
    rng = random.Random(109)
    for trial in range(40):
        d = random_dag(rng, rng.randint(3, 9), 0.4)
        verts = list(d.vertices())
        k = rng.randint(1, max(1, d.n // 2))
        sources = set(rng.sample(verts, k))
        sinks = set(rng.sample([v for v in verts if v not in sources],
                               min(k, d.n - k)))
        deletable = set(verts)
        expected = bf_min_vertex_cut(d, sources, sinks, deletable)
        got = min_vertex_cut(d, sources, sinks, deletable)
        assert len(got) == expected
        assert all(not bf_di_connected(d, s, t, set(got))
                   for s in sources for t in sinks)


def test_skew_empty_sources():
    d = DiGraph(3, [(0, 1)])
    inst = SkewInstance(MulticutInstance(d, ()), (), ())
    x = FractionalSolution({})
    assert skew_multicut(inst, x) == frozenset()


def test_skew_single_source_single_path():
    # one pair across one internal vertex of weight 1: bound 1*ceil(log 2)=1
    d = DiGraph(3, [(0, 1), (1, 2)])
    inst = SkewInstance(MulticutInstance(d, ((0, 2),)), (0,), (2,))
    x = FractionalSolution({1: 1.0})
    got = skew_multicut(inst, x)
    assert got == frozenset({1})


def test_skew_requires_staircase_closure():
    d = DiGraph(4, [(0, 2), (1, 3)])
    # (tu[0], tv[1]) present without (tu[1], tv[0]) closure: invalid
    with pytest.raises(ValueError):
        SkewInstance(MulticutInstance(d, ((0, 3),)), (0, 1), (2, 3))


def test_skew_rejects_infeasible_fraction():
    d = DiGraph(3, [(0, 1), (1, 2)])
    inst = SkewInstance(MulticutInstance(d, ((0, 2),)), (0,), (2,))
    with pytest.raises(ValueError):
        skew_multicut(inst, FractionalSolution({1: 0.25}))


def test_skew_random_staircases_bound_and_validity():
    solved = 0
    for seed in range(120):
        d, tu, tv, pairs = random_staircase(seed, n=11, a=3, b=3)
        if not pairs:
            continue
        x = solve_fractional(MulticutProblem(d, tuple(pairs)))
        inst = SkewInstance(MulticutInstance(d, tuple(pairs)),
                            tuple(tu), tuple(tv))
        got = skew_multicut(inst, x)
        assert inst.base.is_multicut(got)
        bound = x.objective * math.ceil(math.log2(len(tu) + 1))
        assert len(got) <= bound + 1e-6
        opt = exact_multicut(d, pairs, d.n)
        assert opt is not None and len(got) >= opt.optimum
        solved += 1
    assert solved >= 60


def test_build_downward_single_bag():
    g = Graph(3, [(0, 1), (1, 2), (0, 2)])
    inst = build_downward(g, clique_tree_of(g))
    assert inst.digraph.is_acyclic()
    assert inst.digraph.m == 3


def test_build_downward_path_points_away_from_root():
    g = Graph(3, [(0, 1), (1, 2)])
    t = clique_tree_of(g)
    root = next(i for i, b in enumerate(t.bags) if b == frozenset({0, 1}))
    inst = build_downward(g, t.reroot(root))
    # vertex 2 appears only in the deeper bag, so arcs run toward it
    assert inst.digraph.has_arc(1, 2)


def test_build_downward_order_is_topological():
    rng = random.Random(113)
    for trial in range(25):
        g = random_chordal(rng, rng.randint(1, 12), rng.randint(1, 6), 2)
        inst = build_downward(g, clique_tree_of(g))
        r = inst.rank()
        for u, v in inst.digraph.arcs():
            assert r[u] < r[v]
        assert inst.digraph.is_acyclic()


def test_clique_cover_chordal_partitions():
    rng = random.Random(127)
    for trial in range(25):
        g = random_chordal(rng, rng.randint(1, 10), rng.randint(1, 5), 2)
        cover = clique_cover_chordal(g)
        seen = set()
        for part in cover:
            assert not (part & seen)
            seen |= part
        assert seen == set(g.vertices())


def test_downward_multicut_no_terminals():
    g = Graph(3, [(0, 1), (1, 2)])
    inst = build_downward(g, clique_tree_of(g))
    assert downward_multicut(inst, FractionalSolution({})) == frozenset()


def test_downward_multicut_heavy_vertex_caught_by_threshold():
    g = Graph(3, [(0, 1), (1, 2)])
    base = build_downward(g, clique_tree_of(g))
    s, t = base.order[0], base.order[-1]
    mid = base.order[1]
    inst = base.with_terminals([(s, t)])
    got = downward_multicut(inst, FractionalSolution({mid: 1.0}))
    assert mid in got
    assert inst.digraph is not None


def _random_downward_instance(seed):
    rng = random.Random(seed)
    g = random_chordal(rng, rng.randint(6, 13), rng.randint(2, 6), 2)
    base = build_downward(g, clique_tree_of(g))
    r = base.rank()
    candidates = [
        (u, v) for u in g.vertices() for v in g.vertices()
        if r[u] < r[v] and not g.has_edge(u, v)
        and di_bfs_path(base.digraph, [u], [v]) is not None
    ]
    if not candidates:
        return None
    pairs = tuple(sorted(rng.sample(candidates,
                                    min(len(candidates), rng.randint(1, 3)))))
    return base.with_terminals(pairs)


def test_downward_multicut_diffuse_instances_reach_cover_stage():
    # uniform weights below 1/8: nothing dies at the threshold, so the
    # auxiliary graph, clique cover, and skew conversion all run
    reached = 0
    for seed in range(30):
        out = random_diffuse_downward(seed)
        if out is None:
            continue
        inst, x = out
        x0 = {v for v in inst.digraph.vertices()
              if at_least(x.value(v), 1 / 8)}
        live = [
            (u, v) for u, v in inst.terminals
            if di_bfs_path(inst.digraph, [u], [v], removed=x0) is not None
        ]
        got = downward_multicut(inst, x)
        assert all(
            di_bfs_path(inst.digraph, [s], [t], removed=got) is None
            for s, t in inst.terminals
        )
        if live:
            reached += 1
    assert reached >= 20


def test_downward_multicut_random_instances():
    solved = 0
    for seed in range(150):
        inst = _random_downward_instance(seed)
        if inst is None:
            continue
        x = solve_fractional(MulticutProblem(inst.digraph, inst.terminals))
        got = downward_multicut(inst, x)
        assert all(
            di_bfs_path(inst.digraph, [s], [t], removed=got) is None
            for s, t in inst.terminals
        )
        opt = exact_multicut(inst.digraph, list(inst.terminals), inst.g.n)
        assert opt is not None and len(got) >= opt.optimum
        solved += 1
        if solved >= 60:
            break
    assert solved >= 40
