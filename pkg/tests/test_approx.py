"""Approximation pipeline: decomposition, clique fold-back, end to end."""
import random

import pytest

from chvd.graphs import Graph, induced_subgraph
from chvd.chordal import is_chordal
from chvd.lp import ChvdProblem, FractionalSolution, solve_fractional
from chvd.approx import (
    NO_INSTANCE,
    NoInstance,
    balanced_clique_cut,
    chvd_clique_plus_chordal,
    decompose,
    hit_holes_through,
    approximate,
)
from chvd.generate import GeneratorSpec, clique_path_graph, generate
from chvd.oracle import exact_chvd
from bruteforce import bf_chordal_after_delete


def cycle_graph(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n):
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def test_hit_holes_through_chordal_input_returns_empty():
    g = clique_path_graph([2, 2, 2])
    all_a = frozenset(g.vertices())
    x = FractionalSolution({v: 0.05 for v in g.vertices()})
    got = hit_holes_through(g, all_a, frozenset(), frozenset({0, 1, 2, 3}),
                            x)
    assert got == frozenset()


def test_hit_holes_through_long_hole():
    # hole of length 21 with uniform weights below 1/10 on the chordal part
    n = 21
    ring = cycle_graph(n)
    # chordal side: the ring minus one vertex (a path); clique side: {0}
    part_b = frozenset({0})
    part_a = frozenset(range(1, n))
    x = FractionalSolution({v: 1.0 / 21 for v in range(1, n)})
    # L: any maximal clique of the path, say the edge {10, 11}
    got = hit_holes_through(ring, part_a, part_b, frozenset({10, 11}), x)
    assert got
    remaining = induced_subgraph(ring, set(ring.vertices()) - got)
    assert is_chordal(remaining.graph)


def test_chvd_clique_plus_chordal_chordal_graph():
    g = clique_path_graph([2, 2])
    x = FractionalSolution({v: 0.0 for v in g.vertices()})
    got = chvd_clique_plus_chordal(g, frozenset(g.vertices()), frozenset(), x)
    assert got == frozenset()


def test_chvd_clique_plus_chordal_single_hole():
    # B = one vertex closing a path into a C4
    g = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    part_b = frozenset({0})
    part_a = frozenset({1, 2, 3})
    x = solve_fractional(ChvdProblem(g))
    got = chvd_clique_plus_chordal(g, part_a, part_b, x)
    assert bf_chordal_after_delete(g, set(got))


def test_balanced_clique_cut_complete_graph():
    g = complete_graph(6)
    res = balanced_clique_cut(g, 0)
    assert not isinstance(res, NoInstance)
    z, kq = res
    assert z == kq == frozenset(range(6))


def test_balanced_clique_cut_two_cliques_joined():
    # two K4s sharing one vertex: the shared vertex plus one clique balance
    edges = [(u, v) for u in range(4) for v in range(u + 1, 4)]
    edges += [(u, v) for u in range(3, 7) for v in range(u + 1, 7)]
    g = Graph(7, edges)
    res = balanced_clique_cut(g, 1)
    assert not isinstance(res, NoInstance)
    z, kq = res
    from chvd.graphs import components_within
    for comp in components_within(g, set(g.vertices()) - z):
        assert 4 * len(comp) <= 3 * g.n


def test_decompose_chordal_graph():
    g = clique_path_graph([2, 3, 2])
    dec = decompose(g, 2)
    assert not isinstance(dec, NoInstance)
    assert dec.chordal_part == frozenset(g.vertices())
    assert dec.cliques == () and dec.residue == frozenset()


def test_decompose_single_c4():
    g = cycle_graph(4)
    dec = decompose(g, 2)
    assert not isinstance(dec, NoInstance)
    dec.validate(g)
    assert len(dec.cliques) <= 1 or dec.cliques


def test_decompose_k0_nonchordal_is_no_instance():
    assert isinstance(decompose(cycle_graph(4), 0), NoInstance)


def test_approximate_chordal():
    g = clique_path_graph([3, 2, 3])
    assert approximate(g, 2) == frozenset()


def test_approximate_disjoint_c4s():
    t = 3
    edges = []
    for i in range(t):
        base = 4 * i
        edges += [(base + j, base + (j + 1) % 4) for j in range(4)]
    g = Graph(4 * t, edges)
    got = approximate(g, t)
    assert not isinstance(got, NoInstance)
    assert len(got) >= t
    assert bf_chordal_after_delete(g, set(got))


def test_approximate_yes_instances_never_rejected():
    ratios = []
    for seed in range(40):
        g, k, planted = generate(GeneratorSpec(seed=seed, core_vertices=10,
                                               planted=2, noise_edges=1))
        opt = exact_chvd(g, k)
        if opt is None:
            continue
        got = approximate(g, k)
        assert not isinstance(got, NoInstance)
        assert bf_chordal_after_delete(g, set(got))
        if opt.optimum:
            ratios.append(len(got) / opt.optimum)
    assert ratios


def test_approximate_lp_path_on_yes_instances():
    # k = 3 with n <= 27 stays inside the size guard, so the LP pipeline
    # (threshold, decomposition, fold-back) runs rather than the oracle
    solved = 0
    for seed in range(30):
        g, _, planted = generate(GeneratorSpec(
            seed=seed, core_vertices=13, planted=3, noise_edges=1))
        k = 3
        got = approximate(g, k)
        opt = exact_chvd(g, k)
        if opt is not None:
            assert not isinstance(got, NoInstance)
        if not isinstance(got, NoInstance):
            # recognizer validated against brute force elsewhere; these
            # instances exceed the subset-enumeration cap
            assert is_chordal(
                induced_subgraph(g, set(g.vertices()) - got).graph)
            solved += 1
    assert solved >= 20


def test_approximate_no_instance_detection():
    # many disjoint C4s, queried with a tiny budget: fractional mass
    # exceeds 2k, so the LP path must reject
    t = 8
    edges = []
    for i in range(t):
        base = 4 * i
        edges += [(base + j, base + (j + 1) % 4) for j in range(4)]
    g = Graph(4 * t, edges)
    got = approximate(g, 3)
    assert isinstance(got, NoInstance)
    assert exact_chvd(g, 3) is None
