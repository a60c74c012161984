"""Flower local search, cutpoints, and the 12k hitting set."""
import random

import pytest

from chvd.graphs import Graph, Hole, delete_vertices
from chvd.chordal import is_chordal
from chvd.flower import (
    Flower,
    FlowerSearch,
    cutpoints,
    flower_and_cover,
    hitting_set,
    improve,
    two_disjoint_paths,
    two_flower,
)
from chvd.generate import random_near_chordal
from bruteforce import bf_min_chvd


def bf_all_petals(g, v):
    """All induced paths between nonadjacent neighbors of v with interior
    outside N[v], by exhaustive DFS (test oracle)."""
    closed = set(g.neighbors(v)) | {v}
    petals = []

    def extend(path):
        tip = path[-1]
        if len(path) >= 2 and g.has_edge(v, tip) and not g.has_edge(path[0], tip):
            if all(u not in closed for u in path[1:-1]):
                induced = all(
                    not g.has_edge(path[i], path[j])
                    for i in range(len(path))
                    for j in range(i + 2, len(path))
                )
                if induced:
                    petals.append(tuple(path))
        for w in g.neighbors(tip):
            if w in path or w == v:
                continue
            if w in closed and not (g.has_edge(v, w) and len(path) >= 1):
                continue
            path.append(w)
            extend(path)
            path.pop()

    for s in g.neighbors(v):
        extend([s])
    # deduplicate reversals
    seen = set()
    out = []
    for p in petals:
        key = min(p, tuple(reversed(p)))
        if key not in seen:
            seen.add(key)
            out.append(p)
    return out


def bf_has_two_flower(g, v):
    petals = bf_all_petals(g, v)
    for i, p in enumerate(petals):
        for q in petals[i + 1 :]:
            if not (set(p) & set(q)):
                return True
    return False


def two_c4s_sharing_v():
    # v=0; petals 1-2-3 and 4-5-6
    return Graph(7, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 5), (5, 6),
                     (6, 0)])


def test_two_flower_on_disjoint_c4s():
    g = two_c4s_sharing_v()
    f = two_flower(g, 0)
    assert f is not None and f.order == 2
    f.validate(g)


def test_two_flower_absent_single_c4():
    g = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert two_flower(g, 0) is None


def test_two_flower_matches_bruteforce():
    hits = 0
    for seed in range(60):
        g, v = random_near_chordal(seed, core_vertices=10, tree_nodes=6,
                                   apex_degree_hi=8)
        expected = bf_has_two_flower(g, v)
        got = two_flower(g, v)
        assert (got is not None) == expected
        if got is not None:
            got.validate(g)
            hits += 1
    assert hits > 5


def test_two_disjoint_paths_direct():
    g = Graph(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
    found = two_disjoint_paths(g, 0, 2, 3, 5)
    assert found is not None
    p1, p2 = found
    assert p1[0] == 0 and p1[-1] == 2 and p2[0] == 3 and p2[-1] == 5
    assert not (set(p1) & set(p2))
    # forcing both paths through a single cut vertex is impossible
    h = Graph(5, [(0, 2), (2, 1), (3, 2), (2, 4)])
    assert two_disjoint_paths(h, 0, 1, 3, 4) is None


def test_step1_fires_on_plain_hole():
    g = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    search = FlowerSearch(g, 0)
    f = improve(search, Flower(0, ()))
    assert f is not None and f.order == 1


def test_improve_fixed_point_on_maximal_flower():
    g = two_c4s_sharing_v()
    search = FlowerSearch(g, 0)
    f = Flower(0, ())
    while True:
        nxt = improve(search, f)
        if nxt is None:
            break
        f = nxt
    assert f.order == 2
    assert improve(search, f) is None


def test_step3_replaces_petal():
    # Petal (1,4,6,7) with a closer endpoint 5 available: step III must
    # replace it with the hole on (v,1,4,5).
    # Clique tree of g - v: {1,4} - {4,5,6} - {6,7}, so the endpoint pair
    # (1,7) is at tree distance 2 while (1,5) is at distance 1.
    v = 0
    g = Graph(8, [(v, 1), (v, 5), (v, 7),
                  (1, 4), (4, 5), (4, 6), (5, 6), (6, 7)])
    petal = Hole((v, 1, 4, 6, 7))
    search = FlowerSearch(g, v)
    base = Flower(v, (petal,))
    base.validate(g)
    improved = improve(search, base)
    assert improved is not None and improved.order == 1
    assert improved.petals[0].vertex_set() == {v, 1, 4, 5}


def test_flower_and_cover_chordal_graph():
    g = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 4), (1, 3)])
    assert is_chordal(g)
    f, s = flower_and_cover(g, 0)
    assert f.order == 0 and s == frozenset()


def test_flower_and_cover_c6():
    g = Graph(6, [(i, (i + 1) % 6) for i in range(6)])
    f, s = flower_and_cover(g, 0)
    assert f.order == 1
    assert len(s) <= 12
    assert is_chordal(delete_vertices(g, s).graph)


def test_flower_and_cover_disjoint_c5s():
    # t C5s sharing only v: flower order t, |S| <= 12t, g - S chordal
    t = 3
    edges = []
    nxt = 1
    for _ in range(t):
        ring = [0] + list(range(nxt, nxt + 4))
        nxt += 4
        edges += [(ring[i], ring[(i + 1) % 5]) for i in range(5)]
    g = Graph(1 + 4 * t, edges)
    f, s = flower_and_cover(g, 0)
    assert f.order == t
    assert len(s) <= 12 * t
    assert 0 not in s
    assert is_chordal(delete_vertices(g, s).graph)


def test_flower_requires_near_chordal():
    g = Graph(8, [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7),
                  (7, 4)])
    with pytest.raises(ValueError):
        flower_and_cover(g, 0)


def test_cutpoints_match_definition():
    for seed in range(20):
        g, v = random_near_chordal(seed, core_vertices=10, tree_nodes=5)
        search = FlowerSearch(g, v)
        f = Flower(v, ())
        while True:
            nxt = improve(search, f)
            if nxt is None:
                break
            f = nxt
        cp = cutpoints(search, f)
        cover = set(g.neighbors(v)) | f.vertex_set()
        for u in g.vertices():
            if u == v:
                continue
            expected = None
            for node in search.tree.path_to_root(search._new_of[u]):
                if search.tree.parent[node] is None:
                    break
                if search.adhesion_old(node) <= cover:
                    expected = (node, search.tree.parent[node])
                    break
            assert cp.edges[u] == expected


def test_improve_increases_the_potential():
    # potential: order first, then falling endpoint tree distance
    for seed in range(15):
        g, v = random_near_chordal(seed, core_vertices=11, tree_nodes=6,
                                   apex_degree_hi=7)
        search = FlowerSearch(g, v)
        f = Flower(v, ())

        def potential(fl):
            dists = sum(search.d_subtrees(p[0], p[-1]) for p in fl.paths())
            return (fl.order, -dists)

        steps = 0
        while True:
            nxt = improve(search, f)
            if nxt is None:
                break
            assert potential(nxt) > potential(f)
            f = nxt
            steps += 1
            assert steps <= g.n ** 3


def test_duality_on_random_instances():
    for seed in range(40):
        g, v = random_near_chordal(seed, core_vertices=9, tree_nodes=5)
        f, s = flower_and_cover(g, v)
        assert v not in s
        assert len(s) <= 12 * f.order
        assert is_chordal(delete_vertices(g, s).graph)
        if g.n <= 13:
            opt = bf_min_chvd(g, forbidden={v})
            assert opt is not None
            assert f.order <= opt <= len(s)
