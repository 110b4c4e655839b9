from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from helpers import brute_rot_member, lp_in_hull, random_graph, random_probe
from horsenet.horseshoe_graph import Edge, Horseshoe, HorseshoeGraph, scc
from horsenet.polytopes import (PolytopeError, RatPolytope, brute_force_visited_sets, class_polytopes,
                                format_vector, hull2d, in_polygon, in_union, maximal_chains, membership,
                                parse_vector, project2d, rel_interior, rot_graph, rot_vertex,
                                shape_diagnostics)
from horsenet.surface_group import parse_word

F = Fraction
SQUARE = [(0, 0), (1, 0), (0, 1), (1, 1)]


def test_hull_drops_interior_points():
    P = RatPolytope.hull(SQUARE + [(F(1, 2), F(1, 3))])
    assert P.dim == 2
    assert sorted(P.vertices) == sorted((F(a), F(b)) for a, b in SQUARE)


def test_lower_dimensional_hull():
    P = RatPolytope.hull([(0, 0, 0), (1, 1, 0), (2, 2, 0)])
    assert P.dim == 1
    assert len(P.vertices) == 2
    assert membership((F(1, 2), F(1, 2), 0), P)
    assert not membership((F(1, 2), F(1, 3), 0), P)
    assert not membership((3, 3, 0), P)


def test_mixed_dimensions_rejected():
    with pytest.raises(PolytopeError):
        RatPolytope.hull([(0, 0), (1, 0, 0)])
    with pytest.raises(PolytopeError):
        RatPolytope.hull([])
    with pytest.raises(PolytopeError, match="dimension mismatch"):
        membership((0, 0, 0), RatPolytope.hull(SQUARE))


def test_boundary_membership_is_exact():
    P = RatPolytope.hull([(0, 0), (3, 0), (0, 3)])
    assert membership((F(3, 2), F(3, 2)), P)
    eps = F(1, 10**15)
    assert not membership((F(3, 2) + eps, F(3, 2)), P)
    assert membership((F(3, 2) - eps, F(3, 2)), P)


def test_relative_interior():
    P = RatPolytope.hull(SQUARE)
    assert rel_interior((F(1, 2), F(1, 2)), P)
    assert not rel_interior((0, F(1, 2)), P)
    S = RatPolytope.hull([(0, 0), (2, 2)])
    assert rel_interior((1, 1), S)
    assert not rel_interior((0, 0), S)
    assert rel_interior((5, 5), RatPolytope.hull([(5, 5)]))


@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5)),
                min_size=1, max_size=7),
       st.tuples(st.fractions(-5, 5, max_denominator=4), st.fractions(-5, 5, max_denominator=4),
                 st.fractions(-5, 5, max_denominator=4)))
def test_membership_matches_plain_lp(points, p):
    P = RatPolytope.hull(points)
    pts = [tuple(F(x) for x in q) for q in points]
    assert membership(p, P) == lp_in_hull(p, pts)


@given(st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), min_size=1, max_size=12))
def test_hull2d_contains_inputs_and_is_convex(points):
    H = hull2d(points)
    for p in points:
        assert in_polygon(p, H)
    if len(H) >= 3:
        n = len(H)
        for k in range(n):
            a, b, c = H[k], H[(k + 1) % n], H[(k + 2) % n]
            assert (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]) > 0


def test_project2d():
    P = RatPolytope.hull([(0, 0, 0), (1, 0, 5), (0, 1, 2), (1, 1, 1)])
    assert project2d(P, (0, 1)) == [(0, 0), (1, 0), (1, 1), (0, 1)]
    with pytest.raises(PolytopeError):
        project2d(P, (0, 0))
    with pytest.raises(PolytopeError):
        project2d(P, (0, 3))


def test_vector_text_roundtrip():
    v = parse_vector("1/2, -3, 0.25")
    assert v == (F(1, 2), F(-3), F(1, 4))
    assert parse_vector(",".join(format_vector(v))) == v


def test_rot_vertex_of_generators():
    h = Horseshoe("H", 2, (parse_word("a1", 2), parse_word("b1", 2)))
    P = rot_vertex(h)
    assert set(P.vertices) == {(F(1, 2), 0, 0, 0), (0, F(1, 2), 0, 0)}


def _two_loops():
    g = 2
    h1 = Horseshoe("H1", 1, (parse_word("a1", g), parse_word("A1", g)))
    h2 = Horseshoe("H2", 1, (parse_word("b1", g), parse_word("B1", g)))
    return h1, h2


def test_rot_graph_disconnected_and_chained():
    h1, h2 = _two_loops()
    G = HorseshoeGraph(2, [h1, h2])
    polys = rot_graph(G)
    assert len(polys) == 2
    assert not in_union((F(1, 4), F(1, 4), 0, 0), polys)
    G2 = HorseshoeGraph(2, [h1, h2], [Edge("H1", "H2", 1, parse_word("1", 2))])
    polys2 = rot_graph(G2)
    assert len(polys2) == 1
    assert in_union((F(1, 4), F(1, 4), 0, 0), polys2)


def test_maximal_chains_of_diamond():
    g = 2
    hs = [Horseshoe(k, 1, (parse_word("a1", g),)) for k in "ABCD"]
    one = parse_word("1", g)
    G = HorseshoeGraph(g, hs, [Edge("A", "B", 1, one), Edge("A", "C", 1, one),
                               Edge("B", "D", 1, one), Edge("C", "D", 1, one)])
    cond = scc(G)
    names = [tuple(cond.classes[i][0] for i in ch) for ch in maximal_chains(cond)]
    assert sorted(names) == [("A", "B", "D"), ("A", "C", "D")]


@settings(max_examples=25)
@given(st.integers(0, 2**32 - 1))
def test_rot_graph_matches_brute_force(seed):
    import numpy as np

    rng = np.random.default_rng(seed)
    G = random_graph(rng, n=int(rng.integers(2, 5)))
    polys = rot_graph(G)
    vis = brute_force_visited_sets(G)
    for _ in range(15):
        p = random_probe(rng, 4, denom=4, spread=1)
        assert in_union(p, polys) == brute_rot_member(G, vis, p)
    # every rotation point of every horseshoe is realized
    for h in G.horseshoes.values():
        for q in h.rotation_points():
            assert in_union(q, polys)


def test_brute_force_visited_sets_small():
    h1, h2 = _two_loops()
    G = HorseshoeGraph(2, [h1, h2], [Edge("H1", "H2", 1, parse_word("1", 2))])
    assert brute_force_visited_sets(G) == {frozenset({"H1"}), frozenset({"H2"}), frozenset({"H1", "H2"})}


def test_shape_diagnostics():
    g = 2
    ok = RatPolytope.hull([(1, 0, 0, 0), (-1, 0, 0, 0)])
    off = RatPolytope.hull([(1, 0, 0, 0), (1, 1, 0, 0)])
    assert shape_diagnostics(g, [ok]) == []
    rules = [d.rule for d in shape_diagnostics(g, [ok, off, ok])]
    assert rules.count("class rotation set contains 0") == 1
    assert "2g-2 chaotic-class bound" in rules


def test_class_polytopes_follow_condensation():
    h1, h2 = _two_loops()
    G = HorseshoeGraph(2, [h1, h2], [Edge("H1", "H2", 1, parse_word("1", 2)),
                                     Edge("H2", "H1", 1, parse_word("1", 2))])
    (P,) = class_polytopes(G)
    assert P.dim == 2
    assert membership((0, 0, 0, 0), P)
