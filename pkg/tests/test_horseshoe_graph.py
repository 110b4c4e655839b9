import itertools
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_graph
from horsenet.cli import _class_words
from horsenet.class_partition import hull_separation_oracle
from horsenet.horseshoe_graph import (Edge, GraphError, Horseshoe, HorseshoeGraph, Separation, class_reach,
                                      filtration, graph_T, order_check, scc, table_oracle)
from horsenet.scene import load_scene
from horsenet.surface_group import parse_word

from conftest import SCENES

G2 = 2


def hs(id, *decks, period=1):
    return Horseshoe(id, period, tuple(parse_word(d, G2) for d in decks))


def edge(u, v, n=1, w="1"):
    return Edge(u, v, n, parse_word(w, G2))


def test_self_loops_are_materialized():
    G = HorseshoeGraph(G2, [hs("H", "a1", "b1")])
    loops = G.out_edges("H")
    assert len(loops) == 2
    assert all(e.source == e.target == "H" for e in loops)
    assert sorted(e.id for e in loops) == ["H/loop0", "H/loop1"]


def test_graph_validation():
    with pytest.raises(GraphError, match="genus"):
        HorseshoeGraph(1, [])
    with pytest.raises(GraphError, match="duplicate"):
        HorseshoeGraph(G2, [hs("H", "a1"), hs("H", "b1")])
    with pytest.raises(GraphError):
        HorseshoeGraph(G2, [hs("H", "a1")], [edge("H", "X")])
    with pytest.raises(GraphError, match="positive"):
        Edge("a", "b", 0, parse_word("1", G2))
    with pytest.raises(GraphError, match="period"):
        hs("H", "a1", period=0)


def test_rotation_points():
    h = hs("H", "a1 a1 b2", "1", period=3)
    assert h.rotation_points()[0] == (Fraction(2, 3), 0, 0, Fraction(1, 3))
    assert h.speeds()[1] == 0.0


def test_scc_numbering_is_topological_and_stable():
    G = HorseshoeGraph(G2, [hs("C", "a1"), hs("A", "a1"), hs("B", "b1"), hs("D", "b2")],
                       [edge("A", "B"), edge("B", "A"), edge("B", "C"), edge("D", "C")])
    cond = scc(G)
    assert cond.classes == [("A", "B"), ("C",), ("D",)] or cond.classes == [("A", "B"), ("D",), ("C",)]
    for u, v in cond.dag.edges:
        assert u < v
    again = scc(HorseshoeGraph(G2, list(G.horseshoes.values())[::-1],
                               [edge("D", "C"), edge("B", "C"), edge("B", "A"), edge("A", "B")]))
    assert again.classes == cond.classes


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1))
def test_class_reach_matches_networkx(seed):
    G = random_graph(np.random.default_rng(seed))
    cond = scc(G)
    for u, v in itertools.product(G.vertices, repeat=2):
        expected = u == v or nx.has_path(G.nx, u, v)
        assert class_reach(cond, cond.class_of[u], cond.class_of[v]) == expected


def test_class_reach_rejects_unknown_ids():
    cond = scc(HorseshoeGraph(G2, [hs("H", "a1")]))
    with pytest.raises(GraphError):
        class_reach(cond, 0, 3)


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_condensation_is_antisymmetric(seed):
    cond = scc(random_graph(np.random.default_rng(seed), p_edge=0.4))
    for i, j in cond.reach:
        if i != j:
            assert (j, i) not in cond.reach


def test_filtration():
    G = HorseshoeGraph(G2, [hs("A", "a1"), hs("B", "b1"), hs("C", "a2")], [edge("A", "B"), edge("B", "C")])
    cond = scc(G)
    f = filtration(cond)
    a, b, c = (cond.class_of[x] for x in "ABC")
    assert f[a][0] == {a, b, c} and f[a][1] == {a}
    assert f[b][0] == {b, c} and f[b][1] == {a, b}


def test_order_check_flags_crossing_axes_in_different_classes():
    # a1 and b1 axes cross, so separate classes contradict the geodesic partition
    G = HorseshoeGraph(G2, [hs("A", "a1"), hs("B", "b1")])
    rep = order_check(G, depth=2)
    assert not rep.ok
    assert rep.geodesic_merges == [("A", "B")]
    G2_ = HorseshoeGraph(G2, [hs("A", "a1"), hs("B", "b1")], [edge("A", "B"), edge("B", "A")])
    assert order_check(G2_, depth=2).ok


def test_order_check_flags_disjoint_axes_in_one_class():
    G = HorseshoeGraph(G2, [hs("A", "a1"), hs("B", "a2")], [edge("A", "B"), edge("B", "A")])
    rep = order_check(G, depth=2)
    assert rep.scc_merges == [("A", "B")]
    assert rep.antisymmetric


def test_graph_T_table_route():
    G = load_scene(SCENES / "linear3.json").graph
    cond = scc(G)
    T = graph_T(cond, table_oracle({(0, 1, 2): "yes"}))
    assert T.solid == [(0, 1), (1, 2)]
    assert not T.dashed and not T.cyclic
    T2 = graph_T(cond, table_oracle({(0, 1, 2): "unknown"}))
    assert T2.dashed == [(0, 2)]
    T3 = graph_T(cond, table_oracle({}, default="unknown"))
    assert T3.dashed == [(0, 1), (0, 2), (1, 2)] and T3.solid == []


def test_graph_T_betweenness_inference():
    G = HorseshoeGraph(G2, [hs("A", "a1"), hs("B", "b1"), hs("C", "a2")], [edge("A", "C")])
    cond = scc(G)
    a, b, c = (cond.class_of[x] for x in "ABC")
    T = graph_T(cond, table_oracle({(a, b, c): "yes"}))
    assert (a, b) in T.inferred_reach and (b, c) in T.inferred_reach
    assert (a, c) not in T.edges()


def test_graph_T_geometric_route_on_linear_scene():
    G = load_scene(SCENES / "linear3.json").graph
    cond = scc(G)
    oracle = hull_separation_oracle(_class_words(G, cond), depth=1)
    assert Separation(oracle(0, 1, 2)) is Separation.YES
    assert graph_T(cond, oracle).solid == [(0, 1), (1, 2)]


def test_graph_T_without_evidence_is_all_dashed():
    G = load_scene(SCENES / "linear3.json").graph
    cond = scc(G)
    T = graph_T(cond, hull_separation_oracle(_class_words(G, cond), depth=0))
    assert T.solid == []
    assert T.dashed == [(0, 1), (0, 2), (1, 2)]


def test_filtration_antichain_and_chain():
    G = HorseshoeGraph(G2, [hs("A", "a1"), hs("B", "b1"), hs("C", "a2")])
    cond = scc(G)
    for i, (up, down) in filtration(cond).items():
        assert up == {i} and down == {i}
    G = HorseshoeGraph(G2, [hs("A", "a1"), hs("B", "b1"), hs("C", "a2")], [edge("A", "B"), edge("B", "C")])
    cond = scc(G)
    f = filtration(cond)
    c = cond.class_of["C"]
    assert f[c][1] == {0, 1, 2}


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_filtration_matches_brute_force(seed):
    G = random_graph(np.random.default_rng(seed), p_edge=0.35)
    cond = scc(G)
    n = len(cond)
    # Warshall closure on the class DAG
    R = [[i == j or cond.dag.has_edge(i, j) for j in range(n)] for i in range(n)]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                R[i][j] = R[i][j] or (R[i][k] and R[k][j])
    for i, (up, down) in filtration(cond).items():
        assert up == {j for j in range(n) if R[i][j]}
        assert down == {j for j in range(n) if R[j][i]}
        assert i in up and i in down


def test_order_check_single_vertex_is_clean():
    assert order_check(HorseshoeGraph(G2, [hs("A", "a1")]), depth=2).ok


def test_graph_T_two_classes_single_edge():
    G = HorseshoeGraph(G2, [hs("A", "a1"), hs("B", "a2")], [edge("A", "B")])
    T = graph_T(scc(G), table_oracle({}))
    assert T.solid == [(0, 1)]
