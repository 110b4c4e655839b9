from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import SCENES
from horsenet.horseshoe_graph import Edge, Horseshoe, HorseshoeGraph
from horsenet.realization import (RealizationError, approximate_by_cycles, bounded_deviation_check,
                                  empirical_rotation, enumerate_cycles, polyline_distance, prefix_rotations,
                                  realize_finite, realize_set, realize_stream, shortest_connector)
from horsenet.scene import load_scene
from horsenet.surface_group import abelianize, parse_word

F = Fraction
MID = (F(1, 2), F(1, 2), 0, 0)


@pytest.fixture(scope="module")
def two_loop():
    return load_scene(SCENES / "two_loop.json").graph


@pytest.fixture(scope="module")
def cycle3():
    return load_scene(SCENES / "cycle3.json").graph


def _rot_from_scratch(G, edges):
    """Sum deck vectors edge by edge, independent of the prefix arrays."""
    V = [0] * (2 * G.genus)
    N = 0
    for e in edges:
        E = G.edges[e]
        V = [a + b for a, b in zip(V, abelianize(E.word))]
        N += E.n
    return tuple(F(x, N) for x in V)


def test_empirical_rotation_single_loop(two_loop):
    for m in (1, 2, 7):
        assert empirical_rotation(two_loop, ["H/loop0"] * m) == (1, 0, 0, 0)


def test_empirical_rotation_alternating(two_loop):
    for k in (1, 5):
        assert empirical_rotation(two_loop, ["H/loop0", "H/loop1"] * k) == MID


def test_empirical_rotation_errors(two_loop, cycle3):
    with pytest.raises(RealizationError):
        empirical_rotation(two_loop, [])
    with pytest.raises(RealizationError):
        empirical_rotation(cycle3, ["ab", "ca"])  # not composable


@settings(max_examples=30)
@given(st.lists(st.sampled_from(["A/loop0", "ab", "B/loop0", "bc", "C/loop0", "ca"]), min_size=1, max_size=1))
def test_empirical_rotation_random_path(first):
    G = load_scene(SCENES / "cycle3.json").graph
    rng = np.random.default_rng(len(first[0]))
    path = list(first)
    for _ in range(int(rng.integers(1, 40))):
        out = G.out_edges(G.edges[path[-1]].target)
        path.append(out[int(rng.integers(len(out)))].id)
    assert empirical_rotation(G, path) == _rot_from_scratch(G, path)
    P = prefix_rotations(G, path)
    assert np.allclose(P[-1], [float(x) for x in _rot_from_scratch(G, path)])


def test_enumerate_cycles(cycle3):
    cycles = enumerate_cycles(cycle3)
    edges = {c.edges for c in cycles}
    assert {("A/loop0",), ("B/loop0",), ("C/loop0",), ("ab", "bc", "ca")} == edges
    big = next(c for c in cycles if len(c.edges) == 3)
    assert big.length == 6 and big.vector == (1, 0, 0, 1)


def test_approximate_own_cycle_vector(cycle3):
    comb = approximate_by_cycles(cycle3, (1, 0, 0, 0))
    assert [c.edges for c in comb.cycles] == [("A/loop0",)]
    assert comb.weights == [1] and comb.residual == 0


def test_approximate_midpoint(two_loop):
    comb = approximate_by_cycles(two_loop, MID)
    assert comb.weights == [F(1, 2), F(1, 2)]


def test_approximate_recovers_known_combination(cycle3, rng):
    cycles = enumerate_cycles(cycle3)
    for _ in range(10):
        w = rng.integers(0, 5, size=len(cycles)) + np.eye(len(cycles), dtype=int)[0]
        w = [F(int(x), int(w.sum())) for x in w]
        rho = tuple(sum((wi * c.rotation[i] for wi, c in zip(w, cycles)), F(0)) for i in range(4))
        comb = approximate_by_cycles(cycle3, rho, cycles=cycles)
        assert comb.residual == 0 and comb.point == rho


def test_approximate_reports_residual(two_loop):
    with pytest.raises(RealizationError, match="best residual 1/2"):
        approximate_by_cycles(two_loop, (F(1, 2), F(1, 2), F(1, 2), 0), F(1, 10))


def test_shortest_connector(cycle3):
    assert shortest_connector(cycle3, "A", "C") == ("ab", "bc")
    assert shortest_connector(cycle3, "B", "B") == ()
    G = HorseshoeGraph(2, [Horseshoe("X", 1, (parse_word("a1", 2),)), Horseshoe("Y", 1, (parse_word("b1", 2),))])
    with pytest.raises(RealizationError):
        shortest_connector(G, "X", "Y")


def test_realize_finite_one_cycle(two_loop):
    W = realize_finite(two_loop, (1, 0, 0, 0), F(1, 10))
    assert W.edges == ["H/loop0"] and W.error == 0


def test_realize_finite_midpoint_equal_exponents(two_loop):
    W = realize_finite(two_loop, MID, F(1, 10))
    assert W.exponents[0] == W.exponents[1]
    assert _rot_from_scratch(two_loop, W.edges) == MID


def test_realize_finite_with_connectors(cycle3):
    rho = (F(1, 3), F(1, 6), F(1, 3), F(1, 3))
    for eps in (F(1, 10), F(1, 100)):
        W = realize_finite(cycle3, rho, eps)
        assert W.closed
        err = max(abs(a - b) for a, b in zip(_rot_from_scratch(cycle3, W.edges), rho))
        assert err == W.error <= 2 * eps
        starts = [cycle3.edges[e].source for e in W.edges]
        assert starts[0] == "A" and cycle3.edges[W.edges[-1]].target == "A"


def test_realize_finite_on_chain_is_open():
    g = 2
    hs = [Horseshoe("A", 1, (parse_word("a1", g),)), Horseshoe("B", 1, (parse_word("b1", g),))]
    G = HorseshoeGraph(g, hs, [Edge("A", "B", 2, parse_word("a2", g), "ab")])
    W = realize_finite(G, (F(1, 2), F(1, 2), 0, 0), F(1, 50))
    assert not W.closed
    assert W.error <= F(1, 25)
    assert W.edges.count("ab") == 1


def test_stream_constant_vector():
    G = HorseshoeGraph(2, [Horseshoe("H", 1, (parse_word("a1", 2), parse_word("a1", 2)))])
    s = realize_stream(G, (1, 0, 0, 0))
    edges = [e for e, _, _ in s.take(200)]
    P = prefix_rotations(G, edges)
    assert np.all(P == [1, 0, 0, 0])
    assert s.certificate()["deviation_bound"] == "0"


def test_stream_midpoint_bounds(two_loop):
    s = realize_stream(two_loop, MID)
    items = s.take(3000)
    V, N = np.zeros(4, dtype=np.int64), 0
    for e, stage, bound in items:
        E = two_loop.edges[e]
        V += np.array(E.vector)
        N += E.n
        dev = max(abs(F(int(v), N) - r) for v, r in zip(V, MID))
        assert dev <= bound
    bounds = [r.bound for r in s.stages]
    assert all(a > b for a, b in zip(bounds, bounds[1:]))


def test_stream_resume_is_deterministic(cycle3):
    rho = (F(1, 3), F(1, 6), F(1, 3), F(1, 3))
    a = realize_stream(cycle3, rho)
    first = a.take(500)
    state = a.checkpoint()
    rest = a.take(300)
    b = realize_stream(cycle3, rho)
    b.resume(state)
    assert b.take(300) == rest
    assert realize_stream(cycle3, rho).take(800) == first + rest


def test_stream_needs_strong_connectivity():
    g = 2
    hs = [Horseshoe("A", 1, (parse_word("a1", g),)), Horseshoe("B", 1, (parse_word("b1", g),))]
    G = HorseshoeGraph(g, hs, [Edge("A", "B", 1, parse_word("1", g))])
    with pytest.raises(RealizationError, match="strongly connected"):
        realize_stream(G, (F(1, 2), F(1, 2), 0, 0))


def test_bounded_deviation_examples(two_loop):
    assert bounded_deviation_check(two_loop, ["H/loop0"] * 50, (1, 0, 0, 0), 0)
    alt = ["H/loop0", "H/loop1"] * 200
    # closed form: deviation alternates between (1/2, -1/2) and 0
    assert bounded_deviation_check(two_loop, alt, MID, F(1, 2))
    assert not bounded_deviation_check(two_loop, alt, MID, F(1, 3))


def test_stream_deviation_certificate_replay(two_loop):
    s = realize_stream(two_loop, MID)
    edges = [e for e, _, _ in s.take(100_000)]
    L = s.certificate()["deviation_bound"]
    assert L is not None
    assert bounded_deviation_check(two_loop, edges, MID, F(L))


def test_set_one_point_net(cycle3):
    v = (F(1, 3), F(1, 6), F(1, 3), F(1, 3))
    eps = F(1, 20)
    st_ = realize_set(cycle3, [v], eps)
    edges = st_.take(20_000)
    P = prefix_rotations(cycle3, edges)
    assert np.abs(P[st_.burn_in:] - np.array([float(x) for x in v])).max() <= float(eps)


def test_set_two_point_net_oscillates():
    g = 2
    G = HorseshoeGraph(g, [Horseshoe("H", 1, (parse_word("a1", g), parse_word("A1", g)))])
    net = [(F(-1, 2), 0, 0, 0), (F(1, 2), 0, 0, 0)]
    eps = F(1, 20)
    st_ = realize_set(G, net, eps)
    edges = st_.take(100_000)
    P = prefix_rotations(G, edges)[st_.burn_in:]
    assert polyline_distance(P, net, closed=False).max() <= float(eps)
    for v in net:
        assert np.abs(P - np.array([float(x) for x in v])).max(axis=1).min() <= float(eps)


def test_set_rejects_boundary_point(two_loop):
    with pytest.raises(RealizationError, match="relative interior"):
        realize_set(two_loop, [(1, 0, 0, 0)], F(1, 20))


def test_polyline_distance_matches_dense_sampling(rng):
    net = [(0, 0), (1, 2), (3, 1)]
    pts = rng.uniform(-1, 4, size=(200, 2))
    vs = np.array(net, dtype=float)
    ts = np.linspace(0, 1, 4001)[:, None]
    samples = np.concatenate([a + ts * (b - a) for a, b in zip(vs, np.roll(vs, -1, axis=0))])
    ref = np.abs(pts[:, None, :] - samples[None, :, :]).max(axis=2).min(axis=1)
    got = polyline_distance(pts, net)
    assert np.all(got <= ref + 1e-12)
    assert np.allclose(got, ref, atol=2e-3)
