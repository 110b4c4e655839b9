"""Random horseshoe graphs and brute-force oracles shared by the tests."""

from fractions import Fraction


from horsenet.exact_lp import solve_lp
from horsenet.horseshoe_graph import Edge, Horseshoe, HorseshoeGraph
from horsenet.surface_group import GroupWord


def random_word(rng, genus, max_len=3):
    n = int(rng.integers(1, max_len + 1))
    letters = []
    while len(letters) < n:
        x = int(rng.integers(1, 2 * genus + 1)) * int(rng.choice([-1, 1]))
        if letters and letters[-1] == -x:
            continue
        letters.append(x)
    return GroupWord(tuple(letters), genus)


def random_graph(rng, n=None, genus=2, p_edge=0.3):
    n = n or int(rng.integers(2, 7))
    hs = []
    for k in range(n):
        decks = tuple(random_word(rng, genus) for _ in range(int(rng.integers(1, 4))))
        hs.append(Horseshoe(f"H{k}", int(rng.integers(1, 4)), decks))
    edges = []
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < p_edge:
                edges.append(Edge(f"H{u}", f"H{v}", int(rng.integers(1, 4)),
                                  random_word(rng, genus), f"c{u}_{v}"))
    return HorseshoeGraph(genus, hs, edges)


def lp_in_hull(p, points):
    """Plain exact LP membership, no float prefilter."""
    n = len(points)
    A = [[q[j] for q in points] for j in range(len(p))] + [[1] * n]
    return solve_lp([0] * n, A, list(p) + [1]).feasible


def brute_rot_member(G, visited_sets, p):
    """``p`` lies in the hull of the rotation points of some visited set."""
    for vis in visited_sets:
        pts = [q for v in vis for q in G.horseshoes[v].rotation_points()]
        if lp_in_hull(p, pts):
            return True
    return False


def random_probe(rng, dim, denom=6, spread=2):
    return tuple(Fraction(int(rng.integers(-spread * denom, spread * denom + 1)), denom)
                 for _ in range(dim))
