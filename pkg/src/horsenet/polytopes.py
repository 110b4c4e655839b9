"""Exact rational polytopes in H_1(S, Q) = Q^{2g}.

Polytopes are kept in minimal V-representation together with an exact
basis of their affine span. Membership first checks the affine span
exactly, then uses a floating-point facet test (Qhull, in span
coordinates) to settle points that are clearly inside or outside; points
within ``FLOAT_MARGIN`` of a facet go to the exact LP.

rot(G) is a list of polytopes, one per maximal chain of classes in the
condensation DAG, since hulls of unions only grow along a path.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .exact_lp import solve_lp
from .horseshoe_graph import Condensation, Horseshoe, HorseshoeGraph, scc

__all__ = [
    "RatPolytope",
    "PolytopeError",
    "affine_hull",
    "membership",
    "rel_interior",
    "rot_vertex",
    "rot_graph",
    "class_polytopes",
    "maximal_chains",
    "shape_diagnostics",
    "project2d",
    "in_union",
    "brute_force_visited_sets",
    "parse_vector",
    "format_vector",
]

FLOAT_MARGIN = 1e-9
MAX_CLASSES = 20

RatVector = tuple  # of Fraction


class PolytopeError(ValueError):
    pass


def _vec(p) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in p)


def parse_vector(text: str) -> tuple[Fraction, ...]:
    """``"1/2,1/2,0,0"`` -> tuple of Fractions."""
    parts = [t for t in text.replace(";", ",").split(",") if t.strip()]
    if not parts:
        raise PolytopeError(f"empty vector {text!r}")
    try:
        return tuple(Fraction(t.strip()) for t in parts)
    except ValueError as exc:
        raise PolytopeError(f"bad rational in {text!r}") from exc


def format_vector(v: Sequence[Fraction]) -> list[str]:
    return [str(Fraction(x)) for x in v]


# --------------------------------------------------------------------------
# affine spans


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    rows = [r[:] for r in rows]
    pivots = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        k = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        p = rows[r][c]
        rows[r] = [v / p for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def affine_hull(points: Sequence[Sequence[Fraction]]):
    """``(base, basis, pivots)``: RREF basis of the span of ``p - base``."""
    base = _vec(points[0])
    diffs = [[a - b for a, b in zip(_vec(p), base)] for p in points[1:]]
    if not diffs:
        return base, [], []
    basis, pivots = _rref(diffs)
    return base, basis, pivots


@dataclass(frozen=True, eq=False)
class RatPolytope:
    """Convex hull of finitely many rational points, vertices only.

    Build with :meth:`hull`; the constructor trusts its input.
    """

    vertices: tuple
    base: tuple
    basis: tuple
    pivots: tuple
    _float: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def hull(cls, points: Iterable[Sequence]) -> "RatPolytope":
        pts = sorted({_vec(p) for p in points})
        if not pts:
            raise PolytopeError("hull of no points")
        dims = {len(p) for p in pts}
        if len(dims) != 1:
            raise PolytopeError("points of mixed dimension")
        base, basis, pivots = affine_hull(pts)
        raw = cls(tuple(pts), base, tuple(tuple(r) for r in basis), tuple(pivots))
        if len(pts) <= raw.dim + 1:
            return raw  # affinely independent: all points are vertices
        keep = [p for p in pts if not raw._redundant(p)]
        return cls(tuple(keep), base, raw.basis, raw.pivots)

    @property
    def ambient_dim(self) -> int:
        return len(self.base)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, p: Sequence[Fraction]) -> tuple[Fraction, ...] | None:
        """Exact span coordinates of ``p``, or None if ``p`` is off the span."""
        d = [a - b for a, b in zip(_vec(p), self.base)]
        lam = tuple(d[c] for c in self.pivots)
        for j in range(len(d)):
            if sum(l * row[j] for l, row in zip(lam, self.basis)) != d[j]:
                return None
        return lam

    def _redundant(self, p) -> bool:
        rest = [q for q in self.vertices if q != p]
        return _lp_member(p, rest)

    def _float_data(self):
        if "eq" not in self._float:
            pts = np.array([[float(x) for x in self.coords(v)] for v in self.vertices]) \
                if self.dim else np.zeros((len(self.vertices), 0))
            eq = None
            if self.dim >= 2:
                try:
                    eq = ConvexHull(pts).equations
                except QhullError:
                    eq = None
            elif self.dim == 1:
                eq = (pts[:, 0].min(), pts[:, 0].max())
            self._float["eq"] = eq
        return self._float["eq"]

    def contains(self, p) -> bool:
        return membership(p, self)

    def as_dict(self) -> dict:
        return {"dim": self.dim, "vertices": [format_vector(v) for v in self.vertices]}

    def __repr__(self):
        vs = ", ".join("(" + ",".join(format_vector(v)) + ")" for v in self.vertices)
        return f"RatPolytope(dim={self.dim}, [{vs}])"


def _lp_member(p: Sequence[Fraction], points: Sequence[Sequence[Fraction]]) -> bool:
    """Exact LP: is ``p`` a convex combination of ``points``?"""
    if not points:
        return False
    n = len(points)
    A = [[q[j] for q in points] for j in range(len(p))] + [[1] * n]
    b = list(p) + [1]
    return solve_lp([0] * n, A, b).feasible


def membership(rho: Sequence, P: RatPolytope) -> bool:
    """Exact membership of ``rho`` in ``P`` (float prefilter, LP on ambiguity)."""
    rho = _vec(rho)
    if len(rho) != P.ambient_dim:
        raise PolytopeError(f"dimension mismatch: {len(rho)} vs {P.ambient_dim}")
    lam = P.coords(rho)
    if lam is None:
        return False
    if P.dim == 0:
        return True
    eq = P._float_data()
    x = np.array([float(v) for v in lam])
    if P.dim == 1:
        lo, hi = eq
        if lo + FLOAT_MARGIN < x[0] < hi - FLOAT_MARGIN:
            return True
        if x[0] < lo - FLOAT_MARGIN or x[0] > hi + FLOAT_MARGIN:
            return False
    elif eq is not None:
        s = eq[:, :-1] @ x + eq[:, -1]
        if s.max() < -FLOAT_MARGIN:
            return True
        if s.max() > FLOAT_MARGIN:
            return False
    return _lp_member(rho, P.vertices)


def rel_interior(rho: Sequence, P: RatPolytope) -> bool:
    """Is ``rho`` a combination of all vertices with strictly positive weights?

    Solved as ``max t`` with ``lambda_i = t + mu_i``, ``mu >= 0``.
    """
    rho = _vec(rho)
    if P.coords(rho) is None:
        return False
    n = len(P.vertices)
    if n == 1:
        return rho == P.vertices[0]
    # variables: mu_1..mu_n, t  (all >= 0; t >= 0 is harmless since we test t > 0)
    A = [[v[j] for v in P.vertices] + [sum(v[j] for v in P.vertices)] for j in range(len(rho))]
    A.append([1] * n + [n])
    b = list(rho) + [1]
    # bound t <= 1 with a slack so the LP stays bounded
    A = [row + [0] for row in A]
    A.append([0] * n + [1, 1])
    b.append(1)
    res = solve_lp([0] * n + [1, 0], A, b, maximize=True)
    return res.status == "optimal" and res.value > 0


def in_union(rho: Sequence, polys: Sequence[RatPolytope]) -> bool:
    return any(membership(rho, P) for P in polys)


# --------------------------------------------------------------------------
# rotation sets of horseshoes and graphs


def rot_vertex(h: Horseshoe) -> RatPolytope:
    """Hull of ``abelianize(T_j) / r`` over the decks of ``h``."""
    return RatPolytope.hull(h.rotation_points())


def class_points(G: HorseshoeGraph, cond: Condensation) -> list[list[tuple]]:
    return [[p for v in members for p in G.horseshoes[v].rotation_points()]
            for members in cond.classes]


def class_polytopes(G: HorseshoeGraph, cond: Condensation | None = None) -> list[RatPolytope]:
    cond = cond or scc(G)
    return [RatPolytope.hull(pts) for pts in class_points(G, cond)]


def maximal_chains(cond: Condensation) -> list[tuple[int, ...]]:
    """Source-to-sink paths of the condensation DAG, in lexicographic order."""
    n = len(cond)
    if n > MAX_CLASSES:
        raise PolytopeError(f"{n} classes exceed the chain-enumeration cap of {MAX_CLASSES}")
    dag = cond.dag
    sources = [v for v in range(n) if dag.in_degree(v) == 0]
    chains = []

    def walk(path):
        succ = sorted(dag.successors(path[-1]))
        if not succ:
            chains.append(tuple(path))
            return
        for w in succ:
            walk(path + [w])

    for s in sources:
        walk([s])
    return sorted(chains)


def _dedupe(polys: list[RatPolytope]) -> list[RatPolytope]:
    out: list[RatPolytope] = []
    for P in polys:
        if any(all(membership(v, Q) for v in P.vertices) for Q in out):
            continue
        out = [Q for Q in out if not all(membership(v, P) for v in Q.vertices)]
        out.append(P)
    return out


def rot_graph(G: HorseshoeGraph, cond: Condensation | None = None) -> list[RatPolytope]:
    """rot(G) as a list of maximal polytopes, one per chain family."""
    cond = cond or scc(G)
    pts = class_points(G, cond)
    polys = [RatPolytope.hull([p for c in chain for p in pts[c]]) for chain in maximal_chains(cond)]
    # largest first so that smaller chains are absorbed
    polys.sort(key=lambda P: (-P.dim, -len(P.vertices)))
    return _dedupe(polys)


def brute_force_visited_sets(G: HorseshoeGraph) -> set[frozenset]:
    """Vertex sets visited by walks in ``G``, by closing ``(vertex, visited)`` states.

    Independent of the SCC machinery; exponential in the worst case.
    """
    succ = {v: sorted({w for _, w in G.nx.out_edges(v)}) for v in G.horseshoes}
    seen = set()
    stack = [(v, frozenset([v])) for v in G.horseshoes]
    while stack:
        state = stack.pop()
        if state in seen:
            continue
        seen.add(state)
        v, vis = state
        for w in succ[v]:
            stack.append((w, vis | {w}))
    return {vis for _, vis in seen}


# --------------------------------------------------------------------------
# diagnostics and projections


@dataclass(frozen=True)
class Diagnostic:
    rule: str
    message: str

    def as_dict(self):
        return {"rule": self.rule, "message": self.message}


def shape_diagnostics(genus: int, class_polys: Sequence[RatPolytope],
                      labels: Sequence[str] | None = None) -> list[Diagnostic]:
    """Advisory checks on the chaotic-class polytopes.

    At most ``2g - 2`` chaotic classes are expected, and each class
    rotation set should be a convex set containing 0.
    """
    labels = labels or [str(i) for i in range(len(class_polys))]
    out = []
    bound = 2 * genus - 2
    if len(class_polys) > bound:
        out.append(Diagnostic("2g-2 chaotic-class bound",
                            f"{len(class_polys)} chaotic classes exceed 2g-2 = {bound}"))
    for lab, P in zip(labels, class_polys):
        if not membership([0] * P.ambient_dim, P):
            out.append(Diagnostic("class rotation set contains 0",
                                f"class {lab}: polytope does not contain the origin"))
        if any(x.denominator == 0 for row in P.basis for x in row):  # pragma: no cover
            out.append(Diagnostic("rational span", f"class {lab}: span lacks a rational basis"))
    return out


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull2d(points: Iterable[Sequence[Fraction]]) -> list[tuple[Fraction, Fraction]]:
    """Exact 2D convex hull, counter-clockwise from the lowest-leftmost vertex.

    Degenerate inputs give a segment (two points) or a single point.
    """
    pts = sorted({(Fraction(p[0]), Fraction(p[1])) for p in points})
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return hull


def project2d(P: RatPolytope, axes: tuple[int, int] = (0, 1)) -> list[tuple[Fraction, Fraction]]:
    i, j = axes
    d = P.ambient_dim
    if not (0 <= i < d and 0 <= j < d) or i == j:
        raise PolytopeError(f"invalid projection axes {axes} for dimension {d}")
    return hull2d((v[i], v[j]) for v in P.vertices)


def in_polygon(q: Sequence[Fraction], poly: Sequence[Sequence[Fraction]]) -> bool:
    """Closed containment in a convex counter-clockwise polygon (exact)."""
    q = (Fraction(q[0]), Fraction(q[1]))
    if len(poly) == 1:
        return q == tuple(poly[0])
    if len(poly) == 2:
        a, b = poly
        if _cross(a, b, q) != 0:
            return False
        return min(a[0], b[0]) <= q[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= q[1] <= max(a[1], b[1])
    return all(_cross(poly[k], poly[(k + 1) % len(poly)], q) >= 0 for k in range(len(poly)))
