"""Symbolic orbits in a horseshoe graph with prescribed rotation behaviour.

A symbolic orbit is a composable sequence of edge ids. Its empirical
rotation after ``k`` edges is ``sum abelianize(T(w_j)) / sum n(w_j)``; all
bounds below are checked on exact rationals.

Only the symbolic shadow is produced. The boundary corrections coming from
rectangle diameters vanish here, so the constants ``M_s`` of a geometric
argument are replaced by the exact prefix deviations of the stage words.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import networkx as nx
import numpy as np

from .exact_lp import solve_lp
from .horseshoe_graph import Edge, HorseshoeGraph, scc
from .polytopes import RatPolytope, rel_interior

__all__ = [
    "RealizationError",
    "Cycle",
    "CycleCombination",
    "FiniteRealization",
    "RealizationStream",
    "SetStream",
    "empirical_rotation",
    "prefix_rotations",
    "enumerate_cycles",
    "approximate_by_cycles",
    "realize_finite",
    "realize_stream",
    "realize_set",
    "bounded_deviation_check",
    "shortest_connector",
    "sup_norm",
]

CYCLE_BUDGET = 5000


class RealizationError(ValueError):
    pass


def sup_norm(v) -> Fraction:
    return max((abs(x) for x in v), default=Fraction(0))


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _check_path(G: HorseshoeGraph, edges: Sequence[str]) -> None:
    for a, b in zip(edges, edges[1:]):
        if G.edges[a].target != G.edges[b].source:
            raise RealizationError(f"edges {a} -> {b} are not composable")


def _totals(G: HorseshoeGraph, edges: Sequence[str]):
    dim = 2 * G.genus
    V = [0] * dim
    N = 0
    for e in edges:
        E = G.edges[e]
        for i, x in enumerate(E.vector):
            V[i] += x
        N += E.n
    return tuple(V), N


def empirical_rotation(G: HorseshoeGraph, edges: Sequence[str]) -> tuple[Fraction, ...]:
    """Exact empirical rotation vector of a composable edge sequence."""
    if not edges:
        raise RealizationError("empirical rotation of an empty prefix")
    _check_path(G, edges)
    V, N = _totals(G, edges)
    return tuple(Fraction(x, N) for x in V)


def _prefix_arrays(G: HorseshoeGraph, edges: Sequence[str]):
    """Cumulative integer displacement and time after each edge."""
    vec = {k: e.vector for k, e in G.edges.items()}
    n = {k: e.n for k, e in G.edges.items()}
    V = np.cumsum(np.array([vec[e] for e in edges], dtype=np.int64), axis=0)
    N = np.cumsum(np.array([n[e] for e in edges], dtype=np.int64))
    return V, N


def prefix_rotations(G: HorseshoeGraph, edges: Sequence[str]) -> np.ndarray:
    """Float empirical rotations of every prefix (for plotting and screening)."""
    V, N = _prefix_arrays(G, edges)
    return V / N[:, None]


# --------------------------------------------------------------------------
# cycles and convex weights


@dataclass(frozen=True)
class Cycle:
    """Closed path starting and ending at ``start``."""

    edges: tuple[str, ...]
    start: str
    vector: tuple[int, ...]
    length: int  # total n

    @property
    def rotation(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.length) for x in self.vector)


def _best_edges(G: HorseshoeGraph) -> dict[tuple[str, str], list[Edge]]:
    out: dict[tuple[str, str], list[Edge]] = {}
    for e in sorted(G.edges.values(), key=lambda e: e.id):
        out.setdefault((e.source, e.target), []).append(e)
    return out


def enumerate_cycles(G: HorseshoeGraph, budget: int = CYCLE_BUDGET) -> list[Cycle]:
    """Simple cycles (vertex-simple, every parallel-edge choice), deterministic order."""
    simple = nx.DiGraph()
    simple.add_nodes_from(G.horseshoes)
    simple.add_edges_from((e.source, e.target) for e in G.edges.values())
    by_pair = _best_edges(G)
    node_cycles = []
    for c in nx.simple_cycles(simple, length_bound=len(G.horseshoes)):
        k = c.index(min(c))
        node_cycles.append(tuple(c[k:] + c[:k]))
    node_cycles.sort(key=lambda c: (len(c), c))
    out = []
    for c in node_cycles:
        hops = [by_pair[(c[i], c[(i + 1) % len(c)])] for i in range(len(c))]
        for choice in itertools.product(*hops):
            ids = tuple(e.id for e in choice)
            V, N = _totals(G, ids)
            out.append(Cycle(ids, c[0], V, N))
            if len(out) > budget:
                raise RealizationError(f"more than {budget} simple cycles; raise the budget")
    return out


@dataclass
class CycleCombination:
    cycles: list[Cycle]
    weights: list[Fraction]
    residual: Fraction  # sup-norm distance from the combination to the target

    @property
    def point(self) -> tuple[Fraction, ...]:
        dim = len(self.cycles[0].vector)
        return tuple(sum((w * c.rotation[i] for w, c in zip(self.weights, self.cycles)), Fraction(0))
                     for i in range(dim))


def approximate_by_cycles(G: HorseshoeGraph, rho: Sequence, eps=Fraction(0),
                          cycles: Sequence[Cycle] | None = None) -> CycleCombination:
    """Convex weights on simple cycles reproducing ``rho`` within ``eps``.

    An exact representation is tried first; otherwise the sup-norm residual
    is minimized by LP and compared with ``eps``.
    """
    rho = tuple(Fraction(x) for x in rho)
    eps = Fraction(eps)
    cycles = list(cycles) if cycles is not None else enumerate_cycles(G)
    if not cycles:
        raise RealizationError("graph has no cycles")
    dim = len(rho)
    m = len(cycles)
    R = [c.rotation for c in cycles]
    A = [[R[j][i] for j in range(m)] for i in range(dim)] + [[Fraction(1)] * m]
    b = list(rho) + [Fraction(1)]
    res = solve_lp([0] * m, A, b)
    if res.status == "optimal":
        return _pack(cycles, res.x[:m], Fraction(0))
    # variables: sigma (m), t, a (dim), b (dim)
    A2, b2 = [], []
    for i in range(dim):
        row = [R[j][i] for j in range(m)] + [Fraction(-1)] + [Fraction(0)] * (2 * dim)
        row[m + 1 + i] = Fraction(1)
        A2.append(row)
        b2.append(rho[i])
        row = [R[j][i] for j in range(m)] + [Fraction(1)] + [Fraction(0)] * (2 * dim)
        row[m + 1 + dim + i] = Fraction(-1)
        A2.append(row)
        b2.append(rho[i])
    A2.append([Fraction(1)] * m + [Fraction(0)] * (1 + 2 * dim))
    b2.append(Fraction(1))
    c = [0] * m + [1] + [0] * (2 * dim)
    res = solve_lp(c, A2, b2)
    t = res.value
    if t > eps:
        raise RealizationError(
            f"no convex combination of {m} simple cycles within {eps}; best residual {t}")
    return _pack(cycles, res.x[:m], t)


def _pack(cycles, sigma, t) -> CycleCombination:
    keep = [(c, s) for c, s in zip(cycles, sigma) if s > 0]
    return CycleCombination([c for c, _ in keep], [s for _, s in keep], t)


# --------------------------------------------------------------------------
# connectors and finite words


def shortest_connector(G: HorseshoeGraph, u: str, v: str) -> tuple[str, ...]:
    """Path ``u -> v`` minimizing total ``n``, ties broken by the edge-id sequence."""
    if u == v:
        return ()
    heap = [(0, (), u)]
    done = set()
    while heap:
        d, path, x = heapq.heappop(heap)
        if x in done:
            continue
        done.add(x)
        if x == v:
            return path
        for e in G.out_edges(x):
            if e.target not in done:
                heapq.heappush(heap, (d + e.n, path + (e.id,), e.target))
    raise RealizationError(f"no path from {u!r} to {v!r}")


@dataclass
class FiniteRealization:
    edges: list[str]
    combination: CycleCombination
    exponents: list[int]
    connectors: list[tuple[str, ...]]
    target: tuple[Fraction, ...]
    eps: Fraction
    error: Fraction  # exact sup-norm distance of the word's rotation from the target
    closed: bool
    rotation: tuple[Fraction, ...] = ()

    def certificate(self) -> dict:
        return {
            "target": [str(x) for x in self.target],
            "eps": str(self.eps),
            "error": str(self.error),
            "bound": str(2 * self.eps),
            "closed": self.closed,
            "cycles": [{"edges": list(c.edges), "weight": str(w), "exponent": p}
                       for c, w, p in zip(self.combination.cycles, self.combination.weights, self.exponents)],
            "lp_residual": str(self.combination.residual),
            "connectors": [list(c) for c in self.connectors],
            "symbols": len(self.edges),
        }


def _components_order(G: HorseshoeGraph):
    cond = scc(G)
    return cond, {v: cond.class_of[v] for v in G.horseshoes}


def realize_finite(G: HorseshoeGraph, rho: Sequence, eps, base: str | None = None,
                   cycles: Sequence[Cycle] | None = None) -> FiniteRealization:
    """Path ``(c_1)^{p_1} w'_1 (c_2)^{p_2} ...`` with rotation within ``2 eps`` of ``rho``.

    Exponents are proportional to ``sigma_m / n(c_m)``, so the cycle blocks
    alone average to the LP point exactly; the common multiplier is the
    least one that absorbs the connector displacement. When ``G`` is strongly
    connected the word is closed at ``base`` (default: smallest vertex id).
    """
    rho = tuple(Fraction(x) for x in rho)
    eps = Fraction(eps)
    comb = approximate_by_cycles(G, rho, eps, cycles)
    cond, cls = _components_order(G)
    closed = len(cond) == 1
    order = sorted(range(len(comb.cycles)), key=lambda k: cls[comb.cycles[k].start])
    cyc = [comb.cycles[k] for k in order]
    sig = [comb.weights[k] for k in order]

    starts = [c.start for c in cyc]
    if closed:
        base = base or min(G.horseshoes)
        stops = [base] + starts + [base]
    else:
        stops = starts
    connectors = [shortest_connector(G, a, b) for a, b in zip(stops, stops[1:])]
    conn_edges = [e for c in connectors for e in c]
    Vc, Nc = _totals(G, conn_edges)

    ratios = [s / c.length for s, c in zip(sig, cyc)]
    D = math.lcm(*[r.denominator for r in ratios])
    star = comb.point
    budget = 2 * eps - comb.residual
    dev = sup_norm(_sub(tuple(Fraction(x) for x in Vc), tuple(Nc * x for x in star)))
    if dev == 0:
        K = 1
    elif budget <= 0:
        raise RealizationError("connectors cannot be absorbed with a zero error budget")
    else:
        # ||Vc - Nc rho*|| / (K D + Nc) <= budget
        K = max(1, math.ceil((dev / budget - Nc) / D))
    exps = [int(K * D * r) for r in ratios]

    def assemble(exps):
        word: list[str] = []
        if closed:
            word.extend(connectors[0])
            rest = connectors[1:]
        else:
            rest = connectors
        for k, c in enumerate(cyc):
            word.extend(c.edges * exps[k])
            if k < len(rest):
                word.extend(rest[k])
        return word

    word = assemble(exps)
    rot = empirical_rotation(G, word)
    err = sup_norm(_sub(rot, rho))
    if err > 2 * eps:
        raise RealizationError(f"emitted word misses the bound: {err} > {2 * eps}")
    return FiniteRealization(word, CycleCombination(cyc, sig, comb.residual), exps, connectors,
                             rho, eps, err, closed, rot)


def _max_prefix_deviation(G: HorseshoeGraph, edges: Sequence[str], rho) -> Fraction:
    """``max_u ||V_u - N_u rho||`` over the nonempty prefixes ``u`` of ``edges``."""
    D = math.lcm(*[Fraction(x).denominator for x in rho])
    r = np.array([int(Fraction(x) * D) for x in rho], dtype=np.int64)
    V, N = _prefix_arrays(G, edges)
    dev = np.abs(V * D - N[:, None] * r[None, :]).max()
    return Fraction(int(dev), D)


# --------------------------------------------------------------------------
# streams


@dataclass
class StageRecord:
    stage: int
    eps: Fraction
    symbols: int
    time: int
    error: Fraction
    prefix_deviation: Fraction
    bound: Fraction
    repeats: int | None = None

    def as_dict(self) -> dict:
        return {"stage": self.stage, "eps": str(self.eps), "symbols": self.symbols,
                "time": self.time, "error": str(self.error),
                "prefix_deviation": str(self.prefix_deviation), "bound": str(self.bound),
                "repeats": self.repeats}


class RealizationStream:
    """Resumable stream ``(W^{s0})^{p_{s0}} (W^{s0+1})^{p_{s0+1}} ...``.

    ``W^s`` comes from :func:`realize_finite` with ``eps = 2^{-s-1}``, a loop
    at a fixed base vertex. ``p_s`` is the least repetition count after which
    the exact running deviation, plus the worst prefix deviation of
    ``W^{s+1}``, is at most ``2^{-s+1}`` times the elapsed time. Every prefix
    inside block ``s`` then has rotation within ``2^{-s+3}`` of the target.
    """

    def __init__(self, G: HorseshoeGraph, rho: Sequence, start_stage: int = 0):
        cond = scc(G)
        if len(cond) != 1:
            raise RealizationError("streams need a strongly connected graph; an infinite "
                                   "path settles in a single class")
        self.G = G
        self.rho = tuple(Fraction(x) for x in rho)
        self.base = min(G.horseshoes)
        self.s0 = start_stage
        self._cycles = enumerate_cycles(G)
        self._words: dict[int, FiniteRealization] = {}
        self.stages: list[StageRecord] = []
        self._reset()

    def _reset(self):
        self.stage = self.s0
        self.copy = 0
        self.pos = 0
        self.emitted = 0
        self.V = [0] * len(self.rho)
        self.N = 0
        self.stages = []
        self._open_stage(self.s0)

    def word(self, s: int) -> FiniteRealization:
        if s not in self._words:
            self._words[s] = realize_finite(self.G, self.rho, Fraction(1, 2 ** (s + 1)),
                                            base=self.base, cycles=self._cycles)
        return self._words[s]

    def _record(self, s: int) -> StageRecord:
        W = self.word(s)
        _, N = _totals(self.G, W.edges)
        M = _max_prefix_deviation(self.G, W.edges, self.rho)
        bound = Fraction(8, 2 ** s) if s >= 0 else Fraction(8 * 2 ** (-s))
        if s == self.s0:
            # the first block starts from an empty prefix: its bound is the
            # worst prefix rotation of W itself unless 2^{-s+3} already covers it
            worst = self._first_block_bound(W)
            bound = max(bound, worst)
        return StageRecord(s, W.eps, len(W.edges), N, W.error, M, bound)

    def _first_block_bound(self, W: FiniteRealization) -> Fraction:
        V, N = _prefix_arrays(self.G, W.edges)
        worst = Fraction(0)
        for k in range(len(W.edges)):
            r = tuple(Fraction(int(x), int(N[k])) for x in V[k])
            worst = max(worst, sup_norm(_sub(r, self.rho)))
        return max(worst, W.error)

    def _open_stage(self, s: int):
        rec = self._record(s)
        nxt = self._record(s + 1)
        W = self.word(s)
        _, Nw = _totals(self.G, W.edges)
        target = Fraction(2, 2 ** s) if s >= 0 else Fraction(2 * 2 ** (-s))
        Dabs = sup_norm(_sub(tuple(Fraction(x) for x in self.V), tuple(self.N * x for x in self.rho)))
        # after p copies: ||D|| <= Dabs + p Nw e_s, time = N + p Nw
        e = W.error
        if e >= target:
            raise RealizationError("stage word error exceeds the stage target")
        need = (Dabs + nxt.prefix_deviation - target * self.N) / (Nw * (target - e))
        rec.repeats = max(1, math.ceil(need))
        self.stages.append(rec)
        self._current = (W.edges, rec.repeats, rec.bound)

    def checkpoint(self) -> dict:
        return {"stage": self.stage, "copy": self.copy, "pos": self.pos, "emitted": self.emitted}

    def resume(self, state: dict) -> None:
        """Regenerate deterministically up to ``state``."""
        self._reset()
        for _ in self.take(state["emitted"]):
            pass

    def __iter__(self) -> Iterator[tuple[str, int, Fraction]]:
        while True:
            edges, reps, bound = self._current
            e = edges[self.pos]
            E = self.G.edges[e]
            for i, x in enumerate(E.vector):
                self.V[i] += x
            self.N += E.n
            self.emitted += 1
            stage = self.stage
            # advance before yielding so an abandoned generator leaves no gap
            self.pos += 1
            if self.pos == len(edges):
                self.pos = 0
                self.copy += 1
                if self.copy == reps:
                    self.copy = 0
                    self.stage += 1
                    self._open_stage(self.stage)
            yield e, stage, bound

    def take(self, k: int) -> list[tuple[str, int, Fraction]]:
        return list(itertools.islice(iter(self), k))

    def certificate(self) -> dict:
        exact = all(r.error == 0 for r in self.stages)
        return {
            "target": [str(x) for x in self.rho],
            "base": self.base,
            "stages": [r.as_dict() for r in self.stages],
            "deviation_bound": str(max(r.prefix_deviation for r in self.stages)) if exact else None,
        }


def realize_stream(G: HorseshoeGraph, rho: Sequence, start_stage: int = 0) -> RealizationStream:
    return RealizationStream(G, rho, start_stage)


# --------------------------------------------------------------------------
# sets


class SetStream:
    """Back-and-forth sweeps over a closed polygonal net of rotation vectors.

    Net vertex ``v_i`` gets a closed word ``W_i`` within ``eps/4``. A dwell
    block repeats ``W_i`` until the running rotation is within ``eps/2`` of
    ``v_i``, and at least twice as long as in the previous sweep. At block
    boundaries the running rotation is a convex combination of the previous
    one and ``rot(W_i)``; once the elapsed time exceeds the burn-in
    threshold, partial copies move it by at most ``eps/2``.
    """

    def __init__(self, G: HorseshoeGraph, net: Sequence[Sequence], eps, polytope: RatPolytope | None = None):
        cond = scc(G)
        if len(cond) != 1:
            raise RealizationError("set realization needs a strongly connected graph")
        self.G = G
        self.eps = Fraction(eps)
        if self.eps <= 0:
            raise RealizationError("eps must be positive")
        self.net = [tuple(Fraction(x) for x in v) for v in net]
        if not self.net:
            raise RealizationError("empty net")
        P = polytope or RatPolytope.hull([p for h in G.horseshoes.values() for p in h.rotation_points()])
        for v in self.net:
            if not rel_interior(v, P):
                raise RealizationError(f"net vertex {[str(x) for x in v]} is not in the relative interior")
        self.base = min(G.horseshoes)
        cycles = enumerate_cycles(G)
        self.words = [realize_finite(G, v, self.eps / 8, base=self.base, cycles=cycles) for v in self.net]
        self._stats = []
        R = max(sup_norm(w.rotation) for w in self.words)
        Q = Fraction(0)
        for w in self.words:
            V, N = _prefix_arrays(G, w.edges)
            _, Nw = _totals(G, w.edges)
            Q = max(Q, Fraction(int(np.abs(V).max())) + Nw * R)
        self.threshold = 2 * Q / self.eps
        self.burn_in: int | None = None
        self.blocks: list[dict] = []

    def __iter__(self) -> Iterator[str]:
        """Replay from the first symbol; the schedule is rebuilt on each call."""
        self.blocks = []
        V = [Fraction(0)] * len(self.net[0])
        N = 0
        emitted = 0
        prev = {}
        sweep = 0
        m = len(self.net)
        while True:
            for i in range(m):
                W = self.words[i]
                Vw, Nw = _totals(self.G, W.edges)
                v = self.net[i]
                e = W.error
                half = self.eps / 2
                dev = sup_norm(_sub(V, tuple(N * x for x in v)))
                need = (dev - half * N) / (Nw * (half - e))
                reps = max(1, math.ceil(need), 2 * prev.get(i, 0))
                prev[i] = reps
                self.blocks.append({"sweep": sweep, "vertex": i, "repeats": reps, "start": emitted})
                for _ in range(reps):
                    for x in W.edges:
                        yield x
                    emitted += len(W.edges)
                V = [a + reps * b for a, b in zip(V, Vw)]
                N += reps * Nw
            if sweep == 0:
                # pad on the last vertex until partial copies are negligible
                W = self.words[m - 1]
                Vw, Nw = _totals(self.G, W.edges)
                while N < self.threshold:
                    for x in W.edges:
                        yield x
                    emitted += len(W.edges)
                    V = [a + b for a, b in zip(V, Vw)]
                    N += Nw
                self.burn_in = emitted
            sweep += 1

    def take(self, k: int) -> list[str]:
        return list(itertools.islice(iter(self), k))

    def certificate(self) -> dict:
        return {
            "net": [[str(x) for x in v] for v in self.net],
            "eps": str(self.eps),
            "burn_in": self.burn_in,
            "threshold": str(self.threshold),
            "words": [w.certificate() for w in self.words],
            "blocks": self.blocks,
        }


def realize_set(G: HorseshoeGraph, net: Sequence[Sequence], eps, polytope: RatPolytope | None = None) -> SetStream:
    return SetStream(G, net, eps, polytope)


def polyline_distance(points: np.ndarray, net: Sequence[Sequence], closed: bool = True) -> np.ndarray:
    """Sup-norm distance of each row of ``points`` to the net polyline (float)."""
    vs = np.array([[float(x) for x in v] for v in net])
    if len(vs) == 1:
        segs = [(vs[0], vs[0])]
    elif closed:
        segs = list(zip(vs, np.roll(vs, -1, axis=0)))
    else:
        segs = list(zip(vs[:-1], vs[1:]))
    best = np.full(len(points), np.inf)
    for a, b in segs:
        d = b - a
        # minimize max_i |p_i - a_i - t d_i| over t in [0,1]: the optimum is at
        # t in {0, 1} or where two of the signed terms balance
        cands = [np.zeros(len(points)), np.ones(len(points))]
        diff = points - a
        dim = len(a)
        for i in range(dim):
            for j in range(dim):
                for sgn in (1.0, -1.0):
                    den = d[i] - sgn * d[j]
                    if abs(den) > 0:
                        cands.append(np.clip((diff[:, i] - sgn * diff[:, j]) / den, 0.0, 1.0))
            if d[i] != 0:
                cands.append(np.clip(diff[:, i] / d[i], 0.0, 1.0))
        for t in cands:
            val = np.abs(diff - t[:, None] * d[None, :]).max(axis=1)
            best = np.minimum(best, val)
    return best


def bounded_deviation_check(G: HorseshoeGraph, edges: Sequence[str], rho: Sequence, L) -> bool:
    """``max_k ||sum_{j<k} [T(w_j)] - (sum n(w_j)) rho|| <= L`` over the given prefix."""
    if not edges:
        return True
    return _max_prefix_deviation(G, edges, tuple(Fraction(x) for x in rho)) <= Fraction(L)
