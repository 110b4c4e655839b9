"""The labeled multigraph of horseshoes and Markovian connections.

Vertices are rotational horseshoes (a period ``r`` and deck words
``T_1..T_k``); an edge ``u -> v`` labeled ``(n, T)`` records a Markovian
connection. Every horseshoe contributes the self-loops ``(r, T_j)``, which
are materialized as ordinary edges when the graph is built.

Chaotic classes are the strongly connected components; the class order is
reachability in the condensation DAG. All negative reachability answers are
relative to the supplied finite graph.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import networkx as nx

from .surface_group import GroupWord, abelianize, homology_vector

__all__ = [
    "Horseshoe",
    "Edge",
    "HorseshoeGraph",
    "Condensation",
    "GraphError",
    "Separation",
    "scc",
    "class_reach",
    "order_check",
    "graph_T",
    "filtration",
]


class GraphError(ValueError):
    pass


class Separation(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Horseshoe:
    """Rotational horseshoe: return time ``period`` and deck words ``decks``."""

    id: str
    period: int
    decks: tuple[GroupWord, ...]
    provenance: str | None = None

    def __post_init__(self):
        if not isinstance(self.period, int) or self.period < 1:
            raise GraphError(f"horseshoe {self.id!r}: period must be a positive integer")
        if not self.decks:
            raise GraphError(f"horseshoe {self.id!r}: needs at least one deck word")
        object.__setattr__(self, "decks", tuple(self.decks))
        genera = {w.genus for w in self.decks}
        if len(genera) != 1:
            raise GraphError(f"horseshoe {self.id!r}: deck words of mixed genus")

    @property
    def genus(self) -> int:
        return self.decks[0].genus

    def rotation_points(self):
        """``abelianize(T_j) / r`` for each deck word."""
        return [homology_vector(w, self.period) for w in self.decks]

    def speeds(self) -> list[float]:
        """Translation length per unit time of each deck word (0 for the identity)."""
        from .hyperbolic import GeometryError, evaluate, translation_length

        out = []
        for w in self.decks:
            try:
                out.append(translation_length(evaluate(w)) / self.period)
            except GeometryError:
                out.append(0.0)
        return out


@dataclass(frozen=True)
class Edge:
    """Markovian connection ``source -> target`` labeled ``(n, word)``."""

    source: str
    target: str
    n: int
    word: GroupWord
    id: str = ""

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise GraphError(f"edge {self.id or (self.source, self.target)}: n must be a positive integer")

    @property
    def vector(self):
        """Unnormalized displacement ``abelianize(word)`` as a tuple of ints."""
        return abelianize(self.word)


class HorseshoeGraph:
    """Finite horseshoe graph with self-loops materialized.

    Parameters
    ----------
    genus : int
    horseshoes : sequence of Horseshoe
    edges : sequence of Edge
        Connection edges; ids are assigned as ``e0, e1, ...`` when empty.
        Self-loop ids are ``<horseshoe id>/loop<j>``.
    """

    def __init__(self, genus: int, horseshoes: Sequence[Horseshoe], edges: Sequence[Edge] = ()):
        if genus < 2:
            raise GraphError(f"genus must be at least 2, got {genus}")
        self.genus = genus
        self.horseshoes: dict[str, Horseshoe] = {}
        for h in horseshoes:
            if h.id in self.horseshoes:
                raise GraphError(f"duplicate horseshoe id {h.id!r}")
            if h.genus != genus:
                raise GraphError(f"horseshoe {h.id!r} has genus {h.genus}, scene has {genus}")
            self.horseshoes[h.id] = h
        all_edges: list[Edge] = []
        for h in self.horseshoes.values():
            for j, w in enumerate(h.decks):
                all_edges.append(Edge(h.id, h.id, h.period, w, f"{h.id}/loop{j}"))
        for k, e in enumerate(edges):
            if e.source not in self.horseshoes:
                raise GraphError(f"edge {e.id or k} starts at unknown horseshoe {e.source!r}")
            if e.target not in self.horseshoes:
                raise GraphError(f"edge {e.id or k} ends at unknown horseshoe {e.target!r}")
            if e.word.genus != genus:
                raise GraphError(f"edge {e.id or k} word has genus {e.word.genus}")
            if not e.id:
                e = Edge(e.source, e.target, e.n, e.word, f"e{k}")
            all_edges.append(e)
        self.edges: dict[str, Edge] = {}
        for e in all_edges:
            if e.id in self.edges:
                raise GraphError(f"duplicate edge id {e.id!r}")
            self.edges[e.id] = e
        g = nx.MultiDiGraph()
        g.add_nodes_from(self.horseshoes)
        for e in self.edges.values():
            g.add_edge(e.source, e.target, key=e.id)
        self.nx = g

    @property
    def vertices(self) -> list[str]:
        return list(self.horseshoes)

    def out_edges(self, v: str) -> list[Edge]:
        return [self.edges[k] for _, _, k in self.nx.out_edges(v, keys=True)]

    def subgraph(self, vertices: Iterable[str]) -> "HorseshoeGraph":
        """Induced subgraph; connection edges keep their ids."""
        keep = set(vertices)
        hs = [h for h in self.horseshoes.values() if h.id in keep]
        es = [e for e in self.edges.values()
              if e.source in keep and e.target in keep and "/loop" not in e.id]
        return HorseshoeGraph(self.genus, hs, es)

    def with_edges(self, extra: Sequence[Edge]) -> "HorseshoeGraph":
        es = [e for e in self.edges.values() if "/loop" not in e.id]
        return HorseshoeGraph(self.genus, list(self.horseshoes.values()), es + list(extra))

    def __repr__(self):
        return f"HorseshoeGraph(genus={self.genus}, |V|={len(self.horseshoes)}, |E|={len(self.edges)})"


@dataclass
class Condensation:
    """SCC decomposition with classes numbered in a deterministic topological order."""

    classes: list[tuple[str, ...]]
    class_of: dict[str, int]
    dag: nx.DiGraph
    reach: frozenset = field(default_factory=frozenset)

    def __len__(self):
        return len(self.classes)


def scc(G: HorseshoeGraph) -> Condensation:
    """Strongly connected components and their condensation DAG.

    Classes are sorted topologically, ties broken by the smallest member id,
    so the numbering depends only on the graph.
    """
    comps = [tuple(sorted(c)) for c in nx.strongly_connected_components(G.nx)]
    raw = nx.condensation(G.nx, scc=[set(c) for c in comps])
    order = list(nx.lexicographical_topological_sort(raw, key=lambda c: comps[c][0]))
    relabel = {old: new for new, old in enumerate(order)}
    classes = [comps[old] for old in order]
    dag = nx.DiGraph()
    dag.add_nodes_from(range(len(classes)))
    dag.add_edges_from((relabel[u], relabel[v]) for u, v in raw.edges)
    class_of = {v: i for i, c in enumerate(classes) for v in c}
    closure = nx.transitive_closure_dag(dag)
    reach = frozenset(closure.edges) | frozenset((i, i) for i in range(len(classes)))
    return Condensation(classes, class_of, dag, reach)


def class_reach(cond: Condensation, i: int, j: int) -> bool:
    """Is class ``j`` reachable from class ``i`` (reflexive)?"""
    n = len(cond.classes)
    if not (0 <= i < n and 0 <= j < n):
        raise GraphError(f"unknown class id in ({i}, {j}); have {n} classes")
    return (i, j) in cond.reach


# --------------------------------------------------------------------------
# order check against the geodesic partition


@dataclass
class OrderReport:
    antisymmetric: bool
    # horseshoe pairs merged by the geodesic partition but split by the SCCs
    geodesic_merges: list[tuple[str, str]]
    # horseshoe pairs in one SCC whose deck axes fall in different geodesic classes
    scc_merges: list[tuple[str, str]]

    @property
    def ok(self) -> bool:
        return self.antisymmetric and not self.geodesic_merges and not self.scc_merges

    def as_dict(self) -> dict:
        return {
            "antisymmetric": self.antisymmetric,
            "geodesic_merges_scc_separates": [list(p) for p in self.geodesic_merges],
            "scc_merges_geodesic_separates": [list(p) for p in self.scc_merges],
        }


def geodesic_horseshoe_classes(G: HorseshoeGraph, depth: int) -> dict[str, int]:
    """Group horseshoes whose deck axes are linked by transverse crossings.

    The decks of one horseshoe always share a class; identity decks carry no
    axis and do not link anything.
    """
    from .class_partition import OrbitProxy, partition

    proxies, owner = [], []
    for h in G.horseshoes.values():
        for w in h.decks:
            if w.is_identity:
                continue
            proxies.append(OrbitProxy(w, h.period))
            owner.append(h.id)
    parent = {h: h for h in G.horseshoes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    if proxies:
        part = partition(proxies, depth)
        for cls in part.classes:
            members = [owner[k] for k in cls.members]
            for m in members[1:]:
                parent[find(m)] = find(members[0])
    roots = sorted({find(h) for h in G.horseshoes})
    index = {r: k for k, r in enumerate(roots)}
    return {h: index[find(h)] for h in G.horseshoes}


def order_check(G: HorseshoeGraph, depth: int = 6, cond: Condensation | None = None,
                geo: Mapping[str, int] | None = None) -> OrderReport:
    """Compare the SCC classes with the geodesic-crossing classes.

    Disagreement means the data cannot come from a single homeomorphism:
    horseshoes whose axes cross transversally must lie in one chaotic class,
    and horseshoes of one class carry geodesics of that class.
    """
    cond = cond or scc(G)
    antisym = all(not ((i, j) in cond.reach and (j, i) in cond.reach)
                  for i in range(len(cond)) for j in range(len(cond)) if i != j)
    geo = dict(geo) if geo is not None else geodesic_horseshoe_classes(G, depth)
    geo_merge, scc_merge = [], []
    ids = sorted(G.horseshoes)
    for u, v in itertools.combinations(ids, 2):
        same_scc = cond.class_of[u] == cond.class_of[v]
        same_geo = geo[u] == geo[v]
        if same_geo and not same_scc:
            geo_merge.append((u, v))
        elif same_scc and not same_geo:
            scc_merge.append((u, v))
    return OrderReport(antisym, geo_merge, scc_merge)


# --------------------------------------------------------------------------
# graph T


@dataclass
class TGraph:
    """Class graph: solid edges certified, dashed edges depend on ``unknown``."""

    n_classes: int
    solid: list[tuple[int, int]]
    dashed: list[tuple[int, int]]
    inferred_reach: list[tuple[int, int]]
    cyclic: bool = False

    def edges(self) -> list[tuple[int, int]]:
        return sorted(self.solid + self.dashed)

    def as_dict(self) -> dict:
        return {
            "classes": self.n_classes,
            "edges": [list(e) for e in self.solid],
            "dashed": [list(e) for e in self.dashed],
            "inferred_reach": [list(e) for e in self.inferred_reach],
            "cyclic": self.cyclic,
        }


SeparationOracle = Callable[[int, int, int], "Separation | str"]


def graph_T(cond: Condensation, oracle: SeparationOracle) -> TGraph:
    """Edges ``i -> j`` between reachable classes with no separating class.

    ``oracle(i, j, k)`` answers whether class ``j`` separates ``i`` from
    ``k``. A ``yes`` for a reachable pair ``i -> k`` forces ``i -> j`` and
    ``j -> k`` (betweenness), so reachability is closed under that rule
    before edges are drawn. An ``unknown`` separator makes the edge dashed.
    """
    n = len(cond)
    memo: dict[tuple[int, int, int], Separation] = {}

    def sep(i, j, k):
        key = (i, j, k)
        if key not in memo:
            memo[key] = Separation(oracle(i, j, k))
        return memo[key]

    reach = {(i, j) for i, j in cond.reach if i != j}
    inferred = set()
    changed = True
    while changed:
        changed = False
        for i, k in sorted(reach):
            for j in range(n):
                if j in (i, k) or sep(i, j, k) is not Separation.YES:
                    continue
                for pair in ((i, j), (j, k)):
                    if pair not in reach:
                        reach.add(pair)
                        inferred.add(pair)
                        changed = True
    cyclic = any((j, i) in reach for i, j in reach)
    solid, dashed = [], []
    for i, k in sorted(reach):
        answers = [sep(i, j, k) for j in range(n) if j not in (i, k)]
        if Separation.YES in answers:
            continue
        if Separation.UNKNOWN in answers:
            dashed.append((i, k))
        else:
            solid.append((i, k))
    return TGraph(n, solid, dashed, sorted(inferred), cyclic)


def table_oracle(table: Mapping[tuple[int, int, int], str], default: str = "no") -> SeparationOracle:
    """Oracle backed by an explicit ``(i, j, k) -> answer`` table."""
    def oracle(i, j, k):
        return table.get((i, j, k), table.get((k, j, i), default))
    return oracle


def filtration(cond: Condensation) -> dict[int, tuple[frozenset, frozenset]]:
    """Per class: (classes reachable from it, classes reaching it)."""
    n = len(cond)
    out = {}
    for i in range(n):
        up = frozenset(j for j in range(n) if (i, j) in cond.reach)
        down = frozenset(j for j in range(n) if (j, i) in cond.reach)
        out[i] = (up, down)
    return out
