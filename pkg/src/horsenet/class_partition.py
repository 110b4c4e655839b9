"""Classes of periodic-orbit proxies via transversality of tracking geodesics.

Each periodic orbit is proxied by its deck word ``w`` and period ``q``; its
tracking geodesic is the axis of ``w``. Two proxies are dynamically
transverse when some translate of one axis crosses the other. Classes are
the connected components of that relation, with proxies sharing a closed
geodesic (same primitive root up to cyclic rotation) merged as well.

Limit hulls approximate the lift of a class's limit set: starting from one
axis, translates of the class axes that cross the current component are
added until the conjugator budget runs out. Separation of hulls is then
decided on the circle, in that one anchored lift.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .horseshoe_graph import Separation
from .hyperbolic import (DEFAULT_DEPTH, GEOM_TOL, TWO_PI, CrossResult, GeometryError,
                         IsometryType, Simplicity, _crosses_vec, apply_to_angles, axis,
                         classify, conjugator_levels, evaluate, find_crossing_translate,
                         is_simple_closed_geodesic, translation_length)
from .surface_group import GroupWord, homology_vector, primitive_root, same_cyclic_word

__all__ = [
    "OrbitProxy",
    "OrbitClass",
    "ClassPartition",
    "LimitHull",
    "dynamically_transverse",
    "partition",
    "limit_hull",
    "separates",
    "separates_hulls",
    "hull_separation_oracle",
]

HULL_BUDGET = 3000
SEPARATION_BUDGET = 400


@dataclass(frozen=True)
class OrbitProxy:
    """Periodic orbit proxy: deck word of a periodic lift and its period."""

    word: GroupWord
    period: int = 1
    id: str = ""

    def __post_init__(self):
        if not isinstance(self.period, int) or self.period < 1:
            raise ValueError(f"orbit {self.id or self.word}: period must be a positive integer")
        if self.word.is_identity:
            raise GeometryError(f"orbit {self.id or self.word}: identity word has no axis")
        if classify(evaluate(self.word)) is not IsometryType.HYPERBOLIC:
            raise GeometryError(f"orbit {self.id or self.word}: word is not hyperbolic")

    @property
    def rotation_vector(self) -> tuple[Fraction, ...]:
        return homology_vector(self.word, self.period)

    @property
    def speed(self) -> float:
        return translation_length(evaluate(self.word)) / self.period

    @property
    def axis(self):
        return axis(evaluate(self.word))


def dynamically_transverse(o1: OrbitProxy, o2: OrbitProxy, depth: int = DEFAULT_DEPTH,
                           tol: float = GEOM_TOL) -> CrossResult:
    """Does a translate of one tracking geodesic cross the other?"""
    hit = find_crossing_translate(o1.axis, o2.axis, o1.word.genus, depth, tol)
    return CrossResult.YES if hit is not None else CrossResult.NO_UP_TO_DEPTH


@dataclass
class OrbitClass:
    members: tuple[int, ...]
    chaotic: bool
    transverse_pairs: list[tuple[int, int]] = field(default_factory=list)
    equal_axis_pairs: list[tuple[int, int]] = field(default_factory=list)
    non_simple: list[int] = field(default_factory=list)

    def as_dict(self, orbits: Sequence[OrbitProxy] | None = None) -> dict:
        def name(i):
            return (orbits[i].id or str(i)) if orbits is not None else i
        return {
            "members": [name(i) for i in self.members],
            "chaotic": self.chaotic,
            "transverse_pairs": [[name(i), name(j)] for i, j in self.transverse_pairs],
            "equal_axis_pairs": [[name(i), name(j)] for i, j in self.equal_axis_pairs],
            "non_simple": [name(i) for i in self.non_simple],
        }


@dataclass
class ClassPartition:
    classes: list[OrbitClass]
    depth: int

    def class_of(self, i: int) -> int:
        for k, c in enumerate(self.classes):
            if i in c.members:
                return k
        raise KeyError(i)

    def blocks(self) -> list[frozenset]:
        return [frozenset(c.members) for c in self.classes]


def partition(orbits: Sequence[OrbitProxy], depth: int = DEFAULT_DEPTH,
              tol: float = GEOM_TOL) -> ClassPartition:
    """Transitive closure of transversality (and axis equality)."""
    if not orbits:
        raise ValueError("partition needs at least one orbit")
    n = len(orbits)
    genus = orbits[0].word.genus
    axes = [o.axis for o in orbits]
    roots = [primitive_root(o.word)[0] for o in orbits]
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    transverse, equal = [], []
    for i in range(n):
        for j in range(i + 1, n):
            if same_cyclic_word(roots[i], roots[j]):
                equal.append((i, j))
                parent[find(j)] = find(i)
                continue
            if find_crossing_translate(axes[i], axes[j], genus, depth, tol) is not None:
                transverse.append((i, j))
                parent[find(j)] = find(i)
    non_simple = [i for i in range(n)
                  if is_simple_closed_geodesic(orbits[i].word, depth, tol=tol) is Simplicity.NON_SIMPLE]
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    classes = []
    for members in sorted(groups.values(), key=min):
        ms = set(members)
        tp = [p for p in transverse if p[0] in ms]
        ns = [i for i in non_simple if i in ms]
        classes.append(OrbitClass(tuple(members), bool(tp or ns), tp,
                                  [p for p in equal if p[0] in ms], ns))
    return ClassPartition(classes, depth)


# --------------------------------------------------------------------------
# limit hulls


def _translates(genus: int, depth: int, budget: int):
    """Words and disk matrices of reduced conjugators, shortlex, truncated."""
    words, mats = [], []
    count = 0
    for w, m in conjugator_levels(genus, depth):
        take = min(len(w), budget - count)
        words.extend(tuple(int(x) for x in row) for row in w[:take])
        mats.append(m[:take])
        count += take
        if count >= budget:
            break
    return words, np.concatenate(mats)


@dataclass
class LimitHull:
    """Finite approximation of a lifted class limit set.

    ``chords`` holds the (repelling, attracting) angles of the axes in the
    anchored component; ``points`` their sorted endpoints. The hull is the
    ideal polygon on ``points``; ``gaps`` are the boundary arcs between
    consecutive points.
    """

    chords: np.ndarray
    anchor: GroupWord
    depth: int

    @property
    def points(self) -> np.ndarray:
        return np.unique(np.round(np.mod(self.chords.ravel(), TWO_PI), 12))

    def gaps(self) -> list[tuple[float, float]]:
        p = self.points
        return [(float(p[k]), float(p[(k + 1) % len(p)])) for k in range(len(p))]

    def as_dict(self) -> dict:
        return {"anchor": str(self.anchor), "depth": self.depth,
                "points": [round(float(x), 12) for x in self.points]}


def limit_hull(words: Sequence[GroupWord], depth: int = DEFAULT_DEPTH,
               budget: int = HULL_BUDGET, tol: float = GEOM_TOL) -> LimitHull:
    """Connected component, through crossings, of translates of class axes.

    The component is anchored at the axis of ``words[0]``; translates use
    conjugators of length ``<= depth`` (first ``budget`` in shortlex order).
    """
    if not words:
        raise ValueError("limit_hull needs a nonempty class")
    genus = words[0].genus
    base = np.array([[a.repelling, a.attracting] for a in (axis(evaluate(w)) for w in words)])
    _, mats = _translates(genus, max(depth, 0), budget)
    cand = np.concatenate([apply_to_angles(mats, base[k]) for k in range(len(words))])
    in_comp = np.zeros(len(cand), dtype=bool)
    in_comp[0] = True  # identity conjugator applied to the anchor axis
    queue = [0]
    while queue:
        idx = queue.pop()
        a, b = cand[idx]
        hit, _ = _crosses_vec(a, b, cand[:, 0], cand[:, 1], tol)
        new = np.flatnonzero(hit & ~in_comp)
        in_comp[new] = True
        queue.extend(int(x) for x in new)
    return LimitHull(cand[in_comp], words[0], depth)


def _gaps_of_points(H: np.ndarray, X: np.ndarray, tol: float):
    """Gap index of each point of ``X`` for every hull row, and a touch mask.

    ``H`` has shape (N, m) with sorted rows; gap ``k`` is the arc from
    ``H[:, k]`` to ``H[:, k+1]`` (cyclically). Returns two (N, len(X)) arrays.
    """
    X = np.ravel(X)
    N, m = H.shape
    idx = np.empty((N, len(X)), dtype=np.int64)
    for r in range(N):
        idx[r] = np.searchsorted(H[r], X, side="right")
    lo = np.take_along_axis(H, np.mod(idx - 1, m), axis=1)
    hi = np.take_along_axis(H, np.mod(idx, m), axis=1)

    def gap(u):
        d = np.abs(u - X[None, :])
        return np.minimum(d, TWO_PI - d)

    touch = (gap(lo) < tol) | (gap(hi) < tol)
    return np.mod(idx - 1, m), touch


def _sides(H: np.ndarray, X: np.ndarray, tol: float) -> np.ndarray:
    """Gap of each hull row containing all points of ``X`` (last axis), or -1.

    ``X`` may be 1-D (one point set) or 2-D (several sets, one per row);
    the result has shape (N,) or (N, len(X)).
    """
    X = np.asarray(X)
    flat = X.reshape(-1)
    idx, touch = _gaps_of_points(H, flat, tol)
    idx = idx.reshape((H.shape[0],) + X.shape)
    touch = touch.reshape((H.shape[0],) + X.shape)
    same = (idx == idx[..., :1]).all(axis=-1)
    return np.where(same & ~touch.any(axis=-1), idx[..., 0], -1)


def separates_hulls(Hi: np.ndarray, Hj_translates: np.ndarray, Hk_translates: np.ndarray,
                    tol: float = GEOM_TOL) -> Separation:
    """Low-level separation test on explicit boundary point sets.

    ``Hi`` is the anchored i-hull; the translate arrays (one placement per
    row) give candidate positions of the j- and k-hulls. A placement of k
    disjoint from ``Hi`` is separated when some j-placement has ``Hi`` and
    it in different gaps. An unseparated placement with a chord from ``Hi``
    to it missing every j-placement answers ``no``.
    """
    Hi = np.sort(np.mod(np.asarray(Hi, dtype=float), TWO_PI))
    Hj = np.sort(np.mod(np.atleast_2d(np.asarray(Hj_translates, dtype=float)), TWO_PI), axis=1)
    Hk = np.sort(np.mod(np.atleast_2d(np.asarray(Hk_translates, dtype=float)), TWO_PI), axis=1)
    # placements of k disjoint from Hi: Hi in one gap of Hk and Hk in one gap of Hi
    k_ok = (_sides(Hk, Hi, tol) >= 0) & (_sides(Hi[None, :], Hk, tol)[0] >= 0)
    if not k_ok.any():
        return Separation.UNKNOWN
    Hk = Hk[k_ok]
    side_i = _sides(Hj, Hi, tol)              # (Nj,)
    side_k = _sides(Hj, Hk, tol)              # (Nj, Nk)
    sep = ((side_i[:, None] >= 0) & (side_k >= 0) & (side_i[:, None] != side_k)).any(axis=0)
    if sep.all():
        return Separation.YES
    gi, ti = _gaps_of_points(Hj, Hi, tol)
    for r in np.flatnonzero(~sep):
        gk, tk = _gaps_of_points(Hj, Hk[r], tol)
        # chord (x, y) misses a j-placement iff both ends share one of its gaps
        miss = (gi[:, :, None] == gk[:, None, :]) & ~ti[:, :, None] & ~tk[:, None, :]
        if miss.all(axis=0).any():
            return Separation.NO
    return Separation.UNKNOWN


def separates(hulls: Sequence[LimitHull], class_words: Sequence[Sequence[GroupWord]],
              i: int, j: int, k: int, depth: int = DEFAULT_DEPTH,
              budget: int = SEPARATION_BUDGET, tol: float = GEOM_TOL) -> Separation:
    """Does class ``j`` separate class ``i`` from class ``k``?

    Uses the anchored hull of ``i`` and translates (conjugator length at
    most ``depth``, first ``budget`` in shortlex order) of the hulls of
    ``j`` and ``k``. ``depth == 0`` gives no evidence.
    """
    if depth <= 0:
        return Separation.UNKNOWN
    genus = class_words[i][0].genus
    _, mats = _translates(genus, depth, budget)
    Hj = hulls[j].points
    Hk = hulls[k].points
    return separates_hulls(hulls[i].points, apply_to_angles(mats, Hj), apply_to_angles(mats, Hk), tol)


def hull_separation_oracle(class_words: Sequence[Sequence[GroupWord]], depth: int = DEFAULT_DEPTH,
                           hull_depth: int | None = None, tol: float = GEOM_TOL):
    """Separation oracle over classes given by their axis words.

    Classes without hyperbolic words answer ``unknown``.
    """
    hd = min(depth, 2) if hull_depth is None else hull_depth
    hulls = [limit_hull(ws, hd, tol=tol) if ws else None for ws in class_words]

    def oracle(i, j, k):
        if any(hulls[x] is None for x in (i, j, k)):
            return Separation.UNKNOWN
        return separates(hulls, class_words, i, j, k, depth, tol=tol)

    oracle.hulls = hulls
    return oracle
