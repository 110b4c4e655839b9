"""Chord model of a lifted transverse foliation.

A leaf is an oriented chord of the unit disk, stored as an
:class:`~horsenet.hyperbolic.OrientedGeodesic` with ``repelling`` as its
tail and ``attracting`` as its head. Its left side ``L(phi)`` is the region
to the left of travel; on the circle that region is bounded by the
counter-clockwise arc from the head to the tail.

A transverse path is a finite sequence of leaves crossed from left to
right, so that ``L(phi_i)`` is strictly contained in ``L(phi_j)`` for
``i < j``.

"Above relative to phi3" is decided on the boundary: two leaves on the same
side of ``phi3`` and not separating each other cut out disjoint intervals of
that side's arc, and the leaf whose interval lies nearer to the head of
``phi3`` is the one above. Joining each leaf to ``phi3`` by a path inside
the strip between them, the path from the upper leaf meets ``phi3`` later.

Everything lives in one lift; deck transformations act by disk matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .horseshoe_graph import Edge, Horseshoe
from .hyperbolic import (GeometryError, Isometry, OrientedGeodesic, TWO_PI,
                         apply_to_angles, axis, evaluate, norm_angle,
                         translation_length)
from .surface_group import GroupWord, power

LEAF_TOL = 1e-7

__all__ = [
    "Leaf",
    "TransversePath",
    "AdmissiblePath",
    "LeafError",
    "leaf",
    "same_leaf",
    "path_equivalent",
    "compare_above",
    "is_above",
    "f_transverse_intersection",
    "self_transverse_with_deck",
    "force_concatenate",
    "extract_horseshoe",
    "extract_connection",
    "read_chord_paths",
]


class LeafError(ValueError):
    pass


Leaf = OrientedGeodesic


def leaf(tail: float, head: float) -> Leaf:
    return OrientedGeodesic(tail, head)


def same_leaf(p: Leaf, q: Leaf, tol: float = LEAF_TOL) -> bool:
    return p.same_as(q, tol)


def _offset(x: float, base: float, tol: float) -> float:
    """Counter-clockwise offset of ``x`` from ``base`` in ``[0, 2pi)``;
    values within ``tol`` of a full turn snap to 0."""
    o = norm_angle(x - base)
    return 0.0 if TWO_PI - o < tol else o


def left_arc(p: Leaf) -> tuple[float, float]:
    """``(start, length)`` of the counter-clockwise arc bounding ``L(p)``."""
    return p.attracting, norm_angle(p.repelling - p.attracting)


def right_arc(p: Leaf) -> tuple[float, float]:
    return p.repelling, norm_angle(p.attracting - p.repelling)


def _interleave(p: Leaf, q: Leaf, tol: float) -> bool:
    start, length = left_arc(p)
    offs = [_offset(x, start, tol) for x in (q.repelling, q.attracting)]
    if any(o < tol or abs(o - length) < tol for o in offs):
        # a shared endpoint at infinity is not an interior crossing
        return False
    inside = [o < length for o in offs]
    return inside[0] != inside[1]


def chords_disjoint(p: Leaf, q: Leaf, tol: float = LEAF_TOL) -> bool:
    """Distinct chords with no interior crossing (shared endpoints allowed)."""
    if p.unoriented_same_as(q, tol):
        return False
    return not _interleave(p, q, tol)


def side_of(p: Leaf, q: Leaf, tol: float = LEAF_TOL) -> str | None:
    """``'L'`` or ``'R'`` if chord ``q`` lies in the closure of that side of
    ``p``, else None (crossing or equal)."""
    if not chords_disjoint(p, q, tol):
        return None
    start, length = left_arc(p)
    offs = [_offset(x, start, tol) for x in (q.repelling, q.attracting)]
    if all(o <= length + tol for o in offs):
        # q inside the closed left arc; if both ends sit on p's ends it is p reversed
        return "L"
    return "R"


def left_contains(p: Leaf, q: Leaf, tol: float = LEAF_TOL) -> bool:
    """``L(p)`` strictly inside ``L(q)``."""
    if p.same_as(q, tol) or not chords_disjoint(p, q, tol):
        return False
    start, length = left_arc(q)
    oh = _offset(p.attracting, start, tol)
    ot = _offset(p.repelling, start, tol)
    if ot < tol and oh > tol:
        ot = TWO_PI
    return -tol <= oh <= ot <= length + tol and not (oh < tol and ot > length - tol)


@dataclass(frozen=True)
class TransversePath:
    """Leaves met in order, each contained in the left side of the next."""

    leaves: tuple[Leaf, ...]

    def __post_init__(self):
        leaves = tuple(self.leaves)
        object.__setattr__(self, "leaves", leaves)
        if not leaves:
            raise LeafError("empty transverse path")
        for i in range(len(leaves) - 1):
            if not left_contains(leaves[i], leaves[i + 1]):
                raise LeafError(f"nesting fails between leaves {i} and {i + 1}")

    def __len__(self):
        return len(self.leaves)

    def __getitem__(self, i):
        return self.leaves[i]

    def transform(self, md: np.ndarray) -> "TransversePath":
        return TransversePath(tuple(p.transform(md) for p in self.leaves))


@dataclass(frozen=True)
class AdmissiblePath:
    """A transverse path together with its (trusted) admissibility order."""

    path: TransversePath
    order: int

    def __post_init__(self):
        if not isinstance(self.order, int) or self.order < 1:
            raise LeafError(f"admissibility order must be a positive integer, got {self.order}")


def path_equivalent(P1: TransversePath, P2: TransversePath, tol: float = LEAF_TOL) -> bool:
    """Do the two paths meet the same set of leaves?"""
    def covered(A, B):
        return all(any(same_leaf(a, b, tol) for b in B.leaves) for a in A.leaves)
    return covered(P1, P2) and covered(P2, P1)


def compare_above(p1: Leaf, p2: Leaf, p3: Leaf, tol: float = LEAF_TOL) -> int:
    """+1 if ``p1`` is above ``p2`` relative to ``p3``, -1 if below, 0 if the
    two separate one another from ``p3`` (neither relation holds).

    Raises
    ------
    LeafError
        If a leaf crosses or equals ``p3``, if ``p1`` and ``p2`` cross or are
        equal, or if they lie on different sides of ``p3``.
    """
    s1, s2 = side_of(p3, p1, tol), side_of(p3, p2, tol)
    if s1 is None or s2 is None:
        raise LeafError("leaf crosses or coincides with the reference leaf")
    if s1 != s2:
        raise LeafError("leaves lie on different sides of the reference leaf")
    if not chords_disjoint(p1, p2, tol):
        raise LeafError("compared leaves cross or coincide")
    # distance from the head of p3 along the arc of the relevant side
    if s1 == "L":
        base = p3.attracting

        def dist(x):
            return _offset(x, base, tol)
    else:
        base = p3.attracting

        def dist(x):
            return _offset(base, x, tol)
    i1 = sorted(dist(x) for x in (p1.repelling, p1.attracting))
    i2 = sorted(dist(x) for x in (p2.repelling, p2.attracting))
    if i1[1] <= i2[0] + tol:
        return 1
    if i2[1] <= i1[0] + tol:
        return -1
    return 0


def is_above(p1: Leaf, p2: Leaf, p3: Leaf, tol: float = LEAF_TOL) -> bool:
    return compare_above(p1, p2, p3, tol) == 1


def _relation(p1: Leaf, p2: Leaf, p3: Leaf, tol: float) -> int:
    try:
        return compare_above(p1, p2, p3, tol)
    except LeafError:
        return 0


def f_transverse_intersection(P1: TransversePath, t1: int, P2: TransversePath, t2: int,
                              tol: float = LEAF_TOL) -> bool:
    """Exhaustive scan for a crossing of the two paths at a shared leaf.

    True when some earlier pair of leaves is ordered one way relative to the
    pivot and some later pair the other way. Both crossing directions count,
    which makes the predicate symmetric in its two paths.
    """
    if not (0 <= t1 < len(P1) and 0 <= t2 < len(P2)):
        raise LeafError("pivot index out of range")
    pivot = P2[t2]
    if not same_leaf(P1[t1], pivot, tol):
        raise LeafError("paths do not share the leaf at the pivots")
    before = {_relation(P1[a1], P2[a2], pivot, tol) for a1 in range(t1) for a2 in range(t2)}
    after = {_relation(P1[b1], P2[b2], pivot, tol)
             for b1 in range(t1 + 1, len(P1)) for b2 in range(t2 + 1, len(P2))}
    return (1 in before and -1 in after) or (-1 in before and 1 in after)


def _deck_matrix(T: Isometry | GroupWord | np.ndarray) -> np.ndarray:
    if isinstance(T, GroupWord):
        T = evaluate(T)
    if isinstance(T, Isometry):
        return T.disk()
    md = np.asarray(T)
    if md.shape != (2, 2):
        raise LeafError("deck transformation must be a 2x2 matrix")
    return md


def self_transverse_with_deck(P: TransversePath, T, tol: float = LEAF_TOL) -> tuple[int, int] | None:
    """First ``(t, s)`` with ``P[t] = T P[s]`` where ``P`` and ``T P`` cross.

    ``T`` may be a group word, an :class:`Isometry` or a disk matrix. Pairs
    are scanned by increasing ``t``, then ``s``.
    """
    TP = P.transform(_deck_matrix(T))
    for t in range(len(P)):
        for s in range(len(TP)):
            if same_leaf(P[t], TP[s], tol) and f_transverse_intersection(P, t, TP, s, tol):
                return t, s
    return None


def force_concatenate(A1: AdmissiblePath, t: int, A2: AdmissiblePath, s: int,
                      tol: float = LEAF_TOL) -> AdmissiblePath:
    """``A1`` up to leaf ``t`` followed by ``A2`` after leaf ``s``; orders add."""
    if not f_transverse_intersection(A1.path, t, A2.path, s, tol):
        raise LeafError("no transverse intersection at the given pivots")
    leaves = A1.path.leaves[:t + 1] + A2.path.leaves[s + 1:]
    try:
        path = TransversePath(leaves)
    except LeafError as exc:
        raise LeafError(f"concatenated path is not transverse: {exc}") from exc
    return AdmissiblePath(path, A1.order + A2.order)


def _check_witness(P: TransversePath, T: GroupWord, witness, tol: float) -> None:
    t, s = witness
    if not s < t:
        raise LeafError(f"witness must satisfy s < t, got {witness}")
    TP = P.transform(_deck_matrix(T))
    if not (0 <= t < len(P) and 0 <= s < len(TP)):
        raise LeafError("witness index out of range")
    if not same_leaf(P[t], TP[s], tol):
        raise LeafError("witness leaves differ: P[t] != T P[s]")
    if not f_transverse_intersection(P, t, TP, s, tol):
        raise LeafError("witness is not a transverse intersection")


def extract_horseshoe(A: AdmissiblePath, T: GroupWord, k: int, witness: tuple[int, int],
                      id: str = "h", tol: float = LEAF_TOL) -> Horseshoe:
    """Horseshoe of period ``k r`` with decks ``T, T^2, ..., T^k``."""
    if k < 1:
        raise LeafError("k must be at least 1")
    _check_witness(A.path, T, witness, tol)
    decks = tuple(power(T, j) for j in range(1, k + 1))
    return Horseshoe(id, k * A.order, decks,
                     provenance=f"leaf_space: order {A.order}, witness {tuple(witness)}, k={k}")


def extract_connection(A1: AdmissiblePath, A2: AdmissiblePath, T1: GroupWord, T2: GroupWord,
                       k1: int, k2: int, witness1: tuple[int, int], witness2: tuple[int, int],
                       source: str, target: str, tol: float = LEAF_TOL) -> Edge:
    """Edge between the horseshoes of the two halves of a split path.

    ``A1`` and ``A2`` are the halves over ``[a, b]`` and ``[b, c]``; they
    share the leaf at ``b``. The edge label is ``n = k1 r1 + r1 + r2`` and
    the deck word is normalized to the identity by choosing translates.
    """
    if k1 < 2 or k2 < 2:
        raise LeafError("connection needs k1, k2 >= 2")
    if not same_leaf(A1.path[len(A1.path) - 1], A2.path[0], tol):
        raise LeafError("the two halves do not meet at the split leaf")
    _check_witness(A1.path, T1, witness1, tol)
    _check_witness(A2.path, T2, witness2, tol)
    n = k1 * A1.order + A1.order + A2.order
    return Edge(source, target, n, GroupWord((), T1.genus))


def read_chord_paths(lines: Iterable[str]) -> list[TransversePath]:
    """Parse ``tail head`` angle lines; blank lines separate paths."""
    paths, cur = [], []
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            if cur:
                paths.append(TransversePath(tuple(cur)))
                cur = []
            continue
        parts = line.split()
        if len(parts) != 2:
            raise LeafError(f"line {lineno}: expected two angles, got {line!r}")
        try:
            cur.append(leaf(float(parts[0]), float(parts[1])))
        except (ValueError, GeometryError) as exc:
            raise LeafError(f"line {lineno}: {exc}") from exc
    if cur:
        paths.append(TransversePath(tuple(cur)))
    return paths


def _cap_leaf(center: float, half: float, side: str) -> Leaf:
    """Leaf whose ``side`` region is the cap over the arc ``center +- half``."""
    if side == "L":
        return leaf(center + half, center - half)
    return leaf(center - half, center + half)


def crossing_configuration(n: int = 5, crossing: bool = True
                           ) -> tuple[TransversePath, int, TransversePath, int]:
    """Two ``n``-leaf paths sharing their middle leaf.

    The shared leaf is the vertical diameter, travelled upwards. The first
    path arrives from the upper left; the second from the lower left. With
    ``crossing`` the first leaves towards the lower right and the second
    towards the upper right, so the paths cross; otherwise they stay on
    their own side and only touch.
    """
    if n < 5 or n % 2 == 0:
        raise LeafError("n must be odd and at least 5")
    m = n // 2
    pivot = leaf(-math.pi / 2, math.pi / 2)

    def _half(f):
        # grows faster than the centres move, and keeps the two paths' caps apart
        return (math.pi / 2) * f - 0.1 * (1 - f)

    def build(c_in, c_out):
        leaves = []
        for k in range(1, m + 1):
            f = k / (m + 1)
            leaves.append(_cap_leaf(math.pi + (c_in - math.pi) * (1 - f), _half(f), "L"))
        leaves.append(pivot)
        for k in range(1, m + 1):
            f = 1 - k / (m + 1)
            leaves.append(_cap_leaf(c_out * (1 - f), _half(f), "R"))
        return TransversePath(tuple(leaves))

    up, down = math.pi / 4, -math.pi / 4
    if crossing:
        P1, P2 = build(math.pi - up, down), build(math.pi + up, up)
    else:
        P1, P2 = build(math.pi - up, up), build(math.pi + up, down)
    return P1, m, P2, m


def translation_matrix(t: float) -> np.ndarray:
    """Disk translation along the real diameter, repelling at -1, attracting at 1."""
    if not 0 < t < 1:
        raise LeafError("translation parameter must lie in (0, 1)")
    return np.array([[1.0, t], [t, 1.0]], dtype=complex) / math.sqrt(1 - t * t)


def _three_point_map(z, w) -> np.ndarray:
    """Möbius matrix sending the points ``z[0..2]`` to ``w[0..2]``."""
    def to_standard(a, b, c):
        # a -> 0, b -> infinity, c -> 1
        return np.array([[c - b, -a * (c - b)], [c - a, -b * (c - a)]], dtype=complex)

    m = np.linalg.inv(to_standard(*w)) @ to_standard(*z)
    return m / np.sqrt(np.linalg.det(m))


def deck_crossing_configuration(alpha: float = 0.3, t: float = 0.5, deck=None
                                ) -> tuple[TransversePath, np.ndarray]:
    """A five-leaf path ``P`` and a translation ``T`` with ``P`` crossing ``T P``.

    ``P[1]`` bounds a cap ``C`` around the repelling point of ``T`` and
    ``P[3] = T P[1]``. The first leaf cuts a small cap at the top of ``C``
    whose image sits above ``P[2]``; the last leaf cuts a cap just above
    ``T C`` that lands above the image of ``P[2]``. The first crossing is at
    ``(t, s) = (3, 1)``.

    With ``deck`` (a hyperbolic group word or isometry) the picture is
    moved onto its axis and ``t`` is set from its translation length, so the
    returned matrix is the disk matrix of ``deck``.
    """
    if deck is not None:
        M = evaluate(deck) if isinstance(deck, GroupWord) else deck
        ax = axis(M)
        t = math.tanh(translation_length(M) / 2)
        P0, _ = deck_crossing_configuration(alpha, t)
        r, a = ax.repelling, ax.attracting
        b = a + norm_angle(r - a) / 2
        g = _three_point_map([-1, 1, 1j], [np.exp(1j * r), np.exp(1j * a), np.exp(1j * b)])
        return P0.transform(g), M.disk()
    T = translation_matrix(t)

    def img(theta):
        return float(apply_to_angles(T, np.array([theta]))[0])

    top, bottom = math.pi - alpha, math.pi + alpha
    top2, bottom2 = img(top), img(bottom)
    d1, d2 = alpha * 0.05, alpha * 0.15
    x = _cap_leaf(top + (d1 + d2) / 2, (d2 - d1) / 2, "L")
    chi = _cap_leaf(math.pi, alpha, "L")
    u = (img(top + d2) + top) / 2
    v = (bottom + bottom2) / 2
    y = _cap_leaf((u + v) / 2, (v - u) / 2, "L")
    psi = chi.transform(T)
    lo, hi = img(u), top2
    kappa = (hi - lo) * 0.1
    z = _cap_leaf((lo + hi) / 2, (hi - lo) / 2 - kappa, "R")
    return TransversePath((x, chi, y, psi, z)), T
