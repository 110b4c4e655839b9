"""Fuchsian representation of the surface group and geodesic predicates.

Isometries are stored as ``SL(2, R)`` matrices acting on the upper half-plane
and converted to ``SU(1, 1)`` (unit disk) with the fixed Cayley transform
``z -> (z - i) / (z + i)``. Boundary points are angles on the unit circle.

The concrete representation is the side-pairing group of the regular
hyperbolic 4g-gon with interior angles ``2*pi/4g``, centred at the origin of
the disk. Side ``j`` runs from vertex ``j`` to vertex ``j + 1`` (counter-
clockwise); ``a_i`` carries side ``4i+2`` onto side ``4i`` and ``b_i`` carries
side ``4i+1`` onto side ``4i+3``, so that ``[a1,b1]...[ag,bg]`` evaluates to
``+-I``.

All predicates are floating point with explicit tolerances and report
degenerate configurations instead of guessing.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .surface_group import GroupWord, WordError, primitive_root

GEOM_TOL = 1e-9
NORM_TOL = 1e-12
DEFAULT_DEPTH = 6
TWO_PI = 2.0 * math.pi

CAYLEY = np.array([[1.0, -1.0j], [1.0, 1.0j]])
CAYLEY_INV = np.linalg.inv(CAYLEY)


class GeometryError(ValueError):
    pass


class IsometryType(str, enum.Enum):
    HYPERBOLIC = "hyperbolic"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"


class Simplicity(str, enum.Enum):
    SIMPLE = "simple"
    NON_SIMPLE = "non_simple"
    UNKNOWN = "unknown"


class CrossResult(str, enum.Enum):
    YES = "yes"
    NO_UP_TO_DEPTH = "no_up_to_depth"


# --------------------------------------------------------------------------
# isometries


def _normalize(m: np.ndarray) -> np.ndarray:
    det = np.linalg.det(m)
    if det <= 0:
        raise GeometryError(f"matrix with non-positive determinant {det}")
    return m / math.sqrt(det)


@dataclass(frozen=True, eq=False)
class Isometry:
    """Orientation-preserving isometry of H^2, an ``SL(2,R)`` matrix up to sign."""

    m: np.ndarray

    def __post_init__(self):
        m = _normalize(np.asarray(self.m, dtype=float).reshape(2, 2))
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return Isometry(self.m @ other.m)

    def inverse(self) -> "Isometry":
        a, b, c, d = self.m.ravel()
        return Isometry(np.array([[d, -b], [-c, a]]))

    @property
    def trace(self) -> float:
        return float(self.m[0, 0] + self.m[1, 1])

    def disk(self) -> np.ndarray:
        """The ``SU(1,1)`` matrix of the same map in the disk model."""
        return to_disk(self.m)

    def distance_to_identity(self) -> float:
        """Max-norm distance to the nearer of ``I`` and ``-I``."""
        eye = np.eye(2)
        return float(min(np.abs(self.m - eye).max(), np.abs(self.m + eye).max()))


def to_disk(m: np.ndarray) -> np.ndarray:
    return CAYLEY @ m @ CAYLEY_INV


def from_disk(md: np.ndarray) -> np.ndarray:
    h = CAYLEY_INV @ md @ CAYLEY
    h = h / np.sqrt(np.linalg.det(h))
    k = np.unravel_index(np.argmax(np.abs(h)), h.shape)
    phase = h[k] / abs(h[k])
    h = h / phase
    if np.abs(h.imag).max() > 1e-8 * max(1.0, np.abs(h).max()):
        raise GeometryError("disk matrix is not in SU(1,1)")
    return h.real


def classify(M: Isometry, tol: float = GEOM_TOL) -> IsometryType:
    t = abs(M.trace)
    if t > 2 + tol:
        return IsometryType.HYPERBOLIC
    if t < 2 - tol:
        return IsometryType.ELLIPTIC
    return IsometryType.PARABOLIC


def translation_length(M: Isometry) -> float:
    if classify(M) is not IsometryType.HYPERBOLIC:
        raise GeometryError(f"translation length of a non-hyperbolic isometry (trace {M.trace})")
    return 2.0 * math.acosh(abs(M.trace) / 2.0)


# --------------------------------------------------------------------------
# boundary points and geodesics


def norm_angle(theta: float) -> float:
    t = math.fmod(theta, TWO_PI)
    if t < 0:
        t += TWO_PI
    if t >= TWO_PI:
        t -= TWO_PI
    return t


def angle_gap(s: float, t: float) -> float:
    """Angular distance between two boundary points."""
    d = abs(norm_angle(s) - norm_angle(t))
    return min(d, TWO_PI - d)


def halfplane_to_angle(x: float) -> float:
    """Boundary point of the upper half-plane (``math.inf`` allowed) as an angle."""
    if math.isinf(x):
        return 0.0
    z = (x - 1j) / (x + 1j)
    return norm_angle(math.atan2(z.imag, z.real))


def angle_to_halfplane(theta: float) -> float:
    z = complex(math.cos(theta), math.sin(theta))
    if abs(z - 1) < 1e-15:
        return math.inf
    w = 1j * (1 + z) / (1 - z)
    return w.real


@dataclass(frozen=True)
class OrientedGeodesic:
    """Geodesic of H^2 given by its repelling and attracting boundary angles."""

    repelling: float
    attracting: float

    def __post_init__(self):
        r, a = norm_angle(self.repelling), norm_angle(self.attracting)
        if angle_gap(r, a) <= GEOM_TOL:
            raise GeometryError("geodesic endpoints coincide")
        object.__setattr__(self, "repelling", r)
        object.__setattr__(self, "attracting", a)

    @classmethod
    def from_halfplane(cls, repelling: float, attracting: float) -> "OrientedGeodesic":
        return cls(halfplane_to_angle(repelling), halfplane_to_angle(attracting))

    def reversed(self) -> "OrientedGeodesic":
        return OrientedGeodesic(self.attracting, self.repelling)

    def same_as(self, other: "OrientedGeodesic", tol: float = GEOM_TOL) -> bool:
        return (angle_gap(self.repelling, other.repelling) < tol
                and angle_gap(self.attracting, other.attracting) < tol)

    def unoriented_same_as(self, other: "OrientedGeodesic", tol: float = GEOM_TOL) -> bool:
        return self.same_as(other, tol) or self.same_as(other.reversed(), tol)

    def transform(self, md: np.ndarray) -> "OrientedGeodesic":
        """Image under a disk-model matrix."""
        r, a = apply_to_angles(md, np.array([self.repelling, self.attracting]))
        return OrientedGeodesic(float(r), float(a))


def apply_to_angles(md: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """Apply an ``SU(1,1)`` matrix (or a stack of them) to boundary angles."""
    z = np.exp(1j * np.asarray(thetas, dtype=float))
    md = np.asarray(md)
    if md.ndim == 2:
        w = (md[0, 0] * z + md[0, 1]) / (md[1, 0] * z + md[1, 1])
    else:
        w = (md[:, 0, 0, None] * z + md[:, 0, 1, None]) / (md[:, 1, 0, None] * z + md[:, 1, 1, None])
    return np.mod(np.angle(w), TWO_PI)


def axis(M: Isometry) -> OrientedGeodesic:
    """Fixed points of a hyperbolic isometry, attracting endpoint second."""
    if classify(M) is not IsometryType.HYPERBOLIC:
        raise GeometryError(f"axis of a non-hyperbolic isometry (trace {M.trace})")
    md = M.disk()
    if md[0, 0].real < 0:
        md = -md
    alpha, beta = md[0, 0], md[0, 1]
    s = math.sqrt(alpha.real ** 2 - 1.0)
    conj_b = np.conj(beta)
    z_attr = (1j * alpha.imag + s) / conj_b
    z_rep = (1j * alpha.imag - s) / conj_b
    return OrientedGeodesic(float(np.angle(z_rep)), float(np.angle(z_attr)))


def _in_open_arc(x: float, a: float, b: float) -> bool:
    """Is ``x`` strictly inside the counter-clockwise arc from ``a`` to ``b``?"""
    return 0.0 < norm_angle(x - a) < norm_angle(b - a)


@dataclass(frozen=True)
class Crossing:
    crosses: bool
    degenerate: bool


def crossing(g1: OrientedGeodesic, g2: OrientedGeodesic, tol: float = GEOM_TOL) -> Crossing:
    """Interleaving test with a degeneracy flag for near-shared endpoints."""
    gaps = [angle_gap(p, q) for p in (g1.repelling, g1.attracting)
            for q in (g2.repelling, g2.attracting)]
    if min(gaps) < tol:
        return Crossing(False, True)
    a, b = g1.repelling, g1.attracting
    inside = _in_open_arc(g2.repelling, a, b) != _in_open_arc(g2.attracting, a, b)
    return Crossing(inside, False)


def geodesics_cross(g1: OrientedGeodesic, g2: OrientedGeodesic, tol: float = GEOM_TOL) -> bool:
    """True iff the endpoint pairs strictly interleave on the circle."""
    return crossing(g1, g2, tol).crosses


def _crosses_vec(a: float, b: float, r: np.ndarray, t: np.ndarray, tol: float):
    """Vectorized interleaving of the fixed chord (a, b) against chords (r, t).

    Returns ``(crosses, degenerate)`` boolean arrays.
    """
    def gap(x, y):
        d = np.abs(np.mod(x - y, TWO_PI))
        return np.minimum(d, TWO_PI - d)

    deg = ((gap(r, a) < tol) | (gap(r, b) < tol) | (gap(t, a) < tol) | (gap(t, b) < tol))
    span = norm_angle(b - a)
    in_r = (np.mod(r - a, TWO_PI) > 0) & (np.mod(r - a, TWO_PI) < span)
    in_t = (np.mod(t - a, TWO_PI) > 0) & (np.mod(t - a, TWO_PI) < span)
    return (in_r != in_t) & ~deg, deg


# --------------------------------------------------------------------------
# the representation


def _to_origin(p: complex) -> np.ndarray:
    return np.array([[1.0, -p], [-np.conj(p), 1.0]], dtype=complex)


def _mobius(md: np.ndarray, z: complex) -> complex:
    return (md[0, 0] * z + md[0, 1]) / (md[1, 0] * z + md[1, 1])


def _segment_isometry(A: complex, B: complex, A2: complex, B2: complex) -> np.ndarray:
    """The orientation-preserving disk isometry with ``A -> A2`` and ``B -> B2``."""
    P, Q = _to_origin(A), _to_origin(A2)
    b, b2 = _mobius(P, B), _mobius(Q, B2)
    if abs(abs(b) - abs(b2)) > 1e-10:
        raise GeometryError("segments of different lengths")
    u = b2 / b
    s = np.sqrt(u / abs(u))
    rot = np.array([[s, 0], [0, 1 / s]], dtype=complex)
    m = np.linalg.inv(Q) @ rot @ P
    return m / np.sqrt(np.linalg.det(m))


def _klein(p: complex) -> complex:
    return 2 * p / (1 + abs(p) ** 2)


@dataclass(frozen=True, eq=False)
class FuchsianRep:
    """Side pairings of the regular 4g-gon, plus the polygon data for tracing."""

    genus: int
    generators: tuple  # Isometry per index 1..2g (position idx-1)
    vertices: tuple    # Poincare-disk vertices of the polygon
    klein_vertices: tuple
    side_letter: tuple  # letter whose generator maps P to the neighbour across side j

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __getitem__(self, i):
        return self.generators[i]

    def matrix(self, letter: int) -> np.ndarray:
        g = self.generators[abs(letter) - 1]
        return g.m if letter > 0 else g.inverse().m

    def disk_matrix(self, letter: int) -> np.ndarray:
        return _disk_generators(self)[letter]


@lru_cache(maxsize=None)
def fuchsian_representation(genus: int) -> FuchsianRep:
    """Side-pairing generators ``a1, b1, ..., ag, bg`` of the regular 4g-gon."""
    if genus < 2:
        raise GeometryError(f"genus must be at least 2, got {genus}")
    n = 4 * genus
    big_r = math.acosh(1.0 / math.tan(math.pi / n) ** 2)
    r = math.tanh(big_r / 2.0)
    verts = [r * complex(math.cos(2 * math.pi * k / n + math.pi / n),
                         math.sin(2 * math.pi * k / n + math.pi / n)) for k in range(n)]

    def side(k):
        return verts[k % n], verts[(k + 1) % n]

    gens = []
    side_letter = [0] * n
    for i in range(genus):
        a0, a1 = side(4 * i)
        c0, c1 = side(4 * i + 2)
        A = _segment_isometry(c0, c1, a1, a0)
        b0, b1 = side(4 * i + 1)
        d0, d1 = side(4 * i + 3)
        B = np.linalg.inv(_segment_isometry(d0, d1, b1, b0))
        gens += [Isometry(from_disk(A)), Isometry(from_disk(B))]
        ia, ib = 2 * i + 1, 2 * i + 2
        side_letter[4 * i] = ia
        side_letter[4 * i + 2] = -ia
        side_letter[4 * i + 3] = ib
        side_letter[4 * i + 1] = -ib
    return FuchsianRep(genus, tuple(gens), tuple(verts),
                       tuple(_klein(v) for v in verts), tuple(side_letter))


@lru_cache(maxsize=None)
def _disk_generators(rep: FuchsianRep) -> dict:
    out = {}
    for idx in range(1, 2 * rep.genus + 1):
        g = rep.generators[idx - 1]
        out[idx] = g.disk()
        out[-idx] = g.inverse().disk()
    return out


def _renorm(m: np.ndarray) -> np.ndarray:
    return m / math.sqrt(abs(np.linalg.det(m)))


def evaluate(w: GroupWord, rep: FuchsianRep | None = None) -> Isometry:
    """Matrix of ``w``: chunks of 8 factors, then a balanced product tree."""
    rep = rep or fuchsian_representation(w.genus)
    if rep.genus != w.genus:
        raise WordError(f"word genus {w.genus} does not match representation genus {rep.genus}")
    if not w.letters:
        return Isometry(np.eye(2))
    chunks = []
    letters = w.letters
    for start in range(0, len(letters), 8):
        m = np.eye(2)
        for x in letters[start:start + 8]:
            m = m @ rep.matrix(x)
        chunks.append(_renorm(m))
    while len(chunks) > 1:
        nxt = [_renorm(chunks[i] @ chunks[i + 1]) for i in range(0, len(chunks) - 1, 2)]
        if len(chunks) % 2:
            nxt.append(chunks[-1])
        chunks = nxt
    return Isometry(chunks[0])


def word_axis(w: GroupWord, rep: FuchsianRep | None = None) -> OrientedGeodesic:
    return axis(evaluate(w, rep))


# --------------------------------------------------------------------------
# conjugate enumeration

_LEVEL_CACHE_LIMIT = 400_000


@lru_cache(maxsize=8)
def _levels_cached(genus: int, depth: int):
    return list(_iter_levels(genus, depth))


def _iter_levels(genus: int, depth: int) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield ``(words, disk_matrices)`` per word length ``0..depth``.

    ``words`` is an int array of shape (N, length); matrices are (N, 2, 2).
    """
    rep = fuchsian_representation(genus)
    gens = _disk_generators(rep)
    alphabet = np.array([x for i in range(1, 2 * genus + 1) for x in (i, -i)])
    gen_stack = np.stack([gens[int(x)] for x in alphabet])
    lookup = {int(x): k for k, x in enumerate(alphabet)}
    words = np.zeros((1, 0), dtype=np.int16)
    mats = np.eye(2, dtype=complex)[None]
    yield words, mats
    for _ in range(depth):
        last = words[:, -1] if words.shape[1] else np.zeros(len(words), dtype=np.int16)
        # append each letter not cancelling the last one
        rep_idx = np.repeat(np.arange(len(words)), len(alphabet))
        letters = np.tile(alphabet, len(words))
        keep = letters != -last[rep_idx]
        rep_idx, letters = rep_idx[keep], letters[keep]
        gidx = np.array([lookup[int(x)] for x in letters])
        new_mats = np.einsum("nij,njk->nik", mats[rep_idx], gen_stack[gidx])
        dets = np.sqrt(new_mats[:, 0, 0] * new_mats[:, 1, 1] - new_mats[:, 0, 1] * new_mats[:, 1, 0])
        new_mats = new_mats / dets[:, None, None]
        words = np.concatenate([words[rep_idx], letters[:, None].astype(np.int16)], axis=1)
        mats = new_mats
        yield words, mats


def conjugator_levels(genus: int, depth: int):
    """Reduced words of length ``<= depth`` with their disk matrices, by level."""
    count = sum(4 * genus * (4 * genus - 1) ** (k - 1) for k in range(1, depth + 1)) + 1
    if count <= _LEVEL_CACHE_LIMIT:
        return _levels_cached(genus, depth)
    return _iter_levels(genus, depth)


def _words_from_array(row: np.ndarray, genus: int) -> GroupWord:
    return GroupWord(tuple(int(x) for x in row), genus)


def find_crossing_translate(g1: OrientedGeodesic, g2: OrientedGeodesic, genus: int,
                            depth: int, tol: float = GEOM_TOL) -> GroupWord | None:
    """Shortest ``c`` (shortlex by enumeration) with ``c . g2`` crossing ``g1``."""
    if depth < 0:
        return None
    thetas = np.array([g2.repelling, g2.attracting])
    for words, mats in conjugator_levels(genus, depth):
        img = apply_to_angles(mats, thetas)
        hit, _ = _crosses_vec(g1.repelling, g1.attracting, img[:, 0], img[:, 1], tol)
        if hit.any():
            return _words_from_array(words[int(np.argmax(hit))], genus)
    return None


def translates_cross(w1: GroupWord, w2: GroupWord, depth: int = DEFAULT_DEPTH,
                     rep: FuchsianRep | None = None, tol: float = GEOM_TOL) -> CrossResult:
    """Does ``axis(w1)`` cross ``c . axis(w2)`` for some reduced ``|c| <= depth``?

    Conjugates whose axis coincides with ``axis(w1)`` (powers and roots of
    the same element) never count as crossings.
    """
    rep = rep or fuchsian_representation(w1.genus)
    M1, M2 = evaluate(w1, rep), evaluate(w2, rep)
    for M in (M1, M2):
        if classify(M) is not IsometryType.HYPERBOLIC:
            raise GeometryError("translates_cross needs hyperbolic words")
    hit = find_crossing_translate(axis(M1), axis(M2), w1.genus, depth, tol)
    return CrossResult.YES if hit is not None else CrossResult.NO_UP_TO_DEPTH


# --------------------------------------------------------------------------
# simplicity via conjugates and via the fundamental polygon


@dataclass(frozen=True)
class PolygonTrace:
    """Cut of a closed geodesic by the fundamental polygon.

    ``pieces`` holds one (entry, exit) boundary position per crossing of
    the polygon; positions are ``side + fraction`` on the perimeter.
    ``letters`` is the cutting sequence.
    """

    pieces: tuple
    letters: tuple
    degenerate: bool
    closed: bool


def _klein_point(theta: float) -> complex:
    return complex(math.cos(theta), math.sin(theta))


def _clip_chord(rep: FuchsianRep, g: OrientedGeodesic):
    """Clip the Klein chord of ``g`` to the polygon.

    Returns ``(t_in, side_in, frac_in, t_out, side_out, frac_out)`` or None.
    """
    p0, p1 = _klein_point(g.repelling), _klein_point(g.attracting)
    d = p1 - p0
    kv = rep.klein_vertices
    n = len(kv)
    t_in, t_out = 0.0, 1.0
    s_in = s_out = None
    for j in range(n):
        v0, v1 = kv[j], kv[(j + 1) % n]
        e = v1 - v0
        # inward normal for a counter-clockwise polygon
        nrm = complex(-e.imag, e.real)
        num = (nrm.conjugate() * (p0 - v0)).real
        den = (nrm.conjugate() * d).real
        if abs(den) < 1e-15:
            if num < 0:
                return None
            continue
        t = -num / den
        if den > 0:
            if t > t_in:
                t_in, s_in = t, j
        else:
            if t < t_out:
                t_out, s_out = t, j
    if s_in is None or s_out is None or t_in >= t_out:
        return None

    def frac(t, j):
        q = p0 + t * d
        v0, v1 = kv[j], kv[(j + 1) % n]
        return abs(q - v0) / abs(v1 - v0)

    return t_in, s_in, frac(t_in, s_in), t_out, s_out, frac(t_out, s_out)


def _pull_into_polygon(rep: FuchsianRep, g: OrientedGeodesic, max_steps: int = 200) -> OrientedGeodesic | None:
    """Translate ``g`` by group elements until it meets the polygon."""
    kv = rep.klein_vertices
    n = len(kv)
    gens = _disk_generators(rep)
    for _ in range(max_steps):
        if _clip_chord(rep, g) is not None:
            return g
        p0, p1 = _klein_point(g.repelling), _klein_point(g.attracting)
        d = p1 - p0
        t = -((p0.conjugate() * d).real) / abs(d) ** 2
        foot = p0 + t * d
        # side whose outer half-plane contains the foot point most deeply
        worst, side = 0.0, None
        for j in range(n):
            v0, v1 = kv[j], kv[(j + 1) % n]
            e = v1 - v0
            nrm = complex(-e.imag, e.real) / abs(e)
            s = (nrm.conjugate() * (foot - v0)).real
            if s < worst:
                worst, side = s, j
        if side is None:
            return None
        letter = rep.side_letter[side]
        g = g.transform(gens[-letter])
    return None


def trace_through_polygon(w: GroupWord, rep: FuchsianRep | None = None,
                          max_pieces: int | None = None, tol: float = 1e-7) -> PolygonTrace:
    """Cut the closed geodesic of ``w`` into chords of the fundamental polygon."""
    rep = rep or fuchsian_representation(w.genus)
    gens = _disk_generators(rep)
    g = _pull_into_polygon(rep, word_axis(w, rep))
    if g is None:
        return PolygonTrace((), (), True, False)
    start = g
    max_pieces = max_pieces or 8 * (len(w) + 2)
    pieces, letters = [], []
    degenerate = False
    for _ in range(max_pieces):
        clip = _clip_chord(rep, g)
        if clip is None:
            return PolygonTrace(tuple(pieces), tuple(letters), True, False)
        _, s_in, f_in, _, s_out, f_out = clip
        for f in (f_in, f_out):
            if f < 1e-9 or f > 1 - 1e-9:
                degenerate = True
        pieces.append((s_in + f_in, s_out + f_out))
        letter = rep.side_letter[s_out]
        letters.append(letter)
        g = g.transform(gens[-letter])
        if g.same_as(start, tol):
            return PolygonTrace(tuple(pieces), tuple(letters), degenerate, True)
    return PolygonTrace(tuple(pieces), tuple(letters), True, False)


def _pieces_cross(p, q, perimeter: float, tol: float = 1e-9):
    """Do two polygon chords cross? Returns ``(crosses, degenerate)``."""
    def inside(x, a, b):
        span = (b - a) % perimeter
        off = (x - a) % perimeter
        return 0 < off < span

    pts = [p[0], p[1], q[0], q[1]]
    for x in pts[:2]:
        for y in pts[2:]:
            d = abs(x - y) % perimeter
            if min(d, perimeter - d) < tol:
                return False, True
    return inside(q[0], *p) != inside(q[1], *p), False


def trace_self_crossing(trace: PolygonTrace, genus: int) -> tuple[bool, bool]:
    """``(crosses, degenerate)`` for the pieces of a polygon trace."""
    perimeter = 4.0 * genus
    deg = trace.degenerate
    pcs = trace.pieces
    for i in range(len(pcs)):
        for j in range(i + 1, len(pcs)):
            c, d = _pieces_cross(pcs[i], pcs[j], perimeter)
            deg = deg or d
            if c:
                return True, deg
    return False, deg


def is_simple_closed_geodesic(w: GroupWord, depth: int = DEFAULT_DEPTH,
                              rep: FuchsianRep | None = None,
                              tol: float = GEOM_TOL) -> Simplicity:
    """Decide whether the closed geodesic of ``w`` is simple.

    A crossing between the axis and a conjugate axis (conjugator length at
    most ``depth``) certifies ``non_simple``. Otherwise the geodesic is cut by
    the fundamental polygon; disjoint chords certify ``simple``. Degenerate
    traces give ``unknown``.
    """
    if w.is_identity:
        raise GeometryError("the identity has no axis")
    rep = rep or fuchsian_representation(w.genus)
    root, _ = primitive_root(w)
    M = evaluate(root, rep)
    if classify(M, tol) is not IsometryType.HYPERBOLIC:
        raise GeometryError(f"{w} is not hyperbolic (trace {M.trace})")
    ax = axis(M)
    if find_crossing_translate(ax, ax, w.genus, depth, tol) is not None:
        return Simplicity.NON_SIMPLE
    trace = trace_through_polygon(root, rep)
    if not trace.closed:
        return Simplicity.UNKNOWN
    crosses, degenerate = trace_self_crossing(trace, w.genus)
    if crosses:
        return Simplicity.NON_SIMPLE
    if degenerate:
        return Simplicity.UNKNOWN
    return Simplicity.SIMPLE


def random_disk_automorphism(rng: np.random.Generator) -> np.ndarray:
    """A random ``SU(1,1)`` matrix: rotation composed with a translation."""
    r = rng.uniform(0, 0.9)
    phi = rng.uniform(0, TWO_PI)
    p = r * complex(math.cos(phi), math.sin(phi))
    rot = rng.uniform(0, TWO_PI)
    s = complex(math.cos(rot / 2), math.sin(rot / 2))
    m = np.array([[s, 0], [0, s.conjugate()]]) @ _to_origin(p)
    return m / np.sqrt(np.linalg.det(m))


def random_hyperbolic(rng: np.random.Generator, scale: float = 2.0) -> Isometry:
    """Random ``SL(2,R)`` element with ``|trace| > 2``."""
    while True:
        m = rng.normal(scale=scale, size=(2, 2))
        if np.linalg.det(m) <= 0:
            m[0] = -m[0]
        M = Isometry(m)
        if abs(M.trace) > 2.05:
            return M


def boundary_points(gs: Sequence[OrientedGeodesic]) -> list[float]:
    return [x for g in gs for x in (g.repelling, g.attracting)]
