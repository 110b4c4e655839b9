"""Markovian intersections of piecewise-linear rectangles, in exact arithmetic.

A rectangle is a simple polygon with rational vertices and four marked
boundary arcs, in cyclic order: bottom (``R-``), a vertical side, top
(``R+``), the other vertical side. Arcs are given by four corner indices
``c0..c3``: bottom runs from vertex ``c0`` to ``c1``, then a vertical side to
``c2``, the top to ``c3`` and the second vertical side back to ``c0``.

Only the normal form is decided: ``R2`` must be the unit square (the
:func:`normalize` helper maps any axis-aligned ``R2`` onto it). All
predicates use ``Fraction`` and carry no tolerance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

__all__ = [
    "PLRectangle",
    "PLMap",
    "MarkovError",
    "unit_square",
    "axis_rectangle",
    "normalize",
    "is_pre_markovian",
    "is_markovian",
    "perturbation_margin",
    "chain_point",
    "image_rectangle",
    "point_in_polygon",
    "strictly_inside",
]

Point = tuple  # (Fraction, Fraction)


class MarkovError(ValueError):
    pass


def _pt(p) -> Point:
    return (Fraction(p[0]), Fraction(p[1]))


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _on_segment(p, a, b) -> bool:
    return (_cross(a, b, p) == 0 and min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segments_intersect(a, b, c, d) -> bool:
    """Closed segments ``ab`` and ``cd`` share a point."""
    d1, d2 = _cross(c, d, a), _cross(c, d, b)
    d3, d4 = _cross(a, b, c), _cross(a, b, d)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and ((d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)):
        return True
    return (_on_segment(a, c, d) or _on_segment(b, c, d)
            or _on_segment(c, a, b) or _on_segment(d, a, b))


def _is_simple(vs: Sequence[Point]) -> bool:
    n = len(vs)
    if n < 3 or len(set(vs)) != n:
        return False
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or j == (i + 1) % n:
                continue
            if segments_intersect(a, b, vs[j], vs[(j + 1) % n]):
                return False
    # adjacent edges must not fold back onto each other
    for i in range(n):
        a, b, c = vs[i - 1], vs[i], vs[(i + 1) % n]
        if _cross(a, b, c) == 0 and (b[0] - a[0]) * (c[0] - b[0]) + (b[1] - a[1]) * (c[1] - b[1]) < 0:
            return False
    return True


def point_in_polygon(p, vs: Sequence[Point]) -> int:
    """+1 strictly inside, 0 on the boundary, -1 outside (exact crossing number)."""
    p = _pt(p)
    n = len(vs)
    inside = False
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        if _on_segment(p, a, b):
            return 0
        if (a[1] > p[1]) != (b[1] > p[1]):
            x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
            if x > p[0]:
                inside = not inside
    return 1 if inside else -1


@dataclass(frozen=True)
class PLRectangle:
    """Polygonal rectangle with marked sides.

    Parameters
    ----------
    vertices : sequence of points
        Exact rational coordinates, simple polygon, either orientation.
    corners : (c0, c1, c2, c3)
        Vertex indices where the marked arcs change, in boundary order:
        bottom ``c0->c1``, vertical ``c1->c2``, top ``c2->c3``, vertical
        ``c3->c0``.
    """

    vertices: tuple
    corners: tuple

    def __post_init__(self):
        vs = tuple(_pt(p) for p in self.vertices)
        object.__setattr__(self, "vertices", vs)
        cs = tuple(int(c) for c in self.corners)
        object.__setattr__(self, "corners", cs)
        n = len(vs)
        if len(cs) != 4:
            raise MarkovError("a rectangle needs exactly four corners")
        if any(not 0 <= c < n for c in cs):
            raise MarkovError("corner index out of range")
        # the four arcs must follow each other around the boundary
        steps = [(cs[(k + 1) % 4] - cs[k]) % n for k in range(4)]
        if any(s == 0 for s in steps) or sum(steps) != n:
            raise MarkovError("corners must be distinct and in boundary order")
        if not _is_simple(vs):
            raise MarkovError("polygon is not simple")

    @property
    def n(self) -> int:
        return len(self.vertices)

    def arc(self, k: int) -> list[Point]:
        """Vertices of marked arc ``k`` (0 bottom, 1 vertical, 2 top, 3 vertical)."""
        a, b = self.corners[k], self.corners[(k + 1) % 4]
        out, i = [self.vertices[a]], a
        while i != b:
            i = (i + 1) % self.n
            out.append(self.vertices[i])
        return out

    @property
    def bottom(self) -> list[Point]:
        return self.arc(0)

    @property
    def top(self) -> list[Point]:
        return self.arc(2)

    def side_of_edge(self, e: int) -> int:
        """Marked arc containing edge ``e`` (from vertex ``e`` to ``e+1``)."""
        for k in range(4):
            a, b = self.corners[k], self.corners[(k + 1) % 4]
            if (e - a) % self.n < (b - a) % self.n:
                return k
        raise AssertionError("edge not covered by the marked arcs")

    def bbox(self):
        xs = [p[0] for p in self.vertices]
        ys = [p[1] for p in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)

    def map(self, fn) -> "PLRectangle":
        """Apply a vertex map that is affine on the whole rectangle."""
        return PLRectangle(tuple(fn(p) for p in self.vertices), self.corners)

    def as_dict(self) -> dict:
        return {"vertices": [[str(p[0]), str(p[1])] for p in self.vertices],
                "corners": list(self.corners)}

    @classmethod
    def from_dict(cls, d: dict) -> "PLRectangle":
        vs = [(Fraction(str(x)), Fraction(str(y))) for x, y in d["vertices"]]
        if "corners" in d:
            cs = d["corners"]
        else:
            sides = d["sides"]
            order = [sides[k] for k in ("bottom", "right", "top", "left")] \
                if isinstance(sides, dict) else sides
            cs = [s[0] for s in order]
            for k in range(4):
                if order[k][1] != order[(k + 1) % 4][0]:
                    raise MarkovError("side index ranges do not chain")
        return cls(tuple(vs), tuple(cs))


def axis_rectangle(x0, y0, x1, y1) -> PLRectangle:
    """``[x0,x1] x [y0,y1]`` with bottom/top marked horizontal."""
    x0, y0, x1, y1 = map(Fraction, (x0, y0, x1, y1))
    if not (x0 < x1 and y0 < y1):
        raise MarkovError("degenerate rectangle")
    return PLRectangle(((x0, y0), (x1, y0), (x1, y1), (x0, y1)), (0, 1, 2, 3))


def unit_square() -> PLRectangle:
    return axis_rectangle(0, 0, 1, 1)


def _is_unit_square(R: PLRectangle) -> bool:
    return (set(R.vertices) == {(0, 0), (1, 0), (1, 1), (0, 1)} and R.n == 4
            and {tuple(sorted(R.bottom)), tuple(sorted(R.top))}
            == {((0, 0), (1, 0)), ((0, 1), (1, 1))})


def normalize(R1: PLRectangle, R2: PLRectangle) -> tuple[PLRectangle, PLRectangle]:
    """Affinely map an axis-aligned ``R2`` (horizontal sides marked as such)
    onto the unit square, carrying ``R1`` along."""
    x0, y0, x1, y1 = R2.bbox()
    if x0 == x1 or y0 == y1:
        raise MarkovError("R2 is degenerate")
    for p in R2.vertices:
        if p[0] not in (x0, x1) and p[1] not in (y0, y1):
            raise MarkovError("R2 is not an axis-aligned rectangle")
    for arc in (R2.bottom, R2.top):
        if len({p[1] for p in arc}) != 1 or arc[0][1] not in (y0, y1):
            raise MarkovError("R2's marked horizontal sides are not horizontal")

    def f(p):
        return ((p[0] - x0) / (x1 - x0), (p[1] - y0) / (y1 - y0))

    # collinear extra vertices on R2's sides are dropped with the plain square
    return R1.map(f), unit_square()


def _check_r2(R2: PLRectangle) -> None:
    if not _is_unit_square(R2):
        raise MarkovError("R2 must be the unit square with horizontal sides marked; use normalize()")


def _band_ok(vs: Sequence[Point], lo=Fraction(0), hi=Fraction(1)) -> bool:
    """Every point of the polygon with ``lo <= y <= hi`` has ``0 <= x <= 1``.

    The extreme x of the polygon within the band is attained at a vertex in
    the band or where an edge crosses ``y = lo`` or ``y = hi``.
    """
    n = len(vs)
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        if lo <= a[1] <= hi and not (0 <= a[0] <= 1):
            return False
        for c in (lo, hi):
            if (a[1] - c) * (b[1] - c) < 0:
                x = a[0] + (c - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
                if not 0 <= x <= 1:
                    return False
    return True


def _pairing(R1: PLRectangle) -> str | None:
    top_y = [p[1] for p in R1.top]
    bot_y = [p[1] for p in R1.bottom]
    if min(top_y) > 1 and max(bot_y) < 0:
        return "+/-"
    if min(bot_y) > 1 and max(top_y) < 0:
        return "-/+"
    return None


def is_pre_markovian(R1: PLRectangle, R2: PLRectangle) -> bool:
    """Normal-form pre-Markovian test with ``R2`` the unit square."""
    _check_r2(R2)
    return _pairing(R1) is not None and _band_ok(R1.vertices)


@dataclass
class _Crossing:
    x: Fraction
    line: int       # 0 for the low cut, 1 for the high cut
    edge: int       # boundary edge index of R1
    order: int      # position along the boundary walk


def _slab_components(R1: PLRectangle, lo: Fraction, hi: Fraction):
    """Components of ``R1 cap {lo <= y <= hi}`` as boundary cycles.

    Returns a list of cycles; each is a list of pieces, either
    ``("arc", start_crossing, end_crossing, vertices)`` or
    ``("cut", line, x_a, x_b)``. Cut lines must avoid all vertices.
    """
    vs = R1.vertices
    n = len(vs)
    crossings: list[_Crossing] = []
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        hits = []
        for line, c in ((0, lo), (1, hi)):
            if (a[1] - c) * (b[1] - c) < 0:
                t = (c - a[1]) / (b[1] - a[1])
                hits.append((t, line, a[0] + t * (b[0] - a[0])))
        for t, line, x in sorted(hits):
            crossings.append(_Crossing(x, line, i, len(crossings)))
    if not crossings:
        return None
    m = len(crossings)

    def inside(p):
        return lo < p[1] < hi

    # arcs of the boundary between consecutive crossings that run inside the slab
    arc_next = {}
    arcs = {}
    for k in range(m):
        c0, c1 = crossings[k], crossings[(k + 1) % m]
        # vertices strictly between the two crossings along the boundary
        pts = []
        i = c0.edge
        while i != c1.edge:
            i = (i + 1) % n
            pts.append(vs[i])
        if pts:
            is_in = inside(pts[len(pts) // 2])
        else:
            # both crossings on one edge: inside iff it runs from one line to the other
            is_in = c0.line != c1.line
        if is_in:
            arc_next[k] = (k + 1) % m
            arcs[k] = pts
    # cut segments pair consecutive crossings along each line
    cut_partner = {}
    for line in (0, 1):
        on = sorted((c for c in crossings if c.line == line), key=lambda c: c.x)
        for a, b in zip(on[0::2], on[1::2]):
            cut_partner[a.order] = b.order
            cut_partner[b.order] = a.order
    cycles = []
    seen = set()
    for start in sorted(arc_next):
        if start in seen:
            continue
        cyc = []
        k = start
        while True:
            seen.add(k)
            nxt = arc_next[k]
            cyc.append(("arc", crossings[k], crossings[nxt], arcs[k]))
            partner = cut_partner[nxt]
            cyc.append(("cut", crossings[nxt].line, crossings[nxt].x, crossings[partner].x))
            k = partner
            if k == start:
                break
            if k not in arc_next:
                raise MarkovError("inconsistent slab decomposition")
        cycles.append(cyc)
    return cycles


def _cut_margin(R1: PLRectangle) -> Fraction:
    ys = [p[1] for p in R1.vertices]
    gaps = [abs(y - c) for y in ys for c in (0, 1) if y != c]
    return min(gaps + [Fraction(1)]) / 2


def is_markovian(R1: PLRectangle, R2: PLRectangle) -> PLRectangle | None:
    """A horizontal subrectangle ``R1'`` with ``R1' cap R2`` pre-Markovian, or None.

    ``R1`` itself is returned when already pre-Markovian. Otherwise ``R1`` is
    cut just above ``y = 1`` and just below ``y = 0``; a piece of the slab is
    accepted when its boundary is one cut on each line joined by two arcs of
    the vertical sides (one per side), and its band part lies in the square.
    """
    _check_r2(R2)
    if is_pre_markovian(R1, R2):
        return R1
    d = _cut_margin(R1)
    lo, hi = -d, 1 + d
    cycles = _slab_components(R1, lo, hi)
    if not cycles:
        return None
    for cyc in cycles:
        cuts = [p for p in cyc if p[0] == "cut"]
        arcs = [p for p in cyc if p[0] == "arc"]
        if len(cuts) != 2 or {c[1] for c in cuts} != {0, 1}:
            continue
        # arcs must run along the vertical sides only, one on each
        sides = []
        ok = True
        for _, c0, c1, _pts in arcs:
            e = c0.edge
            touched = set()
            while True:
                touched.add(R1.side_of_edge(e))
                if e == c1.edge:
                    break
                e = (e + 1) % R1.n
            if not touched <= {1, 3} or len(touched) != 1:
                ok = False
                break
            sides.append(touched.pop())
        if not ok or sorted(sides) != [1, 3]:
            continue
        witness = _cycle_rectangle(cyc, lo, hi)
        if _band_ok(witness.vertices) and is_pre_markovian(witness, R2):
            return witness
    return None


def _cycle_rectangle(cyc, lo, hi) -> PLRectangle:
    """Polygon of a slab component with its cuts marked as horizontal sides."""
    pts: list[Point] = []
    corners = []
    for piece in cyc:
        if piece[0] == "arc":
            _, c0, c1, inner = piece
            y0 = lo if c0.line == 0 else hi
            start = (c0.x, y0)
            if not pts or pts[-1] != start:
                pts.append(start)
            pts.extend(inner)
            y1 = lo if c1.line == 0 else hi
            pts.append((c1.x, y1))
        else:
            _, line, xa, xb = piece
            y = lo if line == 0 else hi
            corners.append((len(pts) - 1, line))
            pts.append((xb, y))
    # the walk closes on the first point; drop the duplicate
    if pts[-1] == pts[0]:
        pts.pop()
    n = len(pts)
    # each cut goes from pts[c] to pts[c+1]
    (ca, la), (cb, lb) = corners
    ca %= n
    cb %= n
    bottom, top = (ca, cb) if la == 0 else (cb, ca)
    cs = (bottom, (bottom + 1) % n, top, (top + 1) % n)
    order = sorted(range(4), key=lambda k: (cs[k] - bottom) % n)
    cs = tuple(cs[k] for k in order)
    return PLRectangle(tuple(pts), cs)


# --------------------------------------------------------------------------
# perturbation margin


def _min_max_affine_on_segment(a: Point, b: Point, forms) -> Fraction:
    """Minimum over the segment ``ab`` of ``max_k (u_k x + v_k y + w_k)``."""
    def val(t):
        x = a[0] + t * (b[0] - a[0])
        y = a[1] + t * (b[1] - a[1])
        return max(u * x + v * y + w for u, v, w in forms)

    ts = {Fraction(0), Fraction(1)}
    vals = []
    for u, v, w in forms:
        c0 = u * a[0] + v * a[1] + w
        c1 = u * (b[0] - a[0]) + v * (b[1] - a[1])
        vals.append((c0, c1))
    for (p0, p1), (q0, q1) in ((vals[i], vals[j]) for i in range(len(vals)) for j in range(i + 1, len(vals))):
        if p1 != q1:
            t = (q0 - p0) / (p1 - q1)
            if 0 < t < 1:
                ts.add(t)
    return min(val(t) for t in ts)


def _dist_to_forbidden(vs: Sequence[Point]) -> Fraction:
    """L-infinity distance from the polygon region to the band outside the square."""
    # d(p, {x <= 0, 0 <= y <= 1}) = max(0, x, -y, y - 1), and symmetric on the right
    left = [(Fraction(0), Fraction(0), Fraction(0)), (Fraction(1), Fraction(0), Fraction(0)),
            (Fraction(0), Fraction(-1), Fraction(0)), (Fraction(0), Fraction(1), Fraction(-1))]
    right = [(Fraction(0), Fraction(0), Fraction(0)), (Fraction(-1), Fraction(0), Fraction(1)),
             (Fraction(0), Fraction(-1), Fraction(0)), (Fraction(0), Fraction(1), Fraction(-1))]
    n = len(vs)
    best = None
    for forms in (left, right):
        for i in range(n):
            d = _min_max_affine_on_segment(vs[i], vs[(i + 1) % n], forms)
            best = d if best is None else min(best, d)
    # a polygon swallowing part of the forbidden set has distance 0 there
    for probe in ((Fraction(-1, 10**9), Fraction(1, 2)), (1 + Fraction(1, 10**9), Fraction(1, 2))):
        if point_in_polygon(probe, vs) > 0:
            return Fraction(0)
    return best


def perturbation_margin(R1: PLRectangle, R2: PLRectangle) -> Fraction:
    """Sup-norm radius within which perturbing ``R1`` keeps the certificate.

    Minimum of: height of ``R1+`` above ``y = 1``, depth of ``R1-`` below
    ``y = 0``, and the L-infinity distance from the (witness) rectangle to
    the part of the band outside the square.
    """
    W = is_markovian(R1, R2)
    if W is None:
        raise MarkovError("intersection is not Markovian")
    pairing = _pairing(W)
    up, down = (W.top, W.bottom) if pairing == "+/-" else (W.bottom, W.top)
    m_up = min(p[1] for p in up) - 1
    m_down = -max(p[1] for p in down)
    return min(m_up, m_down, _dist_to_forbidden(W.vertices))


# --------------------------------------------------------------------------
# piecewise-linear maps and chains


def _affine_from_triangle(src, dst):
    """Exact affine map sending triangle ``src`` to ``dst``: (A, t) with x -> A x + t."""
    (x0, y0), (x1, y1), (x2, y2) = src
    det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)
    if det == 0:
        raise MarkovError("degenerate domain triangle")
    inv = ((y2 - y0) / det, -(x2 - x0) / det, -(y1 - y0) / det, (x1 - x0) / det)
    rows = []
    for c in (0, 1):
        d1 = dst[1][c] - dst[0][c]
        d2 = dst[2][c] - dst[0][c]
        a = d1 * inv[0] + d2 * inv[2]
        b = d1 * inv[1] + d2 * inv[3]
        rows.append((a, b, dst[0][c] - a * x0 - b * y0))
    return rows


def _tri_contains(tri, p) -> bool:
    a, b, c = tri
    s = [_cross(a, b, p), _cross(b, c, p), _cross(c, a, p)]
    return all(v >= 0 for v in s) or all(v <= 0 for v in s)


def _tri_interiors_overlap(t1, t2) -> bool:
    """Separating-axis test; touching along edges or at points is not overlap."""
    for tri in (t1, t2):
        for k in range(3):
            a, b = tri[k], tri[(k + 1) % 3]
            nx_, ny_ = b[1] - a[1], a[0] - b[0]
            p1 = [nx_ * p[0] + ny_ * p[1] for p in t1]
            p2 = [nx_ * p[0] + ny_ * p[1] for p in t2]
            if max(p1) <= min(p2) or max(p2) <= min(p1):
                return False
    return True


@dataclass
class PLMap:
    """Affine on each triangle of a triangulated domain."""

    triangles: list = field(default_factory=list)  # [(domain tri, image tri)]

    def __post_init__(self):
        tris = []
        for src, dst in self.triangles:
            src = tuple(_pt(p) for p in src)
            dst = tuple(_pt(p) for p in dst)
            if len(src) != 3 or len(dst) != 3:
                raise MarkovError("triangles need three vertices")
            tris.append((src, dst))
        self.triangles = tris
        self._affine = [_affine_from_triangle(s, d) for s, d in tris]
        # continuity: a shared domain vertex has one image
        images = {}
        for src, dst in tris:
            for p, q in zip(src, dst):
                if images.setdefault(p, q) != q:
                    raise MarkovError(f"map is discontinuous at vertex {p}")
        for k, (src, _) in enumerate(tris):
            for p in images:
                if p not in src and _tri_contains(src, p) and self._apply(k, p) != images[p]:
                    raise MarkovError(f"map is discontinuous at vertex {p}")

    def _apply(self, k, p):
        (a, b, c), (d, e, f) = self._affine[k]
        return (a * p[0] + b * p[1] + c, d * p[0] + e * p[1] + f)

    def piece(self, p) -> int | None:
        p = _pt(p)
        for k, (src, _) in enumerate(self.triangles):
            if _tri_contains(src, p):
                return k
        return None

    def __call__(self, p) -> Point:
        k = self.piece(p)
        if k is None:
            raise MarkovError(f"point {p} outside the map's domain")
        return self._apply(k, _pt(p))

    def is_injective(self) -> bool:
        imgs = [d for _, d in self.triangles]
        for d in imgs:
            if _cross(*d) == 0:
                return False
        for i in range(len(imgs)):
            for j in range(i + 1, len(imgs)):
                if _tri_interiors_overlap(imgs[i], imgs[j]):
                    return False
        return True

    def as_dict(self) -> dict:
        return {"triangles": [{"domain": [[str(x), str(y)] for x, y in s],
                               "image": [[str(x), str(y)] for x, y in d]} for s, d in self.triangles]}

    @classmethod
    def from_dict(cls, d: dict) -> "PLMap":
        tris = []
        for t in d["triangles"]:
            tris.append(([(Fraction(str(x)), Fraction(str(y))) for x, y in t["domain"]],
                         [(Fraction(str(x)), Fraction(str(y))) for x, y in t["image"]]))
        return cls(tris)

    @classmethod
    def affine_on_rectangle(cls, rect: PLRectangle, fn) -> "PLMap":
        """Affine map given by a function, triangulated over a convex ``rect``."""
        vs = rect.vertices
        tris = [((vs[0], vs[k], vs[k + 1]), (fn(vs[0]), fn(vs[k]), fn(vs[k + 1])))
                for k in range(1, len(vs) - 1)]
        return cls(tris)

    def union(self, other: "PLMap") -> "PLMap":
        return PLMap(self.triangles + other.triangles)


def image_rectangle(R: PLRectangle, f: PLMap) -> PLRectangle:
    """Image of a rectangle, subdividing its edges where ``f`` changes piece."""
    vs = R.vertices
    n = len(vs)
    pts, index_of = [], {}
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        index_of[i] = len(pts)
        ts = {Fraction(0)}
        for src, _ in f.triangles:
            for k in range(3):
                c, d = src[k], src[(k + 1) % 3]
                den = _cross((0, 0), (b[0] - a[0], b[1] - a[1]), (d[0] - c[0], d[1] - c[1]))
                if den == 0:
                    continue
                t = _cross((0, 0), (c[0] - a[0], c[1] - a[1]), (d[0] - c[0], d[1] - c[1])) / den
                s = _cross((0, 0), (c[0] - a[0], c[1] - a[1]), (b[0] - a[0], b[1] - a[1])) / den
                if 0 < t < 1 and 0 <= s <= 1:
                    ts.add(t)
        for t in sorted(ts):
            pts.append(f((a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))))
    corners = tuple(index_of[c] for c in R.corners)
    return PLRectangle(tuple(pts), corners)


def strictly_inside(p, R: PLRectangle) -> bool:
    return point_in_polygon(p, R.vertices) > 0


def _clip_polygon_box(vs, box):
    """Sutherland-Hodgman clip of a polygon by an axis-aligned box."""
    x0, y0, x1, y1 = box
    out = list(vs)
    for axis_, bound, keep_ge in ((0, x0, True), (0, x1, False), (1, y0, True), (1, y1, False)):
        if not out:
            break
        src, out = out, []
        for i in range(len(src)):
            p, q = src[i], src[(i + 1) % len(src)]
            pin = p[axis_] >= bound if keep_ge else p[axis_] <= bound
            qin = q[axis_] >= bound if keep_ge else q[axis_] <= bound
            if pin:
                out.append(p)
            if pin != qin:
                t = (bound - p[axis_]) / (q[axis_] - p[axis_])
                out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def _bbox(pts):
    if not pts:
        return None
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    return (min(xs), min(ys), max(xs), max(ys))


def _box_image(box, f: PLMap):
    """Bounding box of ``f(box cap dom f)``, exact."""
    pieces = []
    for k, (src, _) in enumerate(f.triangles):
        clip = _clip_polygon_box(list(src), box)
        if clip:
            pieces.extend(f._apply(k, p) for p in clip)
    return _bbox(pieces)


def _box_meets(box, R: PLRectangle):
    """Bounding box of ``box cap R`` or None."""
    return _bbox(_clip_polygon_box(list(R.vertices), box))


def _boxes_meet(b1, b2) -> bool:
    return b1[0] <= b2[2] and b2[0] <= b1[2] and b1[1] <= b2[3] and b2[1] <= b1[3]


def chain_point(rects: Sequence[PLRectangle], maps: Sequence[PLMap], tol=Fraction(1, 10**9),
                max_depth: int = 80, check_markov: bool = True) -> Point:
    """Point of ``int(R_0)`` whose orbit under ``f_1, f_2, ...`` visits ``int(R_i)``.

    Boxes covering ``R_0`` are subdivided depth first, lower-left child
    first. A box survives while the exact bounding boxes of its successive
    images meet every ``R_i`` (and, for a closed chain, the box itself).
    A box centre is returned once it satisfies all containments exactly and,
    for a closed chain ``R_0 == R_n``, ``|f_n...f_1(x) - x|_inf <= tol``.
    """
    n = len(maps)
    if len(rects) != n + 1 or n < 1:
        raise MarkovError("need rectangles R_0..R_n and maps f_1..f_n")
    tol = Fraction(tol)
    periodic = rects[0] == rects[-1]
    if check_markov:
        for i in range(1, n + 1):
            img = image_rectangle(rects[i - 1], maps[i - 1])
            a, b = normalize(img, rects[i]) if not _is_unit_square(rects[i]) else (img, rects[i])
            if is_markovian(a, b) is None:
                raise MarkovError(f"f_{i}(R_{i - 1}) cap R_{i} is not Markovian")

    def orbit(x):
        pts = [x]
        for f in maps:
            if f.piece(pts[-1]) is None:
                return None
            pts.append(f(pts[-1]))
        return pts

    def good(x):
        pts = orbit(x)
        if pts is None:
            return False
        if not all(strictly_inside(p, R) for p, R in zip(pts, rects)):
            return False
        if periodic:
            return max(abs(pts[-1][0] - x[0]), abs(pts[-1][1] - x[1])) <= tol
        return True

    def alive(box):
        cur = _box_meets(box, rects[0])
        if cur is None:
            return False
        for i, f in enumerate(maps, 1):
            img = _box_image(cur, f)
            if img is None:
                return False
            cur = _box_meets(img, rects[i])
            if cur is None:
                return False
        return not periodic or _boxes_meet(cur, box)

    root = rects[0].bbox()
    stack = [(root, 0)]
    while stack:
        box, depth = stack.pop()
        if not alive(box):
            continue
        x0, y0, x1, y1 = box
        c = ((x0 + x1) / 2, (y0 + y1) / 2)
        if good(c):
            return c
        if depth >= max_depth:
            continue
        xm, ym = c
        kids = [(x0, y0, xm, ym), (x0, ym, xm, y1), (xm, y0, x1, ym), (xm, ym, x1, y1)]
        # push in reverse so the lower-left child is explored first
        stack.extend((k, depth + 1) for k in reversed(kids))
    raise MarkovError("branch-and-prune exhausted without a point (inconsistent chain)")


def load_rectangles(path) -> dict:
    with open(path) as fh:
        data = json.load(fh)
    return data
