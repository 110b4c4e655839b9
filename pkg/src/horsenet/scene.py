"""Scene files: JSON description of a horseshoe graph and periodic orbits.

Schema::

    {
      "genus": 2,
      "horseshoes": [{"id": "H1", "period": 1, "decks": ["a1", "b1"]}],
      "edges": [{"from": "H1", "to": "H2", "n": 2, "word": "a1 B2", "id": "c0"}],
      "orbits": [{"word": "a1 b1", "period": 2, "id": "z0"}],
      "separations": [{"i": "H1", "j": "H2", "k": "H3", "answer": "yes"}],
      "options": {"depth": 6, "geom_tol": 1e-9}
    }

``edges``, ``orbits``, ``separations`` and ``options`` are optional; edge
and orbit ids default to ``e<k>`` and ``z<k>``. Separation rows name classes
by any member horseshoe and override the geometric oracle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .class_partition import OrbitProxy
from .horseshoe_graph import Condensation, Edge, GraphError, Horseshoe, HorseshoeGraph, Separation
from .hyperbolic import GeometryError
from .surface_group import WordError, parse_word

__all__ = ["Scene", "SceneError", "load_scene", "parse_scene"]


class SceneError(ValueError):
    """Validation failure; ``issues`` holds ``(location, message)`` pairs."""

    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("; ".join(f"{loc}: {msg}" for loc, msg in self.issues))


@dataclass
class Scene:
    genus: int
    graph: HorseshoeGraph
    orbits: list[OrbitProxy] = field(default_factory=list)
    separations: list[tuple[str, str, str, Separation]] = field(default_factory=list)
    options: dict = field(default_factory=dict)
    source: str | None = None

    def separation_table(self, cond: Condensation) -> dict[tuple[int, int, int], str]:
        return {(cond.class_of[i], cond.class_of[j], cond.class_of[k]): a.value
                for i, j, k, a in self.separations}


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def parse_scene(data, source: str | None = None) -> Scene:
    issues: list[tuple[str, str]] = []
    if not isinstance(data, dict):
        raise SceneError([("$", "scene must be a JSON object")])
    known = {"genus", "horseshoes", "edges", "orbits", "separations", "options", "description"}
    for key in sorted(set(data) - known):
        issues.append((key, "unknown field"))
    genus = data.get("genus")
    if not _is_int(genus):
        raise SceneError(issues + [("genus", "missing or not an integer")])
    if genus < 2:
        raise SceneError(issues + [("genus", f"genus must be at least 2, got {genus}")])

    def word(text, loc):
        if not isinstance(text, str):
            issues.append((loc, "word must be a string"))
            return None
        try:
            return parse_word(text, genus)
        except WordError as exc:
            issues.append((loc, str(exc)))
            return None

    horseshoes = []
    raw_h = data.get("horseshoes")
    if not isinstance(raw_h, list) or not raw_h:
        issues.append(("horseshoes", "must be a nonempty list"))
        raw_h = []
    ids = set()
    for k, h in enumerate(raw_h):
        loc = f"horseshoes[{k}]"
        if not isinstance(h, dict):
            issues.append((loc, "must be an object"))
            continue
        hid = h.get("id")
        if not isinstance(hid, str) or not hid:
            issues.append((f"{loc}.id", "missing or not a string"))
            continue
        if hid in ids:
            issues.append((f"{loc}.id", f"duplicate horseshoe id {hid!r}"))
        ids.add(hid)
        period = h.get("period", 1)
        if not _is_int(period) or period < 1:
            issues.append((f"{loc}.period", "must be a positive integer"))
            continue
        decks = h.get("decks")
        if not isinstance(decks, list) or not decks:
            issues.append((f"{loc}.decks", "must be a nonempty list of words"))
            continue
        ws = [word(d, f"{loc}.decks[{j}]") for j, d in enumerate(decks)]
        if None in ws:
            continue
        horseshoes.append(Horseshoe(hid, period, tuple(ws), h.get("provenance")))

    edges = []
    for k, e in enumerate(data.get("edges", [])):
        loc = f"edges[{k}]"
        if not isinstance(e, dict):
            issues.append((loc, "must be an object"))
            continue
        ok = True
        for end in ("from", "to"):
            if e.get(end) not in ids:
                issues.append((f"{loc}.{end}", f"unknown horseshoe id {e.get(end)!r}"))
                ok = False
        n = e.get("n", 1)
        if not _is_int(n) or n < 1:
            issues.append((f"{loc}.n", "must be a positive integer"))
            ok = False
        w = word(e.get("word", ""), f"{loc}.word")
        if ok and w is not None:
            edges.append(Edge(e["from"], e["to"], n, w, str(e.get("id", f"e{k}"))))

    orbits = []
    for k, o in enumerate(data.get("orbits", [])):
        loc = f"orbits[{k}]"
        if not isinstance(o, dict):
            issues.append((loc, "must be an object"))
            continue
        w = word(o.get("word"), f"{loc}.word")
        period = o.get("period", 1)
        if not _is_int(period) or period < 1:
            issues.append((f"{loc}.period", "must be a positive integer"))
            continue
        if w is None:
            continue
        try:
            orbits.append(OrbitProxy(w, period, str(o.get("id", f"z{k}"))))
        except (GeometryError, ValueError) as exc:
            issues.append((f"{loc}.word", str(exc)))

    seps = []
    for k, s in enumerate(data.get("separations", [])):
        loc = f"separations[{k}]"
        if not isinstance(s, dict):
            issues.append((loc, "must be an object"))
            continue
        names = [s.get(x) for x in ("i", "j", "k")]
        bad = [x for x, nme in zip("ijk", names) if nme not in ids]
        for x in bad:
            issues.append((f"{loc}.{x}", f"unknown horseshoe id {s.get(x)!r}"))
        try:
            ans = Separation(s.get("answer"))
        except ValueError:
            issues.append((f"{loc}.answer", "must be yes, no or unknown"))
            continue
        if not bad:
            seps.append((names[0], names[1], names[2], ans))

    options = data.get("options", {})
    if not isinstance(options, dict):
        issues.append(("options", "must be an object"))
        options = {}
    if issues:
        raise SceneError(issues)
    try:
        graph = HorseshoeGraph(genus, horseshoes, edges)
    except GraphError as exc:
        raise SceneError([("edges", str(exc))]) from exc
    return Scene(genus, graph, orbits, seps, dict(options), source)


def load_scene(path) -> Scene:
    """Read and validate a scene; errors carry JSON line/column or field paths."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SceneError([(str(path), f"cannot read: {exc.strerror}")]) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneError([(f"{path}:{exc.lineno}:{exc.colno}", exc.msg)]) from exc
    return parse_scene(data, str(path))


def scene_to_dict(scene: Scene) -> dict:
    """Inverse of :func:`parse_scene` (self-loops are implicit)."""
    from .surface_group import format_word

    G = scene.graph
    out = {
        "genus": scene.genus,
        "horseshoes": [{"id": h.id, "period": h.period, "decks": [format_word(w) for w in h.decks]}
                       for h in G.horseshoes.values()],
        "edges": [{"from": e.source, "to": e.target, "n": e.n, "word": format_word(e.word), "id": e.id}
                  for e in G.edges.values() if "/loop" not in e.id],
    }
    if scene.orbits:
        out["orbits"] = [{"word": format_word(o.word), "period": o.period, "id": o.id} for o in scene.orbits]
    if scene.separations:
        out["separations"] = [{"i": i, "j": j, "k": k, "answer": a.value} for i, j, k, a in scene.separations]
    if scene.options:
        out["options"] = scene.options
    return out
