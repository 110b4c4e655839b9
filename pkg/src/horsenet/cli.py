"""Command line interface ``hn``.

Every command prints (or writes with ``--out``) a JSON report with sorted
keys. Exit status: 0 success, 2 warnings, 1 errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .class_partition import hull_separation_oracle, limit_hull, partition
from .horseshoe_graph import (GraphError, class_reach, filtration, graph_T, order_check, scc,
                              table_oracle)
from .hyperbolic import DEFAULT_DEPTH, GEOM_TOL, GeometryError, IsometryType, classify, evaluate
from .leaf_space import LeafError, f_transverse_intersection, read_chord_paths, same_leaf, \
    self_transverse_with_deck
from .markov_rect import (MarkovError, PLMap, PLRectangle, chain_point, is_markovian, is_pre_markovian,
                          normalize, perturbation_margin, unit_square)
from .polytopes import (PolytopeError, RatPolytope, class_polytopes, format_vector, in_union,
                        maximal_chains, membership, parse_vector, rot_graph, shape_diagnostics)
from .realization import (RealizationError, bounded_deviation_check, empirical_rotation, prefix_rotations,
                          realize_finite, realize_set, realize_stream, sup_norm)
from .scene import SceneError, load_scene
from .surface_group import WordError, format_word, parse_word
from .svg import emit_svg

EXIT_OK, EXIT_ERROR, EXIT_WARN = 0, 1, 2


class CommandError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write(args, report: dict) -> None:
    text = _dump(report)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _depth(args, scene=None) -> int:
    if args.depth is not None:
        return args.depth
    if scene is not None and "depth" in scene.options:
        return int(scene.options["depth"])
    return DEFAULT_DEPTH


def _tol(args, scene=None) -> float:
    if args.geom_tol is not None:
        return args.geom_tol
    if scene is not None and "geom_tol" in scene.options:
        return float(scene.options["geom_tol"])
    return GEOM_TOL


def _classes_dict(cond) -> list[dict]:
    return [{"class": i, "members": list(c)} for i, c in enumerate(cond.classes)]


def _class_words(G, cond) -> list[list]:
    out = []
    for members in cond.classes:
        ws = []
        for v in members:
            for w in G.horseshoes[v].decks:
                if not w.is_identity and classify(evaluate(w)) is IsometryType.HYPERBOLIC:
                    ws.append(w)
        out.append(ws)
    return out


# --------------------------------------------------------------------------
# commands


def cmd_validate(args) -> tuple[dict, list]:
    scene = load_scene(args.scene)
    G = scene.graph
    cond = scc(G)
    rep = order_check(G, _depth(args, scene), cond)
    warnings = []
    if not rep.antisymmetric:
        warnings.append({"rule": "class order is antisymmetric",
                         "message": "distinct classes reach each other"})
    for u, v in rep.geodesic_merges:
        warnings.append({"rule": "transverse horseshoes lie in one chaotic class",
                         "message": f"axes of {u} and {v} cross but the graph separates them"})
    for u, v in rep.scc_merges:
        warnings.append({"rule": "one class carries transversally linked geodesics",
                         "message": f"{u} and {v} share a class but no crossing chain links their axes "
                                    f"up to depth {_depth(args, scene)}"})
    polys = class_polytopes(G, cond)
    for d in shape_diagnostics(G.genus, polys, [str(i) for i in range(len(polys))]):
        warnings.append(d.as_dict())
    report = {"scene": scene.source, "genus": G.genus, "horseshoes": len(G.horseshoes),
              "edges": len(G.edges), "classes": _classes_dict(cond), "order_check": rep.as_dict(),
              "warnings": warnings}
    return report, warnings


def cmd_scc(args):
    scene = load_scene(args.scene)
    cond = scc(scene.graph)
    return {"classes": _classes_dict(cond), "dag": sorted(list(e) for e in cond.dag.edges)}, []


def cmd_reach(args):
    scene = load_scene(args.scene)
    G = scene.graph
    cond = scc(G)
    if args.source or args.target:
        if not (args.source and args.target):
            raise CommandError("--from and --to go together")
        for v in (args.source, args.target):
            if v not in G.horseshoes:
                raise CommandError(f"unknown horseshoe id {v!r}")
        i, j = cond.class_of[args.source], cond.class_of[args.target]
        return {"from": args.source, "to": args.target, "reachable": class_reach(cond, i, j)}, []
    filt = filtration(cond)
    return {"classes": _classes_dict(cond),
            "reach": sorted([i, j] for i, j in cond.reach if i != j),
            "filtration": {str(i): {"up": sorted(u), "down": sorted(d)} for i, (u, d) in filt.items()}}, []


def cmd_classes(args):
    scene = load_scene(args.scene)
    if not scene.orbits:
        raise CommandError("scene has no orbits")
    depth = _depth(args, scene)
    tol = _tol(args, scene)
    part = partition(scene.orbits, depth, tol)
    out = []
    for k, c in enumerate(part.classes):
        d = c.as_dict(scene.orbits)
        d["class"] = k
        words = [scene.orbits[i].word for i in c.members]
        d["hull"] = limit_hull(words, min(depth, 2), tol=tol).as_dict()
        d["rotation_vectors"] = {scene.orbits[i].id: format_vector(scene.orbits[i].rotation_vector)
                                 for i in c.members}
        d["speeds"] = {scene.orbits[i].id: round(scene.orbits[i].speed, 12) for i in c.members}
        out.append(d)
    return {"depth": depth, "classes": out}, []


def cmd_graph_t(args):
    scene = load_scene(args.scene)
    G = scene.graph
    cond = scc(G)
    table = scene.separation_table(cond)
    depth = _depth(args, scene)
    if table and not args.geometric:
        oracle = table_oracle(table, default="unknown" if args.unknown_default else "no")
        source = "table"
    else:
        oracle = hull_separation_oracle(_class_words(G, cond), depth, tol=_tol(args, scene))
        source = "geometric"
    T = graph_T(cond, oracle)
    warnings = []
    if T.cyclic:
        warnings.append({"rule": "class order is antisymmetric",
                         "message": "separation answers force a cycle among classes"})
    rep = {"classes": _classes_dict(cond), "oracle": source, "depth": depth, "graph_t": T.as_dict(),
           "warnings": warnings}
    return rep, warnings


def _polys_report(G, cond):
    polys = rot_graph(G, cond)
    return polys, [P.as_dict() for P in polys]


def cmd_rotset(args):
    scene = load_scene(args.scene)
    G = scene.graph
    cond = scc(G)
    polys, data = _polys_report(G, cond)
    report = {"chains": [list(c) for c in maximal_chains(cond)], "polytopes": data,
              "class_polytopes": [P.as_dict() for P in class_polytopes(G, cond)]}
    if args.probe:
        report["probes"] = {p: in_union(parse_vector(p), polys) for p in args.probe}
    if args.random_probes:
        rng = np.random.default_rng(args.seed)
        dim = 2 * G.genus
        res = []
        for _ in range(args.random_probes):
            v = tuple(Fraction(int(rng.integers(-7, 8)), int(rng.integers(1, 8))) for _ in range(dim))
            res.append({"point": format_vector(v), "member": in_union(v, polys)})
        report["random_probes"] = res
    axes = tuple(args.axes)
    if args.svg:
        Path(args.svg).write_text(emit_svg(polys, axes))
    if args.png:
        from .plotting import plot_rotation_sets
        plot_rotation_sets(polys, args.png, axes)
    return report, []


def cmd_svg(args):
    scene = load_scene(args.scene)
    polys = rot_graph(scene.graph)
    text = emit_svg(polys, tuple(args.axes))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return None, []


def _pick_subgraph(G, rho, hint: str | None, need_class: bool):
    cond = scc(G)
    if hint:
        if hint not in G.horseshoes:
            raise CommandError(f"unknown horseshoe id {hint!r}")
        return G.subgraph(cond.classes[cond.class_of[hint]])
    for i, P in enumerate(class_polytopes(G, cond)):
        if membership(rho, P):
            return G.subgraph(cond.classes[i])
    if need_class:
        raise CommandError("target lies in no single class polytope; streams stay in one class")
    for chain in maximal_chains(cond):
        members = [v for c in chain for v in cond.classes[c]]
        P = RatPolytope.hull([p for v in members for p in G.horseshoes[v].rotation_points()])
        if membership(rho, P):
            return G.subgraph(members)
    raise CommandError("target lies outside rot(G)")


def _certificate_text(cert: dict) -> str:
    """Flatten a certificate into sorted ``key.path = value`` lines."""
    lines = []

    def emit(prefix, obj):
        items = sorted(obj.items()) if isinstance(obj, dict) else enumerate(obj)
        for k, v in items:
            if isinstance(v, (dict, list)):
                emit(f"{prefix}{k}.", v)
            else:
                lines.append(f"{prefix}{k} = {v}")

    emit("", cert)
    return "\n".join(lines) + "\n"


def cmd_realize(args):
    scene = load_scene(args.scene)
    G = scene.graph
    rho = parse_vector(args.target)
    if len(rho) != 2 * G.genus:
        raise CommandError(f"target has dimension {len(rho)}, expected {2 * G.genus}")
    eps = Fraction(args.eps)
    if args.symbols:
        H = _pick_subgraph(G, rho, args.within, need_class=True)
        stream = realize_stream(H, rho)
        out = stream.take(args.symbols)
        edges = [e for e, _, _ in out]
        cert = stream.certificate()
        # first prefix from which the certified stage bound is within eps
        reached = next((k for k, (_, _, b) in enumerate(out) if b <= eps), None)
        cert["eps"] = str(eps)
        cert["first_symbol_with_bound_le_eps"] = reached
        rot = empirical_rotation(H, edges)
        report = {"target": format_vector(rho), "symbols": len(edges), "final_rotation": format_vector(rot),
                  "final_error": str(sup_norm(tuple(a - b for a, b in zip(rot, rho)))),
                  "stages": len(cert["stages"])}
        if cert["deviation_bound"] is not None:
            report["bounded_deviation"] = bounded_deviation_check(H, edges, rho, Fraction(cert["deviation_bound"]))
    else:
        H = _pick_subgraph(G, rho, args.within, need_class=False)
        R = realize_finite(H, rho, eps)
        edges = R.edges
        cert = R.certificate()
        report = {"target": format_vector(rho), "symbols": len(edges), "rotation": format_vector(R.rotation),
                  "error": str(R.error), "bound": str(2 * eps), "closed": R.closed}
    _emit_edges(args, edges, cert, report)
    if args.png:
        from .plotting import plot_prefix_rotations
        plot_prefix_rotations(prefix_rotations(H, edges), args.png, tuple(args.axes), target=rho)
    return report, []


def _emit_edges(args, edges, cert, report):
    if args.edges:
        Path(args.edges).write_text("\n".join(edges) + "\n")
        report["edges_file"] = args.edges
    else:
        report["edges"] = edges
    cpath = args.certificate or (args.edges + ".cert" if args.edges else None)
    if cpath:
        Path(cpath).write_text(_certificate_text(cert))
        report["certificate_file"] = cpath
    else:
        report["certificate"] = cert


def cmd_realize_set(args):
    scene = load_scene(args.scene)
    G = scene.graph
    net_data = json.loads(Path(args.net).read_text())
    net = [parse_vector(v) if isinstance(v, str) else tuple(Fraction(str(x)) for x in v)
           for v in (net_data["net"] if isinstance(net_data, dict) else net_data)]
    H = _pick_subgraph(G, net[0], args.within, need_class=True)
    S = realize_set(H, net, Fraction(args.eps))
    edges = S.take(args.symbols)
    cert = S.certificate()
    report = {"net": [format_vector(v) for v in net], "symbols": len(edges), "burn_in": S.burn_in}
    if S.burn_in is not None and S.burn_in < len(edges):
        from .realization import polyline_distance
        d = polyline_distance(prefix_rotations(H, edges)[S.burn_in:], net)
        report["max_distance_after_burn_in"] = round(float(d.max()), 12)
    _emit_edges(args, edges, cert, report)
    if args.png:
        from .plotting import plot_prefix_rotations
        plot_prefix_rotations(prefix_rotations(H, edges), args.png, tuple(args.axes), net=net)
    return report, []


def cmd_markov(args):
    data = json.loads(Path(args.file).read_text())
    if "chain" in data:
        ch = data["chain"]
        rects = [PLRectangle.from_dict(r) for r in ch["rectangles"]]
        maps = [PLMap.from_dict(m) for m in ch["maps"]]
        tol = Fraction(ch.get("tol", "1/1000000000"))
        x = chain_point(rects, maps, tol)
        orbit = [x]
        for f in maps:
            orbit.append(f(orbit[-1]))
        return {"point": format_vector(x), "orbit": [format_vector(p) for p in orbit],
                "periodic": rects[0] == rects[-1],
                "return_error": str(max(abs(orbit[-1][0] - x[0]), abs(orbit[-1][1] - x[1])))}, []
    R1 = PLRectangle.from_dict(data["R1"])
    R2 = PLRectangle.from_dict(data["R2"]) if "R2" in data else unit_square()
    if "map" in data:
        from .markov_rect import image_rectangle
        R1 = image_rectangle(R1, PLMap.from_dict(data["map"]))
    A, B = normalize(R1, R2)
    W = is_markovian(A, B)
    report = {"pre_markovian": is_pre_markovian(A, B), "markovian": W is not None}
    if W is not None:
        report["witness"] = W.as_dict()
        report["perturbation_margin"] = str(perturbation_margin(A, B))
    return report, []


def cmd_leafspace(args):
    with open(args.file) as fh:
        paths = read_chord_paths(fh)
    tol = args.leaf_tol
    pairs = []
    for a in range(len(paths)):
        for b in range(a + 1, len(paths)):
            P, Q = paths[a], paths[b]
            for t in range(len(P)):
                for s in range(len(Q)):
                    if same_leaf(P[t], Q[s], tol):
                        pairs.append({"paths": [a, b], "pivots": [t, s],
                                      "f_transverse": f_transverse_intersection(P, t, Q, s, tol)})
    report = {"paths": len(paths), "lengths": [len(P) for P in paths], "shared_leaves": pairs}
    if args.deck:
        if args.genus is None:
            raise CommandError("--deck needs --genus")
        T = parse_word(args.deck, args.genus)
        hits = []
        for a, P in enumerate(paths):
            w = self_transverse_with_deck(P, T, tol)
            hits.append({"path": a, "witness": list(w) if w else None})
        report["deck"] = format_word(T)
        report["self_transverse"] = hits
    return report, []


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=int, default=None, help="conjugator length bound")
    common.add_argument("--geom-tol", type=float, default=None, help="geometric tolerance")
    common.add_argument("--seed", type=int, default=0, help="seed for probe sampling")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="hn", description="Rotational horseshoe graphs on closed surfaces.",
                                parents=[common])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def scene_cmd(name, fn, help_):
        q = sub.add_parser(name, parents=[common], help=help_)
        q.add_argument("scene")
        q.set_defaults(func=fn)
        return q

    scene_cmd("validate", cmd_validate, "check a scene and report warnings")
    scene_cmd("scc", cmd_scc, "chaotic classes and condensation DAG")
    q = scene_cmd("reach", cmd_reach, "class reachability")
    q.add_argument("--from", dest="source", default=None)
    q.add_argument("--to", dest="target", default=None)
    scene_cmd("classes", cmd_classes, "partition scene orbits by transversality")
    q = scene_cmd("graph-t", cmd_graph_t, "separation graph between classes")
    q.add_argument("--geometric", action="store_true", help="ignore the scene's separation table")
    q.add_argument("--unknown-default", action="store_true",
                   help="missing table rows answer unknown instead of no")
    q = scene_cmd("rotset", cmd_rotset, "rot(G) polytopes")
    q.add_argument("--probe", action="append", default=[], help='membership probe, e.g. "1/2,0,0,0"')
    q.add_argument("--random-probes", type=int, default=0)
    q.add_argument("--axes", type=int, nargs=2, default=[0, 1])
    q.add_argument("--svg", default=None)
    q.add_argument("--png", default=None)
    q = scene_cmd("svg", cmd_svg, "SVG of rot(G) projected on two axes")
    q.add_argument("--axes", type=int, nargs=2, default=[0, 1])
    for name, fn in (("realize", cmd_realize), ("realize-set", cmd_realize_set)):
        q = scene_cmd(name, fn, "symbolic orbit with prescribed rotation" if name == "realize"
                      else "symbolic orbit whose rotations accumulate on a net")
        if name == "realize":
            q.add_argument("--target", required=True)
        else:
            q.add_argument("--net", required=True, help="JSON list of vectors")
        q.add_argument("--eps", default="1/100")
        q.add_argument("--symbols", type=int, default=0 if name == "realize" else 10000)
        q.add_argument("--within", default=None, help="horseshoe id whose class to use")
        q.add_argument("--edges", default=None, help="write edge ids here")
        q.add_argument("--certificate", default=None, help="certificate side-file")
        q.add_argument("--axes", type=int, nargs=2, default=[0, 1])
        q.add_argument("--png", default=None)
    q = sub.add_parser("markov", parents=[common], help="Markovian intersection or chain point")
    q.add_argument("file")
    q.set_defaults(func=cmd_markov)
    q = sub.add_parser("leafspace", parents=[common], help="transverse-path crossings")
    q.add_argument("file")
    q.add_argument("--deck", default=None)
    q.add_argument("--genus", type=int, default=None)
    q.add_argument("--leaf-tol", type=float, default=1e-7)
    q.set_defaults(func=cmd_leafspace)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report, warnings = args.func(args)
    except SceneError as exc:
        for loc, msg in exc.issues:
            print(f"error: {loc}: {msg}", file=sys.stderr)
        return EXIT_ERROR
    except (CommandError, GraphError, GeometryError, PolytopeError, MarkovError, LeafError,
            RealizationError, WordError, OSError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if report is not None:
        _write(args, report)
    for w in warnings:
        print(f"warning [{w['rule']}]: {w['message']}", file=sys.stderr)
    return EXIT_WARN if warnings else EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
