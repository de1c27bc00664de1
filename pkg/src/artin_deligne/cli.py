"""Command-line front end.

Exit codes: 0 success or positive verdict, 1 negative verdict, 2 bound or
scope diagnostic, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import automorphisms as aut
from . import deligne, dihedral, hexagon, reconstruct, subgroups
from .graph import (DefiningGraph, GraphError, graph_automorphisms, is_free_of_infinity,
                    is_hyperbolic_type, is_large_type, labelled_isomorphism)
from .oracle import CAP_ENV, DEFAULT_CAP, MIN_CAP, Oracle, OracleBoundExceeded, OracleError, cap_from_env
from .words import Word, WordSyntaxError, format_word, parse_word

EXIT_OK, EXIT_NEGATIVE, EXIT_BOUND, EXIT_INPUT = 0, 1, 2, 3


class InputError(ValueError):
    pass


class BoundError(RuntimeError):
    pass


@dataclass
class RunConfig:
    command: str
    graph: str | None = None
    radius: int | None = None
    length_bound: int | None = None
    cap: int = DEFAULT_CAP
    out: str | None = None
    flags: dict = field(default_factory=dict)

    def validate(self):
        if self.radius is not None and self.radius < 1:
            raise InputError(f"radius must be >= 1, got {self.radius}")
        if self.length_bound is not None and self.length_bound < 1:
            raise InputError(f"length bound must be >= 1, got {self.length_bound}")
        if self.cap < MIN_CAP:
            raise InputError(f"oracle cap must be >= {MIN_CAP}, got {self.cap}")


# helpers

def _load_graph(path: str) -> DefiningGraph:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read graph file {path}: {exc.strerror}") from exc
    return DefiningGraph.from_json(text)


def _word(text: str, gens) -> Word:
    return parse_word(text, gens)


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError as exc:
        raise InputError(f"expected comma-separated integers, got {text!r}") from exc


def _letters(text: str, graph: DefiningGraph) -> tuple:
    parts = [p for p in text.replace(" ", "").split(",") if p] if "," in text else list(text)
    for p in parts:
        if p not in graph.vertices:
            raise InputError(f"unknown generator {p!r}")
    return tuple(parts)


def _oracle(graph: DefiningGraph, cfg: RunConfig) -> Oracle:
    return Oracle(graph, cfg.cap)


def _json_default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, (set, frozenset)):
        return sorted(o)
    raise TypeError(f"cannot serialise {type(o).__name__}")


def _emit(report: dict, cfg: RunConfig, fmt: str, stream=None):
    stream = stream or sys.stdout
    full = {"config": asdict(cfg), **report}
    if fmt == "json" and "records" in full:
        # JSON lines: a header carrying the config, then one record per line
        records = full.pop("records")
        rows = [full] + records
        text = "".join(json.dumps(r, sort_keys=True, default=_json_default) + "\n" for r in rows)
    elif fmt == "json":
        text = json.dumps(full, indent=2, sort_keys=True, default=_json_default) + "\n"
    else:
        lines = []
        for k in sorted(full):
            v = full[k]
            if isinstance(v, (dict, list)):
                v = json.dumps(v, sort_keys=True, default=_json_default)
            lines.append(f"{k}: {v}")
        text = "\n".join(lines) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        stream.write(text)


# commands; each returns (report, exit code)

def cmd_graph_check(args, cfg):
    g = _load_graph(args.graph)
    large = is_large_type(g)
    rep = {
        "vertices": list(g.vertices),
        "edges": [[a, b, m] for (a, b), m in g.edges()],
        "connected": g.is_connected(),
        "large_type": large,
        "free_of_infinity": is_free_of_infinity(g),
        "hyperbolic_type": is_hyperbolic_type(g) if large else None,
    }
    return rep, EXIT_OK


def cmd_graph_iso(args, cfg):
    g1, g2 = _load_graph(args.g1), _load_graph(args.g2)
    f = labelled_isomorphism(g1, g2)
    rep = {"isomorphic": f is not None, "witness": dict(f.mapping) if f else None}
    return rep, EXIT_OK if f else EXIT_NEGATIVE


def cmd_graph_auts(args, cfg):
    g = _load_graph(args.graph)
    auts = graph_automorphisms(g)
    return {"count": len(auts), "automorphisms": [dict(zip(g.vertices, a.key(g.vertices))) for a in auts]}, EXIT_OK


def cmd_dihedral_nf(args, cfg):
    gens = tuple(args.generators.split(","))
    if len(gens) != 2:
        raise InputError("--generators needs two names separated by a comma")
    grp = dihedral.DihedralGroup(args.m, gens)
    w = _word(args.word, gens)
    nf = dihedral.dihedral_normal_form(grp, w)
    geo = dihedral.dihedral_geodesic(grp, w)
    rep = {"word": format_word(w), "delta_power": nf.central_power, "tail": format_word(nf.tail),
           "geodesic": format_word(geo), "length": len(geo)}
    return rep, EXIT_OK


def cmd_dihedral_tuples(args, cfg):
    tuples = dihedral.trivial_2m_syllable_tuples(args.m, args.bound)
    return {"m": args.m, "bound": args.bound, "count": len(tuples), "records": [list(t) for t in tuples]}, EXIT_OK


def cmd_oracle_equal(args, cfg):
    g = _load_graph(args.graph)
    o = _oracle(g, cfg)
    u, v = _word(args.u, g.vertices), _word(args.v, g.vertices)
    eq = o.are_equal(u, v)
    rep = {"u": format_word(u), "v": format_word(v), "equal": eq,
           "geodesic_u": format_word(o.shortlex_geodesic(u)), "geodesic_v": format_word(o.shortlex_geodesic(v))}
    return rep, EXIT_OK if eq else EXIT_NEGATIVE


def _ball(args, cfg):
    g = _load_graph(args.graph)
    o = _oracle(g, cfg)
    return g, o, deligne.build_ball(g, o, cfg.radius, cfg.length_bound)


def cmd_deligne_build(args, cfg):
    g, o, ball = _ball(args, cfg)
    data = ball.to_json(ball.interior_vertices(o))
    rep = {"copies": len(ball.copies), "vertices": len(data["vertices"]),
           "edges": len(data["edges"]), "triangles": len(data["triangles"])}
    if args.ball_out:
        with open(args.ball_out, "w") as fh:
            json.dump(data, fh, indent=1, sort_keys=True)
            fh.write("\n")
    else:
        rep["ball"] = data
    return rep, EXIT_OK


def cmd_deligne_audit(args, cfg):
    g, o, ball = _ball(args, cfg)
    structure = deligne.structure_report(ball, o)
    problems = deligne.verify_merges(ball, o)
    regions = deligne.disk_regions(ball, o, max_pairs=args.max_pairs)
    disks, totals, failures = 0, set(), []
    for reg in regions:
        try:
            r = deligne.gauss_bonnet_audit(ball, reg)
        except AssertionError as exc:
            failures.append(str(exc))
            continue
        if r.is_disk:
            disks += 1
            totals.add(str(r.total))
    ok = (not problems and not failures and structure["bipartite"] and not structure["npod_violations"]
          and not structure["type0_violations"])
    rep = {"structure": structure, "merge_problems": problems, "regions": len(regions),
           "disk_regions": disks, "disk_totals_over_pi": sorted(totals), "gauss_bonnet_failures": failures,
           "ok": ok}
    return rep, EXIT_OK if ok else EXIT_NEGATIVE


def cmd_hexagon_classify(args, cfg):
    if (args.exponents is None) == (args.arrows is None):
        raise InputError("give exactly one of --exponents and --arrows")
    if args.exponents is not None:
        ks = _ints(args.exponents)
        if len(ks) != 6 or 0 in ks:
            raise InputError("a hexagon needs six nonzero exponents")
        verdict = hexagon.classify_exponents(ks)
        rep = {"exponents": list(ks), "arrows": [hexagon.arrow_of(k) for k in ks], "pattern": verdict}
    else:
        arrows = _ints(args.arrows)
        if len(arrows) != 6 or any(a not in hexagon.ARROW_VALUES for a in arrows):
            raise InputError("a hexagon needs six arrows in {1,-1,2,-2}")
        verdict = hexagon.classify_arrows(arrows)
        lifts = hexagon.legal_lifts(arrows)
        rep = {"arrows": list(arrows), "pattern": verdict, "lift": list(lifts[0]) if lifts else None}
    return rep, EXIT_NEGATIVE if verdict == hexagon.INVALID else EXIT_OK


def cmd_hexagon_complete(args, cfg):
    if (args.triangle is None) == (args.strip is None):
        raise InputError("give exactly one of --triangle and --strip")
    if args.triangle is not None:
        if args.triangle < 1:
            raise InputError("triangle side must be >= 1")
        region, seeds = hexagon.triangle_region_with_double_sides(args.triangle)
        res = hexagon.complete_strip(seeds, region)
        rep = {"region": f"triangle side {args.triangle} with doubles across its sides", "status": res.status}
        return rep, EXIT_OK if res.status == "complete" else EXIT_NEGATIVE
    if args.strip < 3:
        raise InputError("strip period must be >= 3")
    region, seeds, row = hexagon.strip_region(args.strip)
    sols = hexagon.complete_strip(seeds, region, all_solutions=True)
    directions = set()
    single = True
    for sol in sols:
        vals = [(pos, sol.get(*e)) for pos, e in row]
        single &= all(abs(v) == 1 for _p, v in vals)
        directions.add(tuple(sorted({hexagon.row_direction(pos, v, args.strip) for pos, v in vals})))
    uniform = single and all(len(d) == 1 for d in directions)
    rep = {"region": f"periodic strip, period {args.strip}", "completions": len(sols),
           "row_all_single": single, "row_directions": sorted(list(d) for d in directions),
           "row_uniform": uniform}
    return rep, EXIT_OK if sols and uniform else EXIT_NEGATIVE


def cmd_classify_exotic(args, cfg):
    g = _load_graph(args.graph)
    o = _oracle(g, cfg)
    triple = _letters(args.triple, g)
    conj = _word(args.conjugator, g.vertices)
    h = subgroups.exotic_subgroup(g, triple, conj)
    w = subgroups.centre_witness(h, o)
    rep = {"subgroup": h.to_json(), "coefficient": h.coefficient,
           "A4_relation": subgroups.verify_A4_relation(h, o),
           "centre": {"z": format_word(w.z), "m_prime": w.m_prime}}
    if not conj:
        rep["presentation_checks"] = subgroups.centraliser_presentation_checks(g, h.letters, o).to_json()
    ok = rep["A4_relation"] and rep.get("presentation_checks", {"ok": True})["ok"]
    return rep, EXIT_OK if ok else EXIT_NEGATIVE


def cmd_classify_probe(args, cfg):
    g, o, ball = _ball(args, cfg)
    letters = _letters(args.letters, g)
    conj = _word(args.conjugator, g.vertices)
    if len(letters) == 2:
        h = subgroups.classical_subgroup(g, letters, conj)
    elif len(letters) == 3:
        h = subgroups.exotic_subgroup(g, letters, conj)
    else:
        raise InputError("--letters takes a pair (classical) or a triple (exotic)")
    try:
        r = subgroups.isolated_intersections_probe(h, ball, o)
    except subgroups.InsufficientRadius as exc:
        raise BoundError(str(exc)) from exc
    return r.to_json(), EXIT_OK


def cmd_reconstruct(args, cfg):
    g = _load_graph(args.graph)
    o = _oracle(g, cfg)
    try:
        ball = deligne.build_ball(g, o, cfg.radius, cfg.length_bound)
        data = reconstruct.SubgroupData(ball, o)
    except reconstruct.ReconstructionError as exc:
        raise BoundError(f"out of scope: {exc}") from exc
    d1 = reconstruct.build_D1(ball, o, data)
    subs = reconstruct.characteristic_subgraphs(d1, reconstruct.gamma_bar(g))
    cx = reconstruct.build_algebraic_complex(d1, subs)
    rep = {"type2": len(cx.type2), "type1": len(cx.type1), "edges": len(cx.edges),
           "apices": len(cx.apices), "simplices": len(cx.simplices),
           "invariant_problems": cx.check_invariants()}
    code = EXIT_OK if not rep["invariant_problems"] else EXIT_NEGATIVE
    if args.verify_F:
        f1 = reconstruct.verify_F1(d1, ball)
        f = reconstruct.verify_F(cx, d1, ball)
        rep["F1"] = f1.to_json()
        rep["F"] = f.to_json()
        if not (f1.ok and f.bijective):
            code = EXIT_NEGATIVE
    if args.complex_out:
        with open(args.complex_out, "w") as fh:
            json.dump({"graph": g.to_json(), **cx.to_json()}, fh, indent=1, sort_keys=True)
            fh.write("\n")
    return rep, code


def _scoped(fn):
    def run(*a):
        try:
            return fn(*a)
        except aut.ScopeError as exc:
            raise BoundError(f"out of scope: {exc}") from exc
    return run


@_scoped
def cmd_aut_out(args, cfg):
    g = _load_graph(args.graph)
    return aut.out_group(g).to_json(), EXIT_OK


@_scoped
def cmd_aut_decide(args, cfg):
    g1, g2 = _load_graph(args.g1), _load_graph(args.g2)
    f = aut.decide_isomorphic(g1, g2)
    rep = {"isomorphic": f is not None, "witness": dict(f.mapping) if f else None}
    return rep, EXIT_OK if f else EXIT_NEGATIVE


@_scoped
def cmd_aut_apply(args, cfg):
    g = _load_graph(args.graph)
    try:
        with open(args.map) as fh:
            raw = fh.read()
        data = json.loads(raw)
    except OSError as exc:
        raise InputError(f"cannot read map file {args.map}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid map JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    o = _oracle(g, cfg)
    phi = aut.ArtinMap.from_json(data, g)
    w = _word(args.word, g.vertices)
    img = phi(w)
    rep = {"word": format_word(w), "image": format_word(img),
           "geodesic": format_word(o.shortlex_geodesic(img))}
    try:
        rep["height_tag"] = aut.height_dichotomy(phi, o)
    except aut.MapValidationError as exc:
        rep["validation_failures"] = exc.reasons
        return rep, EXIT_NEGATIVE
    return rep, EXIT_OK


# parser

def _common(p, graph=True, ball=False):
    if graph:
        p.add_argument("--graph", required=True, help="defining graph JSON file")
    if ball:
        p.add_argument("--radius", type=int, default=2)
        p.add_argument("--length-bound", type=int, default=6)
    p.add_argument("--cap", type=int, default=None, help=f"oracle cap (default {DEFAULT_CAP}, env {CAP_ENV})")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="artin", description="Deligne complexes and rigidity of large-type Artin groups")
    top = ap.add_subparsers(dest="group", required=True)

    g = top.add_parser("graph").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("check"); _common(p); p.set_defaults(fn=cmd_graph_check)
    p = g.add_parser("iso"); _common(p, graph=False)
    p.add_argument("--g1", required=True); p.add_argument("--g2", required=True); p.set_defaults(fn=cmd_graph_iso)
    p = g.add_parser("auts"); _common(p); p.set_defaults(fn=cmd_graph_auts)

    d = top.add_parser("dihedral").add_subparsers(dest="cmd", required=True)
    p = d.add_parser("nf"); _common(p, graph=False)
    p.add_argument("--m", type=int, required=True); p.add_argument("--word", required=True)
    p.add_argument("--generators", default="s,t"); p.set_defaults(fn=cmd_dihedral_nf)
    p = d.add_parser("trivial-tuples"); _common(p, graph=False)
    p.add_argument("--m", type=int, required=True); p.add_argument("--bound", type=int, default=3)
    p.set_defaults(fn=cmd_dihedral_tuples)

    o = top.add_parser("oracle").add_subparsers(dest="cmd", required=True)
    p = o.add_parser("equal"); _common(p)
    p.add_argument("--u", required=True); p.add_argument("--v", required=True); p.set_defaults(fn=cmd_oracle_equal)

    dl = top.add_parser("deligne").add_subparsers(dest="cmd", required=True)
    p = dl.add_parser("build"); _common(p, ball=True)
    p.add_argument("--ball-out", default=None, help="write the ball JSON here"); p.set_defaults(fn=cmd_deligne_build)
    p = dl.add_parser("audit"); _common(p, ball=True)
    p.add_argument("--max-pairs", type=int, default=200); p.set_defaults(fn=cmd_deligne_audit)

    h = top.add_parser("hexagon").add_subparsers(dest="cmd", required=True)
    p = h.add_parser("classify"); _common(p, graph=False)
    p.add_argument("--exponents"); p.add_argument("--arrows"); p.set_defaults(fn=cmd_hexagon_classify)
    p = h.add_parser("complete"); _common(p, graph=False)
    p.add_argument("--triangle", type=int); p.add_argument("--strip", type=int); p.set_defaults(fn=cmd_hexagon_complete)

    c = top.add_parser("classify").add_subparsers(dest="cmd", required=True)
    p = c.add_parser("exotic"); _common(p)
    p.add_argument("--triple", required=True); p.add_argument("--conjugator", default="")
    p.set_defaults(fn=cmd_classify_exotic)
    p = c.add_parser("probe"); _common(p, ball=True)
    p.add_argument("--letters", required=True, help="pair for classical, triple for exotic")
    p.add_argument("--conjugator", default=""); p.set_defaults(fn=cmd_classify_probe)

    p = top.add_parser("reconstruct"); _common(p, ball=True)
    p.add_argument("--verify-F", action="store_true", dest="verify_F")
    p.add_argument("--complex-out", default=None, help="write the algebraic complex JSON here")
    p.set_defaults(fn=cmd_reconstruct)

    a = top.add_parser("aut").add_subparsers(dest="cmd", required=True)
    p = a.add_parser("out"); _common(p); p.set_defaults(fn=cmd_aut_out)
    p = a.add_parser("decide-iso"); _common(p, graph=False)
    p.add_argument("--g1", required=True); p.add_argument("--g2", required=True); p.set_defaults(fn=cmd_aut_decide)
    p = a.add_parser("apply"); _common(p)
    p.add_argument("--map", required=True); p.add_argument("--word", required=True); p.set_defaults(fn=cmd_aut_apply)
    return ap


def _config(args) -> RunConfig:
    skip = {"group", "cmd", "fn", "graph", "radius", "length_bound", "cap", "out", "format"}
    flags = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    cap = args.cap if args.cap is not None else cap_from_env()
    command = f"{args.group} {args.cmd}" if getattr(args, "cmd", None) else args.group
    return RunConfig(command, getattr(args, "graph", None), getattr(args, "radius", None),
                     getattr(args, "length_bound", None), cap, args.out, flags)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = _config(args)
        cfg.validate()
        report, code = args.fn(args, cfg)
    except deligne.BallError as exc:
        if isinstance(exc.__cause__, OracleBoundExceeded):
            sys.stderr.write(f"bound/scope: {exc}\n")
            return EXIT_BOUND
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except (BoundError, OracleBoundExceeded) as exc:
        sys.stderr.write(f"bound/scope: {exc}\n")
        return EXIT_BOUND
    except (InputError, GraphError, WordSyntaxError, OracleError, dihedral.DihedralError,
            subgroups.SubgroupError, aut.MapValidationError, ValueError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    _emit(report, cfg, args.format)
    return code


def main():
    sys.exit(run())
