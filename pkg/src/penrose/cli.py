"""Command-line front end.

Exit codes: 0 verified, 1 mathematical violation, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import sys
from itertools import combinations

from . import document as docs
from . import svg
from .completion import FULL, complete, cube_edges, validate
from .corpus import rng_for
from .engine import (PenroseLattice, all_subsets, build_lattice, label, random_params, random_regular,
                     verify_all)
from .errors import InputError, MathViolation, PenroseError
from .lift3d import extrude_seven, face_structure, slice_cube
from .matrix import sym_to_poly
from .poly import Poly
from .projective import common_point, concurrent, double_contact, ring_contact
from .scalar import DEFAULT_TOL, EXACT
from .scenarios import SCENARIOS, classify, random_instance

OK, VIOLATION, BAD_INPUT = 0, 1, 2


# --- reports ------------------------------------------------------------------------


def _status(ok: bool, residual, tol: float) -> tuple[str, object]:
    """(status, serialized residual); nonzero float residuals within tolerance are flagged."""
    if isinstance(residual, Poly):
        size = residual.max_abs()
        if residual.is_zero():
            return "pass", 0
        if size <= tol:
            return "flag", size
        return "fail", size
    if isinstance(residual, (int, float)) and not isinstance(residual, bool):
        if residual == 0:
            return "pass", 0
        return ("flag" if ok else "fail"), float(residual)
    return ("pass" if ok else "fail"), None


def record(name: str, anchor: str, ok: bool, residual=None, witnesses=None, tol: float = DEFAULT_TOL) -> dict:
    status, res = _status(ok, residual, tol)
    return {"check": name, "anchor": anchor, "status": status, "residual": res, "witnesses": witnesses or {}}


def make_report(title: str, records: list[dict], extra: dict | None = None) -> dict:
    counts = {"pass": 0, "flag": 0, "fail": 0}
    for r in records:
        counts[r["status"]] += 1
    out = {"report": title, "checks": records, "summary": counts}
    if extra:
        out.update(extra)
    return out


def print_report(rep: dict, stream) -> None:
    for r in rep["checks"]:
        res = "" if r["residual"] is None else f"  residual={r['residual']}"
        stream.write(f"{r['status'].upper():4}  {r['check']}  [{r['anchor']}]{res}\n")
    s = rep["summary"]
    stream.write(f"summary: {s['pass']} pass, {s['flag']} flag, {s['fail']} fail\n")


def report_ok(rep: dict) -> bool:
    return rep["summary"]["fail"] == 0


# --- verification of documents ------------------------------------------------------


def _override(lat: PenroseLattice, verts: dict, doc: dict, mode: str) -> None:
    """Replace computed data by what the document states, so verification tests the document."""
    for s, A in verts.items():
        if s in lat.vertices:
            lat.vertices[s] = sym_to_poly(A)
    chords = doc.get("chords") or {}
    for (om, k) in list(lat.chords):
        key = f"{label(om)}|{k}"
        if key in chords and chords[key] is not None:
            vec = docs._vector(chords[key], mode, f"chords.{key}", lat.params.m)
            lat.chords[(om, k)] = Poly.linear(vec, mode)
    fs = doc.get("f") or {}
    for s in list(lat.f):
        if label(s) in fs:
            lat.f[s] = docs.load_scalar(fs[label(s)], mode, f"f.{label(s)}")


def lattice_records(lat: PenroseLattice, tol: float) -> list[dict]:
    out = []
    for c in verify_all(lat):
        out.append(record(c.name, c.anchor, c.ok, c.residual, {"note": c.detail} if c.detail else None, tol))
    return out


def config_records(verts: dict, tol: float) -> list[dict]:
    """Contacts and face concurrency read off the vertex matrices alone."""
    out = []
    quadric = next(iter(verts.values())).order == 4
    chords = {}
    for s, t in cube_edges(include_top=True):
        if s not in verts or t not in verts:
            continue
        name = f"contact {label(s)}-{label(t)}"
        try:
            if quadric:
                rc = ring_contact(verts[s], verts[t], tol)
                chords[(s, t)] = rc.plane
                out.append(record(name, "ring contact", True, witnesses={"plane": docs.dump_vector(rc.plane.coords)}))
            else:
                c = double_contact(verts[s], verts[t], tol)
                chords[(s, t)] = c.chord
                out.append(record(name, "double contact", True, witnesses={"chord": docs.dump_vector(c.chord.coords)}))
        except PenroseError as exc:
            out.append(record(name, "double contact", False, witnesses={"error": str(exc)}))
    for s in all_subsets(3):
        for j, k in combinations(sorted(FULL - s), 2):
            keys = [(s, s | {j}), (s, s | {k}), (s | {j}, s | {j, k}), (s | {k}, s | {j, k})]
            if not all(key in chords for key in keys):
                continue
            ok = concurrent([chords[key] for key in keys], tol)
            out.append(record(f"face point {label(s)}:{j}{k}", "face chords concurrent", ok))
    return out


# --- commands -------------------------------------------------------------------------


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(args) -> tuple[dict, str]:
    if not args.file:
        raise docs.DocumentError("an input file is required")
    doc = docs.load(args.file)
    return doc, docs.doc_mode(doc, args.mode)


def _tol(args, doc: dict | None = None) -> float:
    if args.tol is not None:
        return args.tol
    if doc is not None:
        return float(doc.get("options", {}).get("tol", DEFAULT_TOL))
    return DEFAULT_TOL


def cmd_construct(args) -> int:
    if args.file:
        doc, mode = _load(args)
        params = docs.read_params(doc, mode)
        if args.n is not None and args.n != params.n:
            raise docs.DocumentError(f"--n {args.n} but the document has {params.n} lines", "params.lines")
        seed = None
    else:
        mode = args.mode or EXACT
        if mode != EXACT:
            raise InputError("random parameters are generated in exact mode")
        m = 4 if args.space == "quadric" else 3
        seed = args.seed if args.seed is not None else 0
        rng = rng_for(seed)
        n = args.n or 3
        params = random_regular(rng, m=m, n=n)[0] if n == 3 else random_params(rng, m=m, n=n)
    tol = _tol(args)
    lat = build_lattice(params)
    out = docs.cube_document(lat, docs.options(params.mode, seed=seed), tol)
    _emit(docs.dumps(out), args.out)
    return OK


def cmd_complete(args) -> int:
    doc, mode = _load(args)
    tol = _tol(args, doc)
    seven = docs.read_seven(doc, mode)
    validate(seven, tol)
    res = complete(seven, tol)
    verts = {s: seven.primal(s) for s in sorted(seven.vertices, key=lambda s: (len(s), sorted(s)))}
    verts[FULL] = res.primary
    out = {"version": docs.VERSION, "options": docs.options(mode), "config": docs.config_section(verts),
           "completion": {"unique": res.unique, "notes": list(res.notes)}}
    if res.second is not None:
        sec = res.second
        out["completion"]["second"] = docs.dump_matrix(sec)
        out["completion"]["second_mode"] = res.second_mode
        out["completion"]["second_residual"] = res.second_residual
    _emit(docs.dumps(out), args.out)
    if not res.unique:
        sys.stderr.write("note: all face points coincide; two completions returned\n")
    return OK


def verify_document(doc: dict, mode: str, tol: float) -> dict:
    verts = docs.read_vertices(doc, mode) if "config" in doc else {}
    if "params" in doc:
        params = docs.read_params(doc, mode)
        lat = build_lattice(params, verify=False)
        _override(lat, verts, doc, mode)
        records = lattice_records(lat, tol)
    else:
        if len(verts) != 8:
            raise docs.DocumentError("a cube document needs eight vertices or a params section", "config.vertices")
        records = config_records(verts, tol)
    return make_report("verify", records)


def cmd_verify(args) -> int:
    doc, mode = _load(args)
    rep = verify_document(doc, mode, _tol(args, doc))
    print_report(rep, sys.stdout)
    if args.out:
        _emit(json.dumps(rep, indent=2) + "\n", args.out)
    return OK if report_ok(rep) else VIOLATION


def _lattice_of(doc: dict, mode: str, tol: float) -> PenroseLattice:
    if "params" in doc:
        return build_lattice(docs.read_params(doc, mode))
    return complete(docs.read_seven(doc, mode), tol).lattice


def cmd_classify(args) -> int:
    doc, mode = _load(args)
    name = classify(_lattice_of(doc, mode, _tol(args, doc)))
    _emit(name + "\n", args.out)
    return OK


def cmd_scenario(args) -> int:
    if args.name not in SCENARIOS:
        raise InputError(f"unknown scenario {args.name!r}; choose from {', '.join(SCENARIOS)}")
    seed = args.seed if args.seed is not None else 0
    inst = random_instance(args.name, rng_for(seed))
    tol = _tol(args)
    records = lattice_records(inst.lattice, tol) if inst.lattice is not None else []
    records.append(record(f"{args.name}: vertex-side predicate", inst.predicate, inst.penrose()))
    records.append(record(f"{args.name}: classical statement", "independent classical check", inst.classical()))
    if inst.lattice is not None:
        got = classify(inst.lattice)
        records.append(record(f"{args.name}: classified as {got}", "rank and f-scalar signature", got != "generic"))
    rep = make_report(f"scenario {args.name}", records, {"seed": seed})
    print_report(rep, sys.stdout)
    if args.out:
        _emit(json.dumps(rep, indent=2) + "\n", args.out)
    return OK if report_ok(rep) else VIOLATION


def cmd_lift(args) -> int:
    doc, mode = _load(args)
    tol = _tol(args, doc)
    seven = docs.read_seven(doc, mode)
    if seven.order != 3:
        raise docs.DocumentError("lift takes a configuration of conics", "config.vertices")
    frame = docs.read_frame(doc, mode)
    lifted = extrude_seven(seven, frame, tol)
    res = complete(lifted, tol)
    verts = {s: lifted.primal(s) for s in lifted.vertices}
    verts[FULL] = res.primary
    fs = face_structure(verts, tol)
    out = {"version": docs.VERSION, "options": docs.options(mode), "config": docs.config_section(verts),
           "frame": docs.frame_section(frame),
           "faces": {"branch": fs.branch, "apex": docs.dump_vector(fs.O.normalized()) if fs.O else None,
                     "ok": fs.ok}}
    _emit(docs.dumps(out), args.out)
    return OK if fs.ok else VIOLATION


def cmd_slice(args) -> int:
    doc, mode = _load(args)
    tol = _tol(args, doc)
    verts = docs.read_vertices(doc, mode)
    if len(verts) != 8 or next(iter(verts.values())).order != 4:
        raise docs.DocumentError("slice takes eight quadrics", "config.vertices")
    plane, basis = docs.read_plane(doc, mode)
    cut = slice_cube(verts, plane, basis, tol)
    out = {"version": docs.VERSION, "options": docs.options(mode), "config": docs.config_section(cut.vertices),
           "slice": {"plane": docs.dump_vector(plane.coords),
                     "tangent": [label(s) for s in all_subsets(3) if cut.tangent[s]],
                     "checks": [{"check": n, "ok": ok} for n, ok in cut.checks]}}
    _emit(docs.dumps(out), args.out)
    return OK if cut.ok else VIOLATION


def render_document(doc: dict, mode: str, tol: float, chart: int = 2) -> str:
    verts = docs.read_vertices(doc, mode)
    if next(iter(verts.values())).order != 3:
        raise docs.DocumentError("render draws conics", "config.vertices")
    chords = {}
    for s, t in cube_edges(include_top=True):
        if s in verts and t in verts:
            try:
                chords[(s, t)] = double_contact(verts[s], verts[t], tol).chord
            except PenroseError:
                pass
    points = {}
    for s in all_subsets(3):
        for j, k in combinations(sorted(FULL - s), 2):
            keys = [(s, s | {j}), (s, s | {k}), (s | {j}, s | {j, k}), (s | {k}, s | {j, k})]
            if all(key in chords for key in keys):
                try:
                    points[f"{label(s)}:{j}{k}"] = common_point([chords[key] for key in keys], tol).coords
                except PenroseError:
                    pass
    named = {f"{label(s)}-{label(t)}": h.coords for (s, t), h in chords.items()}
    return svg.render(svg.sketch(verts, named, points, chart))


def cmd_render(args) -> int:
    doc, mode = _load(args)
    chart = "xyz".index(args.chart)
    _emit(render_document(doc, mode, _tol(args, doc), chart), args.out)
    return OK


def cmd_selftest(args) -> int:
    from . import acceptance
    results = acceptance.run_all(stream=sys.stdout)
    rep = make_report("selftest", [record(f"criterion {r.number}: {r.name}", r.anchor, r.ok,
                                           witnesses={"criterion": r.number, "detail": r.detail,
                                                      "seconds": round(r.seconds, 2)})
                                    for r in results])
    if args.out:
        _emit(json.dumps(rep, indent=2) + "\n", args.out)
    return OK if report_ok(rep) else VIOLATION


COMMANDS = {
    "construct": cmd_construct, "complete": cmd_complete, "verify": cmd_verify, "classify": cmd_classify,
    "scenario": cmd_scenario, "lift": cmd_lift, "slice": cmd_slice, "render": cmd_render, "selftest": cmd_selftest,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(BAD_INPUT)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=("exact", "float"))
    common.add_argument("--tol", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--n", type=int, choices=(3, 4))
    common.add_argument("--space", choices=("conic", "quadric"), default="conic")
    common.add_argument("--out")
    p = _Parser(prog="penrose", description="Penrose conic and quadric cubes in exact arithmetic.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("construct", "complete", "verify", "classify", "lift", "slice", "render"):
        q = sub.add_parser(name, parents=[common])
        q.add_argument("file", nargs="?" if name == "construct" else None)
        if name == "render":
            q.add_argument("--chart", choices=("x", "y", "z"), default="z")
    q = sub.add_parser("scenario", parents=[common])
    q.add_argument("name")
    sub.add_parser("selftest", parents=[common])
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except InputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return BAD_INPUT
    except MathViolation as exc:
        sys.stderr.write(f"violation: {type(exc).__name__}: {exc}\n")
        return VIOLATION


if __name__ == "__main__":
    raise SystemExit(main())
