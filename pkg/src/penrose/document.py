"""JSON documents for parameters, vertex configurations, frames, planes and reports.

Exact scalars are written as ``"num/den"`` strings (plain integers as ints or
``"num"``); float mode writes decimals.  Vertex keys are subset labels such as
``"S_{}"``, ``"S_{12}"``.  See ``docs/document-schema.md`` for the layout.
"""
from __future__ import annotations

import json
from typing import Any

from .completion import SEVEN, SevenConfig
from .engine import PenroseLattice, PenroseParams, all_subsets, face_reports, label, parse_label
from .errors import InputError
from .lift3d import ExtrusionFrame
from .matrix import SymMatrix, poly_to_sym, sym_to_poly
from .poly import Poly
from .projective import ProjHyperplane
from .scalar import EXACT, FLOAT, format_scalar, parse_scalar

VERSION = 1


class DocumentError(InputError):
    """Malformed document; carries a location (line/column or a key path)."""

    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


# --- scalars -----------------------------------------------------------------------


def dump_scalar(x):
    v = format_scalar(x)
    if isinstance(v, str) and "/" not in v:
        return int(v)
    return v


def load_scalar(value, mode: str, where: str):
    try:
        return parse_scalar(value, mode)
    except InputError as exc:
        raise DocumentError(str(exc), where) from None


def _vector(value, mode: str, where: str, size: int | None = None) -> list:
    if not isinstance(value, list):
        raise DocumentError("expected a list of scalars", where)
    if size is not None and len(value) != size:
        raise DocumentError(f"expected {size} entries, got {len(value)}", where)
    return [load_scalar(v, mode, f"{where}[{i}]") for i, v in enumerate(value)]


def _matrix(value, mode: str, where: str, sizes=(3, 4)) -> SymMatrix:
    if not isinstance(value, list) or len(value) not in sizes:
        raise DocumentError(f"expected a square matrix of order {' or '.join(map(str, sizes))}", where)
    rows = [_vector(r, mode, f"{where}[{i}]", len(value)) for i, r in enumerate(value)]
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            if rows[i][j] != rows[j][i]:
                raise DocumentError(f"matrix not symmetric at ({i},{j})", where)
    return SymMatrix(rows, mode)


def dump_matrix(A: SymMatrix) -> list:
    return [[dump_scalar(v) for v in row] for row in A.rows]


def dump_vector(v) -> list:
    return [dump_scalar(c) for c in v]


def dump_quadratic(f: Poly) -> list:
    return dump_matrix(poly_to_sym(f))


# --- reading -------------------------------------------------------------------------


def parse_text(text: str) -> dict:
    try:
        doc = json.loads(text, parse_float=str)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    if not isinstance(doc, dict):
        raise DocumentError("top level must be an object", "line 1, column 1")
    version = doc.get("version", VERSION)
    if version != VERSION:
        raise DocumentError(f"unsupported version {version!r}", "version")
    return doc


def load(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_text(fh.read())
    except OSError as exc:
        raise DocumentError(exc.strerror or str(exc), path) from None


def doc_mode(doc: dict, override: str | None = None) -> str:
    mode = override or doc.get("options", {}).get("mode", EXACT)
    if mode not in (EXACT, FLOAT):
        raise DocumentError(f"unknown mode {mode!r}", "options.mode")
    return mode


def read_params(doc: dict, mode: str) -> PenroseParams:
    sec = doc.get("params")
    if not isinstance(sec, dict):
        raise DocumentError("missing params section", "params")
    S0 = _matrix(sec.get("S0"), mode, "params.S0")
    m = S0.order
    lines_raw = sec.get("lines")
    if not isinstance(lines_raw, list) or not lines_raw:
        raise DocumentError("expected a non-empty list of lines", "params.lines")
    lines = [Poly.linear(_vector(v, mode, f"params.lines[{i}]", m), mode) for i, v in enumerate(lines_raw)]
    n = len(lines)
    d = _vector(sec.get("d"), mode, "params.d", n)
    a_raw = sec.get("a", {})
    if not isinstance(a_raw, dict):
        raise DocumentError("expected an object keyed by index pairs such as \"12\"", "params.a")
    a = {}
    for key, v in a_raw.items():
        if len(key) != 2 or not key.isdigit():
            raise DocumentError(f"bad index pair {key!r}", "params.a")
        a[(int(key[0]), int(key[1]))] = load_scalar(v, mode, f"params.a.{key}")
    try:
        return PenroseParams(sym_to_poly(S0), tuple(lines), tuple(d), a)
    except InputError as exc:
        raise DocumentError(str(exc), "params") from None


def read_vertices(doc: dict, mode: str) -> dict:
    sec = doc.get("config")
    if not isinstance(sec, dict) or not isinstance(sec.get("vertices"), dict):
        raise DocumentError("missing config.vertices", "config")
    out = {}
    for key, value in sec["vertices"].items():
        try:
            s = parse_label(key)
        except InputError as exc:
            raise DocumentError(str(exc), "config.vertices") from None
        out[s] = _matrix(value, mode, f"config.vertices.{key}")
    if len({A.order for A in out.values()}) > 1:
        raise DocumentError("vertices disagree on their order", "config.vertices")
    return out


def read_seven(doc: dict, mode: str) -> SevenConfig:
    verts = read_vertices(doc, mode)
    missing = [label(s) for s in SEVEN if s not in verts]
    if missing:
        raise DocumentError("missing vertices " + ", ".join(missing), "config.vertices")
    return SevenConfig({s: verts[s] for s in SEVEN})


def read_frame(doc: dict, mode: str) -> ExtrusionFrame:
    sec = doc.get("frame")
    if sec is None:
        return ExtrusionFrame()
    if not isinstance(sec, dict):
        raise DocumentError("expected an object", "frame")
    default = ExtrusionFrame()
    u = _vector(sec.get("u", list(default.u)), mode, "frame.u", 4)
    P_raw = sec.get("P", [list(p) for p in default.P])
    if not isinstance(P_raw, list) or len(P_raw) != 3:
        raise DocumentError("expected three points", "frame.P")
    P = tuple(tuple(_vector(p, mode, f"frame.P[{i}]", 4)) for i, p in enumerate(P_raw))
    O = _vector(sec.get("O", list(default.O)), mode, "frame.O", 4)
    try:
        return ExtrusionFrame(tuple(u), P, tuple(O))
    except InputError as exc:
        raise DocumentError(str(exc), "frame") from None


def read_plane(doc: dict, mode: str):
    """(plane, basis or None); falls back to the frame's base plane and basis."""
    sec = doc.get("plane")
    if sec is None:
        frame = read_frame(doc, mode)
        return frame.base_plane, frame.basis()
    if not isinstance(sec, dict):
        raise DocumentError("expected an object", "plane")
    coords = _vector(sec.get("coords"), mode, "plane.coords", 4)
    if not any(coords):
        raise DocumentError("zero plane", "plane.coords")
    basis = None
    if "basis" in sec:
        cols = sec["basis"]
        if not isinstance(cols, list) or len(cols) != 3:
            raise DocumentError("expected three points spanning the plane", "plane.basis")
        pts = [_vector(c, mode, f"plane.basis[{i}]", 4) for i, c in enumerate(cols)]
        basis = [[pts[j][i] for j in range(3)] for i in range(4)]
    return ProjHyperplane(coords), basis


# --- writing -------------------------------------------------------------------------


def options(mode: str, tol: float | None = None, seed: int | None = None) -> dict:
    out: dict[str, Any] = {"mode": mode}
    if tol is not None:
        out["tol"] = tol
    if seed is not None:
        out["seed"] = seed
    return out


def params_section(p: PenroseParams) -> dict:
    return {
        "S0": dump_quadratic(p.S0),
        "lines": [dump_vector(l.linear_vector()) for l in p.lines],
        "d": dump_vector(p.d),
        "a": {f"{j}{k}": dump_scalar(v) for (j, k), v in sorted(p.a.items())},
    }


def config_section(vertices: dict) -> dict:
    """Vertices keyed by subset, in lattice order."""
    order = sorted(vertices, key=lambda s: (len(s), sorted(s)))
    mats = {s: (poly_to_sym(v) if isinstance(v, Poly) else v) for s, v in vertices.items()}
    space = "quadric" if mats[order[0]].order == 4 else "conic"
    return {"space": space, "vertices": {label(s): dump_matrix(mats[s]) for s in order}}


def frame_section(frame: ExtrusionFrame) -> dict:
    return {"u": dump_vector(frame.u), "P": [dump_vector(p) for p in frame.P], "O": dump_vector(frame.O)}


def cube_document(lat: PenroseLattice, opts: dict, tol: float = 1e-9) -> dict:
    doc = {"version": VERSION, "options": opts, "params": params_section(lat.params),
           "config": config_section(lat.vertices)}
    doc["chords"] = {f"{label(om)}|{k}": dump_vector(p.linear_vector()) if not p.is_zero() else None
                     for (om, k), p in sorted(lat.chords.items(), key=lambda t: (len(t[0][0]), sorted(t[0][0]), t[0][1]))}
    doc["f"] = {label(s): dump_scalar(lat.f[s]) for s in all_subsets(lat.n)}
    points = {}
    for rep in face_reports(lat, tol):
        if isinstance(rep, tuple):
            om, j, k = rep[1]
            points[f"{label(om)}:{j}{k}"] = None
        else:
            key = f"{label(rep.base)}:{rep.free[0]}{rep.free[1]}"
            points[key] = dump_vector(rep.point.normalized()) if rep.point is not None else None
    doc["face_points"] = points
    return doc


def _flat(v) -> bool:
    return not isinstance(v, (list, dict)) or (isinstance(v, list) and all(not isinstance(c, (list, dict)) for c in v))


def _dump(v, depth: int) -> str:
    pad = "  " * (depth + 1)
    if _flat(v):
        return json.dumps(v)
    if isinstance(v, list):
        return "[\n" + ",\n".join(pad + _dump(c, depth + 1) for c in v) + "\n" + "  " * depth + "]"
    if not v:
        return "{}"
    items = (pad + json.dumps(k) + ": " + _dump(c, depth + 1) for k, c in v.items())
    return "{\n" + ",\n".join(items) + "\n" + "  " * depth + "}"


def dumps(doc: dict) -> str:
    """Indented JSON with every innermost list on one line."""
    return _dump(doc, 0) + "\n"
