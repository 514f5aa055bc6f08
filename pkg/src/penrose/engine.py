"""Bordered-matrix machine: the 2^n subset lattice of conics or quadrics.

The bordered matrix has the base conic ``S0`` in the corner, lines ``p_j`` in
the first row and column, diagonal scalars ``d_j`` and off-diagonal scalars
``a_jk``.  Index 0 is the border; indices 1..n are the lines.  Every
subdeterminant takes its rows and columns in ascending order.

Named subdeterminants (``O`` a subset of 1..n):

* vertex      S_O        = |O+0 ; O+0|
* chord       p_{O,k}    = |O+k ; O+0|
* f-scalar    f_O        = |O ; O|          (f_{} = 1)
* face conic  H_{O,j,k}  = |O+0+j ; O+0+k|
* g-scalar    g_{O,j,k}  = |O+j ; O+k|
* diagonal    q_k        = |{1,2,3}-k ; {0,k}|   (n = 3)
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Sequence

from . import corpus
from .errors import IdentityViolation, IndexInSet, InputError, SizeMismatch, ZeroChord
from .matrix import PolyMatrix, extract_double_line, poly_det, poly_to_sym, rank
from .poly import Poly
from .projective import ProjHyperplane, ProjPoint, common_point, concurrent, proj_equal
from .scalar import EXACT, Scalar, coerce, common_mode, exact_sqrt

Subset = frozenset


def subset(*items: int | Iterable[int]) -> frozenset:
    out = set()
    for it in items:
        if isinstance(it, int):
            out.add(it)
        else:
            out.update(it)
    return frozenset(out)


def mask(s: Iterable[int]) -> int:
    return sum(1 << (i - 1) for i in s)


def label(s: Iterable[int]) -> str:
    return "S_{" + "".join(str(i) for i in sorted(s)) + "}"


def parse_label(text: str) -> frozenset:
    t = text.strip()
    if not (t.startswith("S_{") and t.endswith("}")):
        raise InputError(f"bad vertex label {text!r}")
    body = t[3:-1]
    if not body.isdigit() and body:
        raise InputError(f"bad vertex label {text!r}")
    return frozenset(int(c) for c in body)


def all_subsets(n: int) -> list[frozenset]:
    """Subsets of 1..n ordered by size, then lexicographically."""
    out = []
    for r in range(n + 1):
        out.extend(frozenset(c) for c in combinations(range(1, n + 1), r))
    return out


@dataclass(frozen=True)
class PenroseParams:
    S0: Poly
    lines: tuple[Poly, ...]
    d: tuple[Scalar, ...]
    a: dict  # {(j, k): a_jk} with 1 <= j < k <= n

    def __post_init__(self):
        n = len(self.lines)
        if n < 1 or n > 4:
            raise InputError("between 1 and 4 lines are supported")
        if len(self.d) != n:
            raise SizeMismatch("one diagonal scalar per line")
        m = self.S0.nvars
        if m not in (3, 4):
            raise InputError("S0 must have 3 or 4 variables")
        if not self.S0.is_zero() and self.S0.degree != 2:
            raise InputError("S0 must be quadratic")
        mode = self.S0.mode
        for p in self.lines:
            if p.nvars != m:
                raise InputError("lines and S0 disagree on the variable count")
            if p.mode != mode:
                raise InputError("lines and S0 disagree on the arithmetic mode")
            if p.is_zero() or p.degree != 1:
                raise InputError("lines must be nonzero linear forms")
        a = {}
        for (j, k), v in dict(self.a).items():
            j, k = min(j, k), max(j, k)
            if j == k or not (1 <= j <= n and 1 <= k <= n):
                raise InputError(f"bad off-diagonal index ({j},{k})")
            a[(j, k)] = coerce(v, mode)
        for j, k in combinations(range(1, n + 1), 2):
            a.setdefault((j, k), coerce(0, mode))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "d", tuple(coerce(v, mode) for v in self.d))

    @property
    def n(self) -> int:
        return len(self.lines)

    @property
    def m(self) -> int:
        return self.S0.nvars

    @property
    def mode(self) -> str:
        return self.S0.mode

    def off(self, j: int, k: int) -> Scalar:
        return self.a[(min(j, k), max(j, k))]

    def line(self, j: int) -> Poly:
        return self.lines[j - 1]

    @classmethod
    def preset(cls, S0: Poly, lines: Sequence[Poly], a: Scalar = 0, b: Scalar = 0, c: Scalar = 0) -> "PenroseParams":
        """Unit-diagonal constructor: d_j = -1, (a, b, c) = (a_23, a_13, a_12)."""
        return cls(S0, tuple(lines), (-1,) * len(lines), {(2, 3): a, (1, 3): b, (1, 2): c})

    def replace(self, **kw) -> "PenroseParams":
        data = dict(S0=self.S0, lines=self.lines, d=self.d, a=dict(self.a))
        data.update(kw)
        return PenroseParams(**data)


def random_params(rng: random.Random, m: int = 3, n: int = 3, preset: bool = False) -> PenroseParams:
    S0 = corpus.form(rng, m, 2)
    while S0.is_zero():
        S0 = corpus.form(rng, m, 2)
    lines = tuple(corpus.line(rng, m) for _ in range(n))
    a = {(j, k): corpus.rational(rng) for j, k in combinations(range(1, n + 1), 2)}
    if preset:
        d = (-1,) * n
    else:
        d = tuple(corpus.rational(rng, nonzero=True) for _ in range(n))
    return PenroseParams(S0, lines, d, a)


def random_regular(rng: random.Random, m: int = 3, n: int = 3, preset: bool = False, top: bool = True):
    """Resample until every vertex of the lattice is regular; returns (params, lattice)."""
    while True:
        params = random_params(rng, m, n, preset)
        lat = build_lattice(params, verify=False)
        if all(rank(poly_to_sym(v)) == m for s, v in lat.vertices.items() if top or len(s) < n):
            return params, lat


def bordered_matrix(params: PenroseParams) -> PolyMatrix:
    m, n, mode = params.m, params.n, params.mode
    rows = [[params.S0] + list(params.lines)]
    for i in range(1, n + 1):
        row = [params.line(i)]
        for j in range(1, n + 1):
            v = params.d[i - 1] if i == j else params.off(i, j)
            row.append(Poly.const(m, v, mode))
        rows.append(row)
    return PolyMatrix(rows)


def subdet(B: PolyMatrix, rows: Iterable[int], cols: Iterable[int]) -> Poly:
    rows, cols = sorted(set(rows)), sorted(set(cols))
    if len(rows) != len(cols):
        raise SizeMismatch("row and column sets differ in size")
    for i in rows + cols:
        if not 0 <= i < B.order:
            raise SizeMismatch(f"index {i} out of range")
    if not rows:
        return Poly.const(B.nvars, 1, B.mode)
    return poly_det(B.sub(rows, cols))


def _check_free(omega, *ks):
    for k in ks:
        if k in omega:
            raise IndexInSet(f"index {k} already in {sorted(omega)}")


def vertex(params: PenroseParams, omega: Iterable[int], B: PolyMatrix | None = None) -> Poly:
    omega = subset(omega)
    B = B or bordered_matrix(params)
    return subdet(B, omega | {0}, omega | {0})


def chord(params: PenroseParams, omega: Iterable[int], k: int, B: PolyMatrix | None = None) -> Poly:
    omega = subset(omega)
    _check_free(omega, k)
    B = B or bordered_matrix(params)
    return subdet(B, omega | {k}, omega | {0})


def f_scalar(params: PenroseParams, omega: Iterable[int], B: PolyMatrix | None = None) -> Scalar:
    omega = subset(omega)
    B = B or bordered_matrix(params)
    return subdet(B, omega, omega).constant()


def g_scalar(params: PenroseParams, omega: Iterable[int], j: int, k: int, B: PolyMatrix | None = None) -> Scalar:
    omega = subset(omega)
    _check_free(omega, j, k)
    B = B or bordered_matrix(params)
    return subdet(B, omega | {j}, omega | {k}).constant()


def face_conic(params: PenroseParams, omega: Iterable[int], j: int, k: int, B: PolyMatrix | None = None) -> Poly:
    omega = subset(omega)
    _check_free(omega, j, k)
    if j == k:
        raise InputError("face needs two distinct free indices")
    B = B or bordered_matrix(params)
    return subdet(B, omega | {0, j}, omega | {0, k})


def face_diagonal(params: PenroseParams, k: int, B: PolyMatrix | None = None) -> Poly:
    if params.n != 3:
        raise InputError("face diagonals are defined for the cube (n = 3)")
    B = B or bordered_matrix(params)
    rest = {1, 2, 3} - {k}
    return subdet(B, rest, {0, k})


# --- lattice -------------------------------------------------------------------


@dataclass
class PenroseLattice:
    params: PenroseParams
    vertices: dict = field(default_factory=dict)    # subset -> Poly
    chords: dict = field(default_factory=dict)      # (subset, k) -> Poly
    f: dict = field(default_factory=dict)           # subset -> Scalar
    face_conics: dict = field(default_factory=dict)  # (subset, j, k) -> Poly, j < k
    g: dict = field(default_factory=dict)           # (subset, j, k) -> Scalar
    diagonals: dict = field(default_factory=dict)   # k -> Poly

    @property
    def n(self) -> int:
        return self.params.n

    def edges(self) -> list[tuple[frozenset, int]]:
        return [(om, k) for om in all_subsets(self.n) for k in range(1, self.n + 1) if k not in om]

    def faces(self) -> list[tuple[frozenset, int, int]]:
        out = []
        for j, k in combinations(range(1, self.n + 1), 2):
            rest = [i for i in range(1, self.n + 1) if i not in (j, k)]
            for r in range(len(rest) + 1):
                for om in combinations(rest, r):
                    out.append((frozenset(om), j, k))
        return sorted(out, key=lambda t: (len(t[0]), sorted(t[0]), t[1], t[2]))


def edge_residual(lat: PenroseLattice, omega: frozenset, k: int) -> Poly:
    up = omega | {k}
    p = lat.chords[(omega, k)]
    lhs = lat.vertices[omega].scale(lat.f[up]) - lat.vertices[up].scale(lat.f[omega])
    return lhs - p * p


def build_lattice(params: PenroseParams, verify: bool = True) -> PenroseLattice:
    B = bordered_matrix(params)
    lat = PenroseLattice(params)
    n = params.n
    for om in all_subsets(n):
        lat.vertices[om] = subdet(B, om | {0}, om | {0})
        lat.f[om] = subdet(B, om, om).constant()
        for k in range(1, n + 1):
            if k not in om:
                lat.chords[(om, k)] = subdet(B, om | {k}, om | {0})
    for om, j, k in lat.faces():
        lat.face_conics[(om, j, k)] = subdet(B, om | {0, j}, om | {0, k})
        lat.g[(om, j, k)] = subdet(B, om | {j}, om | {k}).constant()
        lat.g[(om, k, j)] = subdet(B, om | {k}, om | {j}).constant()
    if n == 3:
        for k in (1, 2, 3):
            lat.diagonals[k] = subdet(B, {1, 2, 3} - {k}, {0, k})
    if verify:
        for om, k in lat.edges():
            if not edge_residual(lat, om, k).is_zero(1e-9 if params.mode != EXACT else None):
                raise IdentityViolation(f"edge identity fails on {label(om)} -> {label(om | {k})}")
    return lat


# --- faces -----------------------------------------------------------------------


@dataclass(frozen=True)
class FaceReport:
    base: frozenset
    free: tuple[int, int]
    chords: tuple[Poly, Poly, Poly, Poly]
    concurrent: bool
    point: ProjPoint | None
    notes: tuple[str, ...] = ()


def face_chords(lat: PenroseLattice, omega: frozenset, j: int, k: int) -> tuple[Poly, Poly, Poly, Poly]:
    return (lat.chords[(omega, j)], lat.chords[(omega, k)],
            lat.chords[(omega | {j}, k)], lat.chords[(omega | {k}, j)])


def face_point(lat: PenroseLattice, omega: Iterable[int], j: int, k: int, tol: float = 1e-9) -> FaceReport:
    omega = subset(omega)
    j, k = min(j, k), max(j, k)
    chords = face_chords(lat, omega, j, k)
    if any(c.is_zero(tol) for c in chords):
        raise ZeroChord(f"a chord of face {label(omega)}:{j}{k} vanishes")
    hyper = [ProjHyperplane.from_poly(c) for c in chords]
    ok = concurrent(hyper, tol)
    notes = []
    point = None
    if ok:
        try:
            point = common_point(hyper, tol)
        except Exception:
            notes.append("all four chords coincide")
        distinct = []
        for h in hyper:
            if not any(h == g for g in distinct):
                distinct.append(h)
        if len(distinct) == 2:
            notes.append("chords collapse to two")
    else:
        notes.append("not concurrent")
    return FaceReport(omega, (j, k), chords, ok, point, tuple(notes))


def face_reports(lat: PenroseLattice, tol: float = 1e-9) -> list[FaceReport | tuple]:
    """Every face; faces with a vanishing chord are returned as ("zero chord", face) flags."""
    out = []
    for om, j, k in lat.faces():
        try:
            out.append(face_point(lat, om, j, k, tol))
        except ZeroChord:
            out.append(("zero chord", (om, j, k)))
    return out


# --- identity suites ---------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    ok: bool
    residual: object = None
    detail: str = ""


def _zero(p: Poly) -> bool:
    return p.is_zero(1e-9 if p.mode != EXACT else None)


def verify_edges(lat: PenroseLattice) -> list[Check]:
    out = []
    for om, k in lat.edges():
        r = edge_residual(lat, om, k)
        out.append(Check(f"edge {label(om)}-{label(om | {k})}", "edge identity f*S - f*S = p^2", _zero(r), r))
    return out


def face_conic_residual(lat: PenroseLattice, omega: frozenset, j: int, k: int) -> Poly:
    V = lat.vertices
    H = lat.face_conics[(omega, min(j, k), max(j, k))]
    return V[omega | {k}] * V[omega | {j}] - V[omega] * V[omega | {j, k}] - H * H


def verify_face_conics(lat: PenroseLattice) -> list[Check]:
    out = []
    for om, j, k in lat.faces():
        for a, b in ((j, k), (k, j)):
            r = face_conic_residual(lat, om, a, b)
            out.append(Check(f"face conic {label(om)} ({a},{b})", "face conic identity", _zero(r), r))
    return out


def face_diagonal_residual(lat: PenroseLattice, m: int, j: int, k: int) -> Poly:
    P = lat.chords
    q = lat.diagonals
    e = frozenset()
    lhs = P[(frozenset({j}), m)] * P[(frozenset({k}), m)] - P[(e, m)] * P[(frozenset({j, k}), m)]
    return lhs - q[j] * q[k]


def verify_face_diagonals(lat: PenroseLattice, tol: float = 1e-9) -> list[Check]:
    """The degree-2 identity for every permutation, and incidence with opposite face points."""
    if lat.n != 3:
        return []
    out = []
    for m, j, k in permutations((1, 2, 3)):
        r = face_diagonal_residual(lat, m, j, k)
        out.append(Check(f"face diagonal m={m} j={j} k={k}", "face diagonal identity", _zero(r), r))
    for k in (1, 2, 3):
        i, j = [t for t in (1, 2, 3) if t != k]
        qk = ProjHyperplane.from_poly(lat.diagonals[k]) if not lat.diagonals[k].is_zero() else None
        for om in (frozenset(), frozenset({k})):
            try:
                rep = face_point(lat, om, i, j, tol)
            except ZeroChord:
                out.append(Check(f"diagonal q{k} through face {label(om)}:{i}{j}", "face diagonal incidence", True, None, "zero chord"))
                continue
            if qk is None or rep.point is None:
                out.append(Check(f"diagonal q{k} through face {label(om)}:{i}{j}", "face diagonal incidence", True, None,
                                 "undetermined"))
                continue
            from .projective import incident
            out.append(Check(f"diagonal q{k} through face {label(om)}:{i}{j}", "face diagonal incidence",
                             incident(rep.point, qk, tol)))
    return out


def relation_residuals(lat: PenroseLattice, j: int, l: int, m: int) -> tuple[Poly, Poly]:
    p = lat.params
    H = lambda om, a, b: lat.face_conics[(om, min(a, b), max(a, b))]
    e, J = frozenset(), frozenset({j})
    q = lat.diagonals
    g_j = lat.g[(J, l, m)]
    g_e = lat.g[(e, l, m)]
    r1 = H(e, l, m).scale(g_j) - H(J, l, m).scale(g_e) - q[l] * q[m]
    r2 = H(e, j, m).scale(g_j) - H(J, m, l).scale(p.off(j, m)) - lat.chords[(J, m)] * q[m]
    return r1, r2


def verify_diag_relations(lat: PenroseLattice) -> list[Check]:
    if lat.n != 3:
        return []
    out = []
    for j, l, m in permutations((1, 2, 3)):
        r1, r2 = relation_residuals(lat, j, l, m)
        out.append(Check(f"relation g*H - g*H = q q (j={j} l={l} m={m})", "face conic / diagonal relation", _zero(r1), r1))
        out.append(Check(f"relation g*H - a*H = p q (j={j} l={l} m={m})", "face conic / chord relation", _zero(r2), r2))
    return out


def desnanot_jacobi_residual(B: PolyMatrix, rows: Sequence[int], cols: Sequence[int],
                             r: tuple[int, int], c: tuple[int, int]) -> Poly:
    """|R;C| |R-r;C-c| - (|R-r1;C-c1| |R-r2;C-c2| - |R-r1;C-c2| |R-r2;C-c1|)."""
    R, C = sorted(rows), sorted(cols)
    r1, r2 = r
    c1, c2 = c
    d = lambda rr, cc: subdet(B, [i for i in R if i not in rr], [j for j in C if j not in cc])
    lhs = d((), ()) * d((r1, r2), (c1, c2))
    rhs = d((r1,), (c1,)) * d((r2,), (c2,)) - d((r1,), (c2,)) * d((r2,), (c1,))
    return lhs - rhs


def verify_all(lat: PenroseLattice) -> list[Check]:
    checks = verify_edges(lat)
    for rep in face_reports(lat):
        if isinstance(rep, tuple):
            om, j, k = rep[1]
            checks.append(Check(f"face point {label(om)}:{j}{k}", "face chords concurrent", True, None, "zero chord (flagged)"))
        else:
            checks.append(Check(f"face point {label(rep.base)}:{rep.free[0]}{rep.free[1]}", "face chords concurrent",
                                rep.concurrent, None, "; ".join(rep.notes)))
    checks += verify_face_conics(lat)
    checks += verify_face_diagonals(lat)
    checks += verify_diag_relations(lat)
    return checks


# --- degeneracies --------------------------------------------------------------------


@dataclass(frozen=True)
class Finding:
    kind: str
    where: str
    prediction: str
    verified: bool | None  # None: reported only
    detail: str = ""


def _proportional_or_zero(f: Poly, g: Poly) -> bool:
    if f.is_zero() or g.is_zero():
        return True
    return proj_equal(f.linear_vector(), g.linear_vector())


def classify_degeneracies(params: PenroseParams, lat: PenroseLattice | None = None) -> list[Finding]:
    lat = lat or build_lattice(params, verify=False)
    n = params.n
    out: list[Finding] = []
    if params.mode != EXACT:
        raise InputError("degeneracy classification runs in exact mode")
    # S0 itself
    r0 = rank(poly_to_sym(params.S0)) if not params.S0.is_zero() else 0
    if r0 == 1:
        ok = all(rank(poly_to_sym(lat.vertices[frozenset({j})])) <= 2 for j in range(1, n + 1))
        out.append(Finding("S0 double line", label(()), "first-layer vertices are line pairs", ok))
    # vanishing off-diagonal entries
    for (j, k), v in sorted(params.a.items()):
        if v == 0:
            e = frozenset()
            ok = (_proportional_or_zero(lat.chords[(e, j)], lat.chords[(frozenset({k}), j)])
                  and _proportional_or_zero(lat.chords[(e, k)], lat.chords[(frozenset({j}), k)]))
            out.append(Finding("a_jk = 0", f"a_{j}{k}", "face chords collapse to two", ok))
    # vanishing f-scalars
    for om in all_subsets(n):
        if not om or lat.f[om] != 0:
            continue
        lower = [om - {k} for k in sorted(om)]
        clean = [lo for lo in lower if lat.f[lo] != 0]
        if len(clean) < len(lower) and not clean:
            out.append(Finding("f vanishes with lower layer", f"f_{''.join(map(str, sorted(om)))}",
                               "not analysed", None))
            continue
        lo = clean[0]
        k = next(iter(om - lo))
        p = lat.chords[(lo, k)]
        predicted = (p * p).scale(Fraction(-1) / lat.f[lo])
        ok = lat.vertices[om] == predicted
        if len(om) == 1:
            j = k
            ok = ok and lat.vertices[om] == -(params.line(j) * params.line(j))
            for kk in range(1, n + 1):
                if kk != j:
                    ok = ok and _proportional_or_zero(lat.chords[(om, kk)], params.line(j))
            out.append(Finding("d_j = 0", f"d_{j}", "S_{j} = -p_j^2; adjacent chords along p_j", ok))
        elif len(om) == 2:
            j, k2 = sorted(om)
            V = lat.vertices[om]
            ok = ok and (V.is_zero() or rank(poly_to_sym(V)) == 1)
            detail = ""
            dj, dk = params.d[j - 1], params.d[k2 - 1]
            sj, sk = exact_sqrt(abs(dj)), exact_sqrt(abs(dk))
            if ok and not V.is_zero() and sj is not None and sk is not None:
                line, _ = extract_double_line(V)
                pj, pk = params.line(j), params.line(k2)
                cands = [pk.scale(sj) + pj.scale(sk), pk.scale(sj) - pj.scale(sk)]
                ok = any(_proportional_or_zero(line, c) for c in cands)
                detail = "double line matches sqrt(d_j) p_k +- sqrt(d_k) p_j"
            out.append(Finding("f_jk = 0", f"f_{j}{k2}", "S_{jk} is a double line", ok, detail))
        else:
            V = lat.vertices[om]
            ok = ok and (V.is_zero() or rank(poly_to_sym(V)) == 1)
            out.append(Finding("f_O = 0", f"f_{''.join(map(str, sorted(om)))}", "vertex is a double line", ok))
    return out
