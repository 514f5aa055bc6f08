"""Completing seven vertices of a cube of conics (or quadrics) to eight.

Vertex labels follow the subset lattice: ``frozenset()`` is S0, ``{i}`` the
first layer, ``{1,2,3} - {i}`` the second layer and ``{1,2,3}`` the missing
eighth vertex.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping

from . import linalg
from .engine import PenroseLattice, PenroseParams, all_subsets, build_lattice, face_point, face_reports, label, vertex
from .errors import (AxesIdentical, CoincidentArguments, DegenerateBasis, IncidentPolarPair, InconsistentFace, InputError,
                     NeedsDualPartner, NoContact, NoSecondCompletion, PrereqNotMet, ZeroChord)
from .matrix import SymMatrix, adjugate, double_line_scale, extract_double_line, normalize_line, poly_to_sym, rank, sym_to_poly
from .poly import Poly, monomials
from .projective import (CompleteConic, CompleteQuadric, Line3D, ProjHyperplane, ProjPoint, as_complete, common_hyperplane,
                         common_point, concurrent, double_contact, incident, join3, line_meet_plane, meet3, proj_equal,
                         proj_equal_sym, ring_contact)
from .scalar import DEFAULT_TOL, EXACT, FLOAT, exact_sqrt

FULL = frozenset({1, 2, 3})
SEVEN = [s for s in all_subsets(3) if s != FULL]


def cube_edges(include_top: bool = False) -> list[tuple[frozenset, frozenset]]:
    out = []
    for s in all_subsets(3):
        for k in (1, 2, 3):
            if k not in s:
                t = s | {k}
                if include_top or t != FULL:
                    out.append((s, t))
    return out


def complement(i: int) -> frozenset:
    return FULL - {i}


@dataclass
class SevenConfig:
    """Seven complete conics or quadrics keyed by vertex subset."""

    vertices: dict

    def __post_init__(self):
        keys = set(self.vertices)
        if keys != set(SEVEN):
            raise InputError("a seven-vertex configuration needs exactly the seven lower vertices")
        self.vertices = {k: _lenient_complete(v) for k, v in self.vertices.items()}
        orders = {_prim(c).order for c in self.vertices.values()}
        modes = {_prim(c).mode for c in self.vertices.values()}
        if len(orders) != 1 or len(modes) != 1:
            raise InputError("vertices disagree on order or mode")

    @property
    def order(self) -> int:
        return self.primal(frozenset()).order

    @property
    def mode(self) -> str:
        return self.primal(frozenset()).mode

    def primal(self, s) -> SymMatrix:
        return _prim(self.vertices[frozenset(s)])

    def complete(self, s) -> CompleteConic | SymMatrix:
        """Complete element if known, else the bare (rank-deficient) primal."""
        return self.vertices[frozenset(s)]

    @classmethod
    def from_lattice(cls, lat: PenroseLattice) -> "SevenConfig":
        return cls({s: poly_to_sym(lat.vertices[s]) for s in SEVEN})


def _lenient_complete(v):
    if isinstance(v, Poly):
        v = poly_to_sym(v)
    if isinstance(v, SymMatrix):
        try:
            return as_complete(v)
        except NeedsDualPartner:
            return v
    return as_complete(v)


def _prim(v) -> SymMatrix:
    return v if isinstance(v, SymMatrix) else v.primal


def validate(seven: SevenConfig, tol: float = DEFAULT_TOL) -> dict:
    """Check the nine double contacts and the three complete faces; return the chords."""
    chords = {}
    for s, t in cube_edges():
        try:
            c = double_contact(seven.primal(s), seven.primal(t), tol)
        except NoContact as exc:
            raise NoContact(f"{label(s)} and {label(t)} are not in contact") from exc
        chords[(s, t)] = c.chord
    for j, k in combinations((1, 2, 3), 2):
        e, J, K = frozenset(), frozenset({j}), frozenset({k})
        face = [chords[(e, J)], chords[(e, K)], chords[(J, J | K)], chords[(K, J | K)]]
        if not concurrent(face, tol):
            raise InconsistentFace(f"chords of face {j}{k} are not concurrent")
    return chords


# --- parameter recovery ------------------------------------------------------------


def normalize_edge_scale(S0, T, tol: float = DEFAULT_TOL):
    """Scalar t with rank(S0 - t T) = 1; returns (t, t*T, chord)."""
    A, B = _prim(_lenient_complete(S0)), _prim(_lenient_complete(T))
    c = double_contact(A, B, tol)
    if c.t is None:
        raise NoContact("second argument is itself the double element")
    t = -c.t
    return t, B.scale(t), c.chord


@dataclass
class RecoveredParams:
    params: PenroseParams
    scales: dict          # vertex -> factor applied to the given primal to match the lattice vertex
    preset: bool          # True when d_j = -1 for all j
    notes: list = field(default_factory=list)


def _coords_in(f: Poly, basis: list[Poly], tol: float = DEFAULT_TOL):
    keys = sorted(set().union(*(set(b.coeffs) for b in basis), set(f.coeffs)))
    A = [[b.coefficient(k) for b in basis] for k in keys]
    if linalg.rank(A, tol) < len(basis):
        raise DegenerateBasis("basis polynomials are dependent")
    sol = linalg.solve(A, [f.coefficient(k) for k in keys], tol)
    return sol


def _fit_face(S: Poly, S0: Poly, pj: Poly, pk: Poly, dj, dk, tol):
    """Solve lam*S = (dj dk - a^2) S0 + 2a pj pk - dk pj^2 - dj pk^2 for (lam, a)."""
    if proj_equal(pj.linear_vector(), pk.linear_vector(), tol):
        raise DegenerateBasis("two chords of a face are proportional")
    sol = _coords_in(S, [S0, pj * pj, pj * pk, pk * pk], tol)
    if sol is None:
        raise InconsistentFace("second-layer vertex is not in the predicted face family")
    s0, sjj, sjk, skk = sol
    if _nz(sjj, S.mode, tol) is False:
        raise InconsistentFace("second-layer vertex has no square term along the first chord")
    lam = -dk / sjj
    a = lam * sjk / 2
    ok = _close(lam * skk, -dj, S.mode, tol) and _close(lam * s0, dj * dk - a * a, S.mode, tol)
    if not ok:
        raise InconsistentFace("face parameter inconsistent with the vertex (wrong branch)")
    return lam, a


def _nz(v, mode, tol):
    return v != 0 if mode == EXACT else abs(v) > tol


def _close(u, v, mode, tol):
    return u == v if mode == EXACT else abs(u - v) <= tol * max(1.0, abs(u), abs(v))


def recover_params(seven: SevenConfig, tol: float = DEFAULT_TOL) -> RecoveredParams:
    validate(seven, tol)
    mode = seven.mode
    e = frozenset()
    A0 = seven.primal(e)
    S0 = sym_to_poly(A0)
    lines, signs, cs = [], [], []
    for i in (1, 2, 3):
        t, tT, ch = normalize_edge_scale(A0, seven.primal({i}), tol)
        diff = sym_to_poly(tT - A0)            # = sign * c * l^2
        l, sign = extract_double_line(diff, tol)
        c = double_line_scale(diff, l) * sign  # positive
        lines.append(l)
        signs.append(sign)
        cs.append(c)
    # try the unit-diagonal normalization: S0' = S0 / c1, p_i = sqrt(c_i / c1) l_i
    notes = []
    preset = False
    if mode == EXACT and all(sg == signs[0] for sg in signs) and signs[0] == 1:
        roots = [exact_sqrt(c / cs[0]) for c in cs]
        if all(r is not None for r in roots):
            preset = True
            S0 = S0.scale(1 / cs[0])
            lines = [l.scale(r) for l, r in zip(lines, roots)]
            d = [Fraction(-1)] * 3
    elif mode == FLOAT and all(sg == 1 for sg in signs):
        preset = True
        S0 = S0.scale(1 / cs[0])
        lines = [l.scale((c / cs[0]) ** 0.5) for l, c in zip(lines, cs)]
        d = [-1.0] * 3
    if not preset:
        # general diagonal: d_i S0 - l_i^2 is proportional to S0 + sign_i c_i l_i^2
        d = [-1 / (sg * c) for sg, c in zip(signs, cs)]
        notes.append("diagonal entries recovered without the unit normalization")
    a = {}
    for m in (1, 2, 3):
        j, k = sorted(FULL - {m})
        S = sym_to_poly(seven.primal(complement(m)))
        _, a_jk = _fit_face(S, S0, lines[j - 1], lines[k - 1], d[j - 1], d[k - 1], tol)
        a[(j, k)] = a_jk
        if _close(d[j - 1] * d[k - 1] - a_jk * a_jk, 0 * a_jk, mode, tol):
            notes.append(f"degenerate face: vertex {label(complement(m))} is a double line")
    params = PenroseParams(S0, tuple(lines), tuple(d), a)
    scales = {}
    for s in SEVEN:
        v = vertex(params, s)
        given = sym_to_poly(seven.primal(s))
        scales[s] = _ratio(v, given, tol)
        if scales[s] is None:
            raise InconsistentFace(f"recovered parameters do not reproduce {label(s)}")
    return RecoveredParams(params, scales, preset, notes)


def _ratio(f: Poly, g: Poly, tol):
    """c with f = c g, or None."""
    if not proj_equal([f.coefficient(k) for k in sorted(set(f.coeffs) | set(g.coeffs))],
                      [g.coefficient(k) for k in sorted(set(f.coeffs) | set(g.coeffs))], tol):
        return None
    mono, val = max(g.coeffs.items(), key=lambda kv: abs(float(kv[1])))
    return f.coefficient(mono) / val


# --- completion ------------------------------------------------------------------


@dataclass
class CompletionResult:
    primary: SymMatrix
    complete: CompleteConic | None
    unique: bool
    params: RecoveredParams
    lattice: PenroseLattice
    second: SymMatrix | None = None
    second_mode: str | None = None
    second_residual: float | None = None
    notes: list = field(default_factory=list)


def _all_face_points_equal(lat: PenroseLattice, tol) -> bool:
    """All chords through one point (conics) or one axis (quadrics)."""
    vecs = [list(c.linear_vector()) for c in lat.chords.values() if not c.is_zero()]
    return linalg.rank(vecs, tol) <= 2


def complete(seven: SevenConfig, tol: float = DEFAULT_TOL) -> CompletionResult:
    rec = recover_params(seven, tol)
    lat = build_lattice(rec.params)
    top = poly_to_sym(lat.vertices[FULL])
    try:
        comp = as_complete(top)
    except NeedsDualPartner:
        comp = None
    unique = not _all_face_points_equal(lat, tol)
    res = CompletionResult(top, comp, unique, rec, lat, notes=list(rec.notes))
    if not unique:
        res.notes.append("all face points coincide: two completions")
        fam = shared_contact_family(seven, tol)
        sec = second_completion(seven, fam, tol, determinant=top)
        res.second, res.second_mode, res.second_residual = sec.matrix, sec.mode, sec.residual
        res.notes.append("primary completion comes from the determinant formula and is stable under perturbation")
    return res


# --- shared contact family -------------------------------------------------------


def _disc(u, v, w):
    return 4 * u * w - v * v


def _disc_polar(b, c):
    u, v, w = b
    u2, v2, w2 = c
    return 4 * (u * w2 + u2 * w) - 2 * v * v2


@dataclass
class SharedContactFamily:
    """Conics/quadrics alpha*S0 + binary form in two chord directions.

    ``generators`` = [S0, l1^2, l1*l2, l2^2]; a member is a 4-vector of
    coordinates (alpha, u, v, w).  The double elements of the family form
    the conic V: alpha = 0, 4uw - v^2 = 0.
    """

    generators: list
    axis: tuple             # (l1, l2) spanning the chords
    coords: dict            # vertex -> coordinates of the given primal

    def member(self, c) -> Poly:
        out = self.generators[0].scale(c[0])
        for g, v in zip(self.generators[1:], c[1:]):
            out = out + g.scale(v)
        return out

    def on_V(self, c, tol=DEFAULT_TOL) -> bool:
        mode = self.generators[0].mode
        return (not _nz(c[0], mode, tol)) and not _nz(_disc(*c[1:]), mode, tol)


def shared_contact_family(seven: SevenConfig, tol: float = DEFAULT_TOL) -> SharedContactFamily:
    chords = validate(seven, tol)
    vecs = [list(c.coords) for c in chords.values()]
    if linalg.rank(vecs, tol) != 2:
        raise PrereqNotMet("chords do not all pass through one point (or share one axis)")
    R, piv = linalg.rref(vecs, tol)
    l1 = Poly.linear(normalize_line(R[0], seven.mode))
    l2 = Poly.linear(normalize_line(R[1], seven.mode))
    S0 = sym_to_poly(seven.primal(frozenset()))
    gens = [S0, l1 * l1, l1 * l2, l2 * l2]
    coords = {}
    for s in SEVEN:
        c = _coords_in(sym_to_poly(seven.primal(s)), gens, tol)
        if c is None:
            raise PrereqNotMet(f"{label(s)} is outside the shared-contact family")
        coords[s] = c
    return SharedContactFamily(gens, (l1, l2), coords)


@dataclass
class SecondCompletion:
    matrix: SymMatrix
    coords: tuple
    mode: str
    residual: float


def _cone(sig, B, tau, b):
    return sig * sig * _disc(*b) - sig * tau * _disc_polar(b, B) + tau * tau * _disc(*B)


def contact_residual(T: SymMatrix, S: SymMatrix) -> float:
    """Scaled size of the 2x2 minors of the best rank-one member of span{T, S}."""
    from .projective import double_contacts
    Tf, Sf = T.to_float(), S.to_float()
    best = float("inf")
    try:
        cands = double_contacts(Tf, Sf, tol=1e-6)
    except Exception:
        cands = []
    for c in cands:
        M = Sf if c.t is None else Tf + Sf.scale(c.t)
        k = M.order
        mx = max(M.max_abs(), 1e-300)
        minors = [abs(M[i, j] * M[p, q] - M[i, q] * M[p, j]) for i in range(k) for p in range(i + 1, k)
                  for j in range(k) for q in range(j + 1, k)]
        best = min(best, max(minors) / (mx * mx))
    return best


def second_completion(seven: SevenConfig, family: SharedContactFamily | None = None, tol: float = DEFAULT_TOL,
                      determinant: SymMatrix | None = None) -> SecondCompletion:
    family = family or shared_contact_family(seven, tol)
    mode = seven.mode
    S = [family.coords[complement(i)] for i in (1, 2, 3)]
    sig = [s[0] for s in S]
    Bs = [tuple(s[1:]) for s in S]

    def plane(i, j):
        # sig_j^2 C_i - sig_i^2 C_j = tau * L_ij(T); L_ij is linear in T = (tau, u, v, w)
        si, sj = sig[i], sig[j]
        row = []
        for idx in range(4):
            e = [0, 0, 0, 0]
            e[idx] = 1
            tau, b = e[0], tuple(e[1:])
            val = si * sj * (si * _disc_polar(b, Bs[j]) - sj * _disc_polar(b, Bs[i]))
            val += tau * (sj * sj * _disc(*Bs[i]) - si * si * _disc(*Bs[j]))
            row.append(val)
        return row

    rows = [plane(0, 1), plane(0, 2)]
    ker = linalg.nullspace(rows, tol)
    if len(ker) != 2:
        raise NoSecondCompletion("residual conics do not meet in two points")
    K1, K2 = ker

    def cone1(c):
        return _cone(sig[0], Bs[0], c[0], tuple(c[1:]))

    # C1(mu K1 + lam K2) = c0 mu^2 + c1 mu lam + c2 lam^2
    c0 = cone1(K1)
    c2 = cone1(K2)
    mid = cone1(tuple(a + b for a, b in zip(K1, K2)))
    c1 = mid - c0 - c2
    pts = _solve_binary_quadratic(c0, c1, c2, mode)
    cands = []
    for mu, lam, exact in pts:
        vec = tuple(mu * a + lam * b for a, b in zip(K1, K2)) if exact else \
            tuple(float(mu) * float(a) + float(lam) * float(b) for a, b in zip(K1, K2))
        cands.append((vec, exact))
    det_coords = None
    if determinant is not None:
        try:
            det_coords = _coords_in(sym_to_poly(determinant), family.generators, tol)
        except DegenerateBasis:
            det_coords = None
    chosen = None
    for vec, exact in cands:
        gens = family.generators if exact else [g.to_float() for g in family.generators]
        if family.on_V(vec, tol) if exact else (abs(vec[0]) <= 1e-9 * max(map(abs, vec)) and
                                                 abs(_disc(*vec[1:])) <= 1e-9 * max(map(abs, vec)) ** 2):
            continue
        if det_coords is not None and proj_equal([float(v) for v in vec] if not exact else list(vec),
                                                 [float(v) for v in det_coords] if not exact else list(det_coords),
                                                 1e-9):
            continue
        chosen = (vec, exact)
        break
    if chosen is None:
        raise NoSecondCompletion("the only completions are the determinant one and double elements")
    vec, exact = chosen
    fam = SharedContactFamily([g if exact else g.to_float() for g in family.generators], family.axis, family.coords)
    M = poly_to_sym(fam.member(vec))
    resid = max(contact_residual(M, seven.primal(complement(i))) for i in (1, 2, 3))
    return SecondCompletion(M, vec, EXACT if exact else FLOAT, 0.0 if exact and resid < 1e-12 else resid)


def _solve_binary_quadratic(c0, c1, c2, mode):
    """Points (mu : lam) with c0 mu^2 + c1 mu lam + c2 lam^2 = 0; third entry marks exactness."""
    exact = mode == EXACT
    if exact and c0 == 0 and c1 == 0 and c2 == 0:
        raise NoSecondCompletion("line lies on the cone")
    if (c2 == 0) if exact else abs(c2) <= 1e-15 * max(abs(c0), abs(c1), 1.0):
        # mu (c0 mu + c1 lam) = 0
        one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
        return [(zero, one, exact), (c1, -c0, exact)]
    disc = c1 * c1 - 4 * c0 * c2
    if exact:
        if disc < 0:
            raise NoSecondCompletion("no real completion besides double elements")
        r = exact_sqrt(disc)
        if r is not None:
            return [(2 * c2, -c1 + s * r, True) for s in (1, -1)]
        c0, c1, c2, disc = float(c0), float(c1), float(c2), float(disc)
    if disc < -1e-12 * max(1.0, c1 * c1):
        raise NoSecondCompletion("no real completion besides double elements")
    sq = max(disc, 0.0) ** 0.5
    return [(2 * c2, -c1 + s * sq, False) for s in (1, -1)]


# --- quadric completion in the (O, X1, X2, X3) basis -----------------------------------


@dataclass
class FaceAxes:
    """Ring planes/points of the nine edges and the axes/spears of the faces at the top vertex."""

    planes: dict            # (n, i) -> ring plane p^n_i between T^n and S_i
    points: dict            # (n, i) -> ring point P^n_i
    axes: dict              # n -> axis of the face through T^n, S_i, S_j, T^0
    spears: dict            # n -> spear of that face


def top_faces(seven: SevenConfig, tol: float = DEFAULT_TOL) -> FaceAxes:
    if seven.order != 4:
        raise InputError("face axes need quadrics")
    planes, points = {}, {}
    for n in (1, 2, 3):
        for i in (1, 2, 3):
            if i == n:
                continue
            rc = ring_contact(seven.complete(complement(i)), seven.complete({n}), tol)
            planes[(n, i)], points[(n, i)] = rc.plane, rc.point
    axes, spears = {}, {}
    for n in (1, 2, 3):
        i, j = sorted(FULL - {n})
        try:
            axes[n] = meet3(planes[(n, i)], planes[(n, j)])
        except CoincidentArguments as exc:
            raise AxesIdentical(f"ring planes of face {n} coincide") from exc
        try:
            spears[n] = join3(points[(n, i)], points[(n, j)])
        except CoincidentArguments as exc:
            raise AxesIdentical(f"ring points of face {n} coincide") from exc
    return FaceAxes(planes, points, axes, spears)


def complete_quadric_via_basis(seven: SevenConfig, tol: float = DEFAULT_TOL) -> CompleteQuadric | SymMatrix:
    fa = top_faces(seven, tol)
    if len({fa.axes[n] for n in (1, 2, 3)}) == 1:
        raise AxesIdentical("all face axes coincide")
    try:
        O = common_point(list(fa.planes.values()), tol)
    except CoincidentArguments as exc:
        raise AxesIdentical("ring planes do not meet in a single point") from exc
    try:
        o = common_hyperplane(list(fa.points.values()), tol)
    except CoincidentArguments as exc:
        raise AxesIdentical("ring points do not span a single plane") from exc
    if incident(O, o, tol):
        raise IncidentPolarPair("apex lies on its polar plane; use complete() instead")
    X = [line_meet_plane(fa.axes[n], o) for n in (1, 2, 3)]
    cols = [list(O.coords)] + [list(x.coords) for x in X]
    M = linalg.transpose(cols)
    if linalg.rank(M, tol) < 4:
        raise DegenerateBasis("face axes are coplanar; use complete() instead")
    local = {}
    for i in (1, 2, 3):
        L = seven.primal(complement(i)).congruent(M)
        alpha = L[0, 0]
        if not _nz(alpha, seven.mode, tol):
            raise IncidentPolarPair("apex lies on a second-layer quadric")
        local[i] = L.scale(1 / alpha)
    A, B, C = local[1], local[2], local[3]
    zero = 0 * A[0, 0]
    one = A[0, 0]
    checks = [(C[1, 1], B[1, 1]), (A[2, 2], C[2, 2]), (A[3, 3], B[3, 3])]
    for u, v in checks:
        if not _close(u, v, seven.mode, max(tol, 1e-7) if seven.mode == FLOAT else tol):
            raise InconsistentFace("second-layer quadrics disagree in the adapted basis")
    D = [[one, zero, zero, zero],
         [zero, C[1, 1], C[1, 2], B[1, 3]],
         [zero, C[1, 2], A[2, 2], A[2, 3]],
         [zero, B[1, 3], A[2, 3], A[3, 3]]]
    Minv = linalg.inverse(M)
    T = linalg.matmul(linalg.transpose(Minv), linalg.matmul(D, Minv))
    T0 = SymMatrix([[T[i][j] if i <= j else T[j][i] for j in range(4)] for i in range(4)], seven.mode)
    try:
        return as_complete(T0)
    except NeedsDualPartner:
        return T0


CASES = {
    1: "regular",
    2: "double plane with a regular dual conic",
    3: "cone with a double dual point",
    4: "double plane with an incident double point",
}


@dataclass
class Refinement:
    case: int
    axes_coplanar: bool
    spears_concurrent: bool
    predicted_rank: int
    observed_rank: int
    dual_rank: int | None
    verified: bool

    @property
    def description(self) -> str:
        return CASES[self.case]


def _line_points(L: Line3D):
    return [list(c) for c in linalg.transpose(L.point_matrix()) if any(v != 0 for v in c)]


def _line_planes(L: Line3D):
    return [list(c) for c in linalg.transpose(L.plane_matrix()) if any(v != 0 for v in c)]


def refine_classify(top, seven: SevenConfig, tol: float = DEFAULT_TOL) -> Refinement:
    """Type of the eighth quadric from the axes and spears of the faces meeting at it."""
    fa = top_faces(seven, tol)
    axes_coplanar = linalg.rank([p for n in (1, 2, 3) for p in _line_points(fa.axes[n])], tol) <= 3
    spears_concurrent = linalg.rank([h for n in (1, 2, 3) for h in _line_planes(fa.spears[n])], tol) <= 3
    case = 1 + int(axes_coplanar) + 2 * int(spears_concurrent)
    predicted = {1: 4, 2: 1, 3: 3, 4: 1}[case]
    primal = top.primal if isinstance(top, CompleteConic) else top
    dual = top.dual if isinstance(top, CompleteConic) else None
    observed = rank(primal, tol)
    dual_rank = rank(dual, tol) if dual is not None else None
    ok = observed == predicted
    if dual_rank is not None:
        ok = ok and dual_rank == {1: 4, 2: 3, 3: 1, 4: 1}[case]
    return Refinement(case, axes_coplanar, spears_concurrent, predicted, observed, dual_rank, ok)
