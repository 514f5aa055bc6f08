"""Classical incidence theorems as special Penrose lattices.

Each builder returns a :class:`ScenarioInstance` carrying two independent
verdicts: one read off the lattice (carriers of double lines, the eighth
vertex) and one from a direct classical construction on the raw data.

Sign convention used throughout: when S0 = m^2 and the first-layer vertex
{i} is the line pair (l_i, l_i') meeting on m, the lines are scaled so that
m = l_i + l_i', giving p_i = (l_i' - l_i) / 2 and d_i = 1/4.  Then
sigma_ij = +1 puts the double line S_{ij} through l_i ^ l_j and l_i' ^ l_j'
and sigma_ij = -1 through the crossed points l_i ^ l_j' and l_i' ^ l_j.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Sequence

from . import linalg
from .engine import PenroseLattice, PenroseParams, build_lattice, verify_all
from .errors import (ConcentricCircles, DegeneratePosition, InputError, InteriorPoint, IrrationalData, MathViolation,
                     PenroseError)
from .matrix import SymMatrix, adjugate, extract_double_line, poly_to_sym, rank
from .poly import Poly
from .projective import proj_equal
from .scalar import DEFAULT_TOL, EXACT, FLOAT, exact_sqrt, mode_of

PAIRS = ((1, 2), (1, 3), (2, 3))
FULL = frozenset({1, 2, 3})


def cross(u, v):
    return [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]


def det3(a, b, c):
    return sum(x * y for x, y in zip(a, cross(b, c)))


def _is_zero(v, tol=DEFAULT_TOL):
    return v == 0 if not isinstance(v, float) else abs(v) <= tol


def _collinear(vectors, tol=DEFAULT_TOL) -> bool:
    a, b, c = vectors
    if any(isinstance(x, float) for v in vectors for x in v):
        scale = max(1.0, *(abs(float(x)) for v in vectors for x in v)) ** 3
        return abs(float(det3(a, b, c))) <= tol * scale
    return det3(a, b, c) == 0


def _conic_through_six(points) -> bool:
    """Six points lie on one conic: the 6x6 Veronese determinant vanishes."""
    rows = [[x * x, x * y, x * z, y * y, y * z, z * z] for x, y, z in points]
    return linalg.det(rows) == 0


def factor_line_pair(M: SymMatrix, tol: float = DEFAULT_TOL):
    """Two lines whose product is the rank-two conic M (exact when rational)."""
    if rank(M, tol) != 2:
        raise DegeneratePosition("not a line pair")
    V = linalg.nullspace([list(r) for r in M.rows], tol)[0]
    k = max(range(3), key=lambda i: abs(float(V[i])))
    a, b = [i for i in range(3) if i != k]
    A, B, C = M[a, a], M[a, b], M[b, b]
    disc = B * B - A * C
    pts = []
    if M.mode == EXACT:
        r = exact_sqrt(disc)
        if r is None:
            raise IrrationalData("line pair is not defined over the rationals")
    else:
        if disc < -tol:
            raise DegeneratePosition("imaginary line pair")
        r = max(disc, 0.0) ** 0.5
    # A s^2 + 2B s t + C t^2 = 0
    if not _is_zero(A, tol):
        roots = [(-B + r, A), (-B - r, A)]
    else:
        roots = [(1, 0), (-C, 2 * B)]
    for s, t in roots:
        P = [0, 0, 0]
        P[a], P[b] = s, t
        pts.append(P)
    return [cross(list(V), P) for P in pts]


@dataclass
class ScenarioInstance:
    name: str
    params: PenroseParams | None
    lattice: PenroseLattice | None
    witnesses: dict
    predicate: str
    mode: str
    penrose: Callable[[], bool]
    classical: Callable[[], bool]
    notes: list = field(default_factory=list)

    def sweep(self) -> list:
        return verify_all(self.lattice) if self.lattice is not None else []

    def report(self) -> dict:
        sweep = self.sweep()
        return {
            "name": self.name,
            "predicate": self.predicate,
            "lattice_ok": all(c.ok for c in sweep),
            "penrose": self.penrose(),
            "classical": self.classical(),
        }


def carriers(lat: PenroseLattice) -> dict:
    """Lines of the three second-layer double lines (None when a vertex is not one)."""
    out = {}
    for j, k in PAIRS:
        V = lat.vertices[frozenset({j, k})]
        try:
            line, _ = extract_double_line(V)
            out[(j, k)] = list(line.linear_vector())
        except (PenroseError, ValueError):
            out[(j, k)] = None
    return out


def _carriers_concurrent(lat: PenroseLattice) -> bool:
    cs = carriers(lat)
    if any(c is None for c in cs.values()):
        return False
    return _collinear(list(cs.values()))


def _sqrt_data(d: Sequence, mode: str):
    roots = []
    for v in d:
        if mode == EXACT:
            r = exact_sqrt(v)
            if r is None:
                raise IrrationalData(f"{v} is not a rational square")
        else:
            if v < 0:
                raise IrrationalData("negative diagonal entry")
            r = float(v) ** 0.5
        roots.append(r)
    return roots


def _sigma(sigma) -> dict:
    return dict(zip(PAIRS, sigma)) if not isinstance(sigma, dict) else dict(sigma)


# --- dual Salmon -----------------------------------------------------------------------


def build_dual_salmon(S0: Poly, lines: Sequence[Poly], d: Sequence, sigma=(1, 1, 1)) -> ScenarioInstance:
    """Three conics in double contact with S0 and f_ij = 0; the three double lines are concurrent iff f_123 = 0."""
    mode = S0.mode
    sig = _sigma(sigma)
    roots = _sqrt_data([d[j - 1] * d[k - 1] for j, k in PAIRS], mode)
    a = {(j, k): sig[(j, k)] * r for (j, k), r in zip(PAIRS, roots)}
    params = PenroseParams(S0, tuple(lines), tuple(d), a)
    lat = build_lattice(params)
    sq = _sqrt_data(d, mode) if mode == FLOAT or all(exact_sqrt(v) is not None for v in d) else None

    def classical() -> bool:
        # carriers sqrt(d_j) p_i - sigma sqrt(d_i) p_j computed directly from the raw data
        vec = [list(l.linear_vector()) for l in lines]
        if sq is not None:
            cs = [[sq[k - 1] * x - sig[(j, k)] * sq[j - 1] * y for x, y in zip(vec[j - 1], vec[k - 1])]
                  for j, k in PAIRS]
        else:
            # scale each carrier by sqrt(d_j) (rational since d_i d_j is a square)
            cs = []
            for (j, k), r in zip(PAIRS, roots):
                cs.append([d[k - 1] * x - sig[(j, k)] * r * y for x, y in zip(vec[j - 1], vec[k - 1])])
        return _collinear(cs)

    return ScenarioInstance("dual Salmon", params, lat, {"carriers": carriers(lat)},
                            "the three double-line carriers are concurrent", mode,
                            lambda: _carriers_concurrent(lat), classical)


# --- Brianchon -------------------------------------------------------------------------


def build_brianchon(S0: Poly, points: Sequence[Sequence], sigma=(1, 1, 1)) -> ScenarioInstance:
    """Tangent pairs from three points to S0 form a hexagon with concurrent diagonals."""
    A = poly_to_sym(S0)
    mode = A.mode
    if rank(A) != 3:
        raise DegeneratePosition("S0 must be regular")
    lines, d = [], []
    for P in points:
        P = [Fraction(v) if mode == EXACT else float(v) for v in P]
        p = A.apply(P)
        di = A.quad(P)
        if _is_zero(di):
            raise DegeneratePosition("point lies on the conic")
        T = poly_to_sym(S0.scale(di) - Poly.linear(p) * Poly.linear(p))
        # rank-2 T = kappa * V V^T on the adjugate side; a real pair needs kappa < 0
        adj = adjugate(T)
        kappa = next(adj[i, i] / (P[i] * P[i]) for i in range(3) if not _is_zero(P[i]))
        if kappa > 0:
            raise InteriorPoint("no real tangents from an interior point")
        lines.append(Poly.linear(p))
        d.append(di)
    inst = build_dual_salmon(S0, lines, d, sigma)
    lat = inst.lattice
    tangents = {i: factor_line_pair(poly_to_sym(lat.vertices[frozenset({i})])) for i in (1, 2, 3)}

    def candidates(j, k):
        (t, t2), (u, u2) = tangents[j], tangents[k]
        straight = cross(cross(t, u), cross(t2, u2))
        crossed = cross(cross(t, u2), cross(t2, u))
        return straight, crossed

    def classical() -> bool:
        # match each carrier with one of the two diagonals of its tangent quadrilateral,
        # then test the matched diagonals for concurrency
        cs = carriers(lat)
        chosen = []
        for pair in PAIRS:
            c = cs[pair]
            if c is None:
                return False
            hit = [D for D in candidates(*pair) if any(not _is_zero(x) for x in D) and proj_equal(D, c)]
            if not hit:
                return False
            chosen.append(hit[0])
        return _collinear(chosen)

    inst.name = "Brianchon"
    inst.predicate = "the three hexagon diagonals are concurrent"
    inst.witnesses = {"carriers": carriers(lat), "tangents": tangents}
    inst.classical = classical
    return inst


def brianchon_hexagon_triples(inst: ScenarioInstance) -> dict:
    """Concurrency of all eight diagonal triples of the six tangents (four are hexagons)."""
    t = inst.witnesses["tangents"]
    out = {}
    for choice in product((0, 1), repeat=3):
        ds = []
        for (j, k), c in zip(PAIRS, choice):
            (a, a2), (b, b2) = t[j], t[k]
            ds.append(cross(cross(a, b), cross(a2, b2)) if c == 0 else cross(cross(a, b2), cross(a2, b)))
        out[choice] = _collinear(ds)
    return out


# --- line pairs meeting on an axis: Desargues, Braikenridge-Maclaurin, Pappus --------------


def _axis_params(axis: Sequence, pairs: Sequence, sigma) -> PenroseParams:
    """S0 = m^2 and first layer l_i * l_i' with m = l_i + l_i' after scaling."""
    m = list(axis)
    ps, d = [], []
    for l1, l2 in pairs:
        sol = linalg.solve([[l1[r], l2[r]] for r in range(3)], m)
        if sol is None or any(_is_zero(s) for s in sol):
            raise DegeneratePosition("line pair does not meet on the axis")
        al, be = sol
        t1, t2 = [al * c for c in l1], [be * c for c in l2]
        ps.append(Poly.linear([(b - a) / 2 for a, b in zip(t1, t2)]))
        d.append(Fraction(1, 4) if not isinstance(al, float) else 0.25)
    sig = _sigma(sigma)
    a = {pair: sig[pair] * d[0] for pair in PAIRS}
    mline = Poly.linear(m)
    return PenroseParams(mline * mline, tuple(ps), tuple(d), a)


def _meet(l1, l2):
    return cross(l1, l2)


def _axis_instance(name, axis, pairs, sigma, predicate):
    try:
        params = _axis_params(axis, pairs, sigma)
        lat = build_lattice(params)
    except (DegeneratePosition, MathViolation):
        params = lat = None
    return params, lat


def build_desargues(axis: Sequence, pairs: Sequence, sigma=(1, 1, 1)) -> ScenarioInstance:
    """Triangles (l_1, l_2, l_3) and (l_1', l_2', l_3') with corresponding sides meeting on the axis
    are perspective from a point: the carriers are the joins of corresponding vertices."""
    params, lat = _axis_instance("Desargues", axis, pairs, sigma, None)
    sig = _sigma(sigma)

    def classical() -> bool:
        joins = []
        for (j, k) in PAIRS:
            (a, a2), (b, b2) = pairs[j - 1], pairs[k - 1]
            if sig[(j, k)] == 1:
                joins.append(cross(_meet(a, b), _meet(a2, b2)))
            else:
                joins.append(cross(_meet(a, b2), _meet(a2, b)))
        if any(all(_is_zero(x) for x in J) for J in joins):
            return False
        return _collinear(joins)

    def penrose() -> bool:
        return lat is not None and _carriers_concurrent(lat)

    witnesses = {"axis": list(axis), "pairs": [list(map(list, p)) for p in pairs]}
    if lat is not None:
        witnesses["carriers"] = carriers(lat)
        witnesses["top_vanishes"] = lat.vertices[FULL].is_zero()
    return ScenarioInstance("Desargues", params, lat, witnesses,
                            "joins of corresponding vertices are concurrent (centre of perspectivity)", EXACT,
                            penrose, classical)


def _six_points(lat: PenroseLattice) -> list | None:
    """Points where each double-line carrier meets the line pairs of its first-layer neighbours."""
    cs = carriers(lat)
    pts = []
    for (j, k), c in cs.items():
        if c is None:
            return None
        lp = factor_line_pair(poly_to_sym(lat.vertices[frozenset({j})]))
        pts += [cross(c, l) for l in lp]
    return pts


def _bm_penrose(lat) -> bool:
    if lat is None:
        return False
    if any(f != 0 for s, f in lat.f.items() if len(s) == 2):
        return False
    try:
        pts = _six_points(lat)
    except PenroseError:
        return False
    if pts is None:
        return False
    top = lat.vertices[FULL]
    return not top.is_zero() and all(top.evaluate(P) == 0 for P in pts)


def hexagon_pairs(sides: Sequence) -> list:
    """Opposite sides (h_k, h_{k+3}) of a hexagon of lines as first-layer line pairs."""
    return [(list(sides[i]), list(sides[i + 3])) for i in range(3)]


HEXAGON_SIGMA = (1, -1, 1)   # sign pattern of a hexagon labelled by hexagon_pairs


def build_braikenridge_maclaurin(axis: Sequence, sides: Sequence, sigma=HEXAGON_SIGMA) -> ScenarioInstance:
    """Hexagon of lines whose opposite sides meet on the axis: its vertices lie on the eighth conic."""
    pairs = hexagon_pairs(sides)
    params, lat = _axis_instance("Braikenridge-Maclaurin", axis, pairs, sigma, None)

    def classical() -> bool:
        verts = [cross(sides[i], sides[(i + 1) % 6]) for i in range(6)]
        return _conic_through_six(verts)

    witnesses = {"axis": list(axis), "sides": [list(s) for s in sides]}
    if lat is not None:
        witnesses["carriers"] = carriers(lat)
    return ScenarioInstance("Braikenridge-Maclaurin", params, lat, witnesses,
                            "the six hexagon vertices lie on the eighth conic", EXACT,
                            lambda: _bm_penrose(lat), classical)


def build_pappus(L: Sequence, M: Sequence, A: Sequence[Sequence], B: Sequence[Sequence],
                 check_incidence: bool = True) -> ScenarioInstance:
    """Points A_i on L and B_i on M.  The hexagon A1 B2 A3 B1 A2 B3 has opposite sides meeting in the
    three cross-join points; the lattice is built on the line through the first two of them and its
    eighth vertex must be the line pair L * M through all six points."""
    A = [[Fraction(v) for v in P] for P in A]
    B = [[Fraction(v) for v in P] for P in B]
    L, M = [Fraction(v) for v in L], [Fraction(v) for v in M]
    for P in A if check_incidence else ():
        if sum(x * y for x, y in zip(P, L)) != 0:
            raise DegeneratePosition("A point off its line")
    for P in B if check_incidence else ():
        if sum(x * y for x, y in zip(P, M)) != 0:
            raise DegeneratePosition("B point off its line")
    pts = A + B
    if any(all(v == 0 for v in cross(P, Q)) for P, Q in combinations(pts, 2)):
        raise DegeneratePosition("repeated point")
    if all(v == 0 for v in cross(L, M)) or any(sum(x * y for x, y in zip(P, M)) == 0 for P in A) \
            or any(sum(x * y for x, y in zip(P, L)) == 0 for P in B):
        raise DegeneratePosition("points at the intersection of the carrier lines or coincident carriers")
    hexagon = [A[0], B[1], A[2], B[0], A[1], B[2]]
    sides = [cross(hexagon[i], hexagon[(i + 1) % 6]) for i in range(6)]
    X = [cross(sides[i], sides[i + 3]) for i in range(3)]
    if all(v == 0 for v in cross(X[0], X[1])):
        raise DegeneratePosition("cross-join points coincide")
    axis = cross(X[0], X[1])
    params, lat = _axis_instance("Pappos", axis, hexagon_pairs(sides), HEXAGON_SIGMA, None)

    def penrose() -> bool:
        if not _bm_penrose(lat):
            return False
        top = poly_to_sym(lat.vertices[FULL])
        return rank(top) == 2 and proj_equal(top.upper(), poly_to_sym(Poly.linear(L) * Poly.linear(M)).upper())

    def classical() -> bool:
        # the three cross joins A_i B_j ^ A_j B_i are collinear
        Xs = [cross(cross(A[i], B[j]), cross(A[j], B[i])) for i, j in ((0, 1), (0, 2), (1, 2))]
        return _collinear(Xs)

    witnesses = {"L": L, "M": M, "A": A, "B": B, "cross_points": X}
    if lat is not None:
        witnesses["carriers"] = carriers(lat)
    return ScenarioInstance("Pappos", params, lat, witnesses,
                            "the eighth vertex is the carrier line pair through all six points", EXACT,
                            penrose, classical)


# --- Monge -----------------------------------------------------------------------------


def homothety_center(c1, r1, c2, r2, external: bool = True):
    s = 1 if external else -1
    return [r2 * c1[0] - s * r1 * c2[0], r2 * c1[1] - s * r1 * c2[1], r2 - s * r1]


def build_monge(centers: Sequence[Sequence], radii: Sequence, sigma=(1, 1, 1)) -> ScenarioInstance:
    """Three circles as line-wise conics around the dual absolute u^2 + v^2.

    In line coordinates (u, v, w) the circle with centre c and radius r is
    r^2 (u^2 + v^2) - (c . (u, v, 1))^2 = d S0 - p^2, so d_i = r_i^2 and the
    double elements S_{ij} are the homothety centres (external for sigma = +1).
    """
    cs = [[Fraction(v) for v in c] for c in centers]
    rs = [Fraction(r) for r in radii]
    if any(r <= 0 for r in rs):
        raise InputError("radii must be positive")
    for (i, ci), (j, cj) in combinations(enumerate(cs), 2):
        if ci == cj:
            raise ConcentricCircles("two circles share a centre")
        dist2 = (ci[0] - cj[0]) ** 2 + (ci[1] - cj[1]) ** 2
        if dist2 <= (rs[i] - rs[j]) ** 2:
            raise DegeneratePosition("one circle lies inside another")
    u, v = Poly.var(3, 0), Poly.var(3, 1)
    S0 = u * u + v * v
    lines = [Poly.linear([c[0], c[1], 1]) for c in cs]
    sig = _sigma(sigma)
    a = {(j, k): sig[(j, k)] * rs[j - 1] * rs[k - 1] for j, k in PAIRS}
    params = PenroseParams(S0, tuple(lines), tuple(r * r for r in rs), a)
    lat = build_lattice(params)

    def classical() -> bool:
        E = [homothety_center(cs[j - 1], rs[j - 1], cs[k - 1], rs[k - 1], sig[(j, k)] == 1) for j, k in PAIRS]
        return det3(*E) == 0

    def centres_match() -> bool:
        cs_lat = carriers(lat)
        return all(c is not None and proj_equal(c, homothety_center(cs[j - 1], rs[j - 1], cs[k - 1], rs[k - 1],
                                                                     sig[(j, k)] == 1))
                   for (j, k), c in cs_lat.items())

    witnesses = {"centers": cs, "radii": rs,
                 "homothety_centers": {p: homothety_center(cs[p[0] - 1], rs[p[0] - 1], cs[p[1] - 1], rs[p[1] - 1],
                                                           sig[p] == 1) for p in PAIRS}}
    inst = ScenarioInstance("Monge", params, lat, witnesses, "the three homothety centres are collinear", EXACT,
                            lambda: centres_match() and _carriers_concurrent(lat), classical)
    return inst


def monge_internal_conic_residual(inst: ScenarioInstance) -> float:
    """All-internal choice: the six internal common tangents are lines of the eighth (line-wise) conic."""
    cs, rs = inst.witnesses["centers"], inst.witnesses["radii"]
    top = inst.lattice.vertices[FULL].to_float()
    worst = 0.0
    for j, k in PAIRS:
        for tline in common_tangents(cs[j - 1], rs[j - 1], cs[k - 1], rs[k - 1], internal=True):
            n = max(abs(x) for x in tline)
            worst = max(worst, abs(top.evaluate([x / n for x in tline])))
    return worst


def common_tangents(c1, r1, c2, r2, internal: bool):
    """Common tangent lines (u, v, w) with u^2 + v^2 = 1 of two circles (float)."""
    import math
    x1, y1, x2, y2 = (float(c) for c in (c1[0], c1[1], c2[0], c2[1]))
    r1, r2 = float(r1), float(r2)
    s = -1.0 if internal else 1.0
    dx, dy = x2 - x1, y2 - y1
    dd = dx * dx + dy * dy
    k = s * r2 - r1            # a dx + b dy for the tangent line
    h = dd - k * k
    if h < 0:
        return []
    out = []
    for sign in (1, -1):
        a = (k * dx + sign * dy * math.sqrt(h)) / dd
        b = (k * dy - sign * dx * math.sqrt(h)) / dd
        # signed distance of centre i to line a x + b y + c = 0 is r_i (resp. s r_2)
        c = r1 - a * x1 - b * y1
        out.append([a, b, c])
    return out


# --- classification --------------------------------------------------------------------


def classify(lat: PenroseLattice) -> str:
    """Most specific special case matching the rank signature and the vanishing f pattern."""
    if lat.n != 3:
        return "generic"
    mode = lat.params.mode
    f = lat.f

    def zero(v):
        return v == 0 if mode == EXACT else abs(v) <= DEFAULT_TOL

    if not all(zero(f[frozenset(p)]) for p in PAIRS):
        return "generic"
    ranks = {s: (0 if v.is_zero() else rank(poly_to_sym(v))) for s, v in lat.vertices.items()}
    e = frozenset()
    first = [ranks[frozenset({i})] for i in (1, 2, 3)]
    f123 = zero(f[FULL])
    if ranks[e] == 1:
        if f123:
            return "Desargues"
        if ranks[FULL] == 2 and all(r == 2 for r in first):
            return "Pappos"
        return "Braikenridge-Maclaurin"
    if not f123:
        return "generic"
    S0 = poly_to_sym(lat.params.S0)
    if lat.params.m == 3 and proj_equal(S0.upper(), SymMatrix.diag(1, 1, 0).upper()):
        return "Monge"
    if all(r == 2 for r in first):
        return "Brianchon"
    return "dual Salmon"


SCENARIOS = ("dual-salmon", "brianchon", "pappus", "desargues", "braikenridge-maclaurin", "monge")


# --- seeded random instances -------------------------------------------------------------


def _rand_line(rng, nonzero=True):
    from .corpus import rational
    while True:
        v = [rational(rng) for _ in range(3)]
        if any(c != 0 for c in v):
            return v


def _transform(rng):
    from .corpus import rational
    while True:
        G = [[rational(rng) for _ in range(3)] for _ in range(3)]
        if linalg.det(G) != 0:
            return G


def random_instance(name: str, rng, negate: bool = False) -> ScenarioInstance:
    """A random rational instance of the named scenario (retrying degenerate draws).

    With ``negate`` one datum is perturbed so that the classical statement fails.
    """
    for _ in range(200):
        try:
            inst = _random_instance(name, rng, negate)
        except (DegeneratePosition, IrrationalData, InteriorPoint, ConcentricCircles, MathViolation):
            continue
        if inst.lattice is not None or negate:
            return inst
    raise DegeneratePosition(f"could not draw a {name} instance")


def negative_control(name: str, rng) -> ScenarioInstance:
    return random_instance(name, rng, negate=True)


def _axis_pairs(rng):
    axis = _rand_line(rng)
    pairs = []
    for _ in range(3):
        X = cross(axis, _rand_line(rng))
        pairs.append((cross(X, _rand_line(rng)), cross(X, _rand_line(rng))))
    return axis, pairs


def _random_instance(name, rng, negate):
    from .corpus import form, rational, small_int
    x, y, z = (Poly.var(3, i) for i in range(3))
    flip = -1 if negate else 1
    if name == "dual-salmon":
        S0 = form(rng, 3, 2)
        if S0.is_zero() or rank(poly_to_sym(S0)) != 3:
            raise DegeneratePosition("singular S0")
        lines = [Poly.linear(_rand_line(rng)) for _ in range(3)]
        sign = rng.choice((1, -1))
        d = [sign * Fraction(small_int(rng, 1, 4) ** 2, small_int(rng, 1, 3) ** 2) for _ in range(3)]
        s12, s13 = rng.choice((1, -1)), rng.choice((1, -1))
        # f_123 = 0 exactly when s12 s13 s23 equals the common sign of the d_i
        return build_dual_salmon(S0, lines, d, (s12, s13, flip * sign * s12 * s13))
    if name == "brianchon":
        G = _transform(rng)
        circle = poly_to_sym(x * x + y * y - z * z)
        from .matrix import sym_to_poly
        S0 = sym_to_poly(circle.congruent(G))
        Ginv = linalg.inverse(G)
        pts, used = [], set()
        while len(pts) < 3:
            # pole of the chord between circle parameters s and t; S0 there is (s - t)^2
            s, t = rational(rng), rational(rng)
            if s == t or s in used or t in used:
                continue
            used |= {s, t}
            pts.append(linalg.matvec(Ginv, [1 - s * t, s + t, 1 + s * t]))
        return build_brianchon(S0, pts, (1, 1, flip))
    if name == "desargues":
        axis, pairs = _axis_pairs(rng)
        return build_desargues(axis, pairs, (1, 1, flip))
    if name == "braikenridge-maclaurin":
        axis, pairs = _axis_pairs(rng)
        sides = [pairs[0][0], pairs[1][0], pairs[2][0], pairs[0][1], pairs[1][1], pairs[2][1]]
        if negate:
            # turn the last side about its vertex with the first side: five vertices stay,
            # the fifth one slides along its side and the third opposite pair leaves the axis
            V = cross(sides[5], sides[0])
            sides[5] = cross(V, _rand_line(rng))
            verts = [cross(sides[i], sides[(i + 1) % 6]) for i in range(6)]
            if any(all(c == 0 for c in v) for v in verts + [sides[5]]) or \
                    any(all(c == 0 for c in cross(u, w)) for u, w in combinations(verts, 2)):
                raise DegeneratePosition("perturbed hexagon is degenerate")
        return build_braikenridge_maclaurin(axis, sides)
    if name == "pappus":
        L, M = _rand_line(rng), _rand_line(rng)
        A = [cross(L, _rand_line(rng)) for _ in range(3)]
        B = [cross(M, _rand_line(rng)) for _ in range(3)]
        if negate:
            B[2] = _rand_line(rng)       # a point off its carrier line
        return build_pappus(L, M, A, B, check_incidence=not negate)
    if name == "monge":
        cs = [(small_int(rng, -6, 6), small_int(rng, -6, 6)) for _ in range(3)]
        rs = [Fraction(small_int(rng, 1, 4), small_int(rng, 1, 2)) for _ in range(3)]
        return build_monge(cs, rs, (1, 1, flip))
    raise InputError(f"unknown scenario {name!r}")


def _sym_to_poly3(A: SymMatrix) -> Poly:
    from .matrix import sym_to_poly
    return sym_to_poly(A)
