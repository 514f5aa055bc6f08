"""Points, lines and planes in RP^2 / RP^3, polarities, pencils and contact tests."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg, upoly
from .errors import (CoincidentArguments, CoincidentLines, DegenerateSetMember, EmptyInput, InputError,
                     IrrationalContact, ModeMismatch, NeedsDualPartner, NoContact, ProjectivelyEqual, SizeMismatch)
from .matrix import SymMatrix, adjugate, extract_double_line, normalize_line, poly_to_sym, rank, sym_to_poly
from .poly import Poly
from .scalar import DEFAULT_TOL, EXACT, FLOAT, Scalar, coerce, common_mode

# --- projective equality -------------------------------------------------


def proj_equal(u: Sequence[Scalar], v: Sequence[Scalar], tol: float = DEFAULT_TOL) -> bool:
    """Equality up to a nonzero factor.  Zero vectors are equal only to zero vectors."""
    u, v = list(u), list(v)
    if len(u) != len(v):
        return False
    mode = common_mode(u + v) or EXACT
    if mode == EXACT:
        if not any(u) or not any(v):
            return not any(u) and not any(v)
        n = len(u)
        i = next(k for k in range(n) if u[k] != 0)
        if v[i] == 0:
            return False
        return all(u[i] * v[k] == v[i] * u[k] for k in range(n))
    mu = max(abs(a) for a in u)
    mv = max(abs(a) for a in v)
    if mu <= tol or mv <= tol:
        return mu <= tol and mv <= tol
    iu = max(range(len(u)), key=lambda k: abs(u[k]))
    nu = [a / u[iu] for a in u]
    if v[iu] == 0 or abs(v[iu]) / mv < tol:
        return False
    nv = [a / v[iu] for a in v]
    return all(abs(a - b) <= tol for a, b in zip(nu, nv))


def proj_equal_sym(A: SymMatrix, B: SymMatrix, tol: float = DEFAULT_TOL) -> bool:
    return A.order == B.order and proj_equal(A.upper(), B.upper(), tol)


def proj_equal_poly(f: Poly, g: Poly, tol: float = DEFAULT_TOL) -> bool:
    keys = sorted(set(f.coeffs) | set(g.coeffs))
    return proj_equal([f.coefficient(k) for k in keys], [g.coefficient(k) for k in keys], tol)


# --- elements ----------------------------------------------------------------


class _ProjVector:
    __slots__ = ("coords", "mode")

    def __init__(self, coords: Sequence[Scalar], mode: str | None = None):
        coords = list(coords)
        if len(coords) not in (3, 4):
            raise SizeMismatch("homogeneous vectors have length 3 or 4")
        mode = mode or common_mode(coords) or EXACT
        coords = tuple(coerce(c, mode) for c in coords)
        if all(c == 0 for c in coords):
            raise InputError("zero vector is not a projective element")
        self.coords = coords
        self.mode = mode

    @property
    def dim(self) -> int:
        return len(self.coords)

    def normalized(self) -> tuple[Scalar, ...]:
        return normalize_line(self.coords, self.mode)

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return proj_equal(self.coords, other.coords)

    def __hash__(self) -> int:
        return hash((type(self).__name__, self.normalized()))

    def __iter__(self):
        return iter(self.coords)

    def __repr__(self) -> str:
        body = ":".join(str(c) for c in self.normalized())
        return f"{type(self).__name__}[{body}]"


class ProjPoint(_ProjVector):
    pass


class ProjHyperplane(_ProjVector):
    """A line of RP^2 or a plane of RP^3, by dual coordinates."""

    @classmethod
    def from_poly(cls, f: Poly) -> "ProjHyperplane":
        return cls(f.linear_vector(), f.mode)

    def to_poly(self) -> Poly:
        return Poly.linear(self.coords, self.mode)


def incident(P: ProjPoint, h: ProjHyperplane, tol: float = DEFAULT_TOL) -> bool:
    v = linalg.dot(P.coords, h.coords)
    if P.mode == FLOAT:
        scale = max(abs(c) for c in P.coords) * max(abs(c) for c in h.coords)
        return abs(v) <= tol * scale
    return v == 0


def _cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _is_zero_vec(v, mode, scale=1.0, tol=DEFAULT_TOL) -> bool:
    if mode == EXACT:
        return all(c == 0 for c in v)
    return max(abs(c) for c in v) <= tol * scale


def meet2(a: ProjHyperplane, b: ProjHyperplane) -> ProjPoint:
    """Common point of two lines of RP^2."""
    if a.dim != 3 or b.dim != 3:
        raise SizeMismatch("meet2 works in the plane")
    c = _cross(a.coords, b.coords)
    scale = max(abs(float(x)) for x in a.coords) * max(abs(float(x)) for x in b.coords)
    if _is_zero_vec(c, a.mode, scale):
        raise CoincidentLines("lines coincide")
    return ProjPoint(c, a.mode)


def join2(P: ProjPoint, Q: ProjPoint) -> ProjHyperplane:
    """Line through two points of RP^2."""
    if P.dim != 3 or Q.dim != 3:
        raise SizeMismatch("join2 works in the plane")
    c = _cross(P.coords, Q.coords)
    scale = max(abs(float(x)) for x in P.coords) * max(abs(float(x)) for x in Q.coords)
    if _is_zero_vec(c, P.mode, scale):
        raise CoincidentArguments("points coincide")
    return ProjHyperplane(c, P.mode)


# --- lines of RP^3 -----------------------------------------------------------

_PAIRS = ((0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2))


class Line3D:
    """Line of RP^3 by Plücker coordinates (L01, L02, L03, L23, L31, L12).

    For points A, B on the line, Lij = A_i B_j - A_j B_i.
    """

    __slots__ = ("coords", "mode")

    def __init__(self, coords: Sequence[Scalar], mode: str | None = None, check: bool = True):
        coords = list(coords)
        if len(coords) != 6:
            raise SizeMismatch("Plücker vectors have 6 entries")
        mode = mode or common_mode(coords) or EXACT
        coords = tuple(coerce(c, mode) for c in coords)
        if all(c == 0 for c in coords):
            raise InputError("zero Plücker vector")
        self.coords = coords
        self.mode = mode
        if check and mode == EXACT and self.plucker_relation() != 0:
            raise InputError("Plücker relation violated")

    def plucker_relation(self) -> Scalar:
        L = self.coords
        return L[0] * L[3] + L[1] * L[4] + L[2] * L[5]

    def point_matrix(self):
        """Antisymmetric matrix A B^T - B A^T."""
        M = [[coerce(0, self.mode)] * 4 for _ in range(4)]
        for (i, j), v in zip(_PAIRS, self.coords):
            M[i][j] = v
            M[j][i] = -v
        return M

    def dual_coords(self) -> tuple[Scalar, ...]:
        """Coordinates of a ^ b for two planes a, b through the line."""
        L = self.coords
        # pi_01, pi_02, pi_03, pi_23, pi_31, pi_12
        return (L[3], L[4], L[5], L[0], L[1], L[2])

    def plane_matrix(self):
        M = [[coerce(0, self.mode)] * 4 for _ in range(4)]
        for (i, j), v in zip(_PAIRS, self.dual_coords()):
            M[i][j] = v
            M[j][i] = -v
        return M

    def contains(self, P: ProjPoint, tol: float = DEFAULT_TOL) -> bool:
        v = linalg.matvec(self.plane_matrix(), P.coords)
        return _is_zero_vec(v, self.mode, max(abs(float(c)) for c in self.coords) * max(abs(float(c)) for c in P.coords), tol)

    def lies_in(self, h: ProjHyperplane, tol: float = DEFAULT_TOL) -> bool:
        v = linalg.matvec(self.point_matrix(), h.coords)
        return _is_zero_vec(v, self.mode, max(abs(float(c)) for c in self.coords) * max(abs(float(c)) for c in h.coords), tol)

    def meets(self, other: "Line3D") -> bool:
        a, b = self.coords, other.coords
        s = a[0] * b[3] + a[1] * b[4] + a[2] * b[5] + a[3] * b[0] + a[4] * b[1] + a[5] * b[2]
        return s == 0 if self.mode == EXACT else abs(s) <= DEFAULT_TOL

    def __eq__(self, other) -> bool:
        if not isinstance(other, Line3D):
            return NotImplemented
        return proj_equal(self.coords, other.coords)

    def __hash__(self) -> int:
        return hash(normalize_line(self.coords, self.mode))

    def __repr__(self) -> str:
        return f"Line3D{normalize_line(self.coords, self.mode)}"


def _wedge(u, v):
    return [u[i] * v[j] - u[j] * v[i] for i, j in _PAIRS]


def join3(P: ProjPoint, Q: ProjPoint) -> Line3D:
    """Line through two points of RP^3."""
    if P.dim != 4 or Q.dim != 4:
        raise SizeMismatch("join3 works in space")
    L = _wedge(P.coords, Q.coords)
    if _is_zero_vec(L, P.mode, max(abs(float(c)) for c in P.coords) * max(abs(float(c)) for c in Q.coords)):
        raise CoincidentArguments("points coincide")
    return Line3D(L, P.mode, check=False)


def meet3(a: ProjHyperplane, b: ProjHyperplane) -> Line3D:
    """Common line (axis) of two planes of RP^3."""
    if a.dim != 4 or b.dim != 4:
        raise SizeMismatch("meet3 works in space")
    pi = _wedge(a.coords, b.coords)
    if _is_zero_vec(pi, a.mode, max(abs(float(c)) for c in a.coords) * max(abs(float(c)) for c in b.coords)):
        raise CoincidentArguments("planes coincide")
    # pi is in dual order (01, 02, 03, 23, 31, 12); swap halves for point coordinates
    return Line3D((pi[3], pi[4], pi[5], pi[0], pi[1], pi[2]), a.mode, check=False)


def line_meet_plane(L: Line3D, h: ProjHyperplane) -> ProjPoint:
    v = linalg.matvec(L.point_matrix(), h.coords)
    if _is_zero_vec(v, L.mode, max(abs(float(c)) for c in L.coords) * max(abs(float(c)) for c in h.coords)):
        raise CoincidentArguments("line lies in the plane")
    return ProjPoint(v, L.mode)


def line_join_point(L: Line3D, P: ProjPoint) -> ProjHyperplane:
    v = linalg.matvec(L.plane_matrix(), P.coords)
    if _is_zero_vec(v, L.mode, max(abs(float(c)) for c in L.coords) * max(abs(float(c)) for c in P.coords)):
        raise CoincidentArguments("point lies on the line")
    return ProjHyperplane(v, L.mode)


def common_point(hyperplanes: Sequence[ProjHyperplane], tol: float = DEFAULT_TOL) -> ProjPoint:
    """The unique point on all given lines/planes."""
    ker = linalg.nullspace([list(h.coords) for h in hyperplanes], tol)
    if len(ker) != 1:
        raise CoincidentArguments(f"common point not unique (kernel dimension {len(ker)})")
    return ProjPoint(ker[0])


def common_hyperplane(points: Sequence[ProjPoint], tol: float = DEFAULT_TOL) -> ProjHyperplane:
    """The unique line/plane through all given points."""
    ker = linalg.nullspace([list(p.coords) for p in points], tol)
    if len(ker) != 1:
        raise CoincidentArguments(f"common hyperplane not unique (kernel dimension {len(ker)})")
    return ProjHyperplane(ker[0])


def concurrent(lines: Sequence[ProjHyperplane], tol: float = DEFAULT_TOL) -> bool:
    """Lines of RP^2 through one point (planes of RP^3 through one line): stacked rank <= 2."""
    if not lines:
        raise EmptyInput("no lines given")
    return linalg.rank([list(l.coords) for l in lines], tol) <= 2


def coaxial(planes: Sequence[ProjHyperplane], tol: float = DEFAULT_TOL) -> bool:
    return concurrent(planes, tol)


# --- complete conics / quadrics ------------------------------------------------


class CompleteConic:
    """Primal (point-wise) and dual (line- or plane-wise) matrices with primal*dual = lambda*I."""

    __slots__ = ("primal", "dual")

    def __init__(self, primal: SymMatrix, dual: SymMatrix, check: bool = True, tol: float = DEFAULT_TOL):
        if primal.order != dual.order:
            raise SizeMismatch("primal and dual orders differ")
        if primal.mode != dual.mode:
            raise ModeMismatch("primal and dual modes differ")
        if primal.is_zero() and dual.is_zero():
            raise InputError("primal and dual both zero")
        if check:
            prod = linalg.matmul([list(r) for r in primal.rows], [list(r) for r in dual.rows])
            lam = prod[0][0]
            k = primal.order
            ok = True
            scale = primal.max_abs() * dual.max_abs()
            for i in range(k):
                for j in range(k):
                    want = lam if i == j else 0
                    diff = prod[i][j] - want
                    if primal.mode == EXACT:
                        ok &= diff == 0
                    else:
                        ok &= abs(diff) <= tol * max(scale, 1e-300)
            if not ok:
                raise InputError("primal times dual is not a multiple of the identity")
        self.primal = primal
        self.dual = dual

    @property
    def order(self) -> int:
        return self.primal.order

    @property
    def mode(self) -> str:
        return self.primal.mode

    def scale(self, c: Scalar) -> "CompleteConic":
        # the dual of c*A is c^(k-1) adj(A); only the primal's scale carries meaning
        return type(self)(self.primal.scale(c), self.dual, check=False)

    def is_regular(self) -> bool:
        return rank(self.primal) == self.order

    def poly(self) -> Poly:
        return sym_to_poly(self.primal)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(primal={self.primal!r}, dual={self.dual!r})"


class CompleteQuadric(CompleteConic):
    def __init__(self, primal: SymMatrix, dual: SymMatrix, check: bool = True, tol: float = DEFAULT_TOL):
        if primal.order != 4:
            raise SizeMismatch("quadrics need order-4 matrices")
        super().__init__(primal, dual, check, tol)


def complete_from_primal(A: SymMatrix) -> CompleteConic:
    if A.is_zero():
        raise InputError("zero matrix")
    adj = adjugate(A)
    if adj.is_zero():
        raise NeedsDualPartner("rank-deficient primal: the dual partner must be supplied")
    cls = CompleteQuadric if A.order == 4 else CompleteConic
    return cls(A, adj, check=False)


def as_complete(C) -> CompleteConic:
    if isinstance(C, CompleteConic):
        return C
    if isinstance(C, Poly):
        C = poly_to_sym(C)
    return complete_from_primal(C)


def _primal(C) -> SymMatrix:
    if isinstance(C, CompleteConic):
        return C.primal
    if isinstance(C, Poly):
        return poly_to_sym(C)
    return C


def polar(C, P: ProjPoint, tol: float = DEFAULT_TOL) -> ProjHyperplane:
    A = _primal(C)
    v = A.apply(P.coords)
    scale = A.max_abs() * max(abs(float(c)) for c in P.coords)
    if _is_zero_vec(v, A.mode, scale, tol):
        raise DegenerateSetMember("point lies in the kernel of the polarity")
    return ProjHyperplane(v, A.mode)


# --- pencils ---------------------------------------------------------------------


@dataclass(frozen=True)
class PencilDegeneracy:
    """A degenerate member A + t B.  ``t`` is None for B itself.

    Irrational parameters are reported by an isolating interval and carry no
    member matrix in exact mode.
    """

    t: Scalar | None
    rank: int
    member: SymMatrix | None
    interval: tuple[Fraction, Fraction] | None = None

    @property
    def exact(self) -> bool:
        return self.interval is None


def _member(A: SymMatrix, B: SymMatrix, t: Scalar) -> SymMatrix:
    return A + B.scale(t)


def pencil_det(A: SymMatrix, B: SymMatrix) -> list[Fraction]:
    """Coefficients of det(A + t B) in t, exact (float entries are converted exactly)."""
    Ae = [[Fraction(v) for v in r] for r in A.rows]
    Be = [[Fraction(v) for v in r] for r in B.rows]
    k = A.order
    return upoly.interpolate(lambda t: linalg.bareiss_det([[a + t * b for a, b in zip(ra, rb)]
                                                           for ra, rb in zip(Ae, Be)]), k)


def pencil_degenerates(A, B, tol: float = DEFAULT_TOL) -> list[PencilDegeneracy]:
    A, B = _primal(A), _primal(B)
    if A.mode != B.mode:
        raise ModeMismatch("pencil members in different modes")
    if proj_equal_sym(A, B, tol):
        raise ProjectivelyEqual("pencil spanned by one conic")
    cubic = pencil_det(A, B)
    out = []
    if not cubic:
        raise InputError("singular pencil: every member is degenerate")
    if A.mode == EXACT:
        roots = upoly.rational_roots(cubic)
        for t in roots:
            M = _member(A, B, t)
            out.append(PencilDegeneracy(t, rank(M), M))
        rest = upoly.deflate(cubic, roots)
        for lo, hi in upoly.isolate_real_roots(rest):
            out.append(PencilDegeneracy(None, A.order - 1, None, (lo, hi)))
    else:
        for t in upoly.real_roots_float(cubic):
            M = _member(A, B, t)
            out.append(PencilDegeneracy(t, rank(M, tol), M))
    if upoly.degree(cubic) < A.order:
        out.append(PencilDegeneracy(None, rank(B, tol), B))
    return out


# --- contact --------------------------------------------------------------------


@dataclass(frozen=True)
class Contact:
    """A rank-one member: ``A + t B = sign * c * chord^2`` (c > 0).

    ``t`` is None when B itself is the double element.
    """

    chord: ProjHyperplane
    t: Scalar | None
    sign: int


def _minor_polys(A: SymMatrix, B: SymMatrix) -> list[list[Fraction]]:
    Ae = [[Fraction(v) for v in r] for r in A.rows]
    Be = [[Fraction(v) for v in r] for r in B.rows]
    k = A.order
    polys = []
    # all 2x2 minors rows (r1, r2) cols (c1, c2)
    idx = [(a, b) for a in range(k) for b in range(a + 1, k)]
    for r1, r2 in idx:
        for c1, c2 in idx:
            def f(t, r1=r1, r2=r2, c1=c1, c2=c2):
                g = lambda r, c: Ae[r][c] + t * Be[r][c]
                return g(r1, c1) * g(r2, c2) - g(r1, c2) * g(r2, c1)
            polys.append(upoly.interpolate(f, 2))
    return polys


def _contact_at(A: SymMatrix, B: SymMatrix, t, tol) -> Contact | None:
    M = B if t is None else _member(A, B, t)
    if M.is_zero(tol if M.mode == FLOAT else None) or rank(M, tol) != 1:
        return None
    line, sign = extract_double_line(sym_to_poly(M), tol)
    return Contact(ProjHyperplane.from_poly(line), t, sign)


def double_contacts(A, B, tol: float = DEFAULT_TOL) -> list[Contact]:
    """Every rank-one member of the pencil spanned by A and B."""
    A, B = _primal(A), _primal(B)
    if A.mode != B.mode:
        raise ModeMismatch("pencil members in different modes")
    if proj_equal_sym(A, B, tol):
        raise ProjectivelyEqual("conics coincide")
    found = []
    short = _contact_at(A, B, coerce(-1, A.mode), tol)
    if short is not None:
        return [short]
    if A.mode == EXACT:
        g = []
        for p in _minor_polys(A, B):
            g = upoly.gcd(g, p) if g else upoly.monic(p)
            if g and len(g) == 1:
                break
        if g and len(g) > 1:
            roots = upoly.rational_roots(g)
            for t in roots:
                c = _contact_at(A, B, t, tol)
                if c is not None:
                    found.append(c)
            rest = upoly.deflate(g, roots)
            if not found and upoly.isolate_real_roots(rest):
                raise IrrationalContact("rank-one member at an irrational parameter")
    else:
        for p in _minor_polys(A, B):
            for t in upoly.real_roots_float(p):
                c = _contact_at(A, B, t, tol)
                if c is not None and all(abs(c.t - d.t) > 1e-7 * max(1.0, abs(c.t)) for d in found if d.t is not None):
                    found.append(c)
    at_inf = _contact_at(A, B, None, tol)
    if at_inf is not None:
        found.append(at_inf)
    return found


def double_contact(A, B, tol: float = DEFAULT_TOL) -> Contact:
    """The chord of contact of two conics (or ring plane of two quadrics)."""
    found = double_contacts(A, B, tol)
    if not found:
        raise NoContact("pencil has no rank-one member")
    return found[0]


@dataclass(frozen=True)
class RingContact:
    plane: ProjHyperplane
    point: ProjPoint
    t: Scalar | None
    sign: int
    x_contact: bool


def ring_contact(A, B, tol: float = DEFAULT_TOL) -> RingContact:
    """Ring plane, ring point (polar of the plane) and X-contact flag of two quadrics."""
    CA = A if isinstance(A, CompleteConic) else None
    CB = B if isinstance(B, CompleteConic) else None
    pa, pb = _primal(A), _primal(B)
    if pa.order != 4:
        raise SizeMismatch("ring contact is a relation between quadrics")
    c = double_contact(pa, pb, tol)
    point = None
    for C, prim in ((CA, pa), (CB, pb)):
        dual = C.dual if C is not None else adjugate(prim)
        v = dual.apply(c.chord.coords)
        if not _is_zero_vec(v, pa.mode, dual.max_abs() * max(abs(float(x)) for x in c.chord.coords), tol):
            point = ProjPoint(v, pa.mode)
            break
    if point is None:
        raise DegenerateSetMember("ring point undetermined: dual partners annihilate the ring plane")
    return RingContact(c.chord, point, c.t, c.sign, incident(point, c.chord, tol))
