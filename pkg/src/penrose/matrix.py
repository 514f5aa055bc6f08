"""Symmetric matrices, quadratic forms and determinants of polynomial matrices."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from . import linalg
from .errors import DegreeMismatch, InputError, NotRankOne, SizeMismatch, VariableCountMismatch
from .poly import Poly
from .scalar import DEFAULT_TOL, EXACT, FLOAT, Scalar, coerce, is_zero, primitive_vector


class SymMatrix:
    """Symmetric matrix of order 2-4 (order 3 for conics, 4 for quadrics)."""

    __slots__ = ("order", "mode", "rows")

    def __init__(self, rows: Sequence[Sequence[Scalar]], mode: str | None = None, check: bool = True):
        k = len(rows)
        if k < 1 or k > 5 or any(len(r) != k for r in rows):
            raise SizeMismatch("symmetric matrix must be square of order 1..5")
        rows = linalg.normalize(rows, mode)
        if check:
            for i in range(k):
                for j in range(i + 1, k):
                    if rows[i][j] != rows[j][i]:
                        raise InputError(f"matrix not symmetric at ({i},{j})")
        self.order = k
        self.mode = mode or linalg.matrix_mode(rows)
        self.rows = tuple(tuple(r) for r in rows)

    @classmethod
    def from_upper(cls, k: int, upper: Sequence[Scalar], mode: str | None = None) -> "SymMatrix":
        """Build from the upper triangle listed row by row."""
        upper = list(upper)
        if len(upper) != k * (k + 1) // 2:
            raise SizeMismatch("wrong number of upper-triangle entries")
        M = [[0] * k for _ in range(k)]
        it = iter(upper)
        for i in range(k):
            for j in range(i, k):
                M[i][j] = M[j][i] = next(it)
        return cls(M, mode)

    @classmethod
    def diag(cls, *entries: Scalar) -> "SymMatrix":
        k = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(k)] for i in range(k)])

    @classmethod
    def outer(cls, v: Sequence[Scalar]) -> "SymMatrix":
        return cls([[a * b for b in v] for a in v])

    def upper(self) -> list[Scalar]:
        return [self.rows[i][j] for i in range(self.order) for j in range(i, self.order)]

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def _same(self, other: "SymMatrix") -> None:
        if self.order != other.order:
            raise SizeMismatch("orders differ")
        if self.mode != other.mode:
            from .errors import ModeMismatch
            raise ModeMismatch("exact and float matrices mixed")

    def __add__(self, other: "SymMatrix") -> "SymMatrix":
        self._same(other)
        return SymMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.mode, False)

    def __sub__(self, other: "SymMatrix") -> "SymMatrix":
        self._same(other)
        return SymMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.mode, False)

    def __neg__(self) -> "SymMatrix":
        return self.scale(-1)

    def scale(self, c: Scalar) -> "SymMatrix":
        c = coerce(c, self.mode)
        return SymMatrix([[a * c for a in r] for r in self.rows], self.mode, False)

    def apply(self, v: Sequence[Scalar]) -> tuple[Scalar, ...]:
        return linalg.matvec(self.rows, [coerce(x, self.mode) for x in v])

    def bilinear(self, u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
        return linalg.dot(u, self.apply(v))

    def quad(self, v: Sequence[Scalar]) -> Scalar:
        return self.bilinear(v, v)

    def det(self) -> Scalar:
        return linalg.det(self.rows)

    def rank(self, tol: float = DEFAULT_TOL) -> int:
        return rank(self, tol)

    def adjugate(self) -> "SymMatrix":
        return adjugate(self)

    def congruent(self, B: Sequence[Sequence[Scalar]]) -> "SymMatrix":
        """B^T A B for a (order x r) matrix B."""
        Bm = linalg.normalize(B, self.mode)
        prod = linalg.matmul(linalg.transpose(Bm), linalg.matmul([list(r) for r in self.rows], Bm))
        return SymMatrix(prod, self.mode, False)

    def is_zero(self, tol: float | None = None) -> bool:
        if tol is None or self.mode == EXACT:
            return all(v == 0 for r in self.rows for v in r)
        return all(is_zero(v, tol) for r in self.rows for v in r)

    def max_abs(self) -> float:
        return max(abs(float(v)) for r in self.rows for v in r)

    def to_float(self) -> "SymMatrix":
        return SymMatrix([[float(v) for v in r] for r in self.rows], FLOAT, False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"SymMatrix({[list(r) for r in self.rows]})"


def rank(A: SymMatrix, tol: float = DEFAULT_TOL) -> int:
    return linalg.rank(A.rows, tol)


def adjugate(A: SymMatrix) -> SymMatrix:
    return SymMatrix(linalg.adjugate(A.rows), A.mode, False)


def poly_to_sym(f: Poly) -> SymMatrix:
    """Matrix A with x^T A x = f; off-diagonal entries are half the mixed coefficients."""
    if f.degree != 2 and not f.is_zero():
        raise DegreeMismatch("quadratic form expected")
    n = f.nvars
    half = coerce(Fraction(1, 2), f.mode) if f.mode == EXACT else 0.5
    M = [[coerce(0, f.mode)] * n for _ in range(n)]
    for mono, c in f.coeffs.items():
        idx = [i for i, e in enumerate(mono) for _ in range(e)]
        i, j = idx
        if i == j:
            M[i][i] = c
        else:
            M[i][j] = M[j][i] = c * half
    return SymMatrix(M, f.mode, False)


def sym_to_poly(A: SymMatrix) -> Poly:
    n = A.order
    if n not in (3, 4):
        raise VariableCountMismatch("quadratic forms need 3 or 4 variables")
    coeffs = {}
    for i in range(n):
        for j in range(i, n):
            e = [0] * n
            e[i] += 1
            e[j] += 1
            c = A[i, j] if i == j else 2 * A[i, j]
            coeffs[tuple(e)] = c
    return Poly(n, 2, coeffs, A.mode)


def normalize_line(vec: Sequence[Scalar], mode: str) -> tuple[Scalar, ...]:
    """Deterministic representative: primitive integers (exact) or unit max entry, first nonzero positive."""
    if mode == EXACT:
        out = [Fraction(v) for v in primitive_vector(vec)]
    else:
        m = max(abs(float(v)) for v in vec)
        out = [float(v) / m for v in vec]
    first = next((v for v in out if v != 0), None)
    if first is not None and first < 0:
        out = [-v for v in out]
    return tuple(out)


def extract_double_line(f: Poly, tol: float = DEFAULT_TOL) -> tuple[Poly, int]:
    """Return (l, sign) with f = sign * c * l^2 for some c > 0.

    In exact mode ``l`` is a primitive integer vector whose first nonzero
    coefficient is positive; ``c`` is then a positive rational.
    """
    A = poly_to_sym(f)
    if f.is_zero() or rank(A, tol) != 1:
        raise NotRankOne(f"rank {rank(A, tol)} quadratic form")
    # the row with the largest diagonal entry is proportional to l
    k = max(range(A.order), key=lambda i: abs(float(A[i, i])))
    row = A.rows[k]
    sign = 1 if A[k, k] > 0 else -1
    vec = normalize_line(row, f.mode)
    return Poly.linear(vec, f.mode), sign


def double_line_scale(f: Poly, line: Poly) -> Scalar:
    """The scalar c with f = c * line^2 (f known to be a multiple of line^2)."""
    sq = line * line
    mono, val = max(sq.coeffs.items(), key=lambda kv: abs(float(kv[1])))
    return f.coefficient(mono) / val


class PolyMatrix:
    """Symmetric bordered matrix of polynomials.

    Entry (0,0) has degree 2, the border (0,j) degree 1, everything else
    degree 0.
    """

    __slots__ = ("order", "nvars", "mode", "entries")

    def __init__(self, entries: Sequence[Sequence[Poly]]):
        k = len(entries)
        if k < 1 or k > 5 or any(len(r) != k for r in entries):
            raise SizeMismatch("polynomial matrix must be square of order 1..5")
        nv = entries[0][0].nvars
        mode = entries[0][0].mode
        for i in range(k):
            for j in range(k):
                e = entries[i][j]
                if e.nvars != nv:
                    raise VariableCountMismatch("entries disagree on variable count")
                if e.mode != mode:
                    from .errors import ModeMismatch
                    raise ModeMismatch("entries disagree on mode")
                want = (i == 0) + (j == 0)
                if not e.is_zero() and e.degree != want:
                    raise DegreeMismatch(f"entry ({i},{j}) should have degree {want}")
                if entries[j][i] != e:
                    raise InputError(f"polynomial matrix not symmetric at ({i},{j})")
        self.order = k
        self.nvars = nv
        self.mode = mode
        self.entries = tuple(tuple(r) for r in entries)

    def sub(self, rows: Sequence[int], cols: Sequence[int]) -> list[list[Poly]]:
        if len(rows) != len(cols):
            raise SizeMismatch("row and column index sets differ in size")
        return [[self.entries[i][j] for j in cols] for i in rows]


def poly_det(M) -> Poly:
    """Determinant of a square matrix of polynomials by cofactor expansion along row 0."""
    grid = M.entries if isinstance(M, PolyMatrix) else M
    n = len(grid)
    if n == 0:
        raise SizeMismatch("empty matrix")
    if n == 1:
        return grid[0][0]
    total = None
    for j in range(n):
        a = grid[0][j]
        if a.is_zero():
            continue
        sub = [row[:j] + row[j + 1:] for row in grid[1:]]
        term = a * poly_det(sub)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        first = grid[0][0]
        return Poly.zero(first.nvars, 0, first.mode)
    return total
