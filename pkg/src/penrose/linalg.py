"""Dense linear algebra on small matrices of exact or float scalars.

Matrices are sequences of rows.  Exact inputs use ``Fraction`` throughout;
float inputs use a scale-aware pivot threshold.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import InputError, SizeMismatch
from .scalar import DEFAULT_TOL, EXACT, FLOAT, Scalar, coerce, common_mode

Matrix = list[list[Scalar]]


def matrix_mode(M: Sequence[Sequence[Scalar]]) -> str:
    return common_mode(v for row in M for v in row) or EXACT


def normalize(M: Sequence[Sequence[Scalar]], mode: str | None = None) -> Matrix:
    mode = mode or matrix_mode(M)
    return [[coerce(v, mode) for v in row] for row in M]


def shape(M: Sequence[Sequence[Scalar]]) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def transpose(M):
    return [list(col) for col in zip(*M)]


def matmul(A, B):
    if len(A[0]) != len(B):
        raise SizeMismatch("inner dimensions differ")
    Bt = transpose(B)
    return [[sum((a * b for a, b in zip(row, col)), type(row[0])(0)) for col in Bt] for row in A]


def matvec(A, v):
    return tuple(sum((a * x for a, x in zip(row, v)), type(row[0])(0)) for row in A)


def dot(u, v):
    total = 0
    for a, b in zip(u, v):
        total = total + a * b
    return total


def identity(k: int, mode: str = EXACT) -> Matrix:
    one, zero = coerce(1, mode), coerce(0, mode)
    return [[one if i == j else zero for j in range(k)] for i in range(k)]


def bareiss_det(M) -> Fraction:
    """Fraction-free determinant (exact mode)."""
    n = len(M)
    if n == 0:
        return Fraction(1)
    # clear denominators row by row so elimination stays in the integers
    rows = []
    scale = Fraction(1)
    for row in M:
        row = [Fraction(v) for v in row]
        den = 1
        for v in row:
            den = den * v.denominator // _gcd(den, v.denominator)
        rows.append([int(v * den) for v in row])
        scale /= den
    A = rows
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1] * scale


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def float_det(M) -> float:
    A = [[float(v) for v in row] for row in M]
    n = len(A)
    det = 1.0
    for k in range(n):
        p = max(range(k, n), key=lambda i: abs(A[i][k]))
        if A[p][k] == 0.0:
            return 0.0
        if p != k:
            A[k], A[p] = A[p], A[k]
            det = -det
        det *= A[k][k]
        for i in range(k + 1, n):
            f = A[i][k] / A[k][k]
            for j in range(k, n):
                A[i][j] -= f * A[k][j]
    return det


def det(M) -> Scalar:
    if matrix_mode(M) == FLOAT:
        return float_det(M)
    return bareiss_det(M)


def exact_rank(M) -> int:
    """Rank by fraction-free elimination."""
    A = [[Fraction(v) for v in row] for row in M]
    rows, cols = shape(A)
    # integerize
    B = []
    for row in A:
        den = 1
        for v in row:
            den = den * v.denominator // _gcd(den, v.denominator)
        B.append([int(v * den) for v in row])
    rank = 0
    prev = 1
    for c in range(cols):
        piv = next((i for i in range(rank, rows) if B[i][c] != 0), None)
        if piv is None:
            continue
        B[rank], B[piv] = B[piv], B[rank]
        for i in range(rank + 1, rows):
            for j in range(c + 1, cols):
                B[i][j] = (B[i][j] * B[rank][c] - B[i][c] * B[rank][j]) // prev
            B[i][c] = 0
        prev = B[rank][c]
        rank += 1
        if rank == rows:
            break
    return rank


def float_rank(M, tol: float = DEFAULT_TOL) -> int:
    """Pivots above ``tol`` times the largest reduced entry (complete pivoting)."""
    A = [[float(v) for v in row] for row in M]
    rows, cols = shape(A)
    rank = 0
    biggest = None
    for k in range(min(rows, cols)):
        best, bi, bj = 0.0, k, k
        for i in range(k, rows):
            for j in range(k, cols):
                if abs(A[i][j]) > best:
                    best, bi, bj = abs(A[i][j]), i, j
        if biggest is None:
            biggest = best
        if best == 0.0 or best <= tol * biggest:
            break
        A[k], A[bi] = A[bi], A[k]
        for row in A:
            row[k], row[bj] = row[bj], row[k]
        for i in range(k + 1, rows):
            f = A[i][k] / A[k][k]
            for j in range(k, cols):
                A[i][j] -= f * A[k][j]
        rank += 1
    return rank


def rank(M, tol: float = DEFAULT_TOL) -> int:
    if not M or not M[0]:
        return 0
    if matrix_mode(M) == FLOAT:
        return float_rank(M, tol)
    return exact_rank(M)


def minor(M, drop_row: int, drop_col: int):
    return [[v for j, v in enumerate(row) if j != drop_col] for i, row in enumerate(M) if i != drop_row]


def adjugate(M) -> Matrix:
    """Transpose of the cofactor matrix."""
    n = len(M)
    mode = matrix_mode(M)
    if n == 1:
        return [[coerce(1, mode)]]
    cof = [[(-1) ** (i + j) * det(minor(M, i, j)) for j in range(n)] for i in range(n)]
    return [[coerce(v, mode) if isinstance(v, int) else v for v in row] for row in transpose(cof)]


def rref(M, tol: float = DEFAULT_TOL):
    """Reduced row echelon form and pivot columns."""
    mode = matrix_mode(M)
    A = normalize(M, mode)
    rows, cols = shape(A)
    scale = max((abs(float(v)) for row in A for v in row), default=0.0)
    thresh = tol * scale if mode == FLOAT else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        if mode == FLOAT:
            piv = max(range(r, rows), key=lambda i: abs(A[i][c]))
            if abs(A[piv][c]) <= thresh:
                continue
        else:
            piv = next((i for i in range(r, rows) if A[i][c] != 0), None)
            if piv is None:
                continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        A[r] = [v / p for v in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def nullspace(M, tol: float = DEFAULT_TOL) -> list[tuple[Scalar, ...]]:
    """Basis of the right kernel."""
    mode = matrix_mode(M)
    R, pivots = rref(M, tol)
    cols = len(M[0])
    free = [c for c in range(cols) if c not in pivots]
    one, zero = coerce(1, mode), coerce(0, mode)
    basis = []
    for f in free:
        v = [zero] * cols
        v[f] = one
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][f]
        basis.append(tuple(v))
    return basis


def solve(A, b, tol: float = DEFAULT_TOL):
    """Some solution of A x = b, or None when inconsistent."""
    mode = matrix_mode([list(r) for r in A] + [list(b)])
    aug = [list(row) + [bi] for row, bi in zip(A, b)]
    aug = normalize(aug, mode)
    R, pivots = rref(aug, tol)
    cols = len(A[0])
    if cols in pivots:
        return None
    x = [coerce(0, mode)] * cols
    for r, pc in enumerate(pivots):
        x[pc] = R[r][cols]
    return tuple(x)


def inverse(M) -> Matrix:
    d = det(M)
    if d == 0:
        raise InputError("singular matrix")
    adj = adjugate(M)
    return [[v / d for v in row] for row in adj]
