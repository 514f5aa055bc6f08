"""Independent reference computations used only by the tests."""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations

from penrose.poly import Poly


def perm_sign(p) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


def leibniz_det(M):
    """Sum over permutations; works for scalars and polynomials alike."""
    n = len(M)
    total = None
    for p in permutations(range(n)):
        term = None
        for i in range(n):
            term = M[i][p[i]] if term is None else term * M[i][p[i]]
        if perm_sign(p) < 0:
            term = -term
        total = term if total is None else total + term
    return total


def minor_rank(M) -> int:
    """Largest k with a nonzero k x k minor."""
    rows, cols = len(M), len(M[0])
    for k in range(min(rows, cols), 0, -1):
        for rs in combinations(range(rows), k):
            for cs in combinations(range(cols), k):
                sub = [[Fraction(M[i][j]) for j in cs] for i in rs]
                if leibniz_det(sub) != 0:
                    return k
    return 0


def expand_product(a: dict, b: dict) -> dict:
    """Multiply two polynomials given as {exponent tuple: coefficient} term by term."""
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c != 0}


def evaluate_quadratic(coeffs, point):
    total = 0
    for e, c in coeffs.items():
        t = c
        for v, k in zip(point, e):
            t *= v ** k
        total += t
    return total


def cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def proportional(u, v) -> bool:
    """Exact test: u and v nonzero and parallel."""
    if not any(u) or not any(v):
        return False
    n = len(u)
    return all(u[i] * v[j] == u[j] * v[i] for i in range(n) for j in range(n))
