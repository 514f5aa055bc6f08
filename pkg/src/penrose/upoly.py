"""Univariate polynomials over the rationals (coefficient lists, constant term first).

Used for pencil parameters: determinants and minors of ``A + t B`` are
polynomials in ``t`` of degree at most 4.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Sequence

UPoly = list  # list[Fraction], low degree first


def trim(p: Sequence[Fraction]) -> UPoly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p: Sequence[Fraction]) -> int:
    return len(trim(p)) - 1


def evaluate(p: Sequence, t):
    acc = 0
    for c in reversed(p):
        acc = acc * t + c
    return acc


def interpolate(f: Callable[[Fraction], Fraction], deg: int) -> UPoly:
    """Coefficients of the degree-``deg`` polynomial agreeing with ``f`` at t = 0..deg."""
    xs = [Fraction(i) for i in range(deg + 1)]
    ys = [Fraction(f(x)) for x in xs]
    # Newton divided differences, then expand
    coef = list(ys)
    for j in range(1, deg + 1):
        for i in range(deg, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = [Fraction(0)] * (deg + 1)
    basis = [Fraction(1)]
    for i in range(deg + 1):
        for k, b in enumerate(basis):
            out[k] += coef[i] * b
        # multiply basis by (t - xs[i])
        nxt = [Fraction(0)] * (len(basis) + 1)
        for k, b in enumerate(basis):
            nxt[k + 1] += b
            nxt[k] -= xs[i] * b
        basis = nxt
    return trim(out)


def derivative(p: Sequence[Fraction]) -> UPoly:
    return trim([i * c for i, c in enumerate(p)][1:])


def divmod_poly(a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[UPoly, UPoly]:
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    while len(trim(r)) >= len(b):
        r = trim(r)
        shift = len(r) - len(b)
        c = r[-1] / b[-1]
        q[shift] = c
        for i, bc in enumerate(b):
            r[i + shift] -= c * bc
        r = trim(r)
        if not r:
            break
    return trim(q), trim(r)


def monic(p: Sequence[Fraction]) -> UPoly:
    p = trim(p)
    return [c / p[-1] for c in p] if p else []


def gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> UPoly:
    a, b = trim(a), trim(b)
    while b:
        _, r = divmod_poly(a, b)
        a, b = b, r
    return monic(a)


def squarefree(p: Sequence[Fraction]) -> UPoly:
    p = trim(p)
    if len(p) <= 2:
        return monic(p)
    g = gcd(p, derivative(p))
    q, _ = divmod_poly(p, g)
    return monic(q)


def _cleared(p: Sequence[Fraction]) -> list[int]:
    den = 1
    for c in p:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return [int(c * den) for c in p]


def rational_roots(p: Sequence[Fraction]) -> list[Fraction]:
    """Distinct rational roots.

    A root r/s in lowest terms has s dividing the leading coefficient L of the
    cleared integer polynomial, and two such fractions differ by at least
    1/L^2.  Each real root is isolated to an interval narrower than that and
    the single admissible candidate inside is tested exactly.
    """
    p = trim(p)
    roots = set()
    while p and p[0] == 0:
        roots.add(Fraction(0))
        p = p[1:]
    if len(p) <= 1:
        return sorted(roots)
    sq = squarefree(p)
    lead = abs(_cleared(sq)[-1])
    width = Fraction(1, 4 * lead * lead)
    for lo, hi in isolate_real_roots(sq, width):
        if lo == hi:
            roots.add(lo)
            continue
        cand = ((lo + hi) / 2).limit_denominator(lead)
        if evaluate(sq, cand) == 0:
            roots.add(cand)
    return sorted(roots)


def deflate(p: Sequence[Fraction], roots: Sequence[Fraction]) -> UPoly:
    p = trim(p)
    for r in roots:
        while True:
            q, rem = divmod_poly(p, [-r, Fraction(1)])
            if rem:
                break
            p = q
    return p


def sturm_sequence(p: Sequence[Fraction]) -> list[UPoly]:
    seq = [trim(p), derivative(p)]
    while seq[-1]:
        _, r = divmod_poly(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def _sign_changes(seq: list[UPoly], t: Fraction) -> int:
    signs = [evaluate(s, t) for s in seq]
    signs = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def root_bound(p: Sequence[Fraction]) -> Fraction:
    p = trim(p)
    lead = abs(p[-1])
    return 1 + max((abs(c) / lead for c in p[:-1]), default=Fraction(0))


def isolate_real_roots(p: Sequence[Fraction], width: Fraction = Fraction(1, 10 ** 15)) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals (lo, hi], each holding exactly one distinct real root."""
    p = squarefree(p)
    if len(p) <= 1:
        return []
    seq = sturm_sequence(p)
    B = root_bound(p)
    out = []

    def count(lo, hi):
        return _sign_changes(seq, lo) - _sign_changes(seq, hi)

    stack = [(-B, B)]
    while stack:
        lo, hi = stack.pop()
        n = count(lo, hi)
        if n == 0:
            continue
        if n == 1:
            while hi - lo > width:
                mid = (lo + hi) / 2
                if evaluate(p, mid) == 0:
                    lo = hi = mid
                    break
                if count(lo, mid) == 1:
                    hi = mid
                else:
                    lo = mid
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((mid, hi))
        stack.append((lo, mid))
    return sorted(out)


def real_roots_float(p: Sequence[Fraction]) -> list[float]:
    return [float((lo + hi) / 2) for lo, hi in isolate_real_roots(p)]
