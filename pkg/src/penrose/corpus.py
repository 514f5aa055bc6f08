"""Seeded random rational data for corpora and the command line."""
from __future__ import annotations

import random
from fractions import Fraction

from .poly import Poly, monomials


def rng_for(seed: int) -> random.Random:
    return random.Random(seed)


def rational(rng: random.Random, nonzero: bool = False) -> Fraction:
    """Numerator in [-9, 9], denominator in [1, 9]."""
    while True:
        q = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        if q or not nonzero:
            return q


def small_int(rng: random.Random, lo: int = -9, hi: int = 9, nonzero: bool = False) -> Fraction:
    while True:
        v = rng.randint(lo, hi)
        if v or not nonzero:
            return Fraction(v)


def vector(rng: random.Random, n: int) -> tuple[Fraction, ...]:
    while True:
        v = tuple(rational(rng) for _ in range(n))
        if any(v):
            return v


def line(rng: random.Random, nvars: int) -> Poly:
    return Poly.linear(vector(rng, nvars))


def form(rng: random.Random, nvars: int, degree: int) -> Poly:
    return Poly(nvars, degree, {m: rational(rng) for m in monomials(nvars, degree)})


def sym_rows(rng: random.Random, k: int) -> list[list[Fraction]]:
    M = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            M[i][j] = M[j][i] = rational(rng)
    return M
