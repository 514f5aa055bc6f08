"""Scalars: exact rationals (``Fraction``) or doubles, never mixed.

Exact mode is the default.  Python ints are accepted on input and promoted to
``Fraction``; ``bool`` is rejected.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import InputError, ModeMismatch

Scalar = Union[Fraction, float]

EXACT = "exact"
FLOAT = "float"
DEFAULT_TOL = 1e-9


def mode_of(x) -> str:
    if isinstance(x, bool):
        raise InputError("booleans are not scalars")
    if isinstance(x, (Fraction, int)):
        return EXACT
    if isinstance(x, float):
        return FLOAT
    raise InputError(f"not a scalar: {x!r}")


def coerce(x, mode: str) -> Scalar:
    """Bring ``x`` into ``mode``.  Ints go anywhere; floats never become exact."""
    m = mode_of(x)
    if mode == EXACT:
        if m == FLOAT:
            raise ModeMismatch(f"float {x!r} in exact mode")
        return Fraction(x)
    if mode == FLOAT:
        if isinstance(x, int):
            return float(x)
        if m == EXACT:
            raise ModeMismatch(f"exact {x!r} in float mode")
        return x
    raise InputError(f"unknown mode {mode!r}")


def common_mode(values: Iterable) -> str | None:
    """Mode shared by ``values`` (ints are neutral).  None if all are ints or empty."""
    found = None
    for v in values:
        if isinstance(v, int) and not isinstance(v, bool):
            continue
        m = mode_of(v)
        if found is None:
            found = m
        elif found != m:
            raise ModeMismatch("exact and float scalars mixed")
    return found


def to_float(x: Scalar) -> float:
    return float(x)


def is_zero(x: Scalar, tol: float = DEFAULT_TOL) -> bool:
    if isinstance(x, float):
        return abs(x) <= tol
    return x == 0


_INT = re.compile(r"^[+-]?\d+$")
_RAT = re.compile(r"^([+-]?\d+)\s*/\s*(\d+)$")
_DEC = re.compile(r"^[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?$")


def parse_scalar(value, mode: str = EXACT) -> Scalar:
    """Parse an int, a ``"num/den"`` string or (float mode only) a decimal."""
    if isinstance(value, bool):
        raise InputError("booleans are not scalars")
    if isinstance(value, int):
        return coerce(value, mode)
    if isinstance(value, float):
        if mode == EXACT:
            raise InputError(f"decimal {value!r} given in exact mode")
        return value
    if not isinstance(value, str):
        raise InputError(f"cannot parse scalar from {value!r}")
    text = value.strip()
    if _INT.match(text):
        return coerce(int(text), mode)
    m = _RAT.match(text)
    if m:
        den = int(m.group(2))
        if den == 0:
            raise InputError(f"zero denominator in {value!r}")
        q = Fraction(int(m.group(1)), den)
        return q if mode == EXACT else float(q)
    if _DEC.match(text):
        if mode == EXACT:
            raise InputError(f"decimal {value!r} given in exact mode")
        return float(text)
    raise InputError(f"cannot parse scalar from {value!r}")


def format_scalar(x: Scalar) -> str | float:
    """Exact values become ``"num/den"`` strings (``"num"`` for integers)."""
    if isinstance(x, float):
        return x
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def exact_sqrt(x: Fraction) -> Fraction | None:
    """Rational square root of ``x`` if it exists."""
    x = Fraction(x)
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def sqrt(x: Scalar) -> Scalar:
    """Square root in the mode of ``x``; raises for irrational exact roots."""
    if isinstance(x, float):
        return math.sqrt(x)
    r = exact_sqrt(x)
    if r is None:
        raise InputError(f"{x} has no rational square root")
    return r


def primitive_vector(vec: Sequence[Fraction]) -> tuple[int, ...]:
    """Clear denominators and divide out the content; sign is left alone."""
    vec = [Fraction(v) for v in vec]
    den = 1
    for v in vec:
        den = den * v.denominator // math.gcd(den, v.denominator)
    ints = [int(v * den) for v in vec]
    g = 0
    for i in ints:
        g = math.gcd(g, i)
    if g == 0:
        return tuple(ints)
    return tuple(i // g for i in ints)
