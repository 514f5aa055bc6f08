"""Homogeneous polynomials in 3 (x, y, z) or 4 (x, y, z, w) variables.

Coefficients live in a sparse map from exponent tuples to scalars.  Degrees
run from 0 to 4; zero coefficients are never stored.  The zero polynomial
keeps a nominal degree but may be added to a polynomial of any degree.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .errors import DegreeMismatch, DegreeOverflow, InputError, ModeMismatch, VariableCountMismatch
from .scalar import DEFAULT_TOL, EXACT, FLOAT, Scalar, coerce, common_mode, format_scalar, is_zero

MAX_DEGREE = 4
VAR_NAMES = "xyzw"


def monomials(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors of the given total degree, in descending lex order."""
    out = set()
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.add(tuple(e))
    return sorted(out, reverse=True)


class Poly:
    __slots__ = ("nvars", "degree", "mode", "_coeffs", "_hash")

    def __init__(self, nvars: int, degree: int, coeffs: Mapping[tuple[int, ...], Scalar] | None = None,
                 mode: str | None = None):
        if nvars not in (3, 4):
            raise VariableCountMismatch(f"need 3 or 4 variables, got {nvars}")
        if degree < 0:
            raise DegreeMismatch("negative degree")
        if degree > MAX_DEGREE:
            raise DegreeOverflow(f"degree {degree} exceeds {MAX_DEGREE}")
        coeffs = dict(coeffs or {})
        found = common_mode(coeffs.values())
        if mode is None:
            mode = found or EXACT
        elif found is not None and found != mode:
            raise ModeMismatch(f"{found} coefficients in a {mode} polynomial")
        clean = {}
        for mono, c in coeffs.items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != nvars or min(mono) < 0:
                raise InputError(f"bad exponent vector {mono}")
            if sum(mono) != degree:
                raise DegreeMismatch(f"monomial {mono} is not of degree {degree}")
            c = coerce(c, mode)
            if c != 0:
                clean[mono] = clean.get(mono, 0) + c
        self.nvars = nvars
        self.degree = degree
        self.mode = mode
        self._coeffs = {k: v for k, v in clean.items() if v != 0}
        self._hash = None

    # construction helpers -------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, degree: int = 0, mode: str = EXACT) -> "Poly":
        return cls(nvars, degree, {}, mode)

    @classmethod
    def const(cls, nvars: int, c: Scalar, mode: str | None = None) -> "Poly":
        return cls(nvars, 0, {(0,) * nvars: c}, mode)

    @classmethod
    def var(cls, nvars: int, i: int, mode: str = EXACT) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, 1, {tuple(e): 1}, mode)

    @classmethod
    def linear(cls, vec: Sequence[Scalar], mode: str | None = None) -> "Poly":
        """The linear form sum(vec[i] * var_i)."""
        n = len(vec)
        coeffs = {}
        for i, c in enumerate(vec):
            e = [0] * n
            e[i] = 1
            coeffs[tuple(e)] = c
        return cls(n, 1, coeffs, mode)

    # basic access ---------------------------------------------------------
    @property
    def coeffs(self) -> dict[tuple[int, ...], Scalar]:
        return dict(self._coeffs)

    def coefficient(self, mono: Sequence[int]) -> Scalar:
        return self._coeffs.get(tuple(mono), self._zero())

    def terms(self) -> list[tuple[tuple[int, ...], Scalar]]:
        return sorted(self._coeffs.items(), reverse=True)

    def _zero(self) -> Scalar:
        return 0.0 if self.mode == FLOAT else Fraction(0)

    def is_zero(self, tol: float | None = None) -> bool:
        if tol is None or self.mode == EXACT:
            return not self._coeffs
        return all(is_zero(c, tol) for c in self._coeffs.values())

    def max_abs(self) -> float:
        return max((abs(float(c)) for c in self._coeffs.values()), default=0.0)

    def linear_vector(self) -> tuple[Scalar, ...]:
        """Coefficient vector of a degree-1 form (x, y, z[, w] order)."""
        if self.degree != 1 and self._coeffs:
            raise DegreeMismatch("not a linear form")
        out = []
        for i in range(self.nvars):
            e = [0] * self.nvars
            e[i] = 1
            out.append(self.coefficient(e))
        return tuple(out)

    def constant(self) -> Scalar:
        if self.degree != 0 and self._coeffs:
            raise DegreeMismatch("not a constant")
        return self.coefficient((0,) * self.nvars)

    # arithmetic -----------------------------------------------------------
    def _check(self, other: "Poly") -> None:
        if self.nvars != other.nvars:
            raise VariableCountMismatch(f"{self.nvars} vs {other.nvars} variables")
        if self.mode != other.mode:
            raise ModeMismatch(f"{self.mode} and {other.mode} polynomials mixed")

    def __add__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        self._check(other)
        if not other._coeffs:
            return self
        if not self._coeffs:
            return other
        if self.degree != other.degree:
            raise DegreeMismatch(f"degree {self.degree} + degree {other.degree}")
        out = dict(self._coeffs)
        for k, v in other._coeffs.items():
            out[k] = out.get(k, 0) + v
        return Poly(self.nvars, self.degree, out, self.mode)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, self.degree, {k: -v for k, v in self._coeffs.items()}, self.mode)

    def __sub__(self, other: "Poly") -> "Poly":
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def scale(self, c: Scalar) -> "Poly":
        c = coerce(c, self.mode)
        return Poly(self.nvars, self.degree, {k: v * c for k, v in self._coeffs.items()}, self.mode)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction, float)) and not isinstance(other, bool):
                return self.scale(other)
            return NotImplemented
        self._check(other)
        degree = self.degree + other.degree
        if degree > MAX_DEGREE:
            raise DegreeOverflow(f"product degree {degree} exceeds {MAX_DEGREE}")
        out: dict[tuple[int, ...], Scalar] = {}
        for ka, va in self._coeffs.items():
            for kb, vb in other._coeffs.items():
                k = tuple(a + b for a, b in zip(ka, kb))
                out[k] = out.get(k, 0) + va * vb
        return Poly(self.nvars, degree, out, self.mode)

    def __rmul__(self, other) -> "Poly":
        return self.__mul__(other)

    def __pow__(self, k: int) -> "Poly":
        out = Poly.const(self.nvars, 1, self.mode)
        for _ in range(k):
            out = out * self
        return out

    def evaluate(self, point: Sequence[Scalar]) -> Scalar:
        if len(point) != self.nvars:
            raise VariableCountMismatch("point has wrong length")
        total = self._zero()
        for mono, c in self._coeffs.items():
            term = c
            for v, e in zip(point, mono):
                if e:
                    term = term * v ** e
            total = total + term
        return total

    def to_float(self) -> "Poly":
        return Poly(self.nvars, self.degree, {k: float(v) for k, v in self._coeffs.items()}, FLOAT)

    # comparison -----------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        if self.nvars != other.nvars:
            return False
        if self._coeffs and other._coeffs and self.degree != other.degree:
            return False
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._coeffs.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts = []
        for mono, c in self.terms():
            names = []
            for name, e in zip(VAR_NAMES, mono):
                if e == 1:
                    names.append(name)
                elif e > 1:
                    names.append(f"{name}^{e}")
            body = "*".join(names)
            neg = c < 0
            mag = -c if neg else c
            if body and mag == 1:
                text = body
            elif body:
                text = f"{format_scalar(mag)}*{body}"
            else:
                text = str(format_scalar(mag))
            parts.append(("-" if neg else "+", text))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out


def poly_add(f: Poly, g: Poly) -> Poly:
    return f + g


def poly_mul(f: Poly, g: Poly) -> Poly:
    return f * g


def linear_combination(terms: Iterable[tuple[Scalar, Poly]], nvars: int, degree: int, mode: str = EXACT) -> Poly:
    out = Poly.zero(nvars, degree, mode)
    for c, p in terms:
        out = out + p.scale(c)
    return out
