from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import expand_product, leibniz_det, minor_rank
from penrose import corpus
from penrose.errors import DegreeMismatch, DegreeOverflow, ModeMismatch, NotRankOne, VariableCountMismatch
from penrose.matrix import PolyMatrix, SymMatrix, adjugate, extract_double_line, poly_det, poly_to_sym, rank, sym_to_poly
from penrose.poly import Poly, monomials
from penrose.scalar import parse_scalar, format_scalar

x, y, z = (Poly.var(3, i) for i in range(3))


def const(c):
    return Poly.const(3, c)


def test_add_examples():
    assert x * x + Poly.zero(3) == x * x
    assert (x * x + y * y - z * z) + y * y == x * x + y * y * 2 - z * z
    assert ((x * x - z * z) + (z * z - x * x)).is_zero()


def test_add_rejects_mismatches():
    with pytest.raises(DegreeMismatch):
        x + x * x
    with pytest.raises(VariableCountMismatch):
        x + Poly.var(4, 0)
    with pytest.raises(ModeMismatch):
        x + Poly.linear([1.0, 0.0, 0.0])


def test_mul_examples():
    assert x * x == Poly(3, 2, {(2, 0, 0): 1})
    assert (x + y) * (x - y) == x * x - y * y
    l = x + y * 2 - z
    expected = x * x + y * y * 4 + z * z + x * y * 4 - x * z * 2 - y * z * 4
    assert l * l == expected


def test_mul_matches_term_by_term_oracle():
    rng = corpus.rng_for(1)
    for _ in range(50):
        f = corpus.form(rng, 4, 2)
        g = corpus.form(rng, 4, 2)
        assert (f * g).coeffs == expand_product(f.coeffs, g.coeffs)


def test_degree_overflow():
    q = x * x * x
    with pytest.raises(DegreeOverflow):
        q * q


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_distributive(seed):
    rng = corpus.rng_for(seed)
    d = rng.randint(0, 2)
    f = corpus.form(rng, 3, d)
    g = corpus.form(rng, 3, 2)
    h = corpus.form(rng, 3, 2)
    assert f * (g + h) == f * g + f * h


def test_poly_det_examples():
    S0 = x * x + y * y - z * z
    M = PolyMatrix([[S0, x], [x, const(-1)]])
    assert poly_det(M) == -(x * x * 2 + y * y - z * z)
    c = F(3, 7)
    assert poly_det([[const(-1), const(c)], [const(c), const(-1)]]) == const(1 - c * c)
    zero1 = Poly.zero(3, 1)
    assert poly_det(PolyMatrix([[S0, zero1], [zero1, const(-1)]])) == -S0


def random_polymatrix(rng, k):
    S0 = corpus.form(rng, 3, 2)
    border = [corpus.line(rng, 3) for _ in range(k - 1)]
    rows = [[S0] + border]
    scal = corpus.sym_rows(rng, k - 1)
    for i in range(k - 1):
        rows.append([border[i]] + [const(v) for v in scal[i]])
    return PolyMatrix(rows)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_poly_det_matches_leibniz(k):
    rng = corpus.rng_for(100 + k)
    for _ in range(15):
        M = random_polymatrix(rng, k)
        assert poly_det(M) == leibniz_det(M.entries)


def test_poly_det_off_principal_degrees():
    rng = corpus.rng_for(5)
    M = random_polymatrix(rng, 4)
    assert poly_det(M.sub([1, 2], [0, 3])).degree == 1
    assert poly_det(M.sub([1, 2], [1, 3])).degree == 0
    assert poly_det(M.sub([0, 2], [0, 3])).degree == 2


def test_sym_roundtrip():
    f = x * x + y * y - z * z
    assert poly_to_sym(f) == SymMatrix.diag(1, 1, -1)
    assert poly_to_sym(x * y * 2) == SymMatrix([[0, 1, 0], [1, 0, 0], [0, 0, 0]])
    g = x * x + x * y * 4 - z * z
    assert sym_to_poly(poly_to_sym(g)) == g
    with pytest.raises(DegreeMismatch):
        poly_to_sym(x)


def test_rank_examples():
    assert rank(SymMatrix.diag(1, 1, -1)) == 3
    assert rank(SymMatrix.outer([1, 2, -1])) == 1
    assert rank(SymMatrix.diag(0, 0, 0)) == 0


def test_rank_matches_minor_oracle():
    rng = corpus.rng_for(7)
    for trial in range(120):
        k = 3
        M = corpus.sym_rows(rng, k)
        # force low ranks on a share of the corpus
        if trial % 3 == 1:
            M = [[a * b for b in M[0]] for a in M[1]]
            M = [[M[i][j] + M[j][i] for j in range(k)] for i in range(k)]
        elif trial % 3 == 2:
            u, v = corpus.vector(rng, 3), corpus.vector(rng, 3)
            M = [[u[i] * u[j] - v[i] * v[j] for j in range(k)] for i in range(k)]
        assert rank(SymMatrix(M)) == minor_rank(M)


def test_float_rank_threshold():
    A = SymMatrix([[1.0, 0.0, 0.0], [0.0, 1e-13, 0.0], [0.0, 0.0, 0.0]])
    assert rank(A) == 1
    assert rank(A, tol=1e-15) == 2
    big = SymMatrix([[1e12, 0.0, 0.0], [0.0, 1e6, 0.0], [0.0, 0.0, 0.0]])
    assert rank(big) == 2


def test_adjugate_examples():
    assert adjugate(SymMatrix.diag(1, 1, 1)) == SymMatrix.diag(1, 1, 1)
    assert adjugate(SymMatrix.diag(1, 1, -1)) == SymMatrix.diag(-1, -1, 1)
    assert adjugate(SymMatrix.outer([1, 2, -1])).is_zero()


@pytest.mark.parametrize("k", [3, 4])
def test_adjugate_identity(k):
    rng = corpus.rng_for(11 + k)
    for _ in range(100):
        A = SymMatrix(corpus.sym_rows(rng, k))
        prod = [[sum(A[i, m] * adjugate(A)[m, j] for m in range(k)) for j in range(k)] for i in range(k)]
        d = leibniz_det([list(r) for r in A.rows])
        assert prod == [[d if i == j else 0 for j in range(k)] for i in range(k)]


def test_extract_double_line_examples():
    assert extract_double_line(x * x) == (x, 1)
    l = x + y * 2 - z
    assert extract_double_line(-(l * l)) == (l, -1)
    with pytest.raises(NotRankOne):
        extract_double_line(x * x + y * y)


def test_extract_double_line_random():
    rng = corpus.rng_for(21)
    for _ in range(100):
        l = corpus.line(rng, rng.choice([3, 4]))
        got, sign = extract_double_line(l * l)
        assert sign == 1
        vec = got.linear_vector()
        assert all(v.denominator == 1 for v in vec)
        first = next(v for v in vec if v != 0)
        assert first > 0
        ratio = next(a / b for a, b in zip(l.linear_vector(), vec) if b != 0)
        assert l == got.scale(ratio)


def test_scalar_parsing():
    assert parse_scalar("3/6") == F(1, 2)
    assert parse_scalar(4) == F(4)
    assert parse_scalar("0.25", "float") == 0.25
    assert format_scalar(F(-3, 4)) == "-3/4"
    with pytest.raises(Exception):
        parse_scalar("1/0")
    with pytest.raises(Exception):
        parse_scalar("0.5")


def test_monomial_counts():
    assert len(monomials(3, 2)) == 6
    assert len(monomials(4, 4)) == 35
