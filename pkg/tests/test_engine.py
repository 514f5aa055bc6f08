from __future__ import annotations

from fractions import Fraction as F
from itertools import combinations

import pytest

from oracles import leibniz_det
from penrose import corpus
from penrose.engine import (PenroseParams, all_subsets, bordered_matrix, build_lattice, chord, classify_degeneracies,
                            desnanot_jacobi_residual, f_scalar, face_conic, face_diagonal, face_point, face_reports,
                            g_scalar, random_params, subdet, verify_all, verify_diag_relations, verify_face_conics,
                            verify_face_diagonals, vertex)
from penrose.errors import IndexInSet, ZeroChord
from penrose.matrix import poly_to_sym, rank
from penrose.poly import Poly
from penrose.projective import ProjHyperplane, ProjPoint, concurrent, proj_equal_poly

x, y, z = (Poly.var(3, i) for i in range(3))
S0 = x * x + y * y - z * z


def unit_diagonal_formulas(S, p, q, r, a, b, c):
    """The cube written out by hand under the unit-diagonal normalization."""
    one = Poly.const(3, 1) if S.nvars == 3 else Poly.const(4, 1)
    T = [S + p * p, S + q * q, S + r * r]
    S1 = S.scale(1 - a * a) + q * q + (q * r).scale(2 * a) + r * r
    S2 = S.scale(1 - b * b) + p * p + (p * r).scale(2 * b) + r * r
    S3 = S.scale(1 - c * c) + p * p + (p * q).scale(2 * c) + q * q
    T0 = (S.scale(1 - a * a - b * b - 2 * a * b * c - c * c) + (p * p).scale(1 - a * a) + (q * q).scale(1 - b * b)
          + (r * r).scale(1 - c * c) + (q * r).scale(2 * (a + b * c)) + (p * r).scale(2 * (b + a * c))
          + (p * q).scale(2 * (c + a * b)))
    return T, (S1, S2, S3), T0


def test_bordered_matrix_layout():
    P = PenroseParams.preset(S0, (x, y, x + y + z), F(1, 2), F(1, 3), F(1, 5))
    B = bordered_matrix(P)
    assert B.order == 4
    assert B.entries[0][0] == S0 and B.entries[0][3] == x + y + z
    assert B.entries[1][1].constant() == -1
    assert B.entries[2][3].constant() == F(1, 2) and B.entries[1][3].constant() == F(1, 3)
    assert B.entries[1][2].constant() == F(1, 5)
    one = PenroseParams(S0, (x,), (F(-1),), {})
    assert bordered_matrix(one).order == 2
    four = random_params(corpus.rng_for(0), 3, 4)
    assert bordered_matrix(four).order == 5


def test_subdet_named_examples():
    P = random_params(corpus.rng_for(2))
    B = bordered_matrix(P)
    assert subdet(B, {0, 1}, {0, 1}) == vertex(P, {1})
    assert subdet(B, {1}, {0}) == P.line(1)
    g = subdet(B, {1, 2}, {1, 3}).constant()
    assert g == g_scalar(P, {1}, 2, 3)
    assert g == P.d[0] * P.off(2, 3) - P.off(1, 3) * P.off(1, 2)


def test_vertex_examples():
    P = PenroseParams.preset(S0, (x, y, x + y + z))
    assert vertex(P, ()) == S0
    assert vertex(P, {2, 3}) == x * x * 2 + y * y * 3 + x * y * 2 + x * z * 2 + y * z * 2
    rng = corpus.rng_for(3)
    for _ in range(20):
        a, b, c = (corpus.rational(rng) for _ in range(3))
        Q = PenroseParams.preset(S0, (x, y, z), a, b, c)
        top = vertex(Q, {1, 2, 3})
        want = 1 - a * a - b * b - 2 * a * b * c - c * c
        # with p, q, r = x, y, z the S0 part is read off by a point where p, q, r vanish... none exists,
        # so compare with the hand formula instead
        assert proj_equal_poly(top, unit_diagonal_formulas(S0, x, y, z, a, b, c)[2])


def test_unit_diagonal_concordance_random():
    rng = corpus.rng_for(4)
    for _ in range(30):
        P = random_params(rng, 3, 3, preset=True)
        p, q, r = P.lines
        a, b, c = P.off(2, 3), P.off(1, 3), P.off(1, 2)
        T, S, T0 = unit_diagonal_formulas(P.S0, p, q, r, a, b, c)
        for i in range(3):
            assert vertex(P, {i + 1}) == -T[i]
        assert vertex(P, {2, 3}) == S[0]
        assert vertex(P, {1, 3}) == S[1]
        assert vertex(P, {1, 2}) == S[2]
        assert vertex(P, {1, 2, 3}) == -T0


def test_chord_examples():
    c = F(2, 7)
    P = PenroseParams.preset(S0, (x, y, x - z), F(1, 3), F(1, 4), c)
    assert chord(P, (), 1) == x
    got = chord(P, {1}, 2)
    assert proj_equal_poly(got, x.scale(c) + y)
    # contact chord between S_k and the top vertex: three-term combination from the table
    top = chord(P, {1, 2}, 3)
    p, q, r = P.lines
    a, b = P.off(2, 3), P.off(1, 3)
    want = p.scale(b + a * c) + q.scale(a + b * c) + r.scale(1 - c * c)
    assert proj_equal_poly(top, want)
    with pytest.raises(IndexInSet):
        chord(P, {1}, 1)


def test_f_scalar_examples():
    P = random_params(corpus.rng_for(5))
    assert f_scalar(P, ()) == 1
    assert f_scalar(P, {2}) == P.d[1]
    assert f_scalar(P, {1, 3}) == P.d[0] * P.d[2] - P.off(1, 3) ** 2
    for s12, s13 in [(1, 1), (1, -1), (-1, 1), (-1, -1)]:
        for s23 in (1, -1):
            d = (F(1), F(4), F(9))
            a = {(1, 2): s12 * 2, (1, 3): s13 * 3, (2, 3): s23 * 6}
            Q = PenroseParams(S0, (x, y, z), d, a)
            assert f_scalar(Q, {1, 2, 3}) == 2 * d[0] * d[1] * d[2] * (s12 * s13 * s23 - 1)


@pytest.mark.parametrize("m,n", [(3, 3), (4, 3), (3, 4), (4, 4)])
def test_edge_identity(m, n):
    rng = corpus.rng_for(10 * m + n)
    for _ in range(8):
        lat = build_lattice(random_params(rng, m, n))
        assert len(lat.vertices) == 2 ** n
        assert len(lat.edges()) == n * 2 ** (n - 1)


def test_zero_lines_proportional_vertices():
    P = random_params(corpus.rng_for(6))
    zero = Poly.zero(3, 1)
    B = bordered_matrix(P)
    # block-diagonal when the border vanishes: each vertex is f * S0
    for om in all_subsets(3):
        rows = sorted(om | {0})
        grid = [[B.entries[i][j] if (i == 0) == (j == 0) else zero for j in rows] for i in rows]
        from penrose.matrix import poly_det
        assert poly_det(grid) == P.S0.scale(f_scalar(P, om))


def test_desnanot_jacobi_random():
    rng = corpus.rng_for(8)
    for trial in range(50):
        n = rng.choice([3, 4])
        P = random_params(rng, rng.choice([3, 4]), n)
        B = bordered_matrix(P)
        size = rng.randint(2, n + 1)
        R = sorted(rng.sample(range(n + 1), size))
        C = sorted(rng.sample(range(n + 1), size))
        r = tuple(sorted(rng.sample(R, 2)))
        c = tuple(sorted(rng.sample(C, 2)))
        assert desnanot_jacobi_residual(B, R, C, r, c).is_zero()


def test_face_point_examples():
    c = F(3, 4)
    P = PenroseParams.preset(S0, (x, y, x + y * 2 + z), F(1, 2), F(-1, 3), c)
    lat = build_lattice(P)
    rep = face_point(lat, (), 1, 2)
    assert rep.concurrent and rep.point == ProjPoint([0, 0, 1])
    con = PenroseParams.preset(S0, (x, y, x + y), F(1, 2), F(1, 3), F(1, 5))
    pts = {r.point for r in face_reports(build_lattice(con))}
    assert pts == {ProjPoint([0, 0, 1])}
    flat = PenroseParams.preset(S0, (x, y, z), F(1, 2), F(1, 3), 0)
    rep = face_point(build_lattice(flat), (), 1, 2)
    assert "chords collapse to two" in rep.notes and rep.point == ProjPoint([0, 0, 1])


def test_face_point_zero_chord():
    P = PenroseParams.preset(S0, (x, x, z), 0, 0, 1)
    lat = build_lattice(P)
    with pytest.raises(ZeroChord):
        face_point(lat, (), 1, 2) if lat.chords[(frozenset({1}), 2)].is_zero() else face_point(lat, {1}, 2, 3)


def test_face_conic_examples():
    rng = corpus.rng_for(11)
    P = random_params(rng)
    for j, k in combinations((1, 2, 3), 2):
        H = face_conic(P, (), j, k)
        assert H == P.S0.scale(P.off(j, k)) - P.line(j) * P.line(k)
    lat = build_lattice(P)
    assert all(c.ok for c in verify_face_conics(lat))
    Q = PenroseParams(S0, (x, y, z), (F(2), F(3), F(5)), {(1, 2): 0})
    assert face_conic(Q, (), 1, 2) == -(x * y)


def test_face_diagonal_examples():
    rng = corpus.rng_for(12)
    P = random_params(rng)
    for k in (1, 2, 3):
        i, j = [t for t in (1, 2, 3) if t != k]
        q = face_diagonal(P, k)
        # rows {i, j}, columns {0, k}: a_jk p_i - a_ik p_j in ascending order
        assert q == P.line(i).scale(P.off(j, k)) - P.line(j).scale(P.off(i, k))
    t = F(2, 3)
    Q = PenroseParams.preset(S0, (x, y, x + z), t, t, t)
    for k in (1, 2, 3):
        i, j = [s for s in (1, 2, 3) if s != k]
        assert proj_equal_poly(face_diagonal(Q, k), Q.line(i) - Q.line(j))
    for _ in range(10):
        lat = build_lattice(random_params(rng))
        assert all(c.ok for c in verify_face_diagonals(lat))


def test_relations_random_and_degenerate():
    rng = corpus.rng_for(13)
    for _ in range(10):
        lat = build_lattice(random_params(rng))
        assert all(c.ok for c in verify_diag_relations(lat))
    P = random_params(rng).replace(a={(1, 2): 0, (1, 3): F(1, 2), (2, 3): 0})
    assert all(c.ok for c in verify_diag_relations(build_lattice(P)))
    zero = Poly.zero(3, 1)
    # zero lines are not valid parameters, so emulate with all-zero border via lattice on tiny lines
    for c in verify_diag_relations(build_lattice(P)):
        assert c.residual.is_zero()


def test_full_suite_quadric_mode():
    rng = corpus.rng_for(14)
    for _ in range(3):
        lat = build_lattice(random_params(rng, 4, 3))
        assert all(c.ok for c in verify_all(lat))


def test_duality_sanity():
    rng = corpus.rng_for(15)
    from penrose.projective import double_contacts
    for _ in range(5):
        P = random_params(rng)
        lat = build_lattice(P)
        for om, k in lat.edges():
            A, Bm = poly_to_sym(lat.vertices[om]), poly_to_sym(lat.vertices[om | {k}])
            if A.det() == 0 or Bm.det() == 0:
                continue
            found = double_contacts(A.adjugate(), Bm.adjugate())
            assert any(rank(A.adjugate() + Bm.adjugate().scale(c.t)) == 1 for c in found if c.t is not None)


def test_classify_d_zero():
    rng = corpus.rng_for(16)
    for _ in range(5):
        P = random_params(rng)
        P = P.replace(d=(F(0),) + P.d[1:])
        found = [f for f in classify_degeneracies(P) if f.kind == "d_j = 0"]
        assert found and all(f.verified for f in found)
        assert vertex(P, {1}) == -(P.line(1) * P.line(1))


def test_classify_f_jk_zero():
    P = PenroseParams(S0, (x, y, x + z), (F(1), F(4), F(9)), {(1, 2): 2, (1, 3): F(1, 2), (2, 3): 1})
    found = [f for f in classify_degeneracies(P) if f.kind == "f_jk = 0"]
    assert len(found) == 1 and found[0].verified
    V = vertex(P, {1, 2})
    assert rank(poly_to_sym(V)) == 1
    assert V == -((y - x.scale(2)) * (y - x.scale(2)))


def test_classify_a_zero():
    P = PenroseParams.preset(S0, (x, y, z + x), 0, F(1, 2), F(1, 3))
    found = [f for f in classify_degeneracies(P) if f.kind == "a_jk = 0"]
    assert len(found) == 1 and found[0].verified
