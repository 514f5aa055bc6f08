from __future__ import annotations

from fractions import Fraction as F

import pytest

from oracles import cross, proportional
from penrose import corpus
from penrose.errors import CoincidentArguments, CoincidentLines, DegenerateSetMember, NeedsDualPartner, NoContact, ProjectivelyEqual
from penrose.matrix import SymMatrix, poly_to_sym, rank, sym_to_poly
from penrose.poly import Poly
from penrose.projective import (ProjHyperplane, ProjPoint, complete_from_primal, concurrent, double_contact, join2, join3,
                                line_meet_plane, meet2, meet3, pencil_degenerates, polar, proj_equal, ring_contact)

x, y, z = (Poly.var(3, i) for i in range(3))
X, Y, Z, W = (Poly.var(4, i) for i in range(4))
H = ProjHyperplane.from_poly
CIRCLE = SymMatrix.diag(1, 1, -1)


def test_meet_examples():
    assert meet2(H(x), H(y)) == ProjPoint([0, 0, 1])
    assert meet2(H(x), H(x + y)) == ProjPoint([0, 0, 1])
    assert meet2(H(x + z), H(y + z)) == ProjPoint([1, 1, -1])
    with pytest.raises(CoincidentLines):
        meet2(H(x), H(x * 3))


def test_meet_incidence_random():
    rng = corpus.rng_for(3)
    for _ in range(200):
        a, b = corpus.vector(rng, 3), corpus.vector(rng, 3)
        if proportional(a, b):
            continue
        P = meet2(ProjHyperplane(a), ProjHyperplane(b))
        assert sum(p * q for p, q in zip(P.coords, a)) == 0
        assert sum(p * q for p, q in zip(P.coords, b)) == 0
        assert proportional(P.coords, cross(a, b))


def test_join_examples():
    assert join2(ProjPoint([1, 0, 0]), ProjPoint([0, 1, 0])) == H(z)
    with pytest.raises(CoincidentArguments):
        join2(ProjPoint([1, 2, 3]), ProjPoint([2, 4, 6]))
    axis = meet3(H(W), H(Z))
    via_points = join3(ProjPoint([1, 0, 0, 0]), ProjPoint([0, 1, 0, 0]))
    assert axis == via_points


def test_plucker_relation_random():
    rng = corpus.rng_for(4)
    for _ in range(100):
        a, b = ProjHyperplane(corpus.vector(rng, 4)), ProjHyperplane(corpus.vector(rng, 4))
        P, Q = ProjPoint(corpus.vector(rng, 4)), ProjPoint(corpus.vector(rng, 4))
        L1, L2 = meet3(a, b), join3(P, Q)
        assert L1.plucker_relation() == 0 and L2.plucker_relation() == 0
        assert L1.lies_in(a) and L1.lies_in(b)
        assert L2.contains(P) and L2.contains(Q)
        R = line_meet_plane(L2, a)
        assert L2.contains(R)


def test_concurrent_examples():
    assert concurrent([H(x), H(y), H(x + y)])
    assert not concurrent([H(x), H(y), H(z)])
    c = F(5, 3)
    assert concurrent([H(x), H(y), H(x * c + y), H(x + y * c)])


def test_polar_examples():
    assert polar(CIRCLE, ProjPoint([1, 0, 1])) == H(x - z)
    assert polar(CIRCLE, ProjPoint([0, 0, 1])) == H(z)
    l = x + y * 2 - z
    assert polar(poly_to_sym(l * l), ProjPoint([1, 0, 0])) == H(l)
    with pytest.raises(DegenerateSetMember):
        polar(poly_to_sym(x * x), ProjPoint([0, 1, 0]))


def test_pencil_examples():
    members = pencil_degenerates(CIRCLE, poly_to_sym(y * y))
    ts = {m.t: m.rank for m in members}
    assert ts == {-1: 2, None: 1}
    found = pencil_degenerates(SymMatrix.diag(1, 1, -1), SymMatrix.diag(1, 2, -1))
    assert {m.t: m.rank for m in found} == {-1: 1, F(-1, 2): 2}
    l = x - y + z * 2
    A = CIRCLE
    B = A + poly_to_sym(l * l)
    rank_one = [m for m in pencil_degenerates(A, B) if m.rank == 1]
    assert len(rank_one) == 1
    with pytest.raises(ProjectivelyEqual):
        pencil_degenerates(A, A.scale(3))


def test_pencil_irrational_isolated():
    # det(A + tB) = 2t^2 - 1, and B itself is singular
    A = SymMatrix([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    B = SymMatrix.diag(1, 2, 0)
    members = pencil_degenerates(A, B)
    irr = [m for m in members if not m.exact]
    assert len(irr) == 2
    for m in irr:
        lo, hi = m.interval
        assert lo <= hi and hi - lo < F(1, 10 ** 12)
        assert abs(abs(float(lo)) - 0.5 ** 0.5) < 1e-12
    assert [m.rank for m in members if m.t is None and m.exact] == [2]


def test_pencil_at_most_three_members():
    rng = corpus.rng_for(9)
    for _ in range(40):
        A, B = SymMatrix(corpus.sym_rows(rng, 3)), SymMatrix(corpus.sym_rows(rng, 3))
        if A.det() == 0 or B.det() == 0:
            continue
        assert len(pencil_degenerates(A, B)) <= 3


def test_double_contact_examples():
    c = double_contact(x * x + y * y - z * z, x * x + y * y * 2 - z * z)
    assert c.chord == H(y)
    c = double_contact(x * x + y * y - z * z, x * x + y * y)
    assert c.chord == H(z)
    with pytest.raises(NoContact):
        double_contact(SymMatrix.diag(1, 1, -1), SymMatrix.diag(1, 2, 3))


def test_double_contact_rank_one_member_random():
    rng = corpus.rng_for(12)
    for _ in range(40):
        A = SymMatrix(corpus.sym_rows(rng, 3))
        l = corpus.line(rng, 3)
        s = corpus.rational(rng, nonzero=True)
        B = (A + poly_to_sym(l * l)).scale(s)
        c = double_contact(A, B)
        M = A + B.scale(c.t)
        assert rank(M) == 1
        assert c.chord == H(l)


def test_polar_restriction_on_chord():
    rng = corpus.rng_for(13)
    A = SymMatrix(corpus.sym_rows(rng, 3))
    l = corpus.line(rng, 3)
    B = A.scale(3) + poly_to_sym(l * l).scale(-2)
    chord = double_contact(A, B).chord
    n = 0
    while n < 20:
        Q = ProjPoint(corpus.vector(rng, 3))
        try:
            P = meet2(chord, join2(Q, ProjPoint(corpus.vector(rng, 3))))
            pa, pb = polar(A, P), polar(B, P)
        except Exception:
            continue
        assert pa == pb
        n += 1


def test_ring_contact_examples():
    sphere = X * X + Y * Y + Z * Z - W * W
    rc = ring_contact(poly_to_sym(sphere), poly_to_sym(sphere + Z * Z))
    assert rc.plane == H(Z)
    assert rc.point == ProjPoint([0, 0, 1, 0])
    assert not rc.x_contact
    rc = ring_contact(poly_to_sym(X * X + Y * Y - W * W), poly_to_sym(sphere))
    assert rc.plane == H(Z)
    far = poly_to_sym((X - W * 5) * (X - W * 5) + Y * Y + Z * Z - W * W * 4)
    with pytest.raises(NoContact):
        ring_contact(poly_to_sym(sphere), far)


def test_x_contact_flag():
    sphere = X * X + Y * Y + Z * Z - W * W
    rc = ring_contact(poly_to_sym(sphere), poly_to_sym(sphere + (Z - W) * (Z - W)))
    assert rc.x_contact
    assert rc.point == ProjPoint([0, 0, 1, 1])


def test_complete_from_primal():
    C = complete_from_primal(CIRCLE)
    assert C.dual == SymMatrix.diag(-1, -1, 1)
    lp = complete_from_primal(poly_to_sym(x * y * 2))
    assert rank(lp.dual) == 1
    with pytest.raises(NeedsDualPartner):
        complete_from_primal(poly_to_sym(x * x))
    rng = corpus.rng_for(15)
    for k in (3, 4):
        for _ in range(20):
            A = SymMatrix(corpus.sym_rows(rng, k))
            C = complete_from_primal(A)
            d = A.det()
            prod = [[sum(C.primal[i, m] * C.dual[m, j] for m in range(k)) for j in range(k)] for i in range(k)]
            assert prod == [[d if i == j else 0 for j in range(k)] for i in range(k)]


def test_proj_equal_float():
    assert proj_equal([1.0, 2.0, 3.0], [-2.0, -4.0, -6.0 + 1e-12])
    assert not proj_equal([1.0, 2.0, 3.0], [1.0, 2.0, 3.1])
