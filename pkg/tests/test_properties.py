from __future__ import annotations

from fractions import Fraction as F

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from penrose import document as docs
from penrose.engine import PenroseParams, build_lattice, edge_residual, face_reports
from penrose.lift3d import ExtrusionFrame, extrude_conic
from penrose.matrix import SymMatrix, sym_to_poly
from penrose.poly import Poly

rationals = st.builds(F, st.integers(-9, 9), st.integers(1, 9))
nonzero = rationals.filter(lambda q: q != 0)


@st.composite
def params(draw, m: int = 3):
    upper = draw(st.lists(rationals, min_size=m * (m + 1) // 2, max_size=m * (m + 1) // 2))
    S0 = SymMatrix.from_upper(m, upper)
    assume(not S0.is_zero())
    lines = []
    for _ in range(3):
        v = draw(st.lists(rationals, min_size=m, max_size=m))
        assume(any(v))
        lines.append(Poly.linear(v))
    d = tuple(draw(nonzero) for _ in range(3))
    a = {(1, 2): draw(rationals), (1, 3): draw(rationals), (2, 3): draw(rationals)}
    return PenroseParams(sym_to_poly(S0), tuple(lines), d, a)


@settings(max_examples=40, deadline=None)
@given(params())
def test_every_edge_identity_vanishes(p):
    lat = build_lattice(p, verify=False)
    assert all(edge_residual(lat, om, k).is_zero() for om, k in lat.edges())


@settings(max_examples=40, deadline=None)
@given(params())
def test_every_face_is_concurrent(p):
    for rep in face_reports(build_lattice(p)):
        assert isinstance(rep, tuple) or rep.concurrent


@given(rationals)
def test_scalar_document_round_trip(q):
    assert docs.load_scalar(docs.dump_scalar(q), "exact", "x") == q


@settings(max_examples=30, deadline=None)
@given(params())
def test_params_document_round_trip(p):
    text = docs.dumps({"version": 1, "params": docs.params_section(p)})
    back = docs.read_params(docs.parse_text(text), "exact")
    assert back.S0 == p.S0 and back.lines == p.lines and back.d == p.d and back.a == p.a


@settings(max_examples=40, deadline=None)
@given(st.lists(rationals, min_size=6, max_size=6), st.lists(rationals, min_size=4, max_size=4))
def test_slice_of_extrusion_is_the_conic(upper, u):
    A = SymMatrix.from_upper(3, upper)
    assume(not A.is_zero())
    frame = ExtrusionFrame(u=tuple(u), O=(1, 2, 3, 1))
    Q = extrude_conic(A, frame)
    assert Q.congruent(frame.basis()) == A
    assert Q.quad(frame.O) == u[0]
