from __future__ import annotations

from fractions import Fraction as F

from hypothesis import given, settings
from hypothesis import strategies as st

from penrose import upoly


def from_roots(roots, lead=F(1)):
    p = [lead]
    for r in roots:
        nxt = [F(0)] * (len(p) + 1)
        for i, c in enumerate(p):
            nxt[i + 1] += c
            nxt[i] -= r * c
        p = nxt
    return p


def test_interpolate_recovers_coefficients():
    p = [F(3), F(-1, 2), F(0), F(7, 3)]
    assert upoly.interpolate(lambda t: upoly.evaluate(p, t), 3) == p


def test_gcd_and_squarefree():
    a = from_roots([F(1), F(1), F(2)])
    b = from_roots([F(1), F(5)])
    assert upoly.gcd(a, b) == from_roots([F(1)])
    assert upoly.squarefree(a) == from_roots([F(1), F(2)])


rationals = st.fractions(min_value=-50, max_value=50, max_denominator=40)


@settings(max_examples=80, deadline=None)
@given(st.lists(rationals, min_size=1, max_size=4), st.integers(1, 9))
def test_rational_roots_found(roots, lead):
    p = from_roots(roots, F(lead))
    assert upoly.rational_roots(p) == sorted(set(roots))


def test_irrational_roots_isolated_not_rational():
    p = [F(-2), F(0), F(1)]  # t^2 - 2
    assert upoly.rational_roots(p) == []
    iv = upoly.isolate_real_roots(p)
    assert len(iv) == 2
    for lo, hi in iv:
        assert lo * lo <= 2 <= hi * hi or hi * hi <= 2 <= lo * lo
    assert upoly.isolate_real_roots([F(1), F(0), F(1)]) == []
