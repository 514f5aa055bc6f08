from __future__ import annotations

from fractions import Fraction as F

import pytest

from penrose.corpus import rng_for
from penrose.engine import PenroseParams, build_lattice, random_regular
from penrose.errors import ConcentricCircles, DegeneratePosition, InteriorPoint, IrrationalData
from penrose.matrix import poly_to_sym, rank
from penrose.poly import Poly
from penrose.projective import proj_equal
from penrose.scenarios import (FULL, HEXAGON_SIGMA, SCENARIOS, _bm_penrose, _axis_params, brianchon_hexagon_triples,
                               build_braikenridge_maclaurin, build_brianchon, build_desargues, build_dual_salmon,
                               build_monge, build_pappus, carriers, classify, cross, det3, hexagon_pairs,
                               monge_internal_conic_residual, negative_control, random_instance)

x, y, z = (Poly.var(3, i) for i in range(3))
S0 = x * x + 2 * y * y - z * z + x * y
LINES = (x + z, y - 2 * z, x + y + 3 * z)
CIRCLE = x * x + y * y - z * z

LABELS = {"dual-salmon": "dual Salmon", "brianchon": "Brianchon", "pappus": "Pappos", "desargues": "Desargues",
          "braikenridge-maclaurin": "Braikenridge-Maclaurin", "monge": "Monge"}


def _both(inst):
    return inst.penrose(), inst.classical()


@pytest.mark.parametrize("d", [(1, 1, 1), (1, 4, 9)])
def test_dual_salmon_carriers_concurrent(d):
    inst = build_dual_salmon(S0, LINES, d)
    assert all(c.ok for c in inst.sweep())
    assert _both(inst) == (True, True)
    assert inst.lattice.f[FULL] == 0


def test_dual_salmon_unit_weights_carry_differences():
    inst = build_dual_salmon(S0, LINES, (1, 1, 1))
    vec = [list(l.linear_vector()) for l in LINES]
    for (j, k), c in inst.witnesses["carriers"].items():
        assert proj_equal(c, [a - b for a, b in zip(vec[j - 1], vec[k - 1])])


def test_dual_salmon_sign_flip_breaks_concurrency():
    d = (1, 4, 9)
    inst = build_dual_salmon(S0, LINES, d, (1, 1, -1))
    assert _both(inst) == (False, False)
    # f_123 = 2 d1 d2 d3 (s12 s13 s23 - 1)
    assert inst.lattice.f[FULL] == 2 * 36 * (-1 - 1)


def test_dual_salmon_needs_square_products_in_exact_mode():
    with pytest.raises(IrrationalData):
        build_dual_salmon(S0, LINES, (1, 2, 1))


BRIANCHON_POINTS = [(1, 1, 1), (F(7, 5), F(-1, 5), 1), (F(1, 5), F(-7, 5), 1)]


def test_brianchon_tangent_hexagon():
    inst = build_brianchon(CIRCLE, BRIANCHON_POINTS)
    assert inst.params.d == (1, 1, 1)
    assert _both(inst) == (True, True)
    # every tangent really touches the circle: line-wise equation u^2 + v^2 - w^2 = 0
    for pair in inst.witnesses["tangents"].values():
        for u, v, w in pair:
            assert u * u + v * v - w * w == 0
    # four of the eight diagonal triples are hexagons and those are the concurrent ones
    assert sum(brianchon_hexagon_triples(inst).values()) == 4
    assert classify(inst.lattice) == "Brianchon"


def test_brianchon_two_triangle_branch_fails():
    inst = build_brianchon(CIRCLE, BRIANCHON_POINTS, (1, 1, -1))
    assert _both(inst) == (False, False)


def test_brianchon_rejects_interior_and_incident_points():
    with pytest.raises(InteriorPoint):
        build_brianchon(CIRCLE, [(0, 0, 1), (2, 0, 1), (0, 2, 1)])
    with pytest.raises(DegeneratePosition):
        build_brianchon(CIRCLE, [(1, 0, 1), (2, 0, 1), (0, 2, 1)])


L, M = (0, 1, 0), (0, 1, -1)
A = [(0, 0, 1), (2, 0, 1), (5, 0, 1)]
B = [(1, 1, 1), (-3, 1, 1), (4, 1, 1)]


def test_pappus_canonical_data():
    inst = build_pappus(L, M, A, B)
    assert _both(inst) == (True, True)
    top = poly_to_sym(inst.lattice.vertices[FULL])
    assert rank(top) == 2
    assert proj_equal(top.upper(), poly_to_sym(y * (y - z)).upper())
    assert classify(inst.lattice) == "Pappos"
    # the axis through two cross-join points also carries the third
    X = inst.witnesses["cross_points"]
    assert det3(*X) == 0


def test_pappus_rejects_degenerate_input():
    with pytest.raises(DegeneratePosition):
        build_pappus(L, L, A, [(1, 0, 1), (3, 0, 1), (7, 0, 1)])
    with pytest.raises(DegeneratePosition):
        build_pappus(L, M, A, [(1, 1, 1), (-3, 1, 1), (4, 2, 1)])


def _axis_data():
    axis = [0, 1, 0]
    X = [[1, 0, 1], [3, 0, 1], [-2, 0, 1]]
    Q = [((1, 2, 0), (0, 1, 3)), ((2, -1, 1), (1, 1, -2)), ((0, 3, 1), (1, -2, 2))]
    pairs = [(cross(Xi, [F(v) for v in a]), cross(Xi, [F(v) for v in b])) for Xi, (a, b) in zip(X, Q)]
    return axis, pairs


def test_desargues_perspective_triangles():
    axis, pairs = _axis_data()
    inst = build_desargues(axis, pairs)
    assert _both(inst) == (True, True)
    assert inst.witnesses["top_vanishes"]        # eighth vertex vanishes identically
    assert classify(inst.lattice) == "Desargues"


def test_desargues_broken_centre_and_flipped_sign():
    axis, pairs = _axis_data()
    broken = list(pairs)
    broken[2] = (pairs[2][0], cross([F(-2), F(0), F(1)], [F(5), F(1), F(1)]))
    inst = build_desargues(axis, broken)
    assert inst.classical() is (inst.penrose())    # both decided on the same data
    zig = build_desargues(axis, pairs, (1, 1, -1))
    assert _both(zig) == (False, False)
    assert classify(zig.lattice) == "Braikenridge-Maclaurin"


def test_desargues_broken_pair_off_axis():
    axis, pairs = _axis_data()
    off = list(pairs)
    off[2] = (pairs[2][0], [F(1), F(1), F(1)])
    inst = build_desargues(axis, off)
    assert inst.lattice is None
    assert _both(inst) == (False, False)


def test_braikenridge_maclaurin_six_points_on_eighth_conic():
    axis, pairs = _axis_data()
    sides = [pairs[0][0], pairs[1][0], pairs[2][0], pairs[0][1], pairs[1][1], pairs[2][1]]
    inst = build_braikenridge_maclaurin(axis, sides)
    assert _both(inst) == (True, True)
    assert rank(poly_to_sym(inst.lattice.vertices[FULL])) == 3
    # with all three signs straight, f_123 = 0 and the eighth conic vanishes
    params = _axis_params(axis, hexagon_pairs(sides), (1, 1, 1))
    assert build_lattice(params).vertices[FULL].is_zero()
    # f_12 != 0: the second-layer vertex is no longer a double line and the incidences fail
    bad = params.replace(a={**params.a, (1, 2): params.a[(1, 2)] * 2})
    assert not _bm_penrose(build_lattice(bad))


def test_monge_external_centres():
    inst = build_monge([(0, 0), (4, 0), (1, 3)], [1, 2, 1])
    assert _both(inst) == (True, True)
    E = list(inst.witnesses["homothety_centers"].values())
    assert det3(*E) == 0
    assert classify(inst.lattice) == "Monge"


def test_monge_equal_radii_centre_at_infinity():
    inst = build_monge([(0, 0), (4, 0), (1, 3)], [1, 1, 2])
    assert inst.witnesses["homothety_centers"][(1, 2)][2] == 0
    assert _both(inst) == (True, True)


def test_monge_mixed_signs_fail_and_internal_conic():
    assert _both(build_monge([(0, 0), (4, 0), (1, 3)], [1, 2, 1], (1, 1, -1))) == (False, False)
    inst = build_monge([(0, 0), (6, 0), (1, 5)], [1, 2, 1], (-1, -1, -1))
    assert rank(poly_to_sym(inst.lattice.vertices[FULL])) == 3
    assert monge_internal_conic_residual(inst) < 1e-9


def test_monge_rejects_bad_circles():
    with pytest.raises(ConcentricCircles):
        build_monge([(0, 0), (0, 0), (1, 3)], [1, 2, 1])
    with pytest.raises(DegeneratePosition):
        build_monge([(0, 0), (1, 0), (5, 5)], [5, 1, 1])


def test_generic_lattice_is_generic():
    _, lat = random_regular(rng_for(2))
    assert classify(lat) == "generic"


@pytest.mark.parametrize("name", SCENARIOS)
def test_random_corpus_and_negative_controls(name):
    rng = rng_for(100 + SCENARIOS.index(name))
    for _ in range(20):
        inst = random_instance(name, rng)
        assert all(c.ok for c in inst.sweep())
        assert _both(inst) == (True, True)
        assert classify(inst.lattice) == LABELS[name]
    for _ in range(5):
        assert _both(negative_control(name, rng)) == (False, False)
