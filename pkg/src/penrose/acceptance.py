"""The acceptance suite: twelve seeded, exact checks run by ``selftest``."""
from __future__ import annotations

import io
import re
import time
from dataclasses import dataclass
from fractions import Fraction

from .completion import FULL, SevenConfig, complement, complete, complete_quadric_via_basis
from .corpus import rational, rng_for
from .engine import (PenroseParams, all_subsets, build_lattice, edge_residual, face_reports, parse_label,
                     random_params, random_regular, verify_diag_relations, verify_face_conics,
                     verify_face_diagonals, vertex)
from .lift3d import ExtrusionFrame, extrude_seven, face_structure, slice_cube
from .matrix import poly_to_sym, rank, sym_to_poly
from .errors import NoContact
from .poly import Poly
from .projective import double_contact, proj_equal, proj_equal_poly, proj_equal_sym
from .scenarios import SCENARIOS, det3, negative_control, random_instance


@dataclass(frozen=True)
class Result:
    number: int
    name: str
    anchor: str
    ok: bool
    detail: str
    seconds: float


def _expanded_cube(S, p, q, r, a, b, c):
    """Vertices written out by hand for d = -1 and (a, b, c) = (a_23, a_13, a_12)."""
    T = [S + p * p, S + q * q, S + r * r]
    S1 = S.scale(1 - a * a) + q * q + (q * r).scale(2 * a) + r * r
    S2 = S.scale(1 - b * b) + p * p + (p * r).scale(2 * b) + r * r
    S3 = S.scale(1 - c * c) + p * p + (p * q).scale(2 * c) + q * q
    T0 = (S.scale(1 - a * a - b * b - 2 * a * b * c - c * c) + (p * p).scale(1 - a * a) + (q * q).scale(1 - b * b)
          + (r * r).scale(1 - c * c) + (q * r).scale(2 * (a + b * c)) + (p * r).scale(2 * (b + a * c))
          + (p * q).scale(2 * (c + a * b)))
    return T, (S1, S2, S3), T0


def _corpus(seed: int, count: int, m: int = 3):
    rng = rng_for(seed)
    return [random_regular(rng, m=m)[1] for _ in range(count)]


# --- criteria --------------------------------------------------------------------------


def criterion_1():
    t0 = time.perf_counter()
    rng = rng_for(101)
    bad = 0
    for _ in range(200):
        lat = build_lattice(random_params(rng), verify=False)
        bad += sum(not edge_residual(lat, om, k).is_zero() for om, k in lat.edges())
    dt = time.perf_counter() - t0
    return bad == 0 and dt < 10.0, f"200 lattices x 12 edges, {bad} nonzero residuals, {dt:.1f} s"


def criterion_2():
    rng = rng_for(102)
    bad = 0
    for _ in range(100):
        P = random_params(rng, preset=True)
        p, q, r = P.lines
        a, b, c = P.off(2, 3), P.off(1, 3), P.off(1, 2)
        T, S, T0 = _expanded_cube(P.S0, p, q, r, a, b, c)
        lat = build_lattice(P, verify=False)
        ok = all(proj_equal_poly(lat.vertices[frozenset({i + 1})], T[i]) for i in range(3))
        ok &= all(proj_equal_poly(lat.vertices[complement(i + 1)], S[i]) for i in range(3))
        ok &= proj_equal_poly(lat.vertices[FULL], T0)
        # the S0 coefficient of the eighth vertex, read off as V(S0) - V(0)
        base = vertex(P.replace(S0=Poly.zero(3, 2)), FULL)
        kappa = 1 - a * a - b * b - 2 * a * b * c - c * c
        diff = lat.vertices[FULL] - base
        ok &= diff == P.S0.scale(kappa) or diff == P.S0.scale(-kappa)
        bad += not ok
    return bad == 0, f"100 unit-diagonal samples, {bad} mismatches"


def criterion_3():
    lats = _corpus(103, 100) + [random_instance(name, rng_for(200 + i)).lattice for i, name in enumerate(SCENARIOS)]
    faces = bad = 0
    for lat in lats:
        if lat is None:
            continue
        for rep in face_reports(lat):
            faces += 1
            if not isinstance(rep, tuple) and not rep.concurrent:
                bad += 1
    return bad == 0, f"{faces} faces over {len(lats)} lattices, {bad} not concurrent"


def criterion_4():
    lats = _corpus(104, 60)
    count = bad = 0
    for lat in lats:
        for chk in verify_face_conics(lat) + verify_face_diagonals(lat) + verify_diag_relations(lat):
            count += 1
            bad += not (chk.ok and (chk.residual is None or chk.residual.is_zero()))
    return bad == 0, f"{count} identities over {len(lats)} lattices, {bad} failures"


def _round_trip(seed: int, count: int, m: int) -> int:
    rng = rng_for(seed)
    bad = 0
    for k in range(count):
        _, lat = random_regular(rng, m=m, preset=k % 2 == 0)
        res = complete(SevenConfig.from_lattice(lat))
        bad += not proj_equal_poly(sym_to_poly(res.primary), lat.vertices[FULL])
    return bad


def criterion_5():
    bad3 = _round_trip(105, 200, 3)
    bad4 = _round_trip(205, 100, 4)
    return bad3 == 0 and bad4 == 0, f"200 conic cubes ({bad3} failures), 100 quadric cubes ({bad4} failures)"


def criterion_6():
    rng = rng_for(106)
    bad = edges = 0
    for _ in range(50):
        lat = build_lattice(random_params(rng, n=4), verify=False)
        for om, k in lat.edges():
            edges += 1
            bad += not edge_residual(lat, om, k).is_zero()
    return bad == 0 and edges == 50 * 32, f"{edges} hypercube edges, {bad} nonzero residuals"


def _frame(rng) -> ExtrusionFrame:
    while True:
        u = tuple(rational(rng) for _ in range(4))
        if u[0] != 0:
            return ExtrusionFrame(u=u)


def criterion_7():
    rng = rng_for(107)
    bad = []
    coaxial = 0
    for i in range(100):
        _, lat = random_regular(rng)
        frame = _frame(rng)
        try:
            lifted = extrude_seven(SevenConfig.from_lattice(lat), frame)
            eight = dict(lifted.vertices)
            eight[FULL] = complete(lifted).primary
            cut = slice_cube(eight, frame.base_plane, frame.basis())
            ok = cut.ok and all(proj_equal_sym(cut.vertices[s], poly_to_sym(lat.vertices[s])) for s in all_subsets(3))
            fs = face_structure(eight)
            # every face axis passes through the apex; when the axes are distinct O is their only common point
            ok &= fs.ok and len(fs.axes) == 6 and all(ax.contains(frame.apex) for ax in fs.axes.values())
            if fs.branch == "concurrent":
                ok &= fs.O == frame.apex
            else:
                coaxial += 1
        except Exception as exc:   # any failure of the pipeline counts against the criterion
            ok = False
            bad.append(f"#{i}: {type(exc).__name__}")
            continue
        if not ok:
            bad.append(f"#{i}")
    return not bad, f"100 extruded cubes ({coaxial} with a common face axis), failures: {', '.join(bad) or 'none'}"


def criterion_8():
    rng = rng_for(108)
    bad = 0
    for _ in range(50):
        _, lat = random_regular(rng)
        lifted = extrude_seven(SevenConfig.from_lattice(lat), _frame(rng))
        via = complete_quadric_via_basis(lifted)
        bad += not proj_equal_sym(via.primal, complete(lifted).primary)
    return bad == 0, f"50 extruded instances, {bad} disagreements"


def criterion_9():
    notes = []
    ok = True
    for i, name in enumerate(SCENARIOS):
        rng = rng_for(109 + i)
        inst = random_instance(name, rng)
        pos = all(c.ok for c in inst.sweep()) and inst.penrose() and inst.classical()
        if name == "monge":
            pos &= det3(*inst.witnesses["homothety_centers"].values()) == 0
        neg = negative_control(name, rng)
        neg_ok = not neg.penrose() and not neg.classical()
        ok &= pos and neg_ok
        notes.append(f"{name}: {'ok' if pos else 'FAIL'}/{'neg ok' if neg_ok else 'neg FAIL'}")
    return ok, "; ".join(notes)


def criterion_10():
    t0 = time.perf_counter()
    x, y, z = (Poly.var(3, i) for i in range(3))
    S0 = x * x + y * y - z * z + x * z
    params = PenroseParams.preset(S0, (x, y, x + y), Fraction(1, 2), Fraction(1, 3), Fraction(2, 5))
    lat = build_lattice(params)
    seven = SevenConfig.from_lattice(lat)
    res = complete(seven)
    ok = not res.unique and res.second is not None
    ok &= proj_equal_poly(sym_to_poly(res.primary), lat.vertices[FULL])
    neighbours = [seven.primal(complement(i)) for i in (1, 2, 3)]
    if ok:
        ok &= not proj_equal_sym(res.second, res.primary)
        if res.second_mode == "exact":
            # double_contact raises NoContact unless the pencil has an exact rank-one member
            try:
                for N in neighbours:
                    double_contact(res.second, N)
            except NoContact:
                ok = False
        else:
            ok &= res.second_residual is not None and res.second_residual < 1e-9
    dt = time.perf_counter() - t0
    ok &= dt < 1.0
    return ok, f"two completions, second via {res.second_mode} solve, {dt:.2f} s"


def criterion_11():
    rng = rng_for(111)
    bad = {"d": 0, "f": 0, "a": 0}
    for _ in range(20):
        P = random_params(rng)
        j = rng.randint(1, 3)
        d = list(P.d)
        d[j - 1] = Fraction(0)
        P = P.replace(d=tuple(d))
        bad["d"] += vertex(P, {j}) != -(P.line(j) * P.line(j))
    for _ in range(20):
        P = random_params(rng)
        j, k = sorted(rng.sample((1, 2, 3), 2))
        s, t = rational(rng, nonzero=True), rational(rng, nonzero=True)
        sign = rng.choice((1, -1))
        d = list(P.d)
        d[j - 1], d[k - 1] = sign * s * s, sign * t * t
        P = P.replace(d=tuple(d), a={**P.a, (j, k): s * t})
        V = vertex(P, {j, k})
        bad["f"] += V.is_zero() or rank(poly_to_sym(V)) != 1
    for _ in range(20):
        P = random_params(rng)
        j, k = sorted(rng.sample((1, 2, 3), 2))
        P = P.replace(a={**P.a, (j, k): Fraction(0)})
        lat = build_lattice(P)
        e, J, K = frozenset(), frozenset({j}), frozenset({k})
        pairs = [(lat.chords[(e, j)], lat.chords[(K, j)]), (lat.chords[(e, k)], lat.chords[(J, k)])]
        bad["a"] += not all(proj_equal(u.linear_vector(), v.linear_vector()) for u, v in pairs)
    ok = not any(bad.values())
    return ok, "20 instances each; failures d_j=0: {d}, f_jk=0: {f}, a_jk=0: {a}".format(**bad)


def criterion_12():
    import tempfile
    import os
    from . import cli
    from .svg import conic_residual
    details = []
    ok = True
    with tempfile.TemporaryDirectory() as tmp:
        outs = []
        for run in range(2):
            path = os.path.join(tmp, f"cube{run}.json")
            cli.main(["construct", "--seed", "12", "--out", path])
            with open(path, "rb") as fh:
                outs.append(fh.read())
        same = outs[0] == outs[1]
        reps = []
        for run in range(2):
            path = os.path.join(tmp, f"scen{run}.json")
            with _quiet():
                cli.main(["scenario", "brianchon", "--seed", "7", "--out", path])
            with open(path, "rb") as fh:
                reps.append(fh.read())
        same &= reps[0] == reps[1]
        details.append(f"byte-identical reruns: {same}")
        svg_path = os.path.join(tmp, "cube.svg")
        cli.main(["render", os.path.join(tmp, "cube0.json"), "--out", svg_path])
        with open(svg_path, encoding="utf-8") as fh:
            text = fh.read()
        from . import document
        verts = document.read_vertices(document.parse_text(outs[0].decode()), "exact")
        worst, branches, fewest = 0.0, 0, None
        for m in re.finditer(r'data-vertex="([^"]+)" data-branch="\d+" d="([^"]+)"', text):
            A = verts[parse_label(m.group(1))]
            nums = [float(t) for t in m.group(2).replace("M", " ").replace("L", " ").split()]
            pts = list(zip(nums[::2], nums[1::2]))
            branches += 1
            fewest = len(pts) if fewest is None else min(fewest, len(pts))
            worst = max([worst] + [conic_residual(A, px, py) for px, py in pts])
        svg_ok = branches > 0 and worst <= 1e-6 and fewest >= 128
        details.append(f"svg: {branches} branches, >= {fewest} samples, worst residual {worst:.1e}")
        ok = same and svg_ok
    return ok, "; ".join(details)


class _quiet:
    def __enter__(self):
        import sys
        self._old, sys.stdout = sys.stdout, io.StringIO()

    def __exit__(self, *exc):
        import sys
        sys.stdout = self._old


CRITERIA = [
    (1, "edge identities", "edge identity on 200 random cubes", criterion_1),
    (2, "unit-diagonal concordance", "hand-expanded vertices", criterion_2),
    (3, "face-point concurrency", "four chords per face concurrent", criterion_3),
    (4, "face conic, diagonal and relation identities", "subdeterminant identities", criterion_4),
    (5, "completion round trip", "eighth vertex from seven", criterion_5),
    (6, "hypercube edges", "edge identity for n = 4", criterion_6),
    (7, "extrude / slice round trip", "extrusion and slicing", criterion_7),
    (8, "completion cross-validation", "basis completion vs determinant", criterion_8),
    (9, "scenario suite", "special cases and classical statements", criterion_9),
    (10, "two completions", "concurrent chords", criterion_10),
    (11, "degeneracy classifiers", "vanishing d, f and a", criterion_11),
    (12, "determinism and plumbing", "reruns and SVG resubstitution", criterion_12),
]


def run(number: int) -> Result:
    num, name, anchor, fn = CRITERIA[number - 1]
    t0 = time.perf_counter()
    ok, detail = fn()
    return Result(num, name, anchor, bool(ok), detail, time.perf_counter() - t0)


def run_all(stream=None) -> list[Result]:
    out = []
    for num, *_ in CRITERIA:
        r = run(num)
        out.append(r)
        if stream is not None:
            stream.write(f"{'PASS' if r.ok else 'FAIL'}  criterion {r.number:2d}: {r.name} ({r.seconds:.1f} s) - {r.detail}\n")
            stream.flush()
    return out
