"""Extruding planar conic configurations to quadrics and slicing them back."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .completion import FULL, SEVEN, SevenConfig, _lenient_complete, _prim, complement, cube_edges, normalize_edge_scale
from .engine import all_subsets, label
from .errors import (CoincidentArguments, InputError, NoContact, ScalingInconsistent, SizeMismatch, TangentPlane)
from .matrix import SymMatrix, rank
from .projective import (CompleteConic, CompleteQuadric, Line3D, ProjHyperplane, ProjPoint, as_complete, common_hyperplane,
                         common_point, complete_from_primal, incident, join3, meet3, polar, proj_equal, ring_contact)
from .scalar import DEFAULT_TOL, EXACT, coerce, common_mode


def _unit(i: int, n: int = 4) -> list:
    return [Fraction(int(k == i)) for k in range(n)]


@dataclass(frozen=True)
class ExtrusionFrame:
    """Base plane spanned by P1, P2, P3, apex O, and the plane o with frame coordinates u.

    Defaults: P1, P2, P3 = e_x, e_y, e_z and O = e_w, so the base plane is w = 0.
    """

    u: tuple = (1, 0, 0, 0)
    P: tuple = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0))
    O: tuple = (0, 0, 0, 1)

    def __post_init__(self):
        if len(self.u) != 4 or len(self.O) != 4 or len(self.P) != 3 or any(len(p) != 4 for p in self.P):
            raise SizeMismatch("frame needs three plane points and an apex in RP^3")
        if linalg.rank(self.matrix()) < 4:
            raise InputError("apex lies in the span of the plane basis")

    @property
    def mode(self) -> str:
        return common_mode(list(self.u) + [c for p in self.P for c in p] + list(self.O)) or EXACT

    def matrix(self) -> list[list]:
        """Columns O, P1, P2, P3."""
        cols = [list(self.O)] + [list(p) for p in self.P]
        mode = common_mode([c for col in cols for c in col]) or EXACT
        return linalg.transpose([[coerce(c, mode) for c in col] for col in cols])

    def basis(self) -> list[list]:
        """4x3 matrix with columns P1, P2, P3."""
        return [row[1:] for row in self.matrix()]

    @property
    def apex(self) -> ProjPoint:
        return ProjPoint(self.O)

    @property
    def base_plane(self) -> ProjHyperplane:
        return ProjHyperplane(linalg.inverse(self.matrix())[0])

    @property
    def polar_plane(self) -> ProjHyperplane:
        Minv = linalg.inverse(self.matrix())
        return ProjHyperplane(linalg.matvec(linalg.transpose(Minv), [coerce(c, self.mode) for c in self.u]))


def extrude_conic(A: SymMatrix, frame: ExtrusionFrame = ExtrusionFrame()) -> SymMatrix:
    if A.order != 3:
        raise SizeMismatch("extrusion takes a conic")
    if A.is_zero():
        raise InputError("zero conic")
    mode = A.mode
    u = [coerce(c, mode) for c in frame.u]
    local = [[u[0]] + u[1:]] + [[u[i + 1]] + list(A.rows[i]) for i in range(3)]
    Minv = linalg.normalize(linalg.inverse(frame.matrix()), mode)
    Q = linalg.matmul(linalg.transpose(Minv), linalg.matmul(local, Minv))
    return SymMatrix([[Q[i][j] if i <= j else Q[j][i] for j in range(4)] for i in range(4)], mode)


def scale_seven(seven: SevenConfig, tol: float = DEFAULT_TOL) -> dict:
    """Scalars c_v with rank(c_s A_s - c_t A_t) = 1 on every edge, anchored at c = 1 on S0."""
    scaled = {frozenset(): seven.primal(frozenset())}
    factor = {frozenset(): coerce(1, seven.mode)}
    edges = cube_edges()
    adj = {s: [] for s in SEVEN}
    for s, t in edges:
        adj[s].append(t)
        adj[t].append(s)
    queue, used = deque([frozenset()]), set()
    while queue:
        s = queue.popleft()
        for t in sorted(adj[s], key=lambda v: (len(v), sorted(v))):
            if t in scaled:
                continue
            try:
                c, ct, _ = normalize_edge_scale(scaled[s], seven.primal(t), tol)
            except NoContact as exc:
                raise ScalingInconsistent(f"{label(s)} and {label(t)} are not in contact") from exc
            scaled[t], factor[t] = ct, c
            used.add(frozenset((s, t)))
            queue.append(t)
    for s, t in edges:
        if frozenset((s, t)) in used:
            continue
        if rank(scaled[s] - scaled[t], tol) != 1:
            raise ScalingInconsistent(f"edge {label(s)}-{label(t)} cannot be scaled consistently")
    return factor


def extrude_seven(seven: SevenConfig, frame: ExtrusionFrame = ExtrusionFrame(), tol: float = DEFAULT_TOL) -> SevenConfig:
    if seven.order != 3:
        raise SizeMismatch("extrude a configuration of conics")
    factor = scale_seven(seven, tol)
    return SevenConfig({s: extrude_conic(seven.primal(s).scale(factor[s]), frame) for s in SEVEN})


def canonical_plane_basis(plane: ProjHyperplane) -> list[list]:
    """Deterministic 4x3 basis matrix of the points of a plane."""
    ker = linalg.nullspace([list(plane.coords)])
    return linalg.transpose(ker)


def slice_quadric(Q, plane: ProjHyperplane, basis: Sequence[Sequence] | None = None) -> CompleteConic:
    """Restriction B^T Q B; raises TangentPlane if the section has no dual."""
    primal = _prim(_lenient_complete(Q))
    B = canonical_plane_basis(plane) if basis is None else [list(r) for r in basis]
    if any(not _zero(v) for v in linalg.matvec(linalg.transpose(B), list(plane.coords))):
        raise InputError("basis points do not lie in the plane")
    C = primal.congruent(B)
    try:
        return complete_from_primal(C)
    except Exception as exc:
        raise TangentPlane(f"section has rank {rank(C)}") from exc


def _zero(v, tol=DEFAULT_TOL) -> bool:
    return v == 0 if not isinstance(v, float) else abs(v) <= tol


@dataclass
class SlicedCube:
    vertices: dict                  # subset -> SymMatrix
    tangent: dict                   # subset -> bool (section rank below 3)
    checks: list = field(default_factory=list)   # (name, ok)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.checks)


def slice_cube(eight: dict, plane: ProjHyperplane, basis=None, tol: float = DEFAULT_TOL) -> SlicedCube:
    from .projective import concurrent, double_contact
    B = canonical_plane_basis(plane) if basis is None else [list(r) for r in basis]
    out, tangent = {}, {}
    for s in all_subsets(3):
        C = _prim(_lenient_complete(eight[s])).congruent(B)
        out[s] = C
        tangent[s] = rank(C, tol) < 3
    res = SlicedCube(out, tangent)
    chords = {}
    for s, t in cube_edges(include_top=True):
        try:
            chords[(s, t)] = double_contact(out[s], out[t], tol).chord
            res.checks.append((f"contact {label(s)}-{label(t)}", True))
        except Exception:
            res.checks.append((f"contact {label(s)}-{label(t)}", False))
    for s in all_subsets(3):
        free = sorted(FULL - s)
        for i in range(len(free)):
            for j in range(i + 1, len(free)):
                a, b = free[i], free[j]
                keys = [(s, s | {a}), (s, s | {b}), (s | {a}, s | {a, b}), (s | {b}, s | {a, b})]
                if len(s) > 1:
                    continue
                if all(k in chords for k in keys):
                    ok = concurrent([chords[k] for k in keys], tol)
                else:
                    ok = False
                res.checks.append((f"face {label(s)}+{a}{b}", ok))
    return res


@dataclass
class FaceStructure:
    planes: dict            # edge (s, t) -> ring plane
    points: dict            # edge (s, t) -> ring point
    axes: dict              # face (base, j, k) -> Line3D
    spears: dict            # face (base, j, k) -> Line3D
    O: ProjPoint | None
    o: ProjHyperplane | None
    branch: str             # "concurrent" or "common axis"
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.checks)


def _faces(present):
    for s in all_subsets(3):
        free = sorted(FULL - s)
        for i in range(len(free)):
            for j in range(i + 1, len(free)):
                yield s, free[i], free[j]


def face_structure(config, tol: float = DEFAULT_TOL) -> FaceStructure:
    """Ring planes, face axes and spears of a (seven- or eight-vertex) quadric cube."""
    verts = config.vertices if isinstance(config, SevenConfig) else dict(config)
    verts = {s: _lenient_complete(v) for s, v in verts.items()}
    planes, points = {}, {}
    for s, t in cube_edges(include_top=True):
        if s in verts and t in verts:
            rc = ring_contact(verts[s], verts[t], tol)
            planes[(s, t)], points[(s, t)] = rc.plane, rc.point
    axes, spears = {}, {}
    checks = []
    for s, j, k in _faces(verts):
        e = [(s, s | {j}), (s, s | {k}), (s | {j}, s | {j, k}), (s | {k}, s | {j, k})]
        have = [x for x in e if x in planes]
        if len(have) < 2:
            continue
        hp = [planes[x] for x in have]
        pp = [points[x] for x in have]
        try:
            ax = next(meet3(hp[0], h) for h in hp[1:] if not proj_equal(hp[0].coords, h.coords, tol))
            sp = next(join3(pp[0], p) for p in pp[1:] if not proj_equal(pp[0].coords, p.coords, tol))
        except StopIteration:
            continue
        axes[(s, j, k)], spears[(s, j, k)] = ax, sp
        checks.append((f"axis {label(s)}+{j}{k} in its ring planes", all(ax.lies_in(h, tol) for h in hp)))
        checks.append((f"spear {label(s)}+{j}{k} through its ring points", all(sp.contains(p, tol) for p in pp)))
    O = o = None
    distinct = set(axes.values())
    if len(distinct) <= 1:
        branch = "common axis"
    else:
        branch = "concurrent"
        try:
            O = common_point(list(planes.values()), tol)
            o = common_hyperplane(list(points.values()), tol)
        except CoincidentArguments:
            checks.append(("axes concurrent in one point", False))
        if O is not None:
            checks.append(("axes through O", all(incident(O, h, tol) for h in planes.values())))
            checks.append(("spears in o", all(incident(p, o, tol) for p in points.values())))
            for s, v in verts.items():
                pr = _prim(v)
                pol = pr.apply(O.coords)
                if all(_zero(c, tol) for c in pol):
                    checks.append((f"O, o polar for {label(s)}", False))
                else:
                    checks.append((f"O, o polar for {label(s)}", proj_equal(pol, o.coords, tol)))
    return FaceStructure(planes, points, axes, spears, O, o, branch, checks)
