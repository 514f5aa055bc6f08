"""Schematic SVG sketches of conic cubes in an affine chart.

Every real branch of a conic is sampled at no fewer than ``SAMPLES`` points.
Chords are drawn dashed and face points as markers.  Conics with no real
points inside the view are listed as annotations instead of curves.  Paths
carry raw chart coordinates inside one transformed group, so their points
can be resubstituted into the conic equations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .engine import label
from .matrix import SymMatrix
from .scalar import to_float

SAMPLES = 160
PRE = 4096
SIZE = 640
COLORS = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf")


@dataclass
class Branch:
    points: list                       # [(x, y), ...] in chart coordinates
    kind: str                          # "curve" or "line"


@dataclass
class Sketch:
    curves: dict = field(default_factory=dict)        # vertex -> [Branch]
    annotations: dict = field(default_factory=dict)   # vertex -> text
    chords: list = field(default_factory=list)        # [(name, [(x, y), (x, y)])]
    points: list = field(default_factory=list)        # [(name, (x, y))]
    box: tuple = (-1.0, -1.0, 1.0, 1.0)


def _fmt(v: float) -> str:
    s = format(v, ".10g")
    return "0" if s in ("-0", "0") else s


def chart_basis(chart: int) -> np.ndarray:
    """Columns map chart coordinates (x, y, 1) to homogeneous coordinates."""
    others = [i for i in range(3) if i != chart]
    B = np.zeros((3, 3))
    B[others[0], 0] = B[others[1], 1] = B[chart, 2] = 1.0
    return B


def to_chart(X, chart: int):
    w = X[chart]
    if abs(w) < 1e-12 * max(1.0, float(np.max(np.abs(X)))):
        return None
    others = [X[i] for i in range(3) if i != chart]
    return (float(others[0] / w), float(others[1] / w))


def conic_residual(A, x: float, y: float, chart: int = 2) -> float:
    """|X^T A X| / (|A| |X|^2) at the chart point (x, y)."""
    M = np.array([[to_float(v) for v in row] for row in A.rows])
    X = chart_basis(chart) @ np.array([x, y, 1.0])
    return abs(float(X @ M @ X)) / (float(np.max(np.abs(M))) * float(X @ X))


def _inside(p, box) -> bool:
    return p is not None and box[0] <= p[0] <= box[2] and box[1] <= p[1] <= box[3]


def _runs(ts, pts, box):
    """Maximal parameter intervals whose samples stay inside the box."""
    out, start = [], None
    for i, p in enumerate(pts):
        if _inside(p, box):
            if start is None:
                start = i
        elif start is not None:
            out.append((start, i - 1))
            start = None
    if start is not None:
        out.append((start, len(pts) - 1))
    return [(ts[a], ts[b]) for a, b in out if b > a]


def _line_segment(g: np.ndarray, chart: int, box):
    """Chart segment of the line g clipped to the box, or None."""
    a, b, c = (g @ chart_basis(chart))
    x0, y0, x1, y1 = box
    hits = []
    if abs(b) > 1e-14:
        for x in (x0, x1):
            y = -(a * x + c) / b
            if y0 <= y <= y1:
                hits.append((x, y))
    if abs(a) > 1e-14:
        for y in (y0, y1):
            x = -(b * y + c) / a
            if x0 <= x <= x1:
                hits.append((x, y))
    if len(hits) < 2:
        return None
    far = max(((p, q) for p, q in combinations(hits, 2)), key=lambda pq: math.dist(*pq))
    return far


def _sample_line(g: np.ndarray, chart: int, box) -> Branch | None:
    seg = _line_segment(g, chart, box)
    if seg is None:
        return None
    (ax, ay), (bx, by) = seg
    pts = [(ax + (bx - ax) * i / (SAMPLES - 1), ay + (by - ay) * i / (SAMPLES - 1)) for i in range(SAMPLES)]
    return Branch(pts, "line")


def sample_conic(A: SymMatrix, chart: int, box) -> list[Branch] | str:
    """Real branches of A inside the box, or a text annotation."""
    M = np.array([[to_float(v) for v in row] for row in A.rows])
    scale = float(np.max(np.abs(M))) if M.size else 0.0
    if scale == 0.0:
        return "vanishes identically"
    M = M / scale
    lam, V = np.linalg.eigh(M)
    tol = 1e-9
    pos = [i for i in range(3) if lam[i] > tol]
    neg = [i for i in range(3) if lam[i] < -tol]
    if len(neg) > len(pos):
        lam, pos, neg = -lam, neg, pos
    if not neg:
        if len(pos) == 3:
            return "no real points"
        if len(pos) == 2:
            P = to_chart(V[:, [i for i in range(3) if i not in pos][0]], chart)
            return "single real point" + (f" at ({_fmt(P[0])}, {_fmt(P[1])})" if P else " at infinity")
        g = V[:, pos[0]]
        br = _sample_line(g, chart, box)
        return [br] if br else "double line outside the view"
    if len(pos) + len(neg) == 2:
        i, j = pos[0], neg[0]
        out = []
        for s in (1.0, -1.0):
            g = math.sqrt(lam[i]) * V[:, i] + s * math.sqrt(-lam[j]) * V[:, j]
            br = _sample_line(g, chart, box)
            if br:
                out.append(br)
        return out or "line pair outside the view"
    # signature (2, 1): X(t) = V (cos t / sqrt l1, sin t / sqrt l2, 1 / sqrt(-l3))
    i, j = pos
    k = neg[0]
    cols = np.stack([V[:, i] / math.sqrt(lam[i]), V[:, j] / math.sqrt(lam[j]), V[:, k] / math.sqrt(-lam[k])], axis=1)

    def point(t):
        return to_chart(cols @ np.array([math.cos(t), math.sin(t), 1.0]), chart)

    ts = [2 * math.pi * n / PRE for n in range(PRE + 1)]
    pts = [point(t) for t in ts]
    runs = _runs(ts, pts, box)
    # a run crossing t = 0 is split in two by the sampling; glue it back
    if len(runs) > 1 and runs[0][0] == 0.0 and runs[-1][1] == ts[-1]:
        runs = [(runs[-1][0], runs[0][1] + 2 * math.pi)] + runs[1:-1]
    out = []
    for t0, t1 in runs:
        step = (t1 - t0) / (SAMPLES - 1)
        sampled = [point(t0 + step * n) for n in range(SAMPLES)]
        out.append(Branch([p for p in sampled if p is not None], "curve"))
    return out or "no real points in the view"


def _box_from(points, margin: float = 0.25):
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    if not xs:
        return (-5.0, -5.0, 5.0, 5.0)
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1.0)
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
    half = span * (0.5 + margin)
    return (cx - half, cy - half, cx + half, cy + half)


def _ellipse_points(A: SymMatrix, chart: int):
    """Finite sample points of A, used only to frame the view."""
    br = sample_conic(A, chart, (-1e3, -1e3, 1e3, 1e3))
    if isinstance(br, str):
        return []
    pts = [p for b in br if b.kind == "curve" for p in b.points]
    return pts if pts and max(abs(c) for p in pts for c in p) < 50 else []


def sketch(vertices: dict, chords: dict, face_points: dict, chart: int = 2) -> Sketch:
    """vertices: subset -> SymMatrix; chords: name -> line vector; face_points: name -> point vector."""
    finite = []
    for name, P in sorted(face_points.items()):
        p = to_chart(np.array([to_float(c) for c in P]), chart)
        if p is not None and max(abs(p[0]), abs(p[1])) < 1e3:
            finite.append(p)
    for s in sorted(vertices, key=lambda s: (len(s), sorted(s))):
        finite += _ellipse_points(vertices[s], chart)
    sk = Sketch(box=_box_from(finite))
    for s in sorted(vertices, key=lambda s: (len(s), sorted(s))):
        res = sample_conic(vertices[s], chart, sk.box)
        if isinstance(res, str):
            sk.annotations[s] = res
        else:
            sk.curves[s] = res
    for name, g in sorted(chords.items()):
        seg = _line_segment(np.array([to_float(c) for c in g]), chart, sk.box)
        if seg:
            sk.chords.append((name, list(seg)))
    for name, P in sorted(face_points.items()):
        p = to_chart(np.array([to_float(c) for c in P]), chart)
        if _inside(p, sk.box):
            sk.points.append((name, p))
    return sk


def render(sk: Sketch, title: str = "Penrose cube") -> str:
    x0, y0, x1, y1 = sk.box
    s = SIZE / (x1 - x0)
    lw = _fmt(1.5 / s)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE + 20 * (len(sk.annotations) + 1)}">',
        f"<title>{title}</title>",
        '<defs><clipPath id="view"><rect x="0" y="0" width="{0}" height="{0}"/></clipPath></defs>'.format(SIZE),
        '<rect x="0" y="0" width="{0}" height="{0}" fill="white" stroke="black"/>'.format(SIZE),
        '<g clip-path="url(#view)">',
        f'<g transform="matrix({_fmt(s)} 0 0 {_fmt(-s)} {_fmt(-x0 * s)} {_fmt(y1 * s)})">',
    ]
    order = sorted(set(sk.curves) | set(sk.annotations), key=lambda v: (len(v), sorted(v)))
    color = {v: COLORS[i % len(COLORS)] for i, v in enumerate(order)}
    for v in order:
        for n, br in enumerate(sk.curves.get(v, [])):
            d = "M " + " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in br.points)
            out.append(f'<path class="conic" data-vertex="{label(v)}" data-branch="{n}" d="{d}" fill="none" '
                       f'stroke="{color[v]}" stroke-width="{lw}"/>')
    for name, ((ax, ay), (bx, by)) in sk.chords:
        out.append(f'<path class="chord" data-edge="{name}" d="M {_fmt(ax)} {_fmt(ay)} L {_fmt(bx)} {_fmt(by)}" '
                   f'fill="none" stroke="gray" stroke-width="{lw}" stroke-dasharray="{_fmt(6 / s)} {_fmt(4 / s)}"/>')
    for name, (px, py) in sk.points:
        out.append(f'<circle class="face-point" data-face="{name}" cx="{_fmt(px)}" cy="{_fmt(py)}" r="{_fmt(4 / s)}" '
                   'fill="black"/>')
    out.append("</g></g>")
    y = SIZE + 16
    for v in order:
        if v in sk.annotations:
            out.append(f'<text class="annotation" x="8" y="{y}" font-size="12" fill="{color[v]}">'
                       f"{label(v)}: {sk.annotations[v]}</text>")
            y += 20
    out.append("</svg>")
    return "\n".join(out) + "\n"
