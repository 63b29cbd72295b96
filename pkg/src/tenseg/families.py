"""Parametric tensegrity families, closed-form stresses and motion fields.

Continuous examples are sampled at uniform parameter values and carry
isometry chains wherever a curve's length is held fixed to first order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import linalg
from .model import BAR, CABLE, STRUT, ModelError, Tensegrity, edge_rows
from .rigidity import build_operator, load
from .stress import MotionVector, StressVector


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: dict = field(default_factory=dict)


def _ids(n, prefix=""):
    return [f"{prefix}{i}" for i in range(n)]


def _tensegrity(dim, ids, points, struts=(), cables=(), bars=(), chains=()):
    return Tensegrity(dim, list(zip(ids, (tuple(map(float, p)) for p in points))),
                      struts, cables, bars, chains)


def weights_by_edge(t: Tensegrity, table: dict) -> np.ndarray:
    """Row weight vector from ``{(kind, a, b): w}``; pairs are unordered."""
    norm = {(k, frozenset((a, b))): w for (k, a, b), w in table.items()}
    ids = t.ids
    out = []
    for row in edge_rows(t):
        key = (row.kind, frozenset(ids[i] for i in row.endpoints))
        if key not in norm:
            raise KeyError(f"no weight for {row.kind} {sorted(key[1])}")
        out.append(norm[key])
    return np.array(out, dtype=float)


# ---------------------------------------------------------------- small examples

def crossed_square(bar: bool = False) -> Tensegrity:
    """Unit square with strut diagonals; ``bar`` turns the 2-4 strut into a bar."""
    pts = [(0, 0), (1, 0), (1, 1), (0, 1)]
    struts = [("1", "3")] if bar else [("1", "3"), ("2", "4")]
    cables = [("1", "2"), ("1", "4"), ("2", "3"), ("3", "4")]
    return _tensegrity(2, "1234", pts, struts, cables, [("2", "4")] if bar else [])


def two_bars() -> Tensegrity:
    return _tensegrity(2, "123", [(0, 0), (2, 1), (4, 0)], bars=[("1", "2"), ("2", "3")])


TWO_BARS_FLEX = np.array([-0.75, 0.5, 0.0, -1.0, 0.75, 0.5])


def grunbaum(n: int = 4) -> Tensegrity:
    """Strut n-gon, cables from vertex 0 to its non-neighbours, plus a cable
    joining the two neighbours of vertex 0."""
    if n < 4:
        raise FamilyError("Grünbaum polygon needs n >= 4")
    ids = _ids(n)
    pts = [(math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n)) for i in range(n)]
    struts = [(ids[i], ids[(i + 1) % n]) for i in range(n)]
    cables = [(ids[0], ids[j]) for j in range(2, n - 1)] + [(ids[1], ids[n - 1])]
    return _tensegrity(2, ids, pts, struts, cables)


def no_pos_stress() -> Tensegrity:
    """Two crossed squares joined by a pair of cables."""
    pts = [(0, 0), (0, 1), (1, 1), (1, 0), (2, 0.5), (2, 1.5), (3, 1.5), (3, 0.5)]
    ids = [str(i) for i in range(1, 9)]
    struts = [("1", "3"), ("2", "4"), ("5", "7"), ("6", "8")]
    cables = [("1", "2"), ("2", "3"), ("3", "4"), ("4", "1"),
              ("5", "6"), ("6", "7"), ("7", "8"), ("8", "5"),
              ("3", "6"), ("5", "4")]
    return _tensegrity(2, ids, pts, struts, cables)


NO_POS_STRESS_JOINS = (("cable", "3", "6"), ("cable", "5", "4"))


def hex_with_vect() -> tuple[Tensegrity, np.ndarray]:
    """Hexagon with long-diagonal struts and the drawn motion (arrow end - start)."""
    pts = [(3.891, -0.454), (1.345, -1), (-0.987, -0.161),
           (0.571, 1.985), (2.55, 3.893), (4, 2.283)]
    ends = [(2.6456, -0.0164), (0.8466, -2.2140), (-0.6198, -0.161),
            (-0.7428, 2.7394), (2.55, 2.7606), (4.5677, 2.283)]
    ids = [str(i) for i in range(1, 7)]
    struts = [("1", "4"), ("2", "5"), ("3", "6")]
    cables = [(ids[i], ids[(i + 1) % 6]) for i in range(6)]
    V = (np.array(ends) - np.array(pts)).ravel()
    return _tensegrity(2, ids, pts, struts, cables), V


def _hexagon(pts, struts_w, cables_w):
    ids = [str(i) for i in range(1, 7)]
    struts = [(ids[a], ids[b]) for a, b, _ in struts_w]
    cables = [(ids[a], ids[b]) for a, b, _ in cables_w]
    t = _tensegrity(2, ids, pts, struts, cables)
    w = np.array([x for *_, x in struts_w] + [x for *_, x in cables_w], dtype=float)
    return t, w


def nonreg_hex() -> tuple[Tensegrity, np.ndarray]:
    pts = [(2, 0), (1, 1), (-1, 1), (-2, 0), (-1, -1), (1, -1)]
    return _hexagon(pts, [(0, 3, 1), (1, 4, 1), (2, 5, 1)],
                    [(i, (i + 1) % 6, 2) for i in range(6)])


def another_nonreg_hex() -> tuple[Tensegrity, np.ndarray]:
    pts = [(0.6, 0.6), (1, 0), (0, -1), (-0.6, -0.6), (-1, 0), (0, 1)]
    return _hexagon(pts, [(0, 3, 1), (1, 4, 3), (5, 2, 3)],
                    [(0, 1, 6), (1, 2, 3.6), (2, 3, 6), (3, 4, 6), (4, 5, 3.6), (5, 0, 6)])


def corner_triangle(top: float | None = None) -> tuple[Tensegrity, np.ndarray]:
    """Strut triangle with cables from an interior vertex at the origin.

    The default is the side-2 equilateral triangle centred at the origin, for
    which cable weight 3 and strut weight 1 is a stress.  ``top`` moves the two
    upper corners vertically, keeping their x coordinates and the apex.
    """
    r = 2 / math.sqrt(3)
    y = r / 2 if top is None else float(top)
    pts = [(-1, y), (1, y), (0, -r), (0, 0)]
    ids = ["A", "B", "C", "M"]
    struts = [("A", "B"), ("B", "C"), ("C", "A")]
    cables = [("M", "A"), ("M", "B"), ("M", "C")]
    return _tensegrity(2, ids, pts, struts, cables), np.array([1, 1, 1, 3, 3, 3], float)


def triangle_with_bar() -> tuple[Tensegrity, np.ndarray]:
    """Right triangle with two cables and a bar, and constraints keeping the
    cable lengths fixed to first order (x1 = x2, y1 = y3)."""
    t = _tensegrity(2, "123", [(0, 0), (2, 0), (0, 2)],
                    cables=[("1", "2"), ("1", "3")], bars=[("2", "3")])
    C = np.array([[1, 0, -1, 0, 0, 0],
                  [0, 1, 0, 0, 0, -1]], dtype=float)
    return t, C


def octahedron() -> Tensegrity:
    pts, ids = [], []
    for k in range(3):
        for sgn, tag in ((1, "+"), (-1, "-")):
            e = [0.0, 0.0, 0.0]
            e[k] = sgn
            pts.append(e)
            ids.append(tag + "xyz"[k])
    struts = [(ids[2 * k], ids[2 * k + 1]) for k in range(3)]
    cables = [(ids[a], ids[b]) for a in range(6) for b in range(a + 1, 6) if a // 2 != b // 2]
    return _tensegrity(3, ids, pts, struts, cables)


# ---------------------------------------------------------------- circles

def _circle(N):
    return [(math.cos(2 * math.pi * i / N), math.sin(2 * math.pi * i / N)) for i in range(N)]


def _need_even(N):
    if N < 2 or N % 2:
        raise FamilyError("antipodal struts need an even vertex count")


def on_a_circle(N: int, skip: int | None = None, skip_frac: float | None = None) -> Tensegrity:
    """Regular N-gon, antipodal struts, cables i -- i+skip.

    ``skip_frac`` is a fraction of the circumference, rounded to the nearest
    index step.
    """
    _need_even(N)
    if skip is None:
        if skip_frac is None:
            raise FamilyError("give skip or skip_frac")
        skip = round(skip_frac * N)
    if not 0 < skip < N / 2:
        raise FamilyError("skip must correspond to 0 < h < pi")
    ids = _ids(N)
    struts = [(ids[i], ids[i + N // 2]) for i in range(N // 2)]
    seen, cables = set(), []
    for i in range(N):
        j = (i + skip) % N
        key = frozenset((i, j))
        if key not in seen:
            seen.add(key)
            cables.append((ids[i], ids[j]))
    return _tensegrity(2, ids, _circle(N), struts, cables)


def on_circle_alpha(h: float) -> float:
    if not 0 < h < math.pi:
        raise FamilyError("need 0 < h < pi")
    return 1 / math.cos((math.pi - h) / 2)


def circle_of_struts(N: int = 72) -> Tensegrity:
    _need_even(N)
    ids = _ids(N)
    struts = [(ids[i], ids[i + N // 2]) for i in range(N // 2)]
    return _tensegrity(2, ids, _circle(N), struts, chains=[ids + ids[:1]])


def almost_half_circle(N: int = 72, eps: float = math.radians(5)) -> Tensegrity:
    """Circle of N vertices with struts only at angles in [eps, pi/2 - eps]."""
    _need_even(N)
    if not 0 <= eps < math.pi / 4:
        raise FamilyError("need 0 <= eps < pi/4")
    ids = _ids(N)
    step = 2 * math.pi / N
    slack = 1e-9 * step
    keep = [i for i in range(N // 2) if eps - slack <= i * step <= math.pi / 2 - eps + slack]
    struts = [(ids[i], ids[i + N // 2]) for i in keep]
    return _tensegrity(2, ids, _circle(N), struts, chains=[ids + ids[:1]])


def vg(theta):
    theta = np.asarray(theta, dtype=float)
    return np.stack([np.sin(theta) / 2 + np.sin(3 * theta) / 6,
                     np.cos(theta) / 2 - np.cos(3 * theta) / 6], axis=-1)


def vg_load(theta):
    return 8 / 3 * np.sin(2 * np.asarray(theta, dtype=float))


def good_motion_Vg(N: int = 72, eps: float = math.radians(5)) -> MotionVector:
    """V_g sampled at the vertices of ``almost_half_circle(N, eps)``.

    The samples meet the chord constraints only up to O(N^-4) per chord; the
    strut loads are exact because struts are chords of the circle.
    """
    t = almost_half_circle(N, eps)
    theta = 2 * np.pi * np.arange(N) / N
    V = vg(theta).ravel()
    return MotionVector(V, load(build_operator(t), V))


def building_block_variation(k: float, m: float, theta) -> np.ndarray:
    """Closed-form field with V' = m cos(k theta) (cos theta, sin theta)."""
    if not k > 1:
        raise FamilyError("need k > 1")
    th = np.asarray(theta, dtype=float)
    c = m / (2 * (k * k - 1))
    return np.stack([c * ((k + 1) * np.sin((k - 1) * th) + (k - 1) * np.sin((k + 1) * th)),
                     c * ((k + 1) * np.cos((k - 1) * th) - (k - 1) * np.cos((k + 1) * th))],
                    axis=-1)


# ---------------------------------------------------------------- squares, rectangles

def square_of_struts(k: int = 8) -> Tensegrity:
    """Boundary of [0,2]^2 sampled with k points per side, struts joining
    points half the perimeter apart, one closed chain."""
    if k < 1:
        raise FamilyError("need k >= 1")
    N = 4 * k
    corners = np.array([(0, 0), (2, 0), (2, 2), (0, 2), (0, 0)], dtype=float)
    pts = []
    for side in range(4):
        a, b = corners[side], corners[side + 1]
        pts += [tuple(a + (b - a) * j / k) for j in range(k)]
    ids = _ids(N)
    struts = [(ids[i], ids[i + N // 2]) for i in range(N // 2)]
    return _tensegrity(2, ids, pts, struts, chains=[ids + ids[:1]])


def square_tent_motion(t: Tensegrity) -> np.ndarray:
    """Each side bulges outward along its normal in a tent shape pinned at the corners."""
    V = []
    for x, y in t.positions:
        if y == 0:
            V.append((0.0, -min(x, 2 - x)))
        elif y == 2:
            V.append((0.0, min(x, 2 - x)))
        elif x == 0:
            V.append((-min(y, 2 - y), 0.0))
        else:
            V.append((min(y, 2 - y), 0.0))
    return np.array(V).ravel()


def rectangle(N: int = 11) -> Tensegrity:
    """[0,2]x[0,1] with N vertices on each long side.

    Interior columns are vertical struts and the two end columns are bars.
    Every interior vertex has cables to both corners on the opposite side;
    the corners are joined by cross cables and horizontal struts.
    """
    if N < 3:
        raise FamilyError("need N >= 3")
    xs = [2 * i / (N - 1) for i in range(N)]
    bot, top = _ids(N, "b"), _ids(N, "t")
    pts = [(x, 0) for x in xs] + [(x, 1) for x in xs]
    struts = [(bot[i], top[i]) for i in range(1, N - 1)]
    struts += [(bot[0], bot[-1]), (top[0], top[-1])]
    cables = []
    for i in range(1, N - 1):
        cables += [(bot[i], top[0]), (bot[i], top[-1]), (top[i], bot[0]), (top[i], bot[-1])]
    cables += [(bot[0], top[-1]), (bot[-1], top[0])]
    bars = [(bot[0], top[0]), (bot[-1], top[-1])]
    return _tensegrity(2, bot + top, pts, struts, cables, bars)


def rectangle_interior_stress(t: Tensegrity) -> np.ndarray:
    """Force densities on the interior struts and their cables, times the mesh width.

    For an interior vertex at x with unit strut density, the cable to the
    opposite corner above/below x = 0 has density (2 - x)/2 and the cable to
    the corner at x = 2 has density x/2.  Corner-only edges get weight 0.
    """
    N = len(t.vertices) // 2
    dx = 2 / (N - 1)
    table = {}
    for i in range(1, N - 1):
        x = 2 * i / (N - 1)
        b, tp = f"b{i}", f"t{i}"
        table[(STRUT, b, tp)] = dx
        table[(CABLE, b, "t0")] = (2 - x) / 2 * dx
        table[(CABLE, b, f"t{N - 1}")] = x / 2 * dx
        table[(CABLE, tp, "b0")] = (2 - x) / 2 * dx
        table[(CABLE, tp, f"b{N - 1}")] = x / 2 * dx
    for kind, a, b in t.units():
        if (kind, a, b) not in table:
            table[(kind, a, b)] = 0.0
            if kind == BAR:
                table[(STRUT, a, b)] = table[(CABLE, a, b)] = 0.0
    return weights_by_edge(t, table)


def rectangle_corner_sums(N: int) -> tuple[float, float]:
    """Horizontal and vertical pull of the interior cables on corner b0."""
    t = rectangle(N)
    Y = build_operator(t).matrix
    w = rectangle_interior_stress(t)
    force = (Y.T @ w).reshape(-1, 2)[t.index("b0")]  # only cables act on b0 here
    return float(force[0]), float(force[1])


# ---------------------------------------------------------------- quadrilaterals

def quadrilateral(p1, p2, p3, p4) -> Tensegrity:
    return _tensegrity(2, "1234", [p1, p2, p3, p4], [("1", "3"), ("2", "4")],
                       [("1", "2"), ("2", "3"), ("3", "4"), ("1", "4")])


def _check_convex(P):
    cross = []
    for i in range(4):
        a, b, c = P[i], P[(i + 1) % 4], P[(i + 2) % 4]
        u, v = b - a, c - b
        cross.append(u[0] * v[1] - u[1] * v[0])
    cross = np.array(cross)
    scale = max(float(np.abs(P).max()), 1.0) ** 2
    if not (np.all(cross > 1e-12 * scale) or np.all(cross < -1e-12 * scale)):
        raise FamilyError("quadrilateral must be strictly convex")


def _unit(a, b):
    d = b - a
    return d / np.linalg.norm(d)


def _angle(P, i, j, k):
    """Angle at vertex i between the directions to j and k (1-based)."""
    u, v = _unit(P[i - 1], P[j - 1]), _unit(P[i - 1], P[k - 1])
    return math.atan2(abs(u[0] * v[1] - u[1] * v[0]), float(u @ v))


def quad_forces(p1, p2, p3, p4, w13: float = 1.0) -> dict:
    """Edge force magnitudes of the convex-quadrilateral stress with strut 13 at w13.

    ``w24`` and ``w24_hat`` are the two independent evaluations of the other
    strut, from the equilibria at vertices 2 and 4.
    """
    P = np.array([p1, p2, p3, p4], dtype=float)
    _check_convex(P)
    s = lambda j, i, k: math.sin(_angle(P, i, j, k))  # noqa: E731  (theta_jik)
    w = {"13": w13,
         "12": s(3, 1, 4) / s(2, 1, 4) * w13,
         "14": s(2, 1, 3) / s(2, 1, 4) * w13,
         "23": s(1, 3, 4) / s(2, 3, 4) * w13,
         "34": s(1, 3, 2) / s(2, 3, 4) * w13}
    e = lambda i, j: _unit(P[i - 1], P[j - 1])  # noqa: E731
    w["24"] = float((w["23"] * e(2, 3) - w["12"] * e(1, 2)) @ e(2, 4))
    w["24_hat"] = float((w["14"] * e(1, 4) + w["34"] * e(3, 4)) @ e(2, 4))
    return w


def quad_stress(p1, p2, p3, p4, w13: float = 1.0) -> StressVector:
    """Stress on ``quadrilateral(p1..p4)`` as force densities in row order
    (struts 13, 24; cables 12, 23, 34, 14)."""
    f = quad_forces(p1, p2, p3, p4, w13)
    P = np.array([p1, p2, p3, p4], dtype=float)
    length = lambda i, j: float(np.linalg.norm(P[i - 1] - P[j - 1]))  # noqa: E731
    keys = [("13", 1, 3), ("24", 2, 4), ("12", 1, 2), ("23", 2, 3), ("34", 3, 4), ("14", 1, 4)]
    return StressVector(np.array([f[k] / length(i, j) for k, i, j in keys]))


# ---------------------------------------------------------------- closed vertex curves

def _arc(center, radius, start_deg, end_deg):
    return ("arc", np.asarray(center, float), float(radius),
            math.radians(start_deg), math.radians(end_deg))


def _piece_length(piece):
    if piece[0] == "line":
        return float(np.linalg.norm(piece[2] - piece[1]))
    _, _, r, a0, a1 = piece
    return abs(a1 - a0) * r


def _piece_point(piece, s):
    """Point at arc length ``s`` along one piece."""
    if piece[0] == "line":
        a, b = piece[1], piece[2]
        return a + (b - a) * s / _piece_length(piece)
    _, c, r, a0, a1 = piece
    a = a0 + math.copysign(s / r, a1 - a0)
    return c + r * np.array([math.cos(a), math.sin(a)])


def sample_curve(pieces, N: int, offset: float = 0.0) -> np.ndarray:
    """N points at equal arc-length spacing around a closed piecewise curve,
    the first one ``offset`` along it."""
    lengths = [_piece_length(p) for p in pieces]
    total = sum(lengths)
    samples = sorted(((offset + total * i / N) % total, i) for i in range(N))
    out = [None] * N
    k, start = 0, 0.0
    for s, i in samples:
        while k < len(pieces) - 1 and s > start + lengths[k]:
            start += lengths[k]
            k += 1
        out[i] = _piece_point(pieces[k], s - start)
    return np.array(out)


def _rotated(pieces, deg):
    R = rotation2(math.radians(deg))
    out = []
    for p in pieces:
        if p[0] == "line":
            out.append(("line", R @ p[1], R @ p[2]))
        else:
            _, c, r, a0, a1 = p
            out.append(("arc", R @ c, r, a0 + math.radians(deg), a1 + math.radians(deg)))
    return out


def clover_curve():
    """Four-fold curve of circular arcs, length 12 pi."""
    quarter = [_arc((-2, 2), 2, 180, 90), _arc((-2, 3), 1, 90, 0),
               _arc((0, 3), 1, -180, 0), _arc((2, 3), 1, 180, 90)]
    # each rotated copy ends where the previous one starts
    return [p for deg in (0, -90, -180, -270) for p in _rotated(quarter, deg)]


def star_curve():
    """Six-pointed star with outer radius 2 sqrt 3 and inner radius 2."""
    piece = [("line", np.array([-1, math.sqrt(3)]), np.array([0, 2 * math.sqrt(3)])),
             ("line", np.array([0, 2 * math.sqrt(3)]), np.array([1, math.sqrt(3)]))]
    return [p for deg in range(0, -360, -60) for p in _rotated(piece, deg)]


def cant_curve():
    """Curve with a strut from (0, 0) to (-8, 0) that no fixed-skip cables balance."""
    return [_arc((0, -1), 1, 0, 180), _arc((-2, -1), 1, 0, -180),
            ("line", np.array([-3.0, -1.0]), np.array([-3.0, 1.0])),
            _arc((-6, 1), 3, 0, 180), _arc((-8, 1), 1, 180, 360), _arc((-6, 1), 1, 180, 0),
            ("line", np.array([-5.0, 1.0]), np.array([-5.0, -1.0])),
            _arc((-2, -1), 3, 180, 360)]


# curve builder and the arc length of the first sample
CURVES = {"clover": (clover_curve, 0.0), "star": (star_curve, 0.0),
          "cant": (cant_curve, math.pi / 2)}


def curve_tensegrity(points, skip: int) -> Tensegrity:
    """Antipodal struts and cables ``i -- i+skip`` on points sampled around a closed curve."""
    N = len(points)
    _need_even(N)
    if not 0 < skip < N / 2:
        raise FamilyError("skip must be strictly between 0 and half the curve")
    ids = _ids(N)
    struts = [(ids[i], ids[i + N // 2]) for i in range(N // 2)]
    cables = [(ids[i], ids[(i + skip) % N]) for i in range(N)]
    return _tensegrity(2, ids, points, struts, cables, chains=[ids + ids[:1]])


def skip_curve(name: str, N: int, skip_frac: float) -> Tensegrity:
    if name not in CURVES:
        raise FamilyError(f"unknown curve {name!r}")
    build, offset = CURVES[name]
    return curve_tensegrity(sample_curve(build(), N, offset), round(skip_frac * N))


def unbalanced_struts(t: Tensegrity) -> list[tuple[str, str]]:
    """(strut endpoint, other end) pairs where the strut direction is not a
    nonnegative combination of the cable directions at that endpoint.

    Such a strut end can always be pushed outward, whatever the cable weights.
    """
    P = {v: np.array(p) for v, p in t.vertices}
    cables: dict[str, list[str]] = {v: [] for v in t.ids}
    for a, b in t.cables:
        cables[a].append(b)
        cables[b].append(a)
    out = []
    for a, b in t.struts:
        for v, w in ((a, b), (b, a)):
            if not cables[v]:
                out.append((v, w))
                continue
            D = np.array([P[u] - P[v] for u in cables[v]]).T
            res = linalg.feasible(D, P[w] - P[v], np.eye(D.shape[1]), np.zeros(D.shape[1]))
            if not res.feasible:
                out.append((v, w))
    return out


def compactified_annulus(N: int = 18) -> Tensegrity:
    """Radial struts on the upper half and cables on the lower half of the
    annulus 1 <= r <= 3, with bars at angles 0 and pi; both circles are chains."""
    if N < 2:
        raise FamilyError("need N >= 2")
    inner, outer = _ids(2 * N, "i"), _ids(2 * N, "o")
    pts = ([(math.cos(math.pi * k / N), math.sin(math.pi * k / N)) for k in range(2 * N)]
           + [(3 * math.cos(math.pi * k / N), 3 * math.sin(math.pi * k / N))
              for k in range(2 * N)])
    struts = [(inner[k], outer[k]) for k in range(1, N)]
    cables = [(inner[k], outer[k]) for k in range(N + 1, 2 * N)]
    bars = [(inner[0], outer[0]), (inner[N], outer[N])]
    return _tensegrity(2, inner + outer, pts, struts, cables, bars,
                       chains=[inner + inner[:1], outer + outer[:1]])


# ---------------------------------------------------------------- 3D and composites

def cylinder(rings: int = 8, N: int = 24, spacing: float = 1.0) -> Tensegrity:
    """Stacked circles of struts in R^3: each ring a closed chain with
    antipodal struts, plus open axial chains through matching vertices."""
    _need_even(N)
    ids, pts, struts, chains = [], [], [], []
    for j in range(rings):
        ring = _ids(N, f"r{j}_")
        ids += ring
        pts += [(x, y, j * spacing) for x, y in _circle(N)]
        struts += [(ring[i], ring[i + N // 2]) for i in range(N // 2)]
        chains.append(ring + ring[:1])
    if rings > 1:
        chains += [[f"r{j}_{i}" for j in range(rings)] for i in range(N)]
    return _tensegrity(3, ids, pts, struts, chains=chains)


def ring_units(t: Tensegrity, ring: int):
    return [u for u in t.units() if u[1].startswith(f"r{ring}_")]


def _rotation(rng):
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def sphere_of_octahedra(M: int = 3, seed: int = 0) -> Tensegrity:
    """Unit-sphere octahedron plus M randomly rotated copies, vertices pooled."""
    rng = np.random.default_rng(seed)
    base = octahedron()
    P0 = np.array(base.positions)
    ids, pts, struts, cables = [], [], [], []
    for c in range(M + 1):
        Q = np.eye(3) if c == 0 else _rotation(rng)
        ren = {v: f"o{c}{v}" for v in base.ids}
        ids += [ren[v] for v in base.ids]
        pts += [tuple(Q @ p) for p in P0]
        struts += [(ren[a], ren[b]) for a, b in base.struts]
        cables += [(ren[a], ren[b]) for a, b in base.cables]
    return _tensegrity(3, ids, pts, struts, cables)


def stadium(N: int = 48, straight: float = 2.0) -> Tensegrity:
    """Stadium curve (two unit semicircles joined by segments) sampled by arc
    length, with struts between points half the perimeter apart.  Geometry only."""
    _need_even(N)
    L = 2 * straight + 2 * math.pi
    pts = []
    for i in range(N):
        s = L * i / N
        if s < straight:
            pts.append((s - straight / 2, -1.0))
        elif s < straight + math.pi:
            a = s - straight - math.pi / 2
            pts.append((straight / 2 + math.cos(a), math.sin(a)))
        elif s < 2 * straight + math.pi:
            pts.append((straight / 2 - (s - straight - math.pi), 1.0))
        else:
            a = s - 2 * straight - math.pi + math.pi / 2
            pts.append((-straight / 2 + math.cos(a), math.sin(a)))
    ids = _ids(N)
    struts = [(ids[i], ids[i + N // 2]) for i in range(N // 2)]
    return _tensegrity(2, ids, pts, struts, chains=[ids + ids[:1]])


# ---------------------------------------------------------------- transforms, symmetry

def affine_transform(t: Tensegrity, L, translation=None) -> Tensegrity:
    L = np.asarray(L, dtype=float)
    if L.shape != (t.dim, t.dim):
        raise linalg.DimensionError(f"L must be {t.dim}x{t.dim}")
    b = np.zeros(t.dim) if translation is None else np.asarray(translation, dtype=float)
    P = np.array(t.positions, dtype=float).reshape(-1, t.dim) @ L.T + b
    try:
        return t.with_positions([tuple(p) for p in P])
    except ModelError as exc:
        raise FamilyError(f"affine map collapses vertices: {exc}") from None


def lift(t: Tensegrity, extra: int = 1) -> Tensegrity:
    """Same tensegrity in R^(n+extra), new coordinates zero."""
    return t.with_positions([tuple(p) + (0.0,) * extra for p in t.positions])


def isometry_permutation(t: Tensegrity, Q, tol: float = 1e-9) -> list[int]:
    """Vertex permutation induced by the linear isometry Q (must map vertices to vertices)."""
    P = np.array(t.positions, dtype=float).reshape(-1, t.dim)
    img = P @ np.asarray(Q, dtype=float).T
    perm = []
    for q in img:
        d = np.linalg.norm(P - q, axis=1)
        j = int(np.argmin(d))
        if d[j] > tol:
            raise FamilyError("map does not permute the vertices")
        perm.append(j)
    return perm


def _closure(gens):
    group = {tuple(range(len(gens[0])))}
    frontier = list(group)
    while frontier:
        g = frontier.pop()
        for h in gens:
            gh = tuple(h[i] for i in g)
            if gh not in group:
                group.add(gh)
                frontier.append(gh)
    return sorted(group)


def symmetrize(t: Tensegrity, weights, maps: Sequence) -> np.ndarray:
    """Average a row-weight vector over the group generated by the isometries
    ``maps``, which must preserve the edge sets."""
    perms = _closure([isometry_permutation(t, Q) for Q in maps])
    rows = edge_rows(t)
    where = {(r.kind, r.origin, frozenset(r.endpoints)): k for k, r in enumerate(rows)}
    w = np.asarray(weights, dtype=float)
    out = np.zeros_like(w)
    for g in perms:
        for k, r in enumerate(rows):
            key = (r.kind, r.origin, frozenset(g[i] for i in r.endpoints))
            if key not in where:
                raise FamilyError("map does not preserve the edges")
            out[k] += w[where[key]]
    return out / len(perms)


def rotation2(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


OCTAHEDRAL_MAPS = (np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], float),
                   np.diag([-1.0, 1.0, 1.0]))


def tension_ratio(t: Tensegrity, weights) -> float:
    """Mean cable tension (density times length) over mean strut density.

    For struts that are diameters of a unit circle or sphere this is the cable
    tension per unit of strut compression per unit radius.
    """
    P = np.array(t.positions, dtype=float).reshape(-1, t.dim)
    w = np.asarray(weights, dtype=float)
    cab, stru = [], []
    for k, r in enumerate(edge_rows(t)):
        if r.origin != "native":
            continue
        if r.kind == CABLE:
            i, j = r.endpoints
            cab.append(w[k] * np.linalg.norm(P[i] - P[j]))
        else:
            stru.append(w[k])
    return float(np.mean(cab) / np.mean(stru))


# ---------------------------------------------------------------- random instances

def random_tensegrity(rng: np.random.Generator, dim: int | None = None,
                      n_vertices: int | None = None) -> Tensegrity:
    """Small random tensegrity: convex or scattered placement, random edge types."""
    dim = dim or int(rng.choice([2, 3]))
    n = n_vertices or int(rng.integers(3, 8))
    if rng.random() < 0.5 and dim == 2:
        ang = np.sort(rng.uniform(0, 2 * np.pi, n))
        P = np.c_[np.cos(ang), np.sin(ang)] * rng.uniform(0.5, 2.0, (1, 2))
    else:
        P = rng.uniform(-1, 1, (n, dim))
    ids = _ids(n)
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    chosen = [p for p in pairs if rng.random() < 0.6] or [pairs[0]]
    edges = {STRUT: [], CABLE: [], BAR: []}
    for a, b in chosen:
        kind = rng.choice([STRUT, CABLE, BAR], p=[0.4, 0.45, 0.15])
        edges[str(kind)].append((ids[a], ids[b]))
    return _tensegrity(dim, ids, P, edges[STRUT], edges[CABLE], edges[BAR])


# ---------------------------------------------------------------- registry

def _int(params, key, default):
    v = params.get(key, default)
    if isinstance(v, float) and not v.is_integer():
        raise FamilyError(f"{key} must be an integer")
    return int(v)


FAMILIES: dict[str, Callable[[dict], Tensegrity]] = {
    "crossed-square": lambda p: crossed_square(),
    "crossed-square-bar": lambda p: crossed_square(bar=True),
    "two-bars": lambda p: two_bars(),
    "grunbaum": lambda p: grunbaum(_int(p, "n", 4)),
    "no-pos-stress": lambda p: no_pos_stress(),
    "hex-with-vect": lambda p: hex_with_vect()[0],
    "nonreg-hex": lambda p: nonreg_hex()[0],
    "another-nonreg-hex": lambda p: another_nonreg_hex()[0],
    "corner-triangle": lambda p: corner_triangle(p.get("top"))[0],
    "triangle-with-bar": lambda p: triangle_with_bar()[0],
    "octahedron": lambda p: octahedron(),
    "on-a-circle": lambda p: on_a_circle(_int(p, "n", 8),
                                         None if p.get("skip") is None else _int(p, "skip", 0),
                                         p.get("skip_frac")),
    "circle-of-struts": lambda p: circle_of_struts(_int(p, "n", 72)),
    "almost-half-circle": lambda p: almost_half_circle(
        _int(p, "n", 72), math.radians(p.get("eps_deg", 5.0))),
    "square-of-struts": lambda p: square_of_struts(_int(p, "k", 8)),
    "rectangle": lambda p: rectangle(_int(p, "n", 11)),
    "cylinder": lambda p: cylinder(_int(p, "rings", 8), _int(p, "n", 24)),
    "sphere": lambda p: sphere_of_octahedra(_int(p, "m", 3), _int(p, "seed", 0)),
    "clover": lambda p: skip_curve("clover", _int(p, "n", 48), p.get("skip_frac", 0.25)),
    "star": lambda p: skip_curve("star", _int(p, "n", 48), p.get("skip_frac", 1 / 6)),
    "cant": lambda p: skip_curve("cant", _int(p, "n", 40), p.get("skip_frac", 0.25)),
    "compactified-annulus": lambda p: compactified_annulus(_int(p, "n", 18)),
    "stadium": lambda p: stadium(_int(p, "n", 48), float(p.get("straight", 2.0))),
}


def generate(spec: FamilySpec) -> Tensegrity:
    try:
        build = FAMILIES[spec.name]
    except KeyError:
        raise FamilyError(f"unknown family {spec.name!r}; known: "
                          + ", ".join(sorted(FAMILIES))) from None
    return build(dict(spec.params))
