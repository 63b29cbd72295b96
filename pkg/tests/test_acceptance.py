"""Acceptance criteria 1-14.

Run ``python tests/test_acceptance.py`` for one PASS/FAIL line per criterion,
or ``pytest tests/test_acceptance.py -s`` to see the same lines under pytest.
"""

from __future__ import annotations

import math
import sys

import numpy as np
import pytest

from tenseg import families as fam
from tenseg import linalg
from tenseg import stress as st
from tenseg.classify import classify, compose_covering_stress, minimal_analysis
from tenseg.euclidean import euclidean_generators, euclidean_rank
from tenseg.model import BAR, CABLE, STRUT, Tensegrity, edge_rows, unit_rows
from tenseg.rigidity import (ISOMETRY, build_operator, constrained_space,
                             transform_space, variation_space)

# edge order of the crossed-square operator as printed: cable 1-2, strut 1-3,
# cable 1-4, cable 2-3, strut 2-4, cable 3-4 (vertex-major columns)
PRINTED_Y = np.array([
    [1, 0, -1, 0, 0, 0, 0, 0],
    [-1, -1, 0, 0, 1, 1, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, -1],
    [0, 0, 0, 1, 0, -1, 0, 0],
    [0, 0, 1, -1, 0, 0, -1, 1],
    [0, 0, 0, 0, -1, 0, 1, 0],
], dtype=float)
PRINTED_ORDER = [(CABLE, "1", "2"), (STRUT, "1", "3"), (CABLE, "1", "4"),
               (CABLE, "2", "3"), (STRUT, "2", "4"), (CABLE, "3", "4")]
# with 2-4 a bar, its strut row takes slot 5 and its cable row comes last
PRINTED_ORDER_BAR = (PRINTED_ORDER[:4] + [(STRUT, "2", "4", "bar"), PRINTED_ORDER[5]]
                   + [(CABLE, "2", "4", "bar")])


def row_permutation(t: Tensegrity, order) -> list[int]:
    """Indices of ``edge_rows(t)`` listed in ``order``: (kind, a, b[, origin])."""
    ids = t.ids
    where = {(r.kind, frozenset(ids[i] for i in r.endpoints), r.origin): k
             for k, r in enumerate(edge_rows(t))}
    return [where[(kind, frozenset((a, b)), rest[0] if rest else "native")]
            for kind, a, b, *rest in order]


def random_convex_quad(rng: np.random.Generator) -> np.ndarray:
    """Four points on an ellipse in counterclockwise order, then a random affine map."""
    while True:
        ang = np.sort(rng.uniform(0, 2 * np.pi, 4))
        gaps = np.diff(np.r_[ang, ang[0] + 2 * np.pi])
        if gaps.min() > 0.3:
            break
    P = np.c_[np.cos(ang), np.sin(ang)] * rng.uniform(0.5, 2.0, 2)
    while True:
        L = rng.normal(size=(2, 2))
        if abs(np.linalg.det(L)) > 0.3 and np.linalg.cond(L) < 10:
            break
    return P @ L.T + rng.normal(size=2)


def random_affine(rng: np.random.Generator, n: int) -> np.ndarray:
    while True:
        L = rng.normal(size=(n, n))
        if np.linalg.cond(L) < 20:
            return L


def planar_bar_equivalent_corpus(count: int, seed: int) -> list[Tensegrity]:
    """Named planar examples followed by random bar-equivalent planar instances."""
    out = [fam.crossed_square(), fam.crossed_square(bar=True), fam.grunbaum(4),
           fam.grunbaum(6), fam.nonreg_hex()[0], fam.on_a_circle(8, 2)]
    rng = np.random.default_rng(seed)
    while len(out) < count:
        t = fam.random_tensegrity(rng, dim=2)
        if classify(t).bar_equivalent:
            out.append(t)
    return out[:count]


# ---------------------------------------------------------------- criteria

def criterion_1():
    t = fam.crossed_square()
    Yop = build_operator(t)
    Y = Yop.matrix[row_permutation(t, PRINTED_ORDER)]
    S = st.stress_space(Yop, variation_space(t))
    mu = np.ones(6)
    resid = float(np.abs(Yop.matrix.T @ mu).max())
    c = classify(t)
    ok = (np.array_equal(Y, PRINTED_Y) and S.shape[1] == 1 and resid <= 1e-12
          and c.bar_equivalent and c.infinitesimally_rigid)
    return ok, f"stress dim {S.shape[1]}, |Y^T 1| = {resid:.1e}, verdict {c.verdict}"


def criterion_2():
    t = fam.crossed_square(bar=True)
    Yop = build_operator(t)
    perm = row_permutation(t, PRINTED_ORDER_BAR)
    printed_hat = np.vstack([PRINTED_Y, -PRINTED_Y[4]])
    same_matrix = np.array_equal(Yop.matrix[perm], printed_hat)
    S = st.stress_space(Yop, variation_space(t))[perm]
    family = np.array([[1, 1, 1, 1, 0, 1, -1],  # a
                       [0, 0, 0, 0, 1, 0, 1]], dtype=float).T  # b
    fit = max(linalg.lstsq(family, S[:, k])[1] for k in range(S.shape[1]))
    found = set(minimal_analysis(t))
    classic = frozenset(t.units())
    expected = {frozenset({(BAR, "2", "4")}), classic}
    ok = same_matrix and S.shape[1] == 2 and fit <= 1e-10 and found == expected
    return ok, (f"stress dim {S.shape[1]}, family fit residual {fit:.1e}, "
                f"{len(found)} minimal subsets")


def criterion_3():
    t = fam.octahedron()
    s = st.find_strictly_positive_stress(build_operator(t), variation_space(t))
    if s is None:
        return False, "no strictly positive stress"
    w = fam.symmetrize(t, s.weights, fam.OCTAHEDRAL_MAPS)
    ratio = fam.tension_ratio(t, w)
    err = abs(ratio - math.sqrt(2) / 2)
    return err <= 1e-9, f"cable/strut ratio {ratio:.12f}, error {err:.1e}"


def criterion_4():
    worst = 0.0
    cases = 0
    for N in (6, 8, 12):
        maps = (fam.rotation2(2 * math.pi / N), np.diag([1.0, -1.0]))
        for k in range(1, N // 2):
            t = fam.on_a_circle(N, k)
            s = st.find_strictly_positive_stress(build_operator(t), variation_space(t))
            if s is None:
                return False, f"N={N} k={k}: no strictly positive stress"
            ratio = fam.tension_ratio(t, fam.symmetrize(t, s.weights, maps))
            worst = max(worst, abs(ratio - fam.on_circle_alpha(2 * math.pi * k / N)))
            cases += 1
    return worst <= 1e-9, f"{cases} cases, worst ratio error {worst:.1e}"


def criterion_5():
    worst = 0.0
    for build in (fam.nonreg_hex, fam.another_nonreg_hex):
        t, w = build()
        Yop = build_operator(t)
        worst = max(worst, float(np.abs(Yop.matrix.T @ w).max()))
    return worst <= 1e-9, f"max |Y^T w| {worst:.1e}"


def criterion_6():
    rng = np.random.default_rng(6)
    worst_lp = worst_w24 = 0.0
    for _ in range(100):
        P = random_convex_quad(rng)
        t = fam.quadrilateral(*P)
        closed = fam.quad_stress(*P).weights
        lp = st.find_strictly_positive_stress(build_operator(t), variation_space(t))
        if lp is None:
            return False, "LP found no strictly positive stress on a convex quadrilateral"
        a, b = closed / np.linalg.norm(closed), lp.weights / np.linalg.norm(lp.weights)
        worst_lp = max(worst_lp, float(np.abs(a - b).max()))
        f = fam.quad_forces(*P)
        worst_w24 = max(worst_w24, abs(f["24"] - f["24_hat"]) / max(1.0, abs(f["24"])))
    ok = worst_lp <= 1e-8 and worst_w24 <= 1e-10
    return ok, f"closed form vs LP {worst_lp:.1e}, w24 derivations {worst_w24:.1e}"


def criterion_7():
    rng = np.random.default_rng(7)
    violations = []
    for i in range(200):
        t = fam.random_tensegrity(rng)
        Yop, X = build_operator(t), variation_space(t)
        for name, pairing in (("stiemke", st.stiemke), ("gordan", st.gordan)):
            try:
                pairing(Yop, X)
            except (st.AlternativeConflict, st.CertificateError) as exc:
                violations.append(f"{i} {name}: {exc}")
    return not violations, f"200 instances, {len(violations)} violations"


def criterion_8():
    t = fam.circle_of_struts(72)
    Yop, X = build_operator(t), variation_space(t, ISOMETRY)
    resid = st.stress_residual(Yop, X, np.ones(len(t.struts)))
    c = classify(t, ISOMETRY)
    missing = []
    for strut in t.struts:
        sub = t.with_units([u for u in t.units() if u != (STRUT,) + strut])
        m = st.find_strictly_positive_motion(build_operator(sub), variation_space(sub, ISOMETRY))
        if m is None:
            missing.append(strut)
    ok = resid <= 1e-8 and c.bar_equivalent and not missing
    return ok, (f"uniform stress residual {resid:.1e}, {c.verdict}, "
                f"{36 - len(missing)}/36 deletions have a strictly positive motion")


def criterion_9():
    t = fam.almost_half_circle(72, math.radians(5))
    Yop, X = build_operator(t), variation_space(t, ISOMETRY)
    g = fam.good_motion_Vg(72, math.radians(5))
    theta = np.array([math.atan2(*t.position(a)[::-1]) for a, _ in t.struts])
    err = float(np.abs(g.load - fam.vg_load(theta)).max())
    semi = st.find_semipositive_stress(Yop, X)
    strict = st.find_strictly_positive_motion(Yop, X)
    ok = err <= 1e-9 and semi is None and strict is not None
    return ok, (f"V_g load error {err:.1e}, semipositive stress "
                f"{'Absent' if semi is None else 'Present'}, strictly positive motion "
                f"{'Present' if strict is not None else 'Absent'}")


def rectangle_closed_form_stress(t: Tensegrity, m: float) -> np.ndarray:
    """Densities from the closed-form forces on interior struts and cables."""
    N = len(t.vertices) // 2
    table = {}
    for i in range(1, N - 1):
        x = 2 * i / (N - 1)
        mu1 = (2 - x) * math.sqrt(1 + x * x) / 2 * m  # cable to the corner above/below x=0
        mu3 = x * math.sqrt(1 + (2 - x) ** 2) / 2 * m  # cable to the corner at x=2
        len1, len3 = math.sqrt(1 + x * x), math.sqrt(1 + (2 - x) ** 2)
        table[(STRUT, f"b{i}", f"t{i}")] = m  # unit-length strut
        for v, far0, far2 in ((f"b{i}", "t0", f"t{N - 1}"), (f"t{i}", "b0", f"b{N - 1}")):
            table[(CABLE, v, far0)] = mu1 / len1
            table[(CABLE, v, far2)] = mu3 / len3
    for kind, a, b in t.units():
        if kind == BAR:
            table[(STRUT, a, b)] = table[(CABLE, a, b)] = 0.0
        else:
            table.setdefault((kind, a, b), 0.0)
    return fam.weights_by_edge(t, table)


def criterion_10():
    t = fam.rectangle(21)
    w = rectangle_closed_form_stress(t, 2 / 20)
    F = (build_operator(t).matrix.T @ w).reshape(-1, 2)
    interior = [t.index(v) for v in t.ids if v[1:] not in ("0", "20")]
    resid = float(np.abs(F[interior]).max())
    same = np.allclose(w, fam.rectangle_interior_stress(t), rtol=0, atol=1e-14)
    hx, vy = fam.rectangle_corner_sums(201)
    close = abs(hx - 2 / 3) <= 0.05 * 2 / 3 and abs(vy - 1) <= 0.05
    ok = resid <= 1e-9 and same and close
    return ok, (f"interior residual {resid:.1e}, corner sums at N=201 "
                f"({hx:.5f}, {vy:.5f}) vs (2/3, 1)")


def criterion_11():
    rng = np.random.default_rng(11)
    bases = [fam.crossed_square(), fam.grunbaum(5), fam.nonreg_hex()[0],
             fam.on_a_circle(8, 2), fam.octahedron()]
    bases += [fam.quadrilateral(*random_convex_quad(rng)) for _ in range(5)]
    flips = 0
    for k in range(50):
        t = bases[k % len(bases)]
        moved = fam.affine_transform(t, random_affine(rng, t.dim), rng.normal(size=t.dim))
        if not classify(moved).bar_equivalent:
            flips += 1
    t, C = fam.triangle_with_bar()
    X = constrained_space(t, C)
    before = classify(t, X)
    L = np.array([[1.0, 1.0], [0.0, 1.0]])
    moved = fam.affine_transform(t, L)
    after = classify(moved, transform_space(X, moved, L))
    ok = (flips == 0 and before.bar_equivalent and after.partially_bar_equivalent
          and not after.bar_equivalent)
    return ok, (f"50 affine maps, {flips} verdict changes; triangle {before.verdict} "
                f"-> {after.verdict}")


def criterion_12():
    corpus = planar_bar_equivalent_corpus(20, 12)
    lost = [k for k, t in enumerate(corpus) if not classify(fam.lift(t)).bar_equivalent]
    return not lost, f"20 planar instances, {len(lost)} lose bar equivalence in R^3"


def criterion_13():
    t = fam.cylinder(8, 24)
    Yop, X = build_operator(t), variation_space(t, ISOMETRY)
    units, groups = t.units(), unit_rows(t)
    parts = []
    for ring in range(8):
        keep = fam.ring_units(t, ring)
        sub = t.with_units(keep)
        s = st.find_strictly_positive_stress(build_operator(sub), variation_space(sub, ISOMETRY))
        if s is None:
            return False, f"ring {ring} has no strictly positive stress"
        rows = [r for k, u in enumerate(units) if u in set(keep) for r in groups[k]]
        w = np.zeros(len(edge_rows(t)))
        w[rows] = s.weights
        parts.append((rows, st.StressVector(w)))
    total = compose_covering_stress(parts, Yop, X)
    resid = st.stress_residual(Yop, X, total.weights)
    ok = total.positivity == st.STRICTLY_POSITIVE and resid <= 1e-8
    return ok, f"composed stress {total.positivity}, residual {resid:.1e}"


def criterion_14():
    rng = np.random.default_rng(14)
    dims_ok = all(euclidean_rank(fam.random_tensegrity(rng, dim=n, n_vertices=6))
                  == n * (n + 1) // 2 for n in (2, 3) for _ in range(10))
    corpus = [fam.crossed_square(), fam.crossed_square(bar=True), fam.octahedron(),
              fam.grunbaum(6), fam.circle_of_struts(24), fam.cylinder(3, 8), fam.rectangle(11)]
    corpus += [fam.random_tensegrity(rng) for _ in range(30)]
    worst = 0.0
    for t in corpus:
        Yop = build_operator(t)
        G = euclidean_generators(t).generators
        for g in G.T:
            scale = Yop.norm * float(np.linalg.norm(g))
            if scale:
                worst = max(worst, float(np.linalg.norm(Yop.matrix @ g)) / scale)
    return dims_ok and worst <= 1e-9, (f"dim T generic: {'ok' if dims_ok else 'wrong'}, "
                                       f"worst |Y g| / (|Y| |g|) {worst:.1e}")


CRITERIA = [
    (1, "crossed square stress and rigidity", criterion_1),
    (2, "crossed square with a bar: stress family and minimal subsets", criterion_2),
    (3, "octahedron cable/strut ratio", criterion_3),
    (4, "on-a-circle ratios", criterion_4),
    (5, "hexagon weights in equilibrium", criterion_5),
    (6, "quadrilateral closed form", criterion_6),
    (7, "Stiemke and Gordan exactly-one", criterion_7),
    (8, "circle of struts", criterion_8),
    (9, "almost-half-circle motion", criterion_9),
    (10, "rectangle closed forms and corner sums", criterion_10),
    (11, "affine invariance and the sheared triangle", criterion_11),
    (12, "lift to R^3", criterion_12),
    (13, "covered composition on the cylinder", criterion_13),
    (14, "Euclidean motions", criterion_14),
]


def run(number, title, check) -> bool:
    try:
        ok, detail = check()
    except Exception as exc:  # report, then let pytest show the traceback
        print(f"criterion {number:2d} FAIL  {title}: {type(exc).__name__}: {exc}")
        raise
    print(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
    return ok


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"c{n:02d}" for n, *_ in CRITERIA])
def test_criterion(number, title, check):
    assert run(number, title, check)


if __name__ == "__main__":
    results = []
    for number, title, check in CRITERIA:
        try:
            results.append(run(number, title, check))
        except Exception:
            results.append(False)
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
