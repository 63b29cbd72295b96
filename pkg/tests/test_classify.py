import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hs

from tenseg import families
from tenseg import stress as st
from tenseg.classify import (CoverGap, SearchTooLarge, classify, compose_covering_stress,
                             is_bar_equivalent, minimal_analysis)
from tenseg.model import BAR, CABLE, STRUT, Tensegrity, unit_rows
from tenseg.rigidity import FULL, ISOMETRY, build_operator, variation_space


@pytest.mark.parametrize("make, mode, verdict, rigid, dim_stress, dim_T, extra", [
    (families.crossed_square, FULL, "bar-equivalent", True, 1, 3, 0),
    (lambda: families.crossed_square(bar=True), FULL, "bar-equivalent", True, 2, 3, 0),
    (families.two_bars, FULL, "bar-equivalent", False, 2, 3, 1),
    (lambda: families.grunbaum(4), FULL, "bar-equivalent", True, 1, 3, 0),
    (lambda: families.grunbaum(6), FULL, "bar-equivalent", True, 1, 3, 0),
    (families.no_pos_stress, FULL, "partially bar-equivalent", False, 2, 3, 1),
    (families.octahedron, FULL, "bar-equivalent", True, 3, 6, 0),
    (lambda: families.circle_of_struts(12), ISOMETRY, "bar-equivalent", False, 1, 3, 4),
    (lambda: families.square_of_struts(2), ISOMETRY, "partially bar-equivalent", False,
     1, 3, 2),
])
def test_classification_table(make, mode, verdict, rigid, dim_stress, dim_T, extra):
    c = classify(make(), mode)
    assert c.verdict == verdict
    assert c.infinitesimally_rigid is rigid
    assert (c.dim_stress_space, c.dim_T, c.dim_motions_modulo_T) == (dim_stress, dim_T, extra)


def test_two_bars_flex_is_a_kernel_motion():
    t = families.two_bars()
    assert np.allclose(build_operator(t).matrix @ families.TWO_BARS_FLEX, 0)
    assert is_bar_equivalent(t)


def test_bar_equivalent_certificate_is_strict_stress():
    c = classify(families.crossed_square())
    assert isinstance(c.certificate, st.StressVector)
    assert c.certificate.positivity == st.STRICTLY_POSITIVE


def test_partial_certificate_is_semipositive_motion():
    c = classify(families.no_pos_stress())
    assert isinstance(c.certificate, st.MotionVector)
    assert c.certificate.positivity == st.SEMIPOSITIVE


def test_not_bar_equivalent_certificate_is_strict_motion():
    c = classify(families.almost_half_circle(24, math.radians(5)), ISOMETRY)
    assert c.verdict == "not bar-equivalent"
    assert c.certificate.positivity == st.STRICTLY_POSITIVE


@pytest.mark.parametrize("top, verdict", [
    (None, "bar-equivalent"),
    (0.3, "bar-equivalent"),
    (0.05, "bar-equivalent"),
    (0.0, "partially bar-equivalent"),
    (-0.1, "not bar-equivalent"),
])
def test_corner_triangle_sequence(top, verdict):
    t, _ = families.corner_triangle(top)
    assert classify(t).verdict == verdict


def test_isolated_vertex_keeps_verdict_and_adds_free_motions():
    for t in (families.crossed_square(), families.no_pos_stress(), families.two_bars()):
        loose = Tensegrity(t.dim, t.vertices + (("loose", (7.0, -3.0)),), t.struts, t.cables,
                           t.bars)
        a, b = classify(t), classify(loose)
        assert a.verdict == b.verdict
        assert a.dim_stress_space == b.dim_stress_space
        assert b.dim_motions_modulo_T == a.dim_motions_modulo_T + t.dim
        assert not b.infinitesimally_rigid


@settings(max_examples=40, deadline=None)
@given(hs.integers(0, 2**32 - 1), hs.sampled_from([2, 3]), hs.integers(3, 7))
def test_verdicts_are_exclusive(seed, dim, n):
    t = families.random_tensegrity(np.random.default_rng(seed), dim, n)
    c = classify(t)
    assert not (c.bar_equivalent and c.partially_bar_equivalent)
    if c.infinitesimally_rigid:
        assert c.bar_equivalent
    assert c.dim_motions_modulo_T >= 0


# ------------------------------------------------------------ minimal subsets

def test_crossed_square_is_its_own_only_minimal_subset():
    t = families.crossed_square()
    assert minimal_analysis(t) == [frozenset(t.units())]


def test_crossed_square_with_bar_minimal_subsets():
    t = families.crossed_square(bar=True)
    found = minimal_analysis(t)
    assert frozenset({(BAR, "2", "4")}) in found
    assert frozenset(t.units()) in found
    assert len(found) == 2


def test_two_bars_minimal_subsets_are_single_bars():
    assert sorted(minimal_analysis(families.two_bars()), key=sorted) == [
        frozenset({(BAR, "1", "2")}), frozenset({(BAR, "2", "3")})]


def test_single_cable_has_no_minimal_subset():
    t = Tensegrity(2, [("1", (0, 0)), ("2", (1, 0))], cables=[("1", "2")])
    assert minimal_analysis(t) == []


def test_grunbaum_is_minimal_by_both_searches():
    t = families.grunbaum(5)
    whole = [frozenset(t.units())]
    assert minimal_analysis(t) == whole
    assert minimal_analysis(t, exhaustive=False) == whole


def test_exhaustive_search_limit():
    with pytest.raises(SearchTooLarge):
        minimal_analysis(families.circle_of_struts(48), ISOMETRY, exhaustive=True)


def test_greedy_result_is_bar_equivalent_and_minimal():
    t = families.rectangle(5)
    (sub,) = minimal_analysis(t, exhaustive=False)
    kept = t.with_units(sub)
    assert is_bar_equivalent(kept)
    for u in sub:
        assert not is_bar_equivalent(t.with_units(sub - {u}))


# ------------------------------------------------------------ covering stresses

def quadrilateral_stresses(t):
    """Strictly positive stresses of the two crossed squares in an 8-gon with
    skip-2 cables, each padded with zeros to the whole row set."""
    units, groups = t.units(), unit_rows(t)
    out = []
    for parity in (0, 1):
        keep = [u for u in units if int(u[1]) % 2 == parity]
        sub = t.with_units(keep)
        s = st.find_strictly_positive_stress(build_operator(sub), variation_space(sub))
        rows = [r for k, u in enumerate(units) if u in set(keep) for r in groups[k]]
        w = np.zeros(sum(len(g) for g in groups))
        w[rows] = s.weights
        out.append((rows, st.StressVector(w)))
    return out


def test_compose_two_disjoint_stresses():
    t = families.on_a_circle(8, 2)
    parts = quadrilateral_stresses(t)
    Yop, X = build_operator(t), variation_space(t)
    out = compose_covering_stress(parts, Yop, X)
    assert out.positivity == st.STRICTLY_POSITIVE
    # weights 1/2 and 1/4 after sup-normalisation of each part
    w = out.weights
    assert np.allclose(sorted(set(np.round(w, 12))), [0.5, 1.0])


def test_compose_overlapping_stresses():
    t = families.on_a_circle(8, 2)
    (ra, a), (rb, b) = quadrilateral_stresses(t)
    both = st.StressVector(a.weights + b.weights)
    Yop, X = build_operator(t), variation_space(t)
    out = compose_covering_stress([(ra, a), (ra + rb, both)], Yop, X)
    assert out.positivity == st.STRICTLY_POSITIVE


def test_compose_single_stress_is_its_normalisation():
    t = families.crossed_square()
    s = st.find_strictly_positive_stress(build_operator(t), variation_space(t))
    out = compose_covering_stress([(range(6), s)])
    assert np.allclose(out.weights, s.normalized)


def test_compose_reports_uncovered_rows():
    t = families.on_a_circle(8, 2)
    parts = quadrilateral_stresses(t)
    with pytest.raises(CoverGap) as err:
        compose_covering_stress(parts[:1])
    assert err.value.rows == sorted(set(range(12)) - set(parts[0][0]))


def test_compose_rejects_stress_not_positive_on_its_rows():
    t = families.on_a_circle(8, 2)
    (ra, a), (rb, _) = quadrilateral_stresses(t)
    with pytest.raises(ValueError):
        compose_covering_stress([(ra + rb, a)])


def test_compose_needs_stresses():
    with pytest.raises(ValueError):
        compose_covering_stress([])


def test_kinds_in_units():
    t = families.crossed_square(bar=True)
    assert {k for k, _, _ in t.units()} == {STRUT, CABLE, BAR}
