"""Verdicts: bar equivalence, partial bar equivalence, infinitesimal rigidity,
minimal bar-equivalent subsets and composition of covering stresses."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import linalg, stress as st
from .euclidean import euclidean_generators
from .model import Tensegrity, unit_rows
from .rigidity import (FULL, RigidityOperator, VariationSpace, build_operator,
                       resolve_space)

EXHAUSTIVE_MAX_ROWS = 20


class SearchTooLarge(ValueError):
    pass


class CoverGap(ValueError):
    def __init__(self, rows):
        self.rows = sorted(rows)
        super().__init__(f"rows not covered by any stress: {self.rows}")


@dataclass(frozen=True)
class Classification:
    bar_equivalent: bool
    partially_bar_equivalent: bool
    infinitesimally_rigid: bool
    dim_stress_space: int
    dim_T: int
    dim_motions_modulo_T: int
    certificate: st.StressVector | st.MotionVector | None

    @property
    def verdict(self) -> str:
        if self.bar_equivalent:
            return "bar-equivalent"
        if self.partially_bar_equivalent:
            return "partially bar-equivalent"
        return "not bar-equivalent"


def is_bar_equivalent(t: Tensegrity, mode=FULL) -> bool:
    X = resolve_space(t, mode)
    return st.find_semipositive_motion(build_operator(t), X) is None


def classify(t: Tensegrity, mode=FULL, tol=None) -> Classification:
    """``mode`` is "full", "isometry" or a ready VariationSpace."""
    X = resolve_space(t, mode)
    Yop = build_operator(t)
    R = st.reduce(Yop, X)
    semi_motion = st.find_semipositive_motion(R, tol=tol)
    bar_eq = semi_motion is None
    strict_motion = None if bar_eq else st.find_strictly_positive_motion(R, tol=tol)
    partially = not bar_eq and strict_motion is None

    G = euclidean_generators(t).generators
    # T(p) is inside X, so dim(T ∩ X) is the rank of the generators
    dim_T = linalg.rank(G) if G.size else 0
    dim_ker = X.dim - R.U.shape[1]
    dim_stress = R.rows - R.U.shape[1]

    if bar_eq:
        cert = st.find_strictly_positive_stress(R, tol=tol)
    else:
        cert = strict_motion or semi_motion
    return Classification(bar_eq, partially, bar_eq and dim_ker == dim_T, dim_stress, dim_T,
                          dim_ker - dim_T, cert)


def minimal_analysis(t: Tensegrity, mode=FULL,
                     exhaustive: bool | None = None) -> list[frozenset]:
    """Minimal bar-equivalent sets of edge units (a bar is one unit).

    Minimal means bar-equivalent while deleting any single unit (leaving a
    nonempty set) is not.  Exhaustive search runs over every nonempty subset
    when there are at most EXHAUSTIVE_MAX_ROWS rows; otherwise a greedy pass
    returns one minimal subset of the whole (or nothing if the whole is not
    bar-equivalent).
    """
    X = resolve_space(t, mode)
    units = t.units()
    groups = unit_rows(t)
    nrows = sum(len(g) for g in groups)
    Yfull = build_operator(t).matrix
    if exhaustive is None:
        exhaustive = nrows <= EXHAUSTIVE_MAX_ROWS
    if exhaustive and nrows > EXHAUSTIVE_MAX_ROWS:
        raise SearchTooLarge(f"{nrows} rows exceeds the exhaustive limit "
                             f"{EXHAUSTIVE_MAX_ROWS}")

    cache: dict[frozenset, bool] = {}

    def bar_eq(sub: frozenset) -> bool:
        if sub not in cache:
            rows = [r for k in sorted(sub) for r in groups[k]]
            Yop = RigidityOperator(Yfull[rows], (), t.dim)
            cache[sub] = st.find_semipositive_motion(Yop, X) is None
        return cache[sub]

    def minimal(sub: frozenset) -> bool:
        return bar_eq(sub) and all(not bar_eq(sub - {k}) for k in sub if len(sub) > 1)

    found = []
    if exhaustive:
        idx = range(len(units))
        for size in range(1, len(units) + 1):
            for combo in combinations(idx, size):
                sub = frozenset(combo)
                if minimal(sub):
                    found.append(sub)
    else:
        sub = frozenset(range(len(units)))
        if sub and bar_eq(sub):
            # deletion is not monotone, so sweep until nothing more can go
            changed = True
            while changed:
                changed = False
                for k in sorted(sub):
                    if len(sub) > 1 and bar_eq(sub - {k}):
                        sub = sub - {k}
                        changed = True
            found.append(sub)
    return [frozenset(units[k] for k in sub) for sub in found]


def compose_covering_stress(stresses: Sequence[tuple[Iterable[int], st.StressVector]],
                            Yop: RigidityOperator | None = None,
                            X: VariationSpace | None = None) -> st.StressVector:
    """Sum of sup-normalised stresses weighted 1/2, 1/4, 1/8, ...

    Each entry is ``(rows, stress)`` where the stress is strictly positive on
    ``rows`` and zero elsewhere.  When ``Yop`` and ``X`` are supplied, the
    result is checked to be a strictly positive stress for them.
    """
    if not stresses:
        raise ValueError("no stresses to compose")
    m = len(stresses[0][1].weights)
    covered = set()
    total = np.zeros(m)
    for k, (rows, s) in enumerate(stresses, 1):
        if len(s.weights) != m:
            raise linalg.DimensionError("stresses have different lengths")
        rows = set(int(r) for r in rows)
        w = s.normalized
        if np.any(w < -st.CERT_TOL) or np.any(w[sorted(rows)] < st.SUPPORT_TOL):
            raise ValueError(f"stress {k} is not strictly positive on its rows")
        covered |= rows
        total += 0.5 ** k * np.clip(w, 0.0, None)
    gap = set(range(m)) - covered
    if gap:
        raise CoverGap(gap)
    out = st.StressVector(total / total.max())
    if Yop is not None and X is not None:
        st.check_stress(Yop, X, out, strict=True)
    return out
