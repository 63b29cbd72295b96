"""Infinitesimal Euclidean motions evaluated at the vertex placements."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import linalg
from .model import Tensegrity


@dataclass(frozen=True)
class EuclideanBasis:
    generators: np.ndarray  # (n * #vertices) x n(n+1)/2, vertex-major
    skews: tuple  # dR for each rotation column
    dim_expected: int


def skew_basis(n: int) -> list[np.ndarray]:
    """E_ij - E_ji for i < j in lexicographic order."""
    out = []
    for i, j in combinations(range(n), 2):
        d = np.zeros((n, n))
        d[i, j], d[j, i] = 1.0, -1.0
        out.append(d)
    return out


def euclidean_generators(t: Tensegrity) -> EuclideanBasis:
    n = t.dim
    P = np.array(t.positions, dtype=float).reshape(-1, n)
    skews = skew_basis(n)
    cols = [(P @ dR.T).ravel() for dR in skews]  # field at v is dR p(v)
    for k in range(n):
        dt = np.zeros(n)
        dt[k] = 1.0
        cols.append(np.tile(dt, len(P)))
    G = np.array(cols).T if cols else np.zeros((n * len(P), 0))
    return EuclideanBasis(G.reshape(n * len(P), -1), tuple(skews), n * (n + 1) // 2)


def euclidean_rank(t: Tensegrity) -> int:
    """Dimension of T(p) at this placement (numerical rank)."""
    G = euclidean_generators(t).generators
    if G.size == 0:
        return 0
    return linalg.rank(G)
