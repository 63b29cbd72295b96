"""The rigidity operator Y and design-variation spaces X."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .euclidean import euclidean_generators
from .model import CABLE, EdgeRow, ModelError, Tensegrity, edge_rows

FULL = "full"
ISOMETRY = "isometry"
CONSTRAINED = "constrained"
INCLUSION_TOL = 1e-8


@dataclass(frozen=True)
class RigidityOperator:
    matrix: np.ndarray
    rows: tuple[EdgeRow, ...]
    dim: int

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2)) if self.matrix.size else 0.0


@dataclass(frozen=True)
class VariationSpace:
    kind: str
    basis: np.ndarray  # orthonormal columns spanning X
    constraints: np.ndarray  # X = ker(constraints); 0 rows for the full space

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def project(self, v) -> np.ndarray:
        return self.basis @ (self.basis.T @ v)


def build_operator(t: Tensegrity) -> RigidityOperator:
    n = t.dim
    rows = edge_rows(t)
    P = np.array(t.positions, dtype=float).reshape(-1, n)
    Y = np.zeros((len(rows), n * len(P)))
    for k, row in enumerate(rows):
        i, j = row.endpoints
        d = P[i] - P[j]
        if row.kind == CABLE:
            d = -d
        Y[k, n * i:n * i + n] = d
        Y[k, n * j:n * j + n] = -d
    return RigidityOperator(Y, tuple(rows), n)


def load(Yop: RigidityOperator, V) -> np.ndarray:
    V = np.asarray(V, dtype=float)
    if V.shape != (Yop.matrix.shape[1],):
        raise linalg.DimensionError(
            f"variation has shape {V.shape}, expected ({Yop.matrix.shape[1]},)")
    return Yop.matrix @ V


def chain_constraints(t: Tensegrity) -> np.ndarray:
    """One row per consecutive chain pair: (V(b) - V(a)) . (p(b) - p(a)) = 0."""
    n = t.dim
    P = np.array(t.positions, dtype=float).reshape(-1, n)
    rows = []
    for chain in t.chains:
        for a, b in zip(chain, chain[1:]):
            i, j = t.index(a), t.index(b)
            if i == j:
                raise ModelError(f"chain repeats vertex {a!r} consecutively")
            d = P[j] - P[i]
            r = np.zeros(n * len(P))
            r[n * j:n * j + n] = d
            r[n * i:n * i + n] = -d
            rows.append(r)
    return np.array(rows).reshape(len(rows), n * len(P))


def _check_contains_euclidean(t: Tensegrity, basis: np.ndarray) -> None:
    G = euclidean_generators(t).generators
    if G.size == 0:
        return
    gap = G - basis @ (basis.T @ G)
    scale = max(1.0, float(np.abs(G).max()))
    if np.abs(gap).max() > INCLUSION_TOL * scale:
        raise ValueError("variation space must contain the Euclidean motions")


def constrained_space(t: Tensegrity, constraints, kind: str = CONSTRAINED) -> VariationSpace:
    """X = ker(constraints); must contain every Euclidean motion."""
    size = t.dim * len(t.vertices)
    C = linalg.as_matrix(constraints, size)
    if C.shape[1] != size:
        raise linalg.DimensionError(f"constraints need {size} columns")
    basis = linalg.null_space(C)
    _check_contains_euclidean(t, basis)
    return VariationSpace(kind, basis, C)


def spanned_space(t: Tensegrity, fields) -> VariationSpace:
    """X = span(fields) + T(p), for spaces given by generators instead of equations."""
    fields = linalg.as_matrix(fields).reshape(t.dim * len(t.vertices), -1)
    G = euclidean_generators(t).generators
    basis = linalg.range_basis(np.hstack([fields, G]))
    C = linalg.null_space(basis.T).T
    return VariationSpace(CONSTRAINED, basis, C)


def variation_space(t: Tensegrity, mode: str = FULL) -> VariationSpace:
    size = t.dim * len(t.vertices)
    if mode == FULL:
        return VariationSpace(FULL, np.eye(size), np.zeros((0, size)))
    if mode == ISOMETRY:
        if not t.chains:
            raise ModelError("isometry mode needs at least one chain")
        return constrained_space(t, chain_constraints(t), ISOMETRY)
    raise ValueError(f"unknown variation mode {mode!r}")


def transform_space(space: VariationSpace, moved: Tensegrity, L) -> VariationSpace:
    """Image of X under V -> L V at every vertex, enlarged by the Euclidean
    motions of the moved placement (which L X need not contain)."""
    L = np.asarray(L, dtype=float)
    k = space.basis.shape[0] // L.shape[0]
    return spanned_space(moved, np.kron(np.eye(k), L) @ space.basis)


def resolve_space(t: Tensegrity, mode) -> VariationSpace:
    return mode if isinstance(mode, VariationSpace) else variation_space(t, mode)
