"""Stresses and motions as paired feasibility problems.

All four questions are solved in reduced coordinates.  With ``Yx = Y @ basis``
and its thin SVD ``Yx = U S W^T``:

* a weight vector mu is a stress iff ``U^T mu = 0``;
* every achievable load is ``U z`` for some z, reached by V = basis W S^-1 z.

Strict positivity is never posed directly; ``> 0`` becomes ``>= 1`` and
``semipositive`` becomes ``>= 0 with sum >= 1`` (both sides are cones).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .rigidity import RigidityOperator, VariationSpace

SUPPORT_TOL = 1e-7
CERT_TOL = 1e-8

ZERO = "zero"
SEMIPOSITIVE = "semipositive"
STRICTLY_POSITIVE = "strictly_positive"


class AlternativeConflict(linalg.LinalgError):
    """Both or neither side of a theorem-of-the-alternative pair came back."""

    def __init__(self, message, motion=None, stress=None):
        super().__init__(message)
        self.motion = motion
        self.stress = stress


class CertificateError(linalg.LinalgError):
    pass


def positivity(v, tol: float = SUPPORT_TOL) -> str:
    v = np.asarray(v, dtype=float)
    top = float(np.max(np.abs(v), initial=0.0))
    if top == 0.0:
        return ZERO
    u = v / top
    if np.all(u >= tol):
        return STRICTLY_POSITIVE
    return SEMIPOSITIVE


@dataclass(frozen=True)
class StressVector:
    weights: np.ndarray

    @property
    def normalized(self) -> np.ndarray:
        top = float(np.max(np.abs(self.weights), initial=0.0))
        return self.weights / top if top else self.weights

    @property
    def positivity(self) -> str:
        return positivity(self.weights)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(int(i) for i in np.flatnonzero(self.normalized > SUPPORT_TOL))


@dataclass(frozen=True)
class MotionVector:
    field: np.ndarray
    load: np.ndarray

    @property
    def positivity(self) -> str:
        return positivity(self.load)


@dataclass(frozen=True)
class Reduced:
    """Yx = Y @ basis split into range and scaling data."""
    U: np.ndarray
    s: np.ndarray
    W: np.ndarray
    basis: np.ndarray
    Y: np.ndarray

    @property
    def rows(self) -> int:
        return self.Y.shape[0]


def reduce(Yop: RigidityOperator, X: VariationSpace) -> Reduced:
    Y = Yop.matrix
    if Y.shape[1] != X.basis.shape[0]:
        raise linalg.DimensionError("operator and variation space sizes differ")
    Yx = Y @ X.basis
    U, s, W, _ = linalg.svd_split(Yx)
    return Reduced(U, s, W, X.basis, Y)


def _reduced(Yop, X):
    return Yop if isinstance(Yop, Reduced) else reduce(Yop, X)


def stress_residual(Yop: RigidityOperator, X: VariationSpace, weights) -> float:
    """Relative size of basis^T Y^T mu; zero exactly for stresses."""
    w = np.asarray(weights, dtype=float)
    r = X.basis.T @ (Yop.matrix.T @ w)
    scale = max(Yop.norm * float(np.linalg.norm(w)), np.finfo(float).tiny)
    return float(np.linalg.norm(r)) / scale


def stress_space(Yop: RigidityOperator, X: VariationSpace) -> np.ndarray:
    """Orthonormal basis (columns) of the stress space {mu : basis^T Y^T mu = 0}."""
    R = reduce(Yop, X)
    return linalg.null_space(R.U.T) if R.U.shape[1] else np.eye(R.rows)


def _motion(R: Reduced, z) -> MotionVector:
    c = R.W @ (z / R.s) if R.s.size else np.zeros(R.W.shape[0])
    V = R.basis @ c
    return MotionVector(V, R.Y @ V)


def find_strictly_positive_stress(Yop, X=None, tol=None) -> StressVector | None:
    R = _reduced(Yop, X)
    m = R.rows
    if m == 0:
        return None
    res = linalg.feasible(R.U.T, np.zeros(R.U.shape[1]), np.eye(m), np.ones(m), tol)
    return StressVector(res.witness) if res.feasible else None


def find_semipositive_stress(Yop, X=None, tol=None) -> StressVector | None:
    R = _reduced(Yop, X)
    m = R.rows
    if m == 0:
        return None
    A_eq = np.vstack([R.U.T, np.ones((1, m))])
    b_eq = np.concatenate([np.zeros(R.U.shape[1]), [1.0]])
    res = linalg.feasible(A_eq, b_eq, np.eye(m), np.zeros(m), tol)
    return StressVector(res.witness) if res.feasible else None


def find_strictly_positive_motion(Yop, X=None, tol=None) -> MotionVector | None:
    R = _reduced(Yop, X)
    m, r = R.rows, R.U.shape[1]
    if m == 0 or r == 0:
        return None
    res = linalg.feasible(np.zeros((0, r)), [], R.U, np.ones(m), tol)
    return _motion(R, res.witness) if res.feasible else None


def find_semipositive_motion(Yop, X=None, tol=None) -> MotionVector | None:
    R = _reduced(Yop, X)
    m, r = R.rows, R.U.shape[1]
    if m == 0 or r == 0:
        return None
    A_ge = np.vstack([R.U, R.U.sum(axis=0, keepdims=True)])
    b_ge = np.concatenate([np.zeros(m), [1.0]])
    res = linalg.feasible(np.zeros((0, r)), [], A_ge, b_ge, tol)
    return _motion(R, res.witness) if res.feasible else None


def check_stress(Yop, X, stress: StressVector, strict: bool) -> None:
    w = stress.normalized
    if np.any(w < -CERT_TOL):
        raise CertificateError("stress has negative weights")
    if strict and stress.positivity != STRICTLY_POSITIVE:
        raise CertificateError("stress is not strictly positive")
    if not strict and stress.positivity == ZERO:
        raise CertificateError("stress is zero")
    if stress_residual(Yop, X, w) > CERT_TOL:
        raise CertificateError("weights fail the stress condition")


def check_motion(Yop, X, motion: MotionVector, strict: bool) -> None:
    L = motion.load
    top = float(np.max(np.abs(L), initial=0.0))
    if top == 0.0:
        raise CertificateError("motion has zero load")
    if np.any(L / top < -CERT_TOL):
        raise CertificateError("motion load has negative entries")
    if strict and motion.positivity != STRICTLY_POSITIVE:
        raise CertificateError("motion load is not strictly positive")
    V = motion.field
    if np.linalg.norm(V - X.project(V)) > CERT_TOL * max(1.0, float(np.linalg.norm(V))):
        raise CertificateError("motion leaves the variation space")


def stiemke(Yop: RigidityOperator, X: VariationSpace, tol=None):
    """Semipositive motion or strictly positive stress; exactly one exists.

    Returns ``(motion, stress)`` with one of them None, after checking the
    witness.  Raises AlternativeConflict otherwise.
    """
    R = reduce(Yop, X)
    motion = find_semipositive_motion(R, tol=tol)
    stress = find_strictly_positive_stress(R, tol=tol)
    if (motion is None) == (stress is None):
        raise AlternativeConflict(
            "Stiemke pair: " + ("both sides present" if motion is not None else "neither side"),
            motion, stress)
    if motion is not None:
        check_motion(Yop, X, motion, strict=False)
    else:
        check_stress(Yop, X, stress, strict=True)
    return motion, stress


def gordan(Yop: RigidityOperator, X: VariationSpace, tol=None):
    """Strictly positive motion or semipositive stress; exactly one exists."""
    R = reduce(Yop, X)
    motion = find_strictly_positive_motion(R, tol=tol)
    stress = find_semipositive_stress(R, tol=tol)
    if (motion is None) == (stress is None):
        raise AlternativeConflict(
            "Gordan pair: " + ("both sides present" if motion is not None else "neither side"),
            motion, stress)
    if motion is not None:
        check_motion(Yop, X, motion, strict=True)
    else:
        check_stress(Yop, X, stress, strict=False)
    return motion, stress


def positivity_margin(Yop, X=None, tol=None) -> float:
    """Largest min(mu) over stresses with 0 <= mu <= 1 (0 if none is strictly positive).

    A diagnostic for how close a framework sits to losing its strictly
    positive stresses.
    """
    R = _reduced(Yop, X)
    m, r = R.rows, R.U.shape[1]
    if m == 0:
        return 0.0
    # variables (mu, s): U^T mu = 0, mu - s >= 0, -mu >= -1, maximise s
    A_eq = np.hstack([R.U.T, np.zeros((r, 1))])
    A_ge = np.vstack([np.hstack([np.eye(m), -np.ones((m, 1))]),
                      np.hstack([-np.eye(m), np.zeros((m, 1))]),
                      np.hstack([np.zeros((1, m)), np.ones((1, 1))])])
    b_ge = np.concatenate([np.zeros(m), -np.ones(m), [0.0]])
    c = np.zeros(m + 1)
    c[-1] = -1.0
    res = linalg.minimize(c, A_eq, np.zeros(r), A_ge, b_ge, tol)
    return float(res.witness[-1]) if res.feasible else 0.0
