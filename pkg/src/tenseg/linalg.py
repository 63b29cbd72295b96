"""Dense linear algebra: numerical rank, null spaces and an LP feasibility solver.

The LP solver is a two-phase revised simplex using Bland's rule, so it never
cycles.  Problems are posed over free variables::

    A_eq x  = b_eq
    A_ge x >= b_ge

and converted internally to standard form (x = u - w, surplus columns for the
inequalities, one artificial per row).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

RANK_RTOL = 1e-10
LP_TOL = 1e-9
PIVOT_TOL = 1e-7
TIE_PIVOT_RATIO = 1e-3


class LinalgError(RuntimeError):
    pass


class DimensionError(LinalgError, ValueError):
    pass


class IterationLimit(LinalgError):
    """The simplex method used up its pivot budget without deciding."""


class Unbounded(LinalgError):
    pass


def solver_tol() -> float:
    """LP tolerance, overridable through the ``TENSEG_TOL`` environment variable."""
    env = os.environ.get("TENSEG_TOL")
    if env:
        try:
            tol = float(env)
        except ValueError:
            raise LinalgError(f"TENSEG_TOL must be a number, got {env!r}") from None
        if not tol > 0:
            raise LinalgError("TENSEG_TOL must be positive")
        return tol
    return LP_TOL


def as_matrix(a, cols: int | None = None) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.size == 0 and cols is not None:
        return np.zeros((0, cols))
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.ndim != 2:
        raise DimensionError(f"expected a matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DimensionError("matrix entries must be finite")
    return a


def rank_tol(a: np.ndarray, s: np.ndarray, rtol: float | None = None) -> float:
    if rtol is None:
        rtol = RANK_RTOL
    smax = s[0] if s.size else 0.0
    return rtol * max(a.shape) * smax


def svd_split(a, rtol: float | None = None):
    """Return ``(U_r, s_r, V_r, V_null)`` for the numerical range and kernel of ``a``."""
    a = as_matrix(a)
    m, n = a.shape
    if m == 0 or n == 0:
        return np.zeros((m, 0)), np.zeros(0), np.zeros((n, 0)), np.eye(n)
    u, s, vt = np.linalg.svd(a, full_matrices=True)
    r = int(np.sum(s > rank_tol(a, s, rtol))) if s[0] > 0 else 0
    return u[:, :r], s[:r], vt[:r].T, vt[r:].T


def rank(a, rtol: float | None = None) -> int:
    return svd_split(a, rtol)[1].size


def null_space(a, rtol: float | None = None) -> np.ndarray:
    """Orthonormal basis (as columns) of the numerical kernel of ``a``."""
    return svd_split(a, rtol)[3]


def range_basis(a, rtol: float | None = None) -> np.ndarray:
    """Orthonormal basis of the column space of ``a``."""
    return svd_split(a, rtol)[0]


def lstsq(a, b) -> tuple[np.ndarray, float]:
    """Least-squares solution and the norm of its residual."""
    a = as_matrix(a)
    b = np.asarray(b, dtype=float)
    x, *_ = np.linalg.lstsq(a, b, rcond=None)
    return x, float(np.linalg.norm(a @ x - b))


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    witness: np.ndarray | None
    residual: float
    iterations: int

    @property
    def status(self) -> str:
        return "Feasible" if self.feasible else "Infeasible"


def violation(A_eq, b_eq, A_ge, b_ge, x) -> float:
    """Max-norm violation of the constraint system at ``x``."""
    worst = 0.0
    if A_eq.shape[0]:
        worst = max(worst, float(np.max(np.abs(A_eq @ x - b_eq))))
    if A_ge.shape[0]:
        worst = max(worst, float(np.max(b_ge - A_ge @ x, initial=0.0)))
    return worst


def _check_dims(A_eq, b_eq, A_ge, b_ge):
    n = None
    for a in (A_eq, A_ge):
        a = np.asarray(a, dtype=float)
        if a.size and a.ndim == 2:
            n = a.shape[1] if n is None else n
            if a.shape[1] != n:
                raise DimensionError("A_eq and A_ge have different column counts")
    if n is None:
        shapes = [np.shape(a) for a in (A_eq, A_ge)]
        n = max((s[1] for s in shapes if len(s) == 2), default=0)
    A_eq, A_ge = as_matrix(A_eq, n), as_matrix(A_ge, n)
    b_eq = np.asarray(b_eq, dtype=float).reshape(-1)
    b_ge = np.asarray(b_ge, dtype=float).reshape(-1)
    if A_eq.shape[0] != b_eq.size or A_ge.shape[0] != b_ge.size:
        raise DimensionError("right-hand side length does not match row count")
    if not (np.all(np.isfinite(b_eq)) and np.all(np.isfinite(b_ge))):
        raise DimensionError("right-hand sides must be finite")
    return A_eq, b_eq, A_ge, b_ge, n


class _Revised:
    """Revised simplex over ``M z = b, z >= 0`` (b >= 0) with Bland's rule.

    Every step re-solves with the basis columns of the original matrix, so
    rounding does not accumulate the way it does in an updated tableau.
    """

    def __init__(self, M, b, tol, limit):
        m, N = M.shape
        self.A = np.hstack([M, np.eye(m)])  # artificials last
        self.b = b.copy()
        self.N = N
        self.basis = list(range(N, N + m))
        self.tol = tol
        self.limit = limit
        self.iterations = 0

    def B(self):
        return self.A[:, self.basis]

    def x_basic(self):
        return np.linalg.solve(self.B(), self.b)

    def objective(self, cost) -> float:
        return float(cost[self.basis] @ self.x_basic())

    def run(self, cost, allowed, stop_at=None):
        """Minimise ``cost @ z`` starting from the current basis."""
        while True:
            B = self.B()
            xb = np.linalg.solve(B, self.b)
            if stop_at is not None and cost[self.basis] @ xb <= stop_at:
                return
            y = np.linalg.solve(B.T, cost[self.basis])
            reduced = cost - self.A.T @ y
            reduced[self.basis] = 0.0
            cand = np.flatnonzero((reduced < -self.tol) & allowed)
            # Bland: lowest index entering, passing over columns whose only
            # positive entries are too small to pivot on safely
            for c in cand:
                d = np.linalg.solve(B, self.A[:, c])
                pos = d > PIVOT_TOL
                if np.any(pos):
                    break
                if not np.any(d > self.tol):
                    raise Unbounded("objective is unbounded below")
            else:
                return
            ratios = np.full(d.size, np.inf)
            ratios[pos] = np.maximum(xb[pos], 0.0) / d[pos]
            best = ratios.min()
            ties = np.flatnonzero(ratios <= best + self.tol * max(1.0, abs(best)))
            # Bland: lowest index leaving, among ties whose pivot is not tiny
            # next to the best one (tiny pivots wreck the basis conditioning)
            ties = ties[d[ties] >= TIE_PIVOT_RATIO * d[ties].max()]
            r = min(ties, key=lambda i: self.basis[i])
            self.iterations += 1
            if self.iterations > self.limit:
                raise IterationLimit(f"simplex exceeded {self.limit} pivots")
            self.basis[r] = c

    def drop_row(self, r):
        self.A = np.delete(self.A, r, axis=0)
        self.b = np.delete(self.b, r)
        del self.basis[r]


def _standard_form(A_eq, b_eq, A_ge, b_ge):
    me, n = A_eq.shape
    mg = A_ge.shape[0]
    M = np.zeros((me + mg, 2 * n + mg))
    M[:me, :n], M[:me, n:2 * n] = A_eq, -A_eq
    M[me:, :n], M[me:, n:2 * n] = A_ge, -A_ge
    M[me:, 2 * n:] = -np.eye(mg)
    b = np.concatenate([b_eq, b_ge])
    # equilibrate rows so the tolerance means the same thing at every scale
    scale = np.maximum(np.abs(M).max(axis=1, initial=0.0), np.abs(b))
    scale[scale == 0] = 1.0
    M /= scale[:, None]
    b = b / scale
    flip = b < 0
    M[flip] *= -1
    b[flip] *= -1
    return M, b


def minimize(c, A_eq, b_eq, A_ge, b_ge, tol: float | None = None) -> FeasibilityResult:
    """Two-phase simplex over free variables.

    Phase one minimises the sum of artificials; an optimum above ``tol``
    means the system is infeasible.  Phase two minimises ``c @ x`` from the
    feasible basis (``c=None`` skips it).  The witness is the basic solution
    of the final basis.
    """
    tol = solver_tol() if tol is None else tol
    A_eq, b_eq, A_ge, b_ge, n = _check_dims(A_eq, b_eq, A_ge, b_ge)
    me, mg = A_eq.shape[0], A_ge.shape[0]
    if me + mg == 0:
        x = np.zeros(n)
        if c is not None and np.any(np.asarray(c) != 0):
            raise Unbounded("objective is unbounded below")
        return FeasibilityResult(True, x, 0.0, 0)
    M, b = _standard_form(A_eq, b_eq, A_ge, b_ge)
    m, N = M.shape
    lp = _Revised(M, b, tol, 50 * (m + N))
    phase1 = np.concatenate([np.zeros(N), np.ones(m)])
    allowed = np.ones(N + m, dtype=bool)
    stop = tol * max(1.0, m)
    try:
        lp.run(phase1, allowed, stop_at=stop)
    except Unbounded:  # impossible in exact arithmetic: the objective is >= 0
        raise LinalgError("phase one lost numerical consistency") from None
    infeas = lp.objective(phase1)
    if infeas > stop:
        return FeasibilityResult(False, None, infeas, lp.iterations)

    # drive artificials out of the basis; rows where that fails are redundant
    r = 0
    while r < len(lp.basis):
        if lp.basis[r] >= N:
            row = np.linalg.solve(lp.B().T, np.eye(len(lp.basis))[r]) @ lp.A[:, :N]
            row[[j for j in lp.basis if j < N]] = 0.0
            nz = np.flatnonzero(np.abs(row) > PIVOT_TOL)
            if nz.size:
                lp.basis[r] = int(nz[0])
            else:
                lp.drop_row(r)
                continue
        r += 1
    allowed[N:] = False

    if c is not None:
        c = np.asarray(c, dtype=float)
        if c.size != n:
            raise DimensionError("objective length does not match variable count")
        cost = np.concatenate([c, -c, np.zeros(N - 2 * n + m)])
        lp.run(cost, allowed)

    z = np.zeros(lp.A.shape[1])
    if lp.basis:
        z[lp.basis] = np.maximum(lp.x_basic(), 0.0)
    x = z[:n] - z[n:2 * n]
    res = violation(A_eq, b_eq, A_ge, b_ge, x)
    return FeasibilityResult(True, x, res, lp.iterations)


def feasible(A_eq, b_eq, A_ge, b_ge, tol: float | None = None) -> FeasibilityResult:
    """Decide whether some x satisfies ``A_eq x = b_eq`` and ``A_ge x >= b_ge``."""
    return minimize(None, A_eq, b_eq, A_ge, b_ge, tol)
