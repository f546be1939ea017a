"""First-order oracles for the three equivalent feasibility objectives.

All three vanish exactly on the solution set, so the optimal value is 0:

- non-smooth: f(x) = max(lambda_max(A(x) - B), 0), subgradient bound M;
- smooth: f(x) = squared Frobenius distance of A(x) - B to the
  negative-semidefinite cone, gradient Lipschitz constant 2 ||A||^2;
- linear system: f(x) = 0.5 ||e(Ax - b)||^2 with the clipped residual e,
  gradient Lipschitz constant ||A||_2^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionMismatch
from .model import LinIneqSystem, LmiProblem, constants, residual_map
from .symlinalg import SymMatrix, eig_sym, lambda_max, project_neg_semidef

__all__ = [
    "OracleEval",
    "Oracle",
    "eval_nonsmooth",
    "eval_smooth",
    "eval_linsys",
    "nonsmooth_oracle",
    "smooth_oracle",
    "linsys_oracle",
]

# Top eigenvalues at or below this are treated as feasible: the oracle then
# reports value 0 with the zero (minimum-norm) subgradient, keeping the pair
# (value, gradient) consistent at the kink.
_KINK_TOL = 1e-12


@dataclass(frozen=True)
class OracleEval:
    """Objective value (always >= 0) and first-order information at a point.

    For smooth objectives `gradient` is the gradient; for the non-smooth
    objective it is a subgradient.
    """

    value: float
    gradient: np.ndarray


@dataclass(frozen=True)
class Oracle:
    """An evaluation map together with its declared smoothness constants:
    f(y) - f(x) - <g(x), y - x> <= (grad_lipschitz/2)||y-x||^2
    + subgrad_bound * ||y-x||. Exactly one of the two constants is nonzero
    for the oracles built here."""

    evaluate: Callable[[np.ndarray], OracleEval]
    dim: int
    grad_lipschitz: float
    subgrad_bound: float


def _check_dim(x, m):
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = x.reshape(1)
    if x.ndim != 1 or x.shape[0] != m:
        raise DimensionMismatch(f"point must be a vector of length {m}")
    return x


def eval_nonsmooth(p: LmiProblem, x) -> OracleEval:
    """max(lambda_max(A(x) - B), 0) and a subgradient.

    Above the kink the subgradient is A^T(v v^T) = (v^T A_i v)_i for a unit
    top eigenvector v; at or below it (lambda_max <= 1e-12) the point is
    treated as feasible and (0, 0) is returned.
    """
    x = _check_dim(x, p.num_vars)
    s = SymMatrix(p._apply_raw(x) - p.rhs.mat)
    top, v = lambda_max(s)
    if top <= _KINK_TOL:
        return OracleEval(0.0, np.zeros(p.num_vars))
    return OracleEval(top, (p._tensor @ v) @ v)


def eval_smooth(p: LmiProblem, x) -> OracleEval:
    """Squared distance of A(x) - B to the negative-semidefinite cone.

    The gradient is 2 A^T(residual) where residual is the positive part of
    A(x) - B; it is Lipschitz with constant 2 ||A||^2.
    """
    x = _check_dim(x, p.num_vars)
    s = SymMatrix(p._apply_raw(x) - p.rhs.mat)
    _, residual = project_neg_semidef(s)
    value = float(np.sum(residual.mat * residual.mat))
    grad = 2.0 * np.tensordot(p._tensor, residual.mat, axes=([1, 2], [0, 1]))
    return OracleEval(value, grad)


def eval_linsys(sys: LinIneqSystem, x) -> OracleEval:
    """0.5 ||e(Ax - b)||^2 with gradient A^T e(Ax - b)."""
    x = _check_dim(x, sys.num_vars)
    e = residual_map(sys, sys.rows @ x - sys.rhs)
    return OracleEval(0.5 * float(e @ e), sys.rows.T @ e)


def nonsmooth_oracle(p: LmiProblem) -> Oracle:
    """Oracle for eval_nonsmooth with (L, M) = (0, sqrt(sum ||A_i||_2^2))."""
    m = constants(p).subgrad_bound
    return Oracle(lambda x: eval_nonsmooth(p, x), p.num_vars, 0.0, m)


def smooth_oracle(p: LmiProblem) -> Oracle:
    """Oracle for eval_smooth with (L, M) = (2 ||A||^2, 0)."""
    return Oracle(lambda x: eval_smooth(p, x), p.num_vars, constants(p).grad_lipschitz, 0.0)


def linsys_oracle(sys: LinIneqSystem) -> Oracle:
    """Oracle for eval_linsys with L = ||A||_2^2 = lambda_max(A^T A)."""
    gram = SymMatrix(sys.rows.T @ sys.rows)
    lip = max(float(eig_sym(gram).eigenvalues[0]), 0.0)
    return Oracle(lambda x: eval_linsys(sys, x), sys.num_vars, lip, 0.0)
