"""Dense symmetric-matrix kernel.

Everything downstream (oracles, solvers, instance generators) funnels its
linear algebra through the four operations here: full eigendecomposition,
extreme eigenvalue with a unit eigenvector, projection onto the cone of
negative-semidefinite matrices, and the Frobenius/spectral norms.

Decompositions use LAPACK's symmetric eigensolver and are post-processed
into a canonical form (eigenvalues descending, stable order under ties,
first non-negligible eigenvector component nonnegative) so that identical
inputs always yield identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonFiniteInput

__all__ = [
    "SymMatrix",
    "EigDecomposition",
    "eig_sym",
    "lambda_max",
    "project_neg_semidef",
    "norms",
]

# Relative threshold below which a leading eigenvector component is treated
# as numerical noise when fixing the sign convention.
_SIGN_EPS = 1e-12


class SymMatrix:
    """Dense real symmetric n x n matrix.

    The constructor symmetrizes the input as 0.5 * (A + A.T), which makes
    ``mat[i, j] == mat[j, i]`` hold exactly (IEEE addition commutes), and
    rejects NaN/Inf entries. The backing array is marked read-only; treat
    instances as immutable values.
    """

    __slots__ = ("mat", "dim")

    def __init__(self, entries):
        a = np.asarray(entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
        s = 0.5 * (a + a.T)
        if not np.isfinite(s).all():
            raise NonFiniteInput("matrix contains NaN or Inf entries")
        s.flags.writeable = False
        self.mat = s
        self.dim = s.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.mat, dtype=dtype)

    def __eq__(self, other):
        if not isinstance(other, SymMatrix):
            return NotImplemented
        return self.dim == other.dim and np.array_equal(self.mat, other.mat)

    def __repr__(self):
        return f"SymMatrix(dim={self.dim})"


@dataclass(frozen=True)
class EigDecomposition:
    """Eigenvalues sorted descending; ``eigenvectors[:, k]`` is a unit
    eigenvector for ``eigenvalues[k]`` and the columns are orthonormal."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _freeze(a):
    a.flags.writeable = False
    return a


def _eig_desc(a):
    """Eigendecomposition of a symmetric ndarray in canonical descending form."""
    w, v = np.linalg.eigh(a)
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    # Deterministic sign: flip each column so its first component that is not
    # numerical noise comes out nonnegative.
    scale = np.abs(v).max(axis=0)
    lead = (np.abs(v) > _SIGN_EPS * scale).argmax(axis=0)
    signs = np.sign(v[lead, np.arange(v.shape[1])])
    signs[signs == 0.0] = 1.0
    return w, v * signs


def eig_sym(s: SymMatrix) -> EigDecomposition:
    """Full eigendecomposition of a symmetric matrix.

    Satisfies V diag(w) V^T = S and V^T V = I to working precision.
    """
    w, v = _eig_desc(s.mat)
    return EigDecomposition(_freeze(w), _freeze(v))


def lambda_max(s: SymMatrix) -> tuple[float, np.ndarray]:
    """Largest eigenvalue and an associated unit eigenvector.

    Ties are broken deterministically (for the zero matrix this returns the
    first standard basis vector).
    """
    w, v = _eig_desc(s.mat)
    return float(w[0]), _freeze(v[:, 0].copy())


def project_neg_semidef(s: SymMatrix) -> tuple[SymMatrix, SymMatrix]:
    """Nearest (Frobenius) negative-semidefinite matrix and the residual.

    Returns ``(proj, residual)`` with ``proj`` the eigenexpansion over
    min(eigenvalue, 0) and ``residual = s - proj`` the complementary
    positive part, so ``proj + residual == s`` exactly, ``proj`` is NSD,
    ``residual`` is PSD and ``<proj, residual> = 0`` up to roundoff.
    """
    w, v = _eig_desc(s.mat)
    proj = SymMatrix((v * np.minimum(w, 0.0)) @ v.T)
    residual = SymMatrix(s.mat - proj.mat)
    return proj, residual


def norms(s: SymMatrix) -> tuple[float, float]:
    """(Frobenius norm, spectral norm) of a symmetric matrix."""
    fro = float(np.linalg.norm(s.mat))
    w = np.linalg.eigvalsh(s.mat)
    return fro, float(np.abs(w).max())
