"""Dense symmetric linear algebra on small matrices.

Factorizations are written from scratch (Cholesky with a pivot tolerance,
cyclic Jacobi eigensolver) and dispatched through the selected kernel
backend.  All types are immutable after construction; operations are pure.
"""

from __future__ import annotations

import math

import numpy as np

from .backend import K
from .errors import DimensionMismatch, NoConvergence, NotPositiveDefinite

PD_PIVOT_TOL = 1e-13
JACOBI_TOL = 1e-14
JACOBI_SWEEP_FACTOR = 100
SYMMETRY_TOL = 1e-12


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.setflags(write=False)
    return a


class SymMatrix:
    """Real symmetric matrix; exact symmetry is enforced by averaging."""

    __slots__ = ("dim", "data")

    def __init__(self, data, tol: float = SYMMETRY_TOL):
        a = np.asarray(data, dtype=np.float64)
        if a.ndim == 0:
            a = a.reshape(1, 1)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix entries must be finite")
        scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
        if np.max(np.abs(a - a.T)) > tol * scale:
            raise ValueError("matrix is not symmetric within tolerance")
        self.dim = a.shape[0]
        self.data = _freeze(0.5 * (a + a.T))

    def entry(self, i: int, j: int) -> float:
        return float(self.data[i, j])

    def __repr__(self):
        return f"SymMatrix({self.data.tolist()})"


class PDMatrix:
    """Symmetric positive-definite matrix with its cached Cholesky factor."""

    __slots__ = ("dim", "data", "lower_factor", "_logdet")

    def __init__(self, base: SymMatrix, lower: np.ndarray):
        self.dim = base.dim
        self.data = base.data
        self.lower_factor = _freeze(lower)
        self._logdet = 2.0 * float(np.sum(np.log(np.diag(self.lower_factor))))

    @property
    def base(self) -> SymMatrix:
        s = SymMatrix.__new__(SymMatrix)
        s.dim = self.dim
        s.data = self.data
        return s

    def __repr__(self):
        return f"PDMatrix({self.data.tolist()})"


def sym(data) -> SymMatrix:
    return data if isinstance(data, SymMatrix) else SymMatrix(data)


def identity(m: int) -> PDMatrix:
    return factor_pd(SymMatrix(np.eye(m)))


def factor_pd(M) -> PDMatrix:
    """Cholesky-factor a symmetric matrix; NotPositiveDefinite if a pivot is at/below tolerance."""
    M = sym(M)
    L, ok = K.chol_batch(M.data[None, :, :], PD_PIVOT_TOL)
    if not bool(ok[0]):
        raise NotPositiveDefinite("matrix has a Cholesky pivot at or below tolerance")
    return PDMatrix(M, L[0])


def pd_from_lower(L: np.ndarray) -> PDMatrix:
    """Build a PDMatrix directly from a lower-triangular factor with positive diagonal."""
    L = np.asarray(L, dtype=np.float64)
    if np.any(np.diag(L) <= 0.0):
        raise NotPositiveDefinite("lower factor must have strictly positive diagonal")
    base = SymMatrix(L @ L.T, tol=np.inf)
    return PDMatrix(base, L)


def is_pd(M) -> bool:
    M = sym(M)
    _, ok = K.chol_batch(M.data[None, :, :], PD_PIVOT_TOL)
    return bool(ok[0])


def logdet(M: PDMatrix) -> float:
    """2 * sum(log diag(L)) from the cached factor."""
    return M._logdet


class EigenDecomp:
    """Eigenvalues (descending) and orthonormal eigenvectors of a symmetric matrix."""

    __slots__ = ("eigenvalues", "eigenvectors")

    def __init__(self, w, Q):
        self.eigenvalues = _freeze(w)
        self.eigenvectors = _freeze(Q)


def sym_eigen(M) -> EigenDecomp:
    """Cyclic Jacobi eigendecomposition; deterministic for identical input."""
    M = sym(M)
    w, Q, ok = K.jacobi_batch(M.data[None, :, :], JACOBI_TOL, JACOBI_SWEEP_FACTOR)
    if not bool(ok[0]):
        raise NoConvergence("Jacobi sweeps exceeded the iteration cap")
    return EigenDecomp(w[0], Q[0])


def sqrt_pd(M: PDMatrix) -> PDMatrix:
    """Symmetric positive-definite square root via eigendecomposition."""
    e = sym_eigen(M.base)
    w = e.eigenvalues
    if w[-1] <= 0.0:
        raise NotPositiveDefinite("matrix is not positive definite")
    R = (e.eigenvectors * np.sqrt(w)) @ e.eigenvectors.T
    return factor_pd(SymMatrix(0.5 * (R + R.T), tol=np.inf))


def inverse_pd(M: PDMatrix) -> PDMatrix:
    """Inverse via the cached Cholesky factor."""
    inv, ok = K.inv_pd_batch(M.data[None, :, :], PD_PIVOT_TOL)
    if not bool(ok[0]):
        raise NotPositiveDefinite("matrix is not positive definite")
    return factor_pd(SymMatrix(inv[0], tol=np.inf))


def congruence(M: PDMatrix, W) -> SymMatrix:
    """W^T M W, symmetrized by averaging."""
    W = np.asarray(W, dtype=np.float64)
    if W.ndim != 2 or W.shape[0] != W.shape[1] or W.shape[0] != M.dim:
        raise DimensionMismatch(
            f"congruence needs a {M.dim}x{M.dim} matrix, got shape {W.shape}"
        )
    R = W.T @ M.data @ W
    s = SymMatrix.__new__(SymMatrix)
    s.dim = M.dim
    s.data = _freeze(0.5 * (R + R.T))
    return s


def logdet_sym_if_pd(S) -> float | None:
    """logdet of a symmetric matrix if it is PD, else None (support gating)."""
    S = sym(S)
    L, ok = K.chol_batch(S.data[None, :, :], PD_PIVOT_TOL)
    if not bool(ok[0]):
        return None
    return 2.0 * float(np.sum(np.log(np.diag(L[0]))))


def matrix_from_json(obj, tol: float = SYMMETRY_TOL) -> SymMatrix:
    """CLI matrix literal: JSON array-of-rows (a bare number means 1x1)."""
    if isinstance(obj, (int, float)):
        return SymMatrix([[float(obj)]])
    a = np.asarray(obj, dtype=np.float64)
    return SymMatrix(a, tol=tol)


def trace_product_inv(theta: PDMatrix, A: PDMatrix) -> float:
    """tr(theta^{-1} A) via the inverse from theta's factor."""
    if theta.dim != A.dim:
        raise DimensionMismatch("dimension mismatch between scale and argument")
    inv = inverse_pd(theta)
    return float(np.sum(inv.data * A.data))


def spectral_radius(M) -> float:
    e = sym_eigen(M)
    return float(np.max(np.abs(e.eigenvalues)))


def rand_orthogonal(m: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish orthogonal matrix (QR of a Gaussian); testing/verification helper."""
    X = rng.standard_normal((m, m))
    Q, R = np.linalg.qr(X)
    return Q * np.sign(np.diag(R))


def sym_from_eigs(eigs, rng: np.random.Generator) -> SymMatrix:
    """Symmetric matrix with prescribed eigenvalues in a random orthogonal frame."""
    eigs = np.asarray(eigs, dtype=np.float64)
    Q = rand_orthogonal(eigs.shape[0], rng)
    return SymMatrix((Q * eigs) @ Q.T, tol=np.inf)
