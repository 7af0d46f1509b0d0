"""Dense complex linear algebra primitives.

Everything downstream (feasibility solvers, factorization constructors)
goes through these helpers so that rank decisions and tolerance handling
are made in exactly one place.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Default tolerances, relative to the natural scale of the input.
TOL_SYM = 1e-10     # Hermitian symmetry check
TOL_PSD = 1e-9      # negative eigenvalue dust clipped in psd_sqrt
RANK_TOL = 1e-10    # singular values below RANK_TOL * sigma_max count as zero
TOL_EIGEN = 1e-10   # reconstruction tolerance for eigen/SVD output


class NotSquare(ValueError):
    """Operation requires a square matrix."""


class NotHermitian(ValueError):
    """Symmetry tolerance exceeded for a nominally self-adjoint input."""


class NotPSD(ValueError):
    """Input has an eigenvalue below the allowed negative dust level."""


def as_matrix(M) -> np.ndarray:
    """Coerce to a 2-d complex array and reject non-finite entries."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got ndim={A.ndim}")
    if A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError(f"matrix must be at least 1x1, got {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def herm(M: np.ndarray) -> np.ndarray:
    """Hermitian part (M + M*)/2."""
    return 0.5 * (M + M.conj().T)


def opnorm(M) -> float:
    """Operator (spectral) norm."""
    return float(np.linalg.norm(np.asarray(M, dtype=complex), 2))


@dataclass(frozen=True)
class HermitianEigen:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending."""

    values: np.ndarray      # real, descending
    vectors: np.ndarray     # unitary, columns are eigenvectors

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.conj().T


@dataclass(frozen=True)
class PolarDecomposition:
    """M = V |M| with V a partial isometry onto range(M)."""

    isometric_part: np.ndarray
    positive_part: np.ndarray


def hermitian_eigen(M, tol_sym: float = TOL_SYM) -> HermitianEigen:
    """Eigendecomposition of a self-adjoint matrix, eigenvalues descending.

    Raises NotSquare / NotHermitian when the input is not (numerically)
    self-adjoint.
    """
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise NotSquare(f"expected square matrix, got {A.shape}")
    scale = opnorm(A)
    if scale > 0 and opnorm(A - A.conj().T) > tol_sym * scale:
        raise NotHermitian("matrix is not self-adjoint within tolerance")
    w, V = np.linalg.eigh(herm(A))
    return HermitianEigen(values=w[::-1].copy(), vectors=V[:, ::-1].copy())


def svd(M) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD: M = U diag(s) V* with s descending and nonnegative."""
    A = as_matrix(M)
    U, s, Vh = np.linalg.svd(A, full_matrices=False)
    return U, s, Vh.conj().T


def rank_from_singular_values(s: np.ndarray, rank_tol: float = RANK_TOL) -> int:
    if s.size == 0 or s[0] <= 0:
        return 0
    return int(np.sum(s > rank_tol * s[0]))


def polar(M, rank_tol: float = RANK_TOL) -> PolarDecomposition:
    """Polar decomposition M = V |M|.

    |M| = (M*M)^(1/2) and V is the partial isometry mapping support(|M|)
    onto range(M); V*V equals the support projection of |M|.
    """
    A = as_matrix(M)
    U, s, V = svd(A)
    r = rank_from_singular_values(s, rank_tol)
    P = (V * s) @ V.conj().T            # |M|, positive semidefinite
    W = U[:, :r] @ V[:, :r].conj().T    # partial isometry on the support
    return PolarDecomposition(isometric_part=W, positive_part=herm(P))


def psd_sqrt(M, tol_psd: float = TOL_PSD) -> np.ndarray:
    """Positive square root of a PSD matrix.

    Negative eigenvalue dust down to -tol_psd * ||M|| is clipped to zero;
    anything below that raises NotPSD.
    """
    eig = hermitian_eigen(M, tol_sym=max(TOL_SYM, tol_psd))
    scale = float(eig.values[0]) if eig.values.size else 0.0
    scale = max(abs(scale), float(abs(eig.values[-1])), 0.0)
    if eig.values[-1] < -tol_psd * max(scale, 1e-300):
        raise NotPSD(
            f"min eigenvalue {eig.values[-1]:.3e} below -tol_psd*scale"
        )
    w = np.clip(eig.values, 0.0, None)
    return herm((eig.vectors * np.sqrt(w)) @ eig.vectors.conj().T)


def range_projection(M, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Orthogonal projection onto the column space of M."""
    A = as_matrix(M)
    U, s, _ = svd(A)
    r = rank_from_singular_values(s, rank_tol)
    return herm(U[:, :r] @ U[:, :r].conj().T)


def support_projection(M, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Orthogonal projection onto the row space (support) of M."""
    return range_projection(as_matrix(M).conj().T, rank_tol)


def diag_pseudo_inverse(xi, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Diagonal matrix with entries 1/xi_j on the support of xi.

    Entries at or below rank_tol * max(xi) are treated as zero.
    """
    v = np.asarray(xi, dtype=float)
    if v.ndim != 1:
        raise ValueError("expected a vector")
    if np.any(v < 0):
        raise ValueError("weight vector entries must be nonnegative")
    top = v.max(initial=0.0)
    inv = np.zeros_like(v)
    if top > 0:
        mask = v > rank_tol * top
        inv[mask] = 1.0 / v[mask]
    return np.diag(inv).astype(complex)


def psd_pseudo_inverse(M, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Moore-Penrose inverse of a PSD matrix via its eigenbasis."""
    eig = hermitian_eigen(M, tol_sym=1e-8)
    w = np.clip(eig.values, 0.0, None)
    top = w.max(initial=0.0)
    inv = np.zeros_like(w)
    if top > 0:
        mask = w > rank_tol * top
        inv[mask] = 1.0 / w[mask]
    return herm((eig.vectors * inv) @ eig.vectors.conj().T)
