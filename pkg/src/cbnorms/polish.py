"""Gauss-Newton polish of block-PSD optima to near machine precision.

The cutting-plane refiners in `cutting` locate each optimum to roughly the
square root of the LP feasibility tolerance, because the objective is flat
along directions in which the PSD boundary curves quadratically.  The last
digits are recovered here by solving the optimality system directly:

    M(v) K = 0,     K* K = I_k,     stationarity(Z) = 0,   Z = K Theta K*,

with unknowns v (primal parameters), K (an orthonormal kernel basis of the
optimal block matrix) and Theta (a k x k Hermitian dual weight).  The system
is solved by Gauss-Newton with a finite-difference Jacobian; the kernel
rotation gauge is absorbed by the least-squares step.  Near a strictly
complementary optimum the iteration contracts quadratically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class PolishResult:
    """Outcome of a Gauss-Newton pass: polished primal v, kernel basis K,
    dual weight Theta, and the final residual norm.  The point is a
    certified global optimum when `residual_norm` is tiny, M(v) is PSD and
    Theta is PSD (KKT with zero duality gap for a convex problem)."""

    v: np.ndarray
    K: np.ndarray
    Theta: np.ndarray
    residual_norm: float


def _ri(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    return np.concatenate([A.real.ravel(), A.imag.ravel()])


class KktSystem:
    """Optimality system for min c.v s.t. M(v) >= 0 plus pinned equalities.

    Parameters
    ----------
    nv : number of real primal parameters.
    dim : side of the Hermitian matrix M(v).
    M_of_v : callable v -> Hermitian (dim, dim) array.
    stationarity : callable (v, Z) -> real residual vector; encodes the
        gradient conditions linking the dual certificate Z to the objective,
        with inactive-multiplier entries pinned to zero.
    primal_eq : optional callable v -> real residual vector for active
        structural equalities.
    """

    def __init__(self, nv, dim, M_of_v, stationarity, primal_eq=None):
        self.nv = nv
        self.dim = dim
        self.M_of_v = M_of_v
        self.stationarity = stationarity
        self.primal_eq = primal_eq

    # -- packing ------------------------------------------------------

    def _unpack(self, u, k):
        nv, dim = self.nv, self.dim
        v = u[:nv]
        nk = dim * k
        K = (u[nv : nv + nk] + 1j * u[nv + nk : nv + 2 * nk]).reshape(dim, k)
        th = u[nv + 2 * nk :]
        Theta = np.zeros((k, k), dtype=complex)
        iu = np.triu_indices(k, 1)
        noff = iu[0].size
        Theta[iu] = th[k : k + noff] + 1j * th[k + noff :]
        Theta = Theta + Theta.conj().T
        Theta[np.diag_indices(k)] = th[:k]
        return v, K, Theta

    def _pack(self, v, K, Theta):
        iu = np.triu_indices(K.shape[1], 1)
        return np.concatenate(
            [
                v,
                K.real.ravel(),
                K.imag.ravel(),
                np.diag(Theta).real,
                Theta[iu].real,
                Theta[iu].imag,
            ]
        )

    def residual(self, u, k):
        v, K, Theta = self._unpack(u, k)
        M = self.M_of_v(v)
        Z = K @ Theta @ K.conj().T
        parts = [
            _ri(M @ K),
            _ri(K.conj().T @ K - np.eye(k)),
            np.asarray(self.stationarity(v, Z), dtype=float),
        ]
        if self.primal_eq is not None:
            parts.append(np.asarray(self.primal_eq(v), dtype=float))
        return np.concatenate(parts)

    # -- solve --------------------------------------------------------

    def _init_theta(self, v, K):
        """Least-squares Theta matching the stationarity conditions."""
        k = K.shape[1]
        iu = np.triu_indices(k, 1)
        noff = iu[0].size
        nth = k + 2 * noff
        base = np.asarray(self.stationarity(v, np.zeros((self.dim,) * 2)))
        cols = []
        for j in range(nth):
            th = np.zeros(nth)
            th[j] = 1.0
            Theta = np.zeros((k, k), dtype=complex)
            Theta[iu] = th[k : k + noff] + 1j * th[k + noff :]
            Theta = Theta + Theta.conj().T
            Theta[np.diag_indices(k)] = th[:k]
            Z = K @ Theta @ K.conj().T
            cols.append(np.asarray(self.stationarity(v, Z)) - base)
        A = np.array(cols).T
        th, *_ = np.linalg.lstsq(A, -base, rcond=None)
        Theta = np.zeros((k, k), dtype=complex)
        Theta[iu] = th[k : k + noff] + 1j * th[k + noff :]
        Theta = Theta + Theta.conj().T
        Theta[np.diag_indices(k)] = th[:k]
        return Theta

    def polish(
        self,
        v0: np.ndarray,
        kernel_dim: int | None = None,
        cluster_tol: float = 1e-4,
        max_iter: int = 25,
        fd_step: float = 1e-7,
    ) -> PolishResult:
        """Gauss-Newton from a near-optimal v0.  Returns the best iterate
        reached; the caller judges acceptance from `residual_norm` and the
        PSD-ness of M(v) and Theta."""
        M = self.M_of_v(v0)
        w, V = np.linalg.eigh(M)
        scale = max(abs(w[-1]), 1e-300)
        if kernel_dim is None:
            kernel_dim = int(np.sum(w < cluster_tol * scale))
        k = max(kernel_dim, 1)
        K = V[:, :k].astype(complex)
        Theta = self._init_theta(v0, K)
        u = self._pack(v0, K, Theta)
        r = self.residual(u, k)
        best_u, best_norm = u.copy(), np.linalg.norm(r)
        start_norm = best_norm
        for it in range(max_iter):
            J = np.empty((r.size, u.size))
            for j in range(u.size):
                du = np.zeros(u.size)
                du[j] = fd_step
                J[:, j] = (self.residual(u + du, k) - r) / fd_step
            step, *_ = np.linalg.lstsq(J, -r, rcond=None)
            done = False
            for damp in (1.0, 0.5, 0.25, 0.1):
                u_try = u + damp * step
                r_try = self.residual(u_try, k)
                if np.linalg.norm(r_try) < np.linalg.norm(r):
                    u, r = u_try, r_try
                    break
            else:
                done = True
            if np.linalg.norm(r) < best_norm:
                best_u, best_norm = u.copy(), np.linalg.norm(r)
            if done or best_norm < 1e-13 * max(scale, 1.0):
                break
            # far from the quadratic basin: bail out early
            if it >= 2 and best_norm > 0.3 * start_norm:
                break
        v, K, Theta = self._unpack(best_u, k)
        return PolishResult(v=v, K=K, Theta=Theta, residual_norm=best_norm)
