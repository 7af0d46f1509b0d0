"""Convex feasibility machinery.

The norm solvers reduce each factorization minimum to a monotone family of
feasibility questions about a 2x2 block Hermitian matrix

    M = [[A, X], [X*, B]]

whose off-diagonal block is pinned to the input X and whose diagonal blocks
satisfy per-block diagonal/trace constraints.  Membership in

    (PSD cone)  intersect  (affine-plus-box slab)

is decided by Dykstra's alternating projection algorithm, and the norm is
recovered by bisection on the constraint level t.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from .linalg import as_matrix, herm

ConstraintKind = Literal["entrywise_cap", "trace_equal", "trace_cap", "free"]


class BracketInvalid(ValueError):
    """Bisection bracket has an infeasible upper endpoint."""


@dataclass(frozen=True)
class BlockConstraint:
    """Diagonal-block constraint: cap on diagonal entries, a trace condition
    or nothing; `diagonal` forces the whole block to be diagonal."""

    kind: ConstraintKind
    level: float = 0.0
    diagonal: bool = False


@dataclass(frozen=True)
class AffineSlab:
    """Hermitian (m+n) x (m+n) matrices with off-diagonal block pinned to X
    and diagonal blocks constrained per block."""

    X: np.ndarray
    top: BlockConstraint
    bottom: BlockConstraint

    @property
    def m(self) -> int:
        return self.X.shape[0]

    @property
    def n(self) -> int:
        return self.X.shape[1]

    @property
    def size(self) -> int:
        return self.m + self.n


@dataclass
class FeasibilityResult:
    status: Literal["feasible", "infeasible", "iteration_cap"]
    point: np.ndarray | None
    residuals: dict = field(default_factory=dict)
    iterations: int = 0


def project_psd(M) -> np.ndarray:
    """Nearest (Frobenius) PSD matrix: clip eigenvalues at zero."""
    A = herm(as_matrix(M))
    w, V = np.linalg.eigh(A)
    if w[0] >= 0:
        return A
    w = np.clip(w, 0.0, None)
    return herm((V * w) @ V.conj().T)


def _project_block(A: np.ndarray, c: BlockConstraint) -> np.ndarray:
    B = herm(A)
    if c.diagonal:
        B = np.diag(np.diag(B).real).astype(complex)
    d = np.diag(B).real.copy()
    k = d.size
    if c.kind == "entrywise_cap":
        d = np.minimum(d, c.level)
    elif c.kind == "trace_equal":
        d += (c.level - d.sum()) / k
    elif c.kind == "trace_cap":
        excess = d.sum() - c.level
        if excess > 0:
            d -= excess / k
    np.fill_diagonal(B, d)
    return B


def project_slab(M, slab: AffineSlab) -> np.ndarray:
    """Frobenius-nearest point of the slab."""
    A = herm(as_matrix(M))
    m = slab.m
    out = A.copy()
    out[:m, m:] = slab.X
    out[m:, :m] = slab.X.conj().T
    out[:m, :m] = _project_block(A[:m, :m], slab.top)
    out[m:, m:] = _project_block(A[m:, m:], slab.bottom)
    return out


def slab_distance(M, slab: AffineSlab) -> float:
    return float(np.linalg.norm(M - project_slab(M, slab)))


def dykstra(
    slab: AffineSlab,
    tol_feas: float = 1e-8,
    max_iter: int = 200_000,
    x0: np.ndarray | None = None,
    stall_window: int = 1500,
    stall_improvement: float = 1e-4,
    scale: float | None = None,
) -> FeasibilityResult:
    """Dykstra's alternating projections onto (PSD cone) and the slab.

    Declares feasible when the gap between the PSD iterate and the slab
    iterate drops to tol_feas * scale; declares infeasible when that gap
    plateaus above 10 * tol_feas * scale for a full patience window.
    Dykstra has no finite infeasibility certificate, so the stall detector
    is heuristic; the surrounding bisection bracket absorbs borderline
    errors.
    """
    if scale is None:
        scale = max(1.0, float(np.abs(slab.X).max(initial=0.0)))
    k = slab.size
    x = project_slab(np.zeros((k, k), dtype=complex) if x0 is None else x0, slab)
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    feas_tol = tol_feas * scale
    stall_tol = 10 * tol_feas * scale

    gap_hist: list[float] = []
    y = x
    for it in range(1, max_iter + 1):
        y = project_psd(x + p)
        p = x + p - y
        x_new = project_slab(y + q, slab)
        q = y + q - x_new
        gap = float(np.linalg.norm(x_new - y))
        x = x_new
        if gap <= feas_tol:
            return FeasibilityResult(
                status="feasible",
                point=y,
                residuals={"gap": gap, "psd": 0.0, "slab": gap},
                iterations=it,
            )
        gap_hist.append(gap)
        if len(gap_hist) > stall_window:
            old = gap_hist[-stall_window - 1]
            if gap > stall_tol and (old - gap) < stall_improvement * gap:
                return FeasibilityResult(
                    status="infeasible",
                    point=None,
                    residuals={"gap": gap},
                    iterations=it,
                )
    return FeasibilityResult(
        status="iteration_cap",
        point=y,
        residuals={"gap": gap_hist[-1] if gap_hist else float("inf")},
        iterations=max_iter,
    )


def bisect_norm(
    is_feasible: Callable[[float], bool],
    t_lo: float,
    t_hi: float,
    tol_bisect: float = 1e-7,
    check_hi: bool = True,
) -> float:
    """Bisection for the infimum of a monotone feasibility predicate.

    Returns t with |t - inf{feasible t}| <= tol_bisect * t_hi.  Raises
    BracketInvalid when the upper endpoint is infeasible.  `check_hi=False`
    skips querying t_hi (used when feasibility at t_hi is known a priori
    from a trivial factorization).
    """
    if t_hi < t_lo:
        raise BracketInvalid(f"bracket [{t_lo}, {t_hi}] is empty")
    if check_hi and not is_feasible(t_hi):
        raise BracketInvalid(f"upper bracket t={t_hi} is infeasible")
    lo, hi = t_lo, t_hi
    tol = tol_bisect * max(t_hi, 1e-300)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if is_feasible(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
