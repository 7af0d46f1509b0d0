"""Dense two-phase tableau simplex with Bland's rule.

Problem form:  min c.x  subject to  A x >= b,  x >= 0.

Problem sizes here are at most a few hundred rows, so a dense tableau with
the anti-cycling Bland rule favours determinism and simplicity over speed.
"""

from __future__ import annotations

import numpy as np


class Infeasible(ValueError):
    """The feasible region is empty."""


class Unbounded(ValueError):
    """The objective is unbounded below on the feasible region."""


_PIV_TOL = 1e-11


def _pivot(T: np.ndarray, basis: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    mask = np.abs(T[:, col]) > 0
    mask[row] = False
    T[mask] -= np.outer(T[mask, col], T[row])
    basis[row] = col


def _bland_step(T: np.ndarray, basis: np.ndarray, ncols: int) -> bool:
    """One Bland-rule pivot on tableau T (last row = reduced costs, last
    column = rhs).  Returns False at optimality, raises Unbounded."""
    costs = T[-1, :ncols]
    # tolerances must track the tableau magnitude: after many pivots the
    # reduced costs carry roundoff well above the unit-scale noise floor
    scale = max(1.0, float(np.abs(T).max()))
    tol_enter = _PIV_TOL * scale
    for entering in range(ncols):
        if costs[entering] >= -tol_enter:
            continue
        col = T[:-1, entering]
        rhs = T[:-1, -1]
        best_ratio, leaving = None, -1
        for i in range(col.size):
            if col[i] > _PIV_TOL:
                ratio = rhs[i] / col[i]
                if (
                    best_ratio is None
                    or ratio < best_ratio - _PIV_TOL
                    or (abs(ratio - best_ratio) <= _PIV_TOL and basis[i] < basis[leaving])
                ):
                    best_ratio, leaving = ratio, i
        if leaving < 0:
            if costs[entering] > -1e-7 * scale:
                # noise-level reduced cost on a numerically zero column:
                # skip it rather than report a phantom unbounded ray
                continue
            raise Unbounded("no blocking row for entering column")
        _pivot(T, basis, leaving, entering)
        return True
    return False


def simplex_lp(
    costs,
    A_ge,
    b_ge,
    max_pivots: int = 100_000,
    feas_tol: float = 1e-8,
) -> tuple[np.ndarray, float]:
    """Solve min costs.x s.t. A_ge x >= b_ge, x >= 0.

    Returns (x, value) at an optimal basic solution.  Raises Infeasible /
    Unbounded.
    """
    c = np.asarray(costs, dtype=float)
    A = np.atleast_2d(np.asarray(A_ge, dtype=float))
    b = np.asarray(b_ge, dtype=float)
    nvar = c.size
    if A.size == 0 or A.shape[0] == 0:
        # no constraints beyond x >= 0
        if np.any(c < -_PIV_TOL):
            raise Unbounded("negative cost coordinate with no constraints")
        return np.zeros(nvar), 0.0
    if A.shape[1] != nvar:
        raise ValueError("constraint matrix width does not match costs")
    nrow = A.shape[0]

    # equality form with b >= 0: rows with b_i >= 0 get a surplus (-1),
    # flipped rows get a slack (+1) that can start in the basis
    Aeq = np.empty((nrow, nvar + nrow))
    beq = np.empty(nrow)
    slack_ok = np.empty(nrow, dtype=bool)
    for i in range(nrow):
        if b[i] >= 0:
            Aeq[i, :nvar] = A[i]
            beq[i] = b[i]
            sgn = -1.0
            slack_ok[i] = False
        else:
            Aeq[i, :nvar] = -A[i]
            beq[i] = -b[i]
            sgn = 1.0
            slack_ok[i] = True
        Aeq[i, nvar:] = 0.0
        Aeq[i, nvar + i] = sgn

    scale = max(1.0, float(np.abs(beq).max(initial=0.0)))

    # phase 1: artificials for rows without a ready basis column
    art_rows = np.where(~slack_ok)[0]
    nart = art_rows.size
    ncols = nvar + nrow + nart
    T = np.zeros((nrow + 1, ncols + 1))
    T[:nrow, : nvar + nrow] = Aeq
    T[:nrow, -1] = beq
    basis = np.empty(nrow, dtype=int)
    for i in range(nrow):
        basis[i] = nvar + i  # slack rows
    for k, i in enumerate(art_rows):
        T[i, nvar + nrow + k] = 1.0
        basis[i] = nvar + nrow + k
    if nart:
        # phase-1 objective: sum of artificials, expressed in reduced form
        T[-1, :] = -T[art_rows].sum(axis=0)
        T[-1, nvar + nrow : ncols] = 0.0
        pivots = 0
        while _bland_step(T, basis, ncols):
            pivots += 1
            if pivots > max_pivots:
                raise RuntimeError("phase-1 pivot cap exceeded")
        if -T[-1, -1] > feas_tol * scale:
            raise Infeasible(f"phase-1 optimum {-T[-1, -1]:.3e} > 0")
        # drive any residual artificials out of the basis
        for i in range(nrow):
            if basis[i] >= nvar + nrow:
                row = T[i, : nvar + nrow]
                j = int(np.argmax(np.abs(row)))
                if abs(row[j]) > _PIV_TOL:
                    _pivot(T, basis, i, j)

    # phase 2 on the original columns only
    T2 = np.zeros((nrow + 1, nvar + nrow + 1))
    T2[:nrow, : nvar + nrow] = T[:nrow, : nvar + nrow]
    T2[:nrow, -1] = T[:nrow, -1]
    T2[-1, :nvar] = c
    for i in range(nrow):
        if basis[i] < nvar + nrow and abs(T2[-1, basis[i]]) > 0:
            T2[-1] -= T2[-1, basis[i]] * T2[i]
    pivots = 0
    while _bland_step(T2, basis, nvar + nrow):
        pivots += 1
        if pivots > max_pivots:
            raise RuntimeError("phase-2 pivot cap exceeded")

    x = np.zeros(nvar + nrow)
    for i in range(nrow):
        if basis[i] < nvar + nrow:
            x[basis[i]] = T2[i, -1]
    sol = np.clip(x[:nvar], 0.0, None)
    return sol, float(c @ sol)
