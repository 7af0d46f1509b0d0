"""The six matrix norms.

F and B (the plain torus-supremum norms) live in `elementary`; this module
computes the four factorization norms S, cbB, cbF and T by driving the
feasibility engine over the block-PSD reformulations:

    S:    [[P, X], [X*, Q]] >= 0,       diag(P) <= t, diag(Q) <= t
    cbB:  [[D1, X], [X*, D2]] >= 0,     D diagonal, Tr(D1) = Tr(D2) = t
    T:    [[M11, X], [X*, M22]] >= 0,   Tr(M11) <= t^2, diag(M22) <= 1

Each solver bisects the constraint level over Dykstra's alternating
projections.  Alternating projections resolve the level economically down
to about a 0.3% relative window (the feasible set becomes tangent to the
PSD cone at the optimum, and the projection rate degrades like one over
the distance), so the remaining digits are supplied by the certified
Gauss-Newton refinement of the same block problem in `cutting`; the two
estimates are cross-checked in the report.

cbF is computed through the identity cbF(X)^2 = cbB(X*X) and the positive
case of cbB (minimal dominating diagonal), which is a linear program.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import elementary
from .cutting import (
    cutting_plane_diag_dominance,
    refine_cbb_point,
    refine_schur_point,
    refine_tnorm_point,
)
from .feasibility import (
    AffineSlab,
    BlockConstraint,
    bisect_norm,
    dykstra,
)
from .linalg import NotPSD, as_matrix, herm, opnorm

#: resolution at which the Dykstra bisection is economical; below this the
#: refinement step carries the precision
BISECT_FLOOR = 3e-3

_DYKSTRA_BUDGET = 4000


class SolverFailure(RuntimeError):
    """A norm solver could not certify its result."""


@dataclass
class NormReport:
    """Result of a norm computation with solver diagnostics."""

    kind: str
    value: float
    method: str
    residuals: dict = field(default_factory=dict)
    certificate: object = None


def _zero_report(kind: str, method: str) -> NormReport:
    return NormReport(kind=kind, value=0.0, method=method,
                      residuals={"zero_input": True})


def _strip_zero_lines(X: np.ndarray):
    """Drop zero rows and columns (they carry zero factor weight and only
    degrade the conditioning of the block problems)."""
    rows = np.flatnonzero(np.abs(X).sum(axis=1) > 0)
    cols = np.flatnonzero(np.abs(X).sum(axis=0) > 0)
    return X[np.ix_(rows, cols)], rows, cols


def _coarse_bisect(X, slab_at, t_lo, t_hi, tol_bisect, tol_feas):
    """Warm-started Dykstra bisection; returns (level, query count)."""
    warm = {"x0": None}
    queries = {"n": 0}

    def is_feasible(t: float) -> bool:
        queries["n"] += 1
        res = dykstra(
            slab_at(t),
            tol_feas=tol_feas,
            max_iter=_DYKSTRA_BUDGET,
            stall_window=300,
            x0=warm["x0"],
        )
        if res.status == "feasible":
            warm["x0"] = res.point
            return True
        return False

    tol = max(tol_bisect, BISECT_FLOOR)
    value = bisect_norm(is_feasible, t_lo, t_hi, tol_bisect=tol, check_hi=False)
    return value, queries["n"]


def _finish(kind, method, scale, coarse, refined, t_hi, tol_bisect, extra=None):
    gap = abs(refined - coarse)
    # the budget-capped projections bias the bisection level a little high
    # near the optimum, so the cross-check is a coarse 5% sanity bound
    if gap > 0.05 * max(refined, coarse, tol_bisect):
        raise SolverFailure(
            f"{kind}: bisection level {coarse:.8g} and refined optimum "
            f"{refined:.8g} disagree beyond the bisection resolution"
        )
    residuals = {
        "bisect_value": scale * coarse,
        "bisect_refined_gap": scale * gap,
    }
    if extra:
        residuals.update(extra)
    return NormReport(kind=kind, value=scale * refined, method=method,
                      residuals=residuals)


def schur_norm(X, tol_bisect: float = 1e-7, tol_feas: float = 1e-8) -> NormReport:
    """Schur multiplier norm: min column-norm product over X = L*R."""
    X = as_matrix(X)
    method = "block-psd bisection (diag caps) + certified refinement"
    scale = float(np.abs(X).max(initial=0.0))
    if scale == 0.0:
        return _zero_report("S", method)
    Y, _, _ = _strip_zero_lines(X / scale)

    def slab_at(t):
        return AffineSlab(
            Y,
            BlockConstraint("entrywise_cap", t),
            BlockConstraint("entrywise_cap", t),
        )

    t_lo = float(np.abs(Y).max())
    t_hi = float(
        min(
            np.linalg.norm(Y, axis=1).max(),
            np.linalg.norm(Y, axis=0).max(),
        )
    )
    if t_hi - t_lo <= tol_bisect * max(t_hi, 1.0):
        coarse, queries = t_hi, 0
    else:
        coarse, queries = _coarse_bisect(Y, slab_at, t_lo, t_hi, tol_bisect, tol_feas)
    refined, _ = refine_schur_point(Y, t_hint=coarse)
    return _finish("S", method, scale, coarse, refined, t_hi, tol_bisect,
                   extra={"bracket": (scale * t_lo, scale * t_hi),
                          "bisect_queries": queries})


def cbb_norm(X, tol_bisect: float = 1e-7, tol_feas: float = 1e-8) -> NormReport:
    """Completely bounded bilinear-form norm via diagonal blocks with
    equal traces."""
    X = as_matrix(X)
    method = "block-psd bisection (diagonal blocks, trace_equal) + certified refinement"
    scale = float(np.abs(X).max(initial=0.0))
    if scale == 0.0:
        return _zero_report("cbB", method)
    Y, _, _ = _strip_zero_lines(X / scale)
    m, n = Y.shape

    def slab_at(t):
        return AffineSlab(
            Y,
            BlockConstraint("trace_equal", t, diagonal=True),
            BlockConstraint("trace_equal", t, diagonal=True),
        )

    t_lo = opnorm(Y)
    t_hi = float(np.sqrt(m * n)) * t_lo
    if t_hi - t_lo <= tol_bisect * max(t_hi, 1.0):
        coarse, queries = t_hi, 0
    else:
        coarse, queries = _coarse_bisect(Y, slab_at, t_lo, t_hi, tol_bisect, tol_feas)
    refined, _, _ = refine_cbb_point(Y)
    return _finish("cbB", method, scale, coarse, refined, t_hi, tol_bisect,
                   extra={"bracket": (scale * t_lo, scale * t_hi),
                          "bisect_queries": queries})


def t_norm(X, tol_bisect: float = 1e-7, tol_feas: float = 1e-8) -> NormReport:
    """Bilinear Schur-multiplier norm via a trace cap on the first block."""
    X = as_matrix(X)
    method = "block-psd bisection (trace_cap / entrywise_cap) + certified refinement"
    scale = float(np.abs(X).max(initial=0.0))
    if scale == 0.0:
        return _zero_report("T", method)
    Y, _, _ = _strip_zero_lines(X / scale)

    def slab_at(t):
        return AffineSlab(
            Y,
            BlockConstraint("trace_cap", t * t),
            BlockConstraint("entrywise_cap", 1.0),
        )

    t_lo = float(np.abs(Y).max())
    t_hi = float(np.linalg.norm(Y))
    if t_hi - t_lo <= tol_bisect * max(t_hi, 1.0):
        coarse, queries = t_hi, 0
    else:
        coarse, queries = _coarse_bisect(Y, slab_at, t_lo, t_hi, tol_bisect, tol_feas)
    refined, _ = refine_tnorm_point(Y)
    return _finish("T", method, scale, coarse, refined, t_hi, tol_bisect,
                   extra={"bracket": (scale * t_lo, scale * t_hi),
                          "bisect_queries": queries})


def cbb_norm_positive_lp(P, tol: float = 1e-9) -> NormReport:
    """cbB norm of a positive matrix as the minimal trace of a dominating
    diagonal; also reports the optimal diagonal gamma and the unit vector
    xi with Delta(xi) proportional to Delta(gamma)^(1/2)."""
    P = as_matrix(P)
    method = "cutting-plane lp (minimal dominating diagonal)"
    scale = float(np.abs(P).max(initial=0.0))
    if scale == 0.0:
        return _zero_report("cbB", method)
    gamma_s, value_s, cuts = cutting_plane_diag_dominance(P / scale, tol=tol)
    gamma = scale * gamma_s
    value = scale * value_s
    total = gamma.sum()
    xi = np.sqrt(gamma / total) if total > 0 else np.zeros_like(gamma)
    return NormReport(
        kind="cbB",
        value=float(value),
        method=method,
        residuals={"gamma": gamma, "xi": xi, "lp_cuts": len(cuts)},
    )


def cbf_norm(X) -> NormReport:
    """Completely bounded operator-factorization norm, via
    cbF(X)^2 = cbB(X*X) with the positive-case LP."""
    X = as_matrix(X)
    method = "gram lp (cbF^2 = cbB of X*X)"
    scale = float(np.abs(X).max(initial=0.0))
    if scale == 0.0:
        return _zero_report("cbF", method)
    Y, _, cols = _strip_zero_lines(X / scale)
    gram = herm(Y.conj().T @ Y)
    inner = cbb_norm_positive_lp(gram)
    value = scale * float(np.sqrt(max(inner.value, 0.0)))
    # re-embed the weight vector over the original column index set
    xi = np.zeros(X.shape[1])
    xi[cols] = inner.residuals["xi"]
    return NormReport(
        kind="cbF",
        value=value,
        method=method,
        residuals={"xi": xi, "gram_cbb": inner.value,
                   "gamma": inner.residuals["gamma"], "columns": cols},
    )


def f_norm(X, **kwargs) -> NormReport:
    res = elementary.f_norm(X, **kwargs)
    return NormReport(
        kind="F",
        value=res.value,
        method="torus grid + ascent" + (" (certified)" if res.certified else " (heuristic)"),
        residuals={"error_bound": res.error_bound, "certified": res.certified,
                   "maximizer": res.maximizer},
    )


def b_norm(X, **kwargs) -> NormReport:
    res = elementary.b_norm(X, **kwargs)
    return NormReport(
        kind="B",
        value=res.value,
        method="torus grid + ascent" + (" (certified)" if res.certified else " (heuristic)"),
        residuals={"error_bound": res.error_bound, "certified": res.certified},
    )


_DISPATCH = {
    "F": f_norm,
    "B": b_norm,
    "S": schur_norm,
    "cbF": cbf_norm,
    "cbB": cbb_norm,
    "T": t_norm,
}


def norm(X, kind: str, **kwargs) -> NormReport:
    """Compute any of the six norms by kind name."""
    try:
        fn = _DISPATCH[kind]
    except KeyError:
        raise ValueError(f"unknown norm kind {kind!r}; choose from {sorted(_DISPATCH)}")
    return fn(X, **kwargs)


def grothendieck_ratios(X) -> tuple[float, float]:
    """(cbF/F, cbB/B) ratios; both are >= 1 up to solver tolerance.

    The torus norms in the denominators are certified only at small sizes;
    the ratios are exploratory data, not assertions against any universal
    constant."""
    X = as_matrix(X)
    fv = elementary.f_norm(X).value
    bv = elementary.b_norm(X).value
    if fv == 0.0 or bv == 0.0:
        raise ValueError("ratios undefined for the zero matrix")
    return cbf_norm(X).value / fv, cbb_norm(X).value / bv
