import numpy as np
import pytest

from cbnorms.feasibility import (
    AffineSlab,
    BlockConstraint,
    BracketInvalid,
    bisect_norm,
    dykstra,
    project_psd,
    project_slab,
)
from conftest import dft, random_complex


def schur_slab(X, t):
    return AffineSlab(
        X,
        BlockConstraint("entrywise_cap", t),
        BlockConstraint("entrywise_cap", t),
    )


def test_project_psd(rng):
    A = random_complex(rng, 4, 4)
    H = (A + A.conj().T) / 2
    P = project_psd(H)
    w = np.linalg.eigvalsh(P)
    assert w.min() >= -1e-12
    np.testing.assert_allclose(P, project_psd(P), atol=1e-12)


def test_project_slab_pins_offdiagonal(rng):
    X = random_complex(rng, 2, 3)
    slab = schur_slab(X, 1.0)
    M = random_complex(rng, 5, 5)
    M = (M + M.conj().T) / 2
    out = project_slab(M, slab)
    np.testing.assert_allclose(out[:2, 2:], X, atol=1e-12)
    assert np.diag(out).real.max() <= 1.0 + 1e-12


def test_dykstra_feasible_identity():
    # identity matrix: Schur norm 1, level 1 is feasible
    res = dykstra(schur_slab(np.eye(2, dtype=complex), 1.0))
    assert res.status == "feasible"
    w = np.linalg.eigvalsh(res.point)
    assert w.min() >= -1e-7


def test_dykstra_infeasible_below_norm():
    # DFT matrix has Schur norm 1; level 0.5 is infeasible
    res = dykstra(schur_slab(dft(2), 0.5), max_iter=30_000)
    assert res.status == "infeasible"


def test_bisection_recovers_schur_norm_coarsely():
    X = dft(3)

    def feas(t):
        return dykstra(schur_slab(X, t), max_iter=8000, stall_window=400).status == "feasible"

    t = bisect_norm(feas, 0.2, 2.0, tol_bisect=5e-3, check_hi=False)
    assert t == pytest.approx(1.0, abs=0.05)


def test_bisect_brackets():
    with pytest.raises(BracketInvalid):
        bisect_norm(lambda t: True, 1.0, 0.5)
    with pytest.raises(BracketInvalid):
        bisect_norm(lambda t: False, 0.0, 1.0)


def test_trace_blocks(rng):
    # diagonal blocks with equal traces accept a generous level
    X = random_complex(rng, 2, 2)
    t = 10 * float(np.abs(X).max())
    slab = AffineSlab(
        X,
        BlockConstraint("trace_equal", t, diagonal=True),
        BlockConstraint("trace_equal", t, diagonal=True),
    )
    res = dykstra(slab)
    assert res.status == "feasible"
    M = project_slab(res.point, slab)
    assert np.trace(M[:2, :2]).real == pytest.approx(t, rel=1e-6)
