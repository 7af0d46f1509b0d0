import numpy as np
import pytest

from cbnorms.polish import KktSystem
from conftest import random_complex


def _diag_dominance_system(A):
    n = A.shape[0]
    return KktSystem(
        nv=n,
        dim=n,
        M_of_v=lambda v: np.diag(v) - A,
        stationarity=lambda v, Z: np.diag(Z).real - 1.0,
    )


def test_polish_reaches_machine_precision(rng):
    # minimal dominating diagonal of the all-ones matrix J: D >= ee* iff
    # sum 1/d_i <= 1, so the optimum is exactly n * ones
    n = 3
    A = np.ones((n, n), dtype=complex)
    sys = _diag_dominance_system(A)
    v0 = float(n) * np.ones(n) + 1e-3 * rng.normal(size=n)
    res = sys.polish(v0)
    np.testing.assert_allclose(res.v, float(n) * np.ones(n), atol=1e-10)
    assert res.residual_norm < 1e-11


def test_polish_kernel_basis_orthonormal(rng):
    A = np.ones((3, 3), dtype=complex)
    sys = _diag_dominance_system(A)
    res = sys.polish(np.ones(3) + 1e-4 * rng.normal(size=3))
    K = res.K
    np.testing.assert_allclose(K.conj().T @ K, np.eye(K.shape[1]), atol=1e-9)
    M = np.diag(res.v) - A
    assert np.abs(M @ K).max() < 1e-9


def test_polish_dual_weight_consistent(rng):
    A = np.ones((3, 3), dtype=complex)
    sys = _diag_dominance_system(A)
    res = sys.polish(np.ones(3) + 1e-4 * rng.normal(size=3))
    Z = res.K @ res.Theta @ res.K.conj().T
    np.testing.assert_allclose(np.diag(Z).real, np.ones(3), atol=1e-8)


def test_polish_does_not_blow_up_from_far_start(rng):
    # a far-off start may fail to converge, but must return finite output
    A = np.ones((3, 3), dtype=complex)
    sys = _diag_dominance_system(A)
    res = sys.polish(np.full(3, 10.0))
    assert np.all(np.isfinite(res.v))
