import numpy as np
import pytest

from cbnorms.simplex import Infeasible, Unbounded, simplex_lp


def test_small_lp():
    # min x + y s.t. x + 2y >= 4, 3x + y >= 6  ->  optimum at (8/5, 6/5)
    x, val = simplex_lp([1.0, 1.0], [[1.0, 2.0], [3.0, 1.0]], [4.0, 6.0])
    np.testing.assert_allclose(x, [8 / 5, 6 / 5], atol=1e-9)
    assert val == pytest.approx(14 / 5)


def test_unconstrained_nonnegative():
    x, val = simplex_lp([2.0, 3.0], np.zeros((0, 2)), np.zeros(0))
    np.testing.assert_allclose(x, [0.0, 0.0])
    assert val == 0.0


def test_infeasible():
    # x >= 2 and -x >= -1 cannot both hold
    with pytest.raises(Infeasible):
        simplex_lp([1.0], [[1.0], [-1.0]], [2.0, -1.0])


def test_unbounded():
    with pytest.raises(Unbounded):
        simplex_lp([-1.0], [[1.0]], [0.0])


def test_degenerate_ties_terminate():
    # multiple optimal bases; Bland's rule must still terminate
    A = [[1.0, 1.0, 0.0], [1.0, 0.0, 1.0], [0.0, 1.0, 1.0]]
    x, val = simplex_lp([1.0, 1.0, 1.0], A, [1.0, 1.0, 1.0])
    assert val == pytest.approx(1.5)
    np.testing.assert_array_less(-1e-12, x)


def test_matches_scipy_on_random(rng=np.random.default_rng(11)):
    from scipy.optimize import linprog

    for _ in range(10):
        n, k = 4, 6
        A = rng.normal(size=(k, n))
        b = rng.normal(size=k) - 2.0  # keep x = 0 nearly feasible
        c = np.abs(rng.normal(size=n)) + 0.1
        ref = linprog(c, A_ub=-A, b_ub=-b, method="highs")
        if not ref.success:
            continue
        x, val = simplex_lp(c, A, b)
        assert val == pytest.approx(ref.fun, abs=1e-7)
