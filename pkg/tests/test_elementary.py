import numpy as np
import pytest

from cbnorms.elementary import (
    GridTooLarge,
    b_norm,
    col_norm,
    f_norm,
    hs_norm,
    op_norm,
)
from conftest import dft, random_complex


def test_closed_form_norms(rng):
    X = random_complex(rng, 3, 4)
    assert op_norm(X) == pytest.approx(np.linalg.svd(X, compute_uv=False)[0])
    assert hs_norm(X) == pytest.approx(np.sqrt((np.abs(X) ** 2).sum()))
    assert col_norm(X) == pytest.approx(np.linalg.norm(X, axis=0).max())


def test_norm_chain(rng):
    # hs <= f <= sqrt(n) * hs and op <= f
    X = random_complex(rng, 3, 3)
    f = f_norm(X).value
    assert hs_norm(X) <= f + 1e-9
    assert f <= np.sqrt(3) * hs_norm(X) + 1e-9
    assert op_norm(X) <= f + 1e-9


def test_f_norm_dft_certified():
    for n in (2, 3):
        res = f_norm(dft(n), certified=True)
        assert res.certified
        assert res.value == pytest.approx(np.sqrt(n), rel=1e-9)


def test_f_norm_nonnegative_matrix_exact(rng):
    # for entrywise nonnegative X the all-ones vector is optimal
    X = np.abs(random_complex(rng, 3, 3))
    res = f_norm(X)
    assert res.value == pytest.approx(float(np.linalg.norm(X.sum(axis=1))), rel=1e-9)


def test_b_norm_nonnegative_is_total_sum(rng):
    X = np.abs(random_complex(rng, 3, 4))
    assert b_norm(X).value == pytest.approx(float(X.sum()), rel=1e-9)


def test_b_norm_identity():
    # sup |sum a_i b_i| = n at a = b = ones
    assert b_norm(np.eye(3)).value == pytest.approx(3.0, rel=1e-9)


def test_grid_too_large():
    X = np.ones((6, 6))
    with pytest.raises(GridTooLarge):
        f_norm(X, certified=True)
    with pytest.raises(GridTooLarge):
        b_norm(X, certified=True)


def test_heuristic_mode_deterministic(rng):
    X = random_complex(rng, 6, 6)
    r1 = b_norm(X, certified=False, seed=5)
    r2 = b_norm(X, certified=False, seed=5)
    assert r1.value == r2.value
    assert not r1.certified


def test_maximizer_reproduces_value(rng):
    X = random_complex(rng, 3, 3)
    res = f_norm(X)
    a = res.maximizer.vector
    assert float(np.linalg.norm(X @ a)) == pytest.approx(res.value, rel=1e-9)
