import numpy as np
import pytest

from cbnorms.norms import (
    NormReport,
    cbb_norm,
    cbb_norm_positive_lp,
    cbf_norm,
    grothendieck_ratios,
    norm,
    schur_norm,
    t_norm,
)
from cbnorms.linalg import herm
from conftest import dft, random_complex


def test_dft_golden_values():
    U = dft(3)
    assert schur_norm(U).value == pytest.approx(1.0, rel=1e-8)
    assert cbb_norm(U).value == pytest.approx(3.0, rel=1e-8)
    assert cbf_norm(U).value == pytest.approx(np.sqrt(3), rel=1e-8)
    assert t_norm(U).value == pytest.approx(np.sqrt(3), rel=1e-8)


def test_zero_matrix_all_kinds():
    Z = np.zeros((2, 3))
    for kind in ("F", "B", "S", "cbF", "cbB", "T"):
        rep = norm(Z, kind)
        assert isinstance(rep, NormReport)
        assert rep.value == 0.0


def test_homogeneity(rng):
    X = random_complex(rng, 3, 3)
    for fn in (schur_norm, cbb_norm, t_norm, cbf_norm):
        assert fn(2.5 * X).value == pytest.approx(2.5 * fn(X).value, rel=1e-8)


def test_zero_rows_and_columns_ignored(rng):
    X = random_complex(rng, 2, 2)
    padded = np.zeros((4, 3), dtype=complex)
    padded[np.ix_([0, 2], [1, 2])] = X
    for fn in (schur_norm, cbb_norm, t_norm, cbf_norm):
        assert fn(padded).value == pytest.approx(fn(X).value, rel=1e-8)


def test_schur_norm_identity_and_diagonal():
    assert schur_norm(np.eye(4)).value == pytest.approx(1.0, rel=1e-9)
    # the Schur norm of a diagonal matrix is its largest |entry|
    assert schur_norm(np.diag([1.0, 0.25j])).value == pytest.approx(1.0, rel=1e-8)


def test_cbb_positive_lp_diagonal():
    D = np.diag([2.0, 1.0, 0.5])
    rep = cbb_norm_positive_lp(D)
    assert rep.value == pytest.approx(3.5, rel=1e-9)
    np.testing.assert_allclose(rep.residuals["gamma"], [2.0, 1.0, 0.5], atol=1e-8)
    assert np.linalg.norm(rep.residuals["xi"]) == pytest.approx(1.0)


def test_cbf_squared_is_gram_cbb(rng):
    X = random_complex(rng, 3, 4)
    gram = herm(X.conj().T @ X)
    assert cbf_norm(X).value ** 2 == pytest.approx(
        cbb_norm_positive_lp(gram).value, rel=1e-9
    )


def test_norm_ordering(rng):
    # S <= 1 * everything sensible: cbB >= op, T >= op-ish sanity checks
    X = random_complex(rng, 3, 3)
    op = float(np.linalg.norm(X, 2))
    assert cbb_norm(X).value >= op - 1e-8
    assert schur_norm(X).value >= float(np.abs(X).max()) - 1e-8
    assert t_norm(X).value <= float(np.linalg.norm(X)) + 1e-8


def test_bisect_and_refine_agree(rng):
    X = random_complex(rng, 3, 3)
    rep = schur_norm(X)
    assert rep.residuals["bisect_refined_gap"] <= 0.05 * rep.value


def test_grothendieck_ratios_at_least_one(rng):
    X = random_complex(rng, 3, 3)
    r_f, r_b = grothendieck_ratios(X)
    assert r_f >= 1.0 - 1e-6
    assert r_b >= 1.0 - 1e-6


def test_unknown_kind_raises():
    with pytest.raises(ValueError):
        norm(np.eye(2), "Q")
