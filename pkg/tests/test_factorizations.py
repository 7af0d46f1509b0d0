import numpy as np
import pytest

from cbnorms.factorizations import (
    NotSelfAdjoint,
    align_ranges,
    bilinear_schur_factorization,
    cb_bilinear_factorization,
    cb_operator_factorization,
    elementary_schur,
    normalized_fcg,
    schur_factorization,
    selfadjoint_schur,
    verify_uniqueness,
)
from cbnorms.linalg import herm, range_projection
from conftest import dft, random_complex, random_isometry, recon_error


# --- align_ranges ---------------------------------------------------------

def test_align_ranges_preserves_product(rng):
    L = random_complex(rng, 4, 3)
    R = random_complex(rng, 4, 2)
    L1, R1 = align_ranges(L, R)
    np.testing.assert_allclose(L1.conj().T @ R1, L.conj().T @ R, atol=1e-10)
    np.testing.assert_allclose(range_projection(L1), range_projection(R1), atol=1e-8)


def test_align_ranges_example():
    L = np.eye(2, dtype=complex)
    R = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    L1, R1 = align_ranges(L, R)
    np.testing.assert_allclose(L1, np.diag([1.0, 0.0]), atol=1e-12)
    np.testing.assert_allclose(R1, R, atol=1e-12)


def test_align_ranges_zero():
    L1, R1 = align_ranges(np.zeros((2, 2)), np.zeros((2, 3)))
    assert not np.any(L1) and not np.any(R1)


def test_align_ranges_never_grows_norms(rng):
    L = random_complex(rng, 5, 3)
    R = random_complex(rng, 5, 4)
    L1, R1 = align_ranges(L, R)
    for A, B in ((L, L1), (R, R1)):
        assert np.linalg.norm(B, 2) <= np.linalg.norm(A, 2) + 1e-10
        assert np.linalg.norm(B) <= np.linalg.norm(A) + 1e-10
        assert np.linalg.norm(B, axis=0).max() <= np.linalg.norm(A, axis=0).max() + 1e-10


# --- cb factorizations ----------------------------------------------------

def test_cb_operator_unitary():
    U = dft(3)
    f = cb_operator_factorization(U)
    np.testing.assert_allclose(f.A, np.sqrt(3) * U, atol=1e-8)
    np.testing.assert_allclose(f.xi, np.full(3, 1 / np.sqrt(3)), atol=1e-8)


def test_cb_operator_row_vector():
    f = cb_operator_factorization(np.array([[1.0, 1.0]]))
    np.testing.assert_allclose(f.A, np.sqrt(2) * np.ones((1, 2)), atol=1e-7)
    np.testing.assert_allclose(f.xi, np.full(2, 1 / np.sqrt(2)), atol=1e-8)


def test_cb_operator_support_condition(rng):
    X = random_complex(rng, 3, 4)
    X[:, 1] = 0.0
    f = cb_operator_factorization(X)
    assert f.xi[1] == 0.0
    assert not np.any(f.A[:, 1])
    assert recon_error(X, f.reconstruct()) < 1e-10


def test_cb_bilinear_unitary():
    U = dft(2)
    f = cb_bilinear_factorization(U)
    np.testing.assert_allclose(f.B, 2 * U, atol=1e-7)
    np.testing.assert_allclose(f.eta, f.xi, atol=1e-9)


def test_cb_bilinear_positive_example():
    P = np.array([[1.0, 1.0], [1.0, 1.0]])
    f = cb_bilinear_factorization(P)
    np.testing.assert_allclose(f.eta, np.full(2, 1 / np.sqrt(2)), atol=1e-8)
    np.testing.assert_allclose(f.B, 2 * P, atol=1e-7)
    assert np.linalg.norm(f.B, 2) == pytest.approx(4.0, rel=1e-7)


def test_cb_bilinear_selfadjoint_symmetry(rng):
    H = herm(random_complex(rng, 3, 3) + random_complex(rng, 3, 3).conj().T)
    f = cb_bilinear_factorization(H)
    np.testing.assert_allclose(f.eta, f.xi, atol=1e-8)
    assert np.abs(f.B - f.B.conj().T).max() < 1e-8


# --- Schur-type factorizations --------------------------------------------

def test_elementary_schur_unitary():
    U = dft(3)
    es = elementary_schur(U)
    assert recon_error(U, es.reconstruct()) < 1e-9
    assert np.linalg.norm(es.L, axis=0).max() == pytest.approx(1.0, rel=1e-7)
    assert np.linalg.norm(es.R, axis=0).max() == pytest.approx(1.0, rel=1e-7)


def test_elementary_schur_matching_ranges(rng):
    X = random_complex(rng, 3, 4)
    es = elementary_schur(X)
    np.testing.assert_allclose(
        range_projection(es.L), range_projection(es.R), atol=1e-7
    )
    assert es.k >= np.linalg.matrix_rank(X)


def test_schur_factorization_unitary():
    U = dft(4)
    sf = schur_factorization(U)
    assert sf.s == pytest.approx(1.0, rel=1e-8)
    np.testing.assert_allclose(sf.F, np.eye(4), atol=1e-7)
    np.testing.assert_allclose(sf.W, U, atol=1e-7)
    np.testing.assert_allclose(sf.G, np.eye(4), atol=1e-7)


def test_schur_factorization_positive(rng):
    A = random_complex(rng, 3, 3)
    P = herm(A @ A.conj().T)
    sf = schur_factorization(P)
    assert recon_error(P, sf.reconstruct()) < 1e-8
    np.testing.assert_allclose(sf.F, sf.G, atol=1e-6)


def test_schur_factorization_invariants(rng):
    X = random_complex(rng, 4, 3)
    sf = schur_factorization(X)
    assert recon_error(X, sf.reconstruct()) < 1e-8
    assert np.diag(sf.F @ sf.F).real.max() <= 1 + 1e-8
    assert np.diag(sf.G @ sf.G).real.max() <= 1 + 1e-8
    np.testing.assert_allclose(
        sf.W.conj().T @ sf.W, range_projection(sf.G), atol=1e-7
    )
    np.testing.assert_allclose(
        sf.W @ sf.W.conj().T, range_projection(sf.F), atol=1e-7
    )


def test_selfadjoint_schur_examples():
    for X in (np.diag([1.0, -1.0]), np.array([[0.0, 1.0], [1.0, 0.0]])):
        sa = selfadjoint_schur(X)
        assert sa.s == pytest.approx(1.0, rel=1e-8)
        assert recon_error(X, sa.reconstruct()) < 1e-8
        assert np.abs(sa.S - sa.S.conj().T).max() < 1e-9
        np.testing.assert_allclose(
            sa.S @ sa.S, range_projection(sa.G), atol=1e-7
        )


def test_selfadjoint_schur_positive(rng):
    A = random_complex(rng, 3, 3)
    P = herm(A @ A.conj().T)
    sa = selfadjoint_schur(P)
    from cbnorms.linalg import psd_sqrt

    # positive case: G = s^(-1/2) X^(1/2) and S the range projection
    np.testing.assert_allclose(sa.S, range_projection(P), atol=1e-6)
    np.testing.assert_allclose(sa.G, psd_sqrt(P / sa.s), atol=1e-6)
    assert recon_error(P, sa.reconstruct()) < 1e-8


def test_selfadjoint_schur_rejects_nonhermitian(rng):
    with pytest.raises(NotSelfAdjoint):
        selfadjoint_schur(random_complex(rng, 3, 3))


def test_normalized_fcg_unitary():
    U = dft(3)
    F, C, G = normalized_fcg(U)
    np.testing.assert_allclose(F, np.eye(3), atol=1e-7)
    np.testing.assert_allclose(C, U, atol=1e-7)


def test_normalized_fcg_unit_diagonals(rng):
    from cbnorms.norms import schur_norm

    X = random_complex(rng, 3, 3)
    X = X / schur_norm(X).value
    F, C, G = normalized_fcg(X)
    np.testing.assert_allclose(np.diag(F @ F).real, np.ones(3), atol=1e-7)
    np.testing.assert_allclose(np.diag(G @ G).real, np.ones(3), atol=1e-7)
    assert np.linalg.norm(C, 2) <= 1 + 1e-7
    assert recon_error(X, F @ C @ G) < 1e-8


def test_normalized_fcg_needs_unit_norm(rng):
    with pytest.raises(ValueError):
        normalized_fcg(5.0 * np.eye(2))


def test_bilinear_schur_unitary():
    U = dft(3)
    bs = bilinear_schur_factorization(U)
    np.testing.assert_allclose(bs.T, np.eye(3), atol=1e-7)
    np.testing.assert_allclose(bs.W, U, atol=1e-7)
    np.testing.assert_allclose(bs.G, np.eye(3), atol=1e-7)
    assert bs.value == pytest.approx(np.sqrt(3), rel=1e-8)


def test_bilinear_schur_isometry(rng):
    Q = random_isometry(rng, 5, 3)
    bs = bilinear_schur_factorization(Q)
    np.testing.assert_allclose(bs.T, range_projection(Q), atol=1e-6)
    np.testing.assert_allclose(bs.W, Q, atol=1e-6)
    np.testing.assert_allclose(bs.G, np.eye(3), atol=1e-6)


def test_bilinear_schur_invariants(rng):
    X = random_complex(rng, 3, 4)
    bs = bilinear_schur_factorization(X)
    assert recon_error(X, bs.reconstruct()) < 1e-8
    assert np.diag(bs.G @ bs.G).real.max() <= 1 + 1e-8
    np.testing.assert_allclose(
        bs.W.conj().T @ bs.W, range_projection(bs.G), atol=1e-7
    )
    np.testing.assert_allclose(
        bs.W @ bs.W.conj().T, range_projection(bs.T), atol=1e-7
    )


# --- zero conventions ------------------------------------------------------

def test_zero_matrix_conventions():
    Z = np.zeros((2, 3))
    f = cb_operator_factorization(Z)
    assert not np.any(f.A)
    np.testing.assert_allclose(np.linalg.norm(f.xi), 1.0)
    assert schur_factorization(Z).s == 0.0
    assert bilinear_schur_factorization(Z).value == 0.0
    assert elementary_schur(Z).value == 0.0


# --- uniqueness -------------------------------------------------------------

def test_verify_uniqueness_consistent(rng):
    X = random_complex(rng, 3, 3)
    for kind in ("cbF", "cbB", "bilinearSchur"):
        v = verify_uniqueness(X, kind, restarts=3, seed=4)
        assert v.verdict == "consistent", (kind, v.max_deviation)


def test_verify_uniqueness_schur_precondition():
    v = verify_uniqueness(np.diag([1.0, 0.25j]), "schur", restarts=3, seed=1)
    assert v.verdict == "precondition-fails"
    assert v.precondition_holds is False


def test_verify_uniqueness_schur_when_precondition_holds():
    # every column of a unitary is load-bearing: deleting one strictly
    # lowers the Schur norm, so the uniqueness check is applicable
    v = verify_uniqueness(dft(3), "schur", restarts=3, seed=2)
    assert v.precondition_holds is True
    assert v.verdict == "consistent"


def test_verify_uniqueness_validates_args(rng):
    with pytest.raises(ValueError):
        verify_uniqueness(np.eye(2), "cbF", restarts=1)
    with pytest.raises(ValueError):
        verify_uniqueness(np.eye(2), "nope", restarts=2)
