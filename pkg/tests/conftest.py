import numpy as np
import pytest


def dft(n: int) -> np.ndarray:
    """Unitary discrete Fourier transform matrix."""
    w = np.exp(2j * np.pi / n)
    grid = np.arange(n)
    return w ** np.outer(grid, grid) / np.sqrt(n)


def random_complex(rng, m: int, n: int) -> np.ndarray:
    return rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n))


def random_isometry(rng, m: int, n: int) -> np.ndarray:
    Q, _ = np.linalg.qr(random_complex(rng, m, n))
    return Q


def recon_error(X, Y) -> float:
    X = np.asarray(X)
    return float(np.abs(X - Y).max()) / max(float(np.abs(X).max()), 1e-300)


@pytest.fixture
def rng():
    return np.random.default_rng(20260826)
