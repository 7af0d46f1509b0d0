"""Elementary norms and torus-maximization oracles.

The operator, Hilbert-Schmidt and column norms are closed-form.  The two
non-convex norms (the linear-map norm over unimodular vectors and the
bilinear-form norm over pairs of unimodular vectors) are maximizations over
a torus: we provide a certified grid+refinement mode for small sizes and a
seeded multi-start heuristic otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix

GRID_CAP = 1 << 22          # max number of certified grid points
DEFAULT_GRID = 64           # phase samples per free coordinate
DEFAULT_REFINE = 2000       # alternating-ascent iteration cap
MULTISTARTS = 16            # random starts in heuristic mode


class GridTooLarge(ValueError):
    """Certified grid would exceed the configured cap."""


@dataclass(frozen=True)
class TorusPoint:
    """A unimodular vector recorded by its phases in [0, 2pi)."""

    phases: np.ndarray

    @property
    def vector(self) -> np.ndarray:
        return np.exp(1j * self.phases)


@dataclass(frozen=True)
class TorusMaxResult:
    value: float
    maximizer: TorusPoint
    error_bound: float
    certified: bool


@dataclass(frozen=True)
class BilinearMaxResult:
    value: float
    maximizers: tuple[TorusPoint, TorusPoint]
    error_bound: float
    certified: bool


def op_norm(M) -> float:
    """Operator norm (largest singular value)."""
    return float(np.linalg.norm(as_matrix(M), 2))


def hs_norm(M) -> float:
    """Hilbert-Schmidt (Frobenius) norm."""
    return float(np.linalg.norm(as_matrix(M)))


def col_norm(M) -> float:
    """Maximum Euclidean column length."""
    return float(np.sqrt((np.abs(as_matrix(M)) ** 2).sum(axis=0).max()))


def _phase_grid(nfree: int, resolution: int) -> np.ndarray:
    """All phase combinations on a uniform grid, shape (res**nfree, nfree)."""
    if nfree == 0:
        return np.zeros((1, 0))
    if resolution ** nfree > GRID_CAP:
        raise GridTooLarge(
            f"grid of {resolution}**{nfree} points exceeds cap {GRID_CAP}"
        )
    axes = [np.arange(resolution) * (2 * np.pi / resolution)] * nfree
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def _refine_f(G: np.ndarray, a: np.ndarray, iters: int) -> np.ndarray:
    """Alternating phase ascent for a* G a with G PSD: a <- phase(G a)."""
    for _ in range(iters):
        g = G @ a
        mags = np.abs(g)
        new = np.where(mags > 1e-300, g / np.where(mags == 0, 1, mags), a)
        if np.max(np.abs(new - a)) < 1e-13:
            a = new
            break
        a = new
    return a


def f_norm(
    X,
    grid_resolution: int = DEFAULT_GRID,
    refinement_iters: int = DEFAULT_REFINE,
    certified: bool | None = None,
    seed: int = 0,
) -> TorusMaxResult:
    """max of ||X a||_2 over unimodular vectors a.

    Certified mode sweeps a phase grid over the n-1 free coordinates (the
    first phase is pinned at 0 by global-phase invariance) and refines the
    best grid point; it raises GridTooLarge when the sweep would exceed the
    cap.  Heuristic mode refines seeded random starts.
    """
    A = as_matrix(X)
    m, n = A.shape
    if certified is None:
        certified = n <= 4
    G = A.conj().T @ A

    starts = []
    if certified:
        phases = _phase_grid(n - 1, grid_resolution)
        vecs = np.concatenate(
            [np.ones((phases.shape[0], 1)), np.exp(1j * phases)], axis=1
        )
        norms2 = np.einsum("ki,ij,kj->k", vecs.conj(), G, vecs).real
        starts.append(vecs[int(np.argmax(norms2))])
        # grid error: ||Xa||_2 is op_norm-Lipschitz in a, each phase is
        # within pi/resolution of a grid point
        err = op_norm(A) * np.sqrt(n) * (np.pi / grid_resolution)
    else:
        rng = np.random.default_rng(seed)
        err = float("nan")
        for _ in range(MULTISTARTS):
            starts.append(np.exp(2j * np.pi * rng.random(n)))
    starts.append(np.ones(n, dtype=complex))
    # phases of the top right singular vector are a good deterministic start
    _, _, Vh = np.linalg.svd(A)
    v = Vh[0].conj()
    safe = np.where(np.abs(v) > 1e-300, v / np.abs(np.where(v == 0, 1, v)), 1.0)
    starts.append(safe.astype(complex))

    best_val, best_a = -1.0, starts[0]
    for a0 in starts:
        a = _refine_f(G, a0.copy(), refinement_iters)
        val = float(np.sqrt(max((a.conj() @ (G @ a)).real, 0.0)))
        if val > best_val:
            best_val, best_a = val, a
    phases = np.mod(np.angle(best_a) - np.angle(best_a[0]), 2 * np.pi)
    return TorusMaxResult(
        value=best_val,
        maximizer=TorusPoint(phases=phases),
        error_bound=err,
        certified=certified,
    )


def _b_value_given_b(A: np.ndarray, b: np.ndarray) -> float:
    """Inner maximum over a is exact: sup |a.(Ab)| = ||Ab||_1."""
    return float(np.abs(A @ b).sum())


def _refine_b(A: np.ndarray, b: np.ndarray, iters: int) -> np.ndarray:
    for _ in range(iters):
        d = A @ b
        a = np.conj(np.where(np.abs(d) > 1e-300, d / np.abs(np.where(d == 0, 1, d)), 1.0))
        c = A.T @ a
        new = np.conj(np.where(np.abs(c) > 1e-300, c / np.abs(np.where(c == 0, 1, c)), b))
        if np.max(np.abs(new - b)) < 1e-13:
            return new
        b = new
    return b


def b_norm(
    X,
    grid_resolution: int = DEFAULT_GRID,
    refinement_iters: int = DEFAULT_REFINE,
    certified: bool | None = None,
    seed: int = 0,
) -> BilinearMaxResult:
    """max of |sum_ij X_ij a_i b_j| over unimodular a, b.

    The inner maximum over a is closed-form (an l1 norm), so only the b
    torus is searched.  The smaller side of X is always gridded; certified
    mode requires min(m, n) <= 4.
    """
    A = as_matrix(X)
    m, n = A.shape
    swapped = False
    if m < n:
        # the bilinear form has no conjugations, so transposing swaps roles
        A, m, n, swapped = A.T, n, m, True
    if certified is None:
        certified = n <= 4

    starts = []
    if certified:
        phases = _phase_grid(n - 1, grid_resolution)
        vecs = np.concatenate(
            [np.ones((phases.shape[0], 1)), np.exp(1j * phases)], axis=1
        )
        vals = np.abs(A @ vecs.T).sum(axis=0)
        starts.append(vecs[int(np.argmax(vals))])
        # |  ||Ab||_1 - ||Ab'||_1 | <= sqrt(m) * op * ||b - b'||_2
        err = np.sqrt(m) * op_norm(A) * np.sqrt(n) * (np.pi / grid_resolution)
    else:
        rng = np.random.default_rng(seed)
        err = float("nan")
        for _ in range(MULTISTARTS):
            starts.append(np.exp(2j * np.pi * rng.random(n)))
    starts.append(np.ones(n, dtype=complex))

    best_val, best_b = -1.0, starts[0]
    for b0 in starts:
        b = _refine_b(A, b0.copy(), refinement_iters)
        val = _b_value_given_b(A, b)
        if val > best_val:
            best_val, best_b = val, b
    d = A @ best_b
    best_a = np.conj(
        np.where(np.abs(d) > 1e-300, d / np.abs(np.where(d == 0, 1, d)), 1.0)
    )
    pa = np.mod(np.angle(best_a), 2 * np.pi)
    pb = np.mod(np.angle(best_b), 2 * np.pi)
    if swapped:
        pa, pb = pb, pa
    return BilinearMaxResult(
        value=best_val,
        maximizers=(TorusPoint(phases=pa), TorusPoint(phases=pb)),
        error_bound=err,
        certified=certified,
    )
