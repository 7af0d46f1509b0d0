"""Cutting-plane solvers driven by a minimum-eigenvalue oracle.

`cutting_plane_diag_dominance` solves

    min Tr(diag(gamma))  s.t.  gamma >= 0,  diag(gamma) >= P   (PSD order)

as a linear program with one cut per direction xi, namely
sum_j |xi_j|^2 gamma_j >= <P xi, xi>, using the in-house dense simplex.
Complex cuts are realified: the LP sees only |xi_j|^2.

`refine_schur_point` / `refine_cbb_point` / `refine_tnorm_point` locate the
optimal points of the block-PSD reformulations of the Schur, cb-bilinear
and bilinear-Schur norm minima.  Plain cutting planes stall at the square
root of the LP tolerance along directions where the PSD boundary curves
quadratically, so the loop periodically hands its iterate to a Gauss-Newton
polish of the full KKT system (see `polish`).  A polished point is accepted
only with a complete certificate -- tiny KKT residual, primal feasibility
and a PSD dual weight -- which for these convex programs certifies the
global optimum to near machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .linalg import NotPSD, as_matrix, herm, opnorm
from .polish import KktSystem
from .simplex import simplex_lp


@dataclass(frozen=True)
class LpCut:
    """Unit direction xi generating the constraint sum |xi_j|^2 l_j >= <P xi, xi>."""

    direction: np.ndarray

    def row(self) -> np.ndarray:
        return np.abs(self.direction) ** 2


class CutIterationCap(RuntimeError):
    """Cutting-plane loop exceeded its cut budget."""


def cutting_plane_diag_dominance(
    P,
    tol: float = 1e-9,
    max_cuts: int = 2000,
    tol_psd: float = 1e-9,
    rng: np.random.Generator | None = None,
) -> tuple[np.ndarray, float, list[LpCut]]:
    """Minimal-trace diagonal matrix dominating a positive matrix P.

    Returns (gamma, value, cuts) with Delta(gamma) >= P - tol*||P|| and
    Tr(gamma) essentially exact (the Kelley value is finished by a
    Gauss-Newton polish of the optimality system).
    """
    A = herm(as_matrix(P))
    n = A.shape[0]
    scale = opnorm(A)
    if scale == 0.0:
        return np.zeros(n), 0.0, []
    wmin_in = float(np.linalg.eigvalsh(A)[0])
    if wmin_in < -tol_psd * scale:
        raise NotPSD(f"input has eigenvalue {wmin_in:.3e}")

    costs = np.ones(n)
    cuts: list[LpCut] = [LpCut(np.eye(n)[j].astype(complex)) for j in range(n)]
    rhs = [max(float(A[j, j].real), 0.0) for j in range(n)]
    if rng is not None:
        # randomized extra seed cuts: perturbs the iteration path without
        # changing the optimum (used by the uniqueness verifier)
        for _ in range(n):
            z = rng.normal(size=n) + 1j * rng.normal(size=n)
            z /= np.linalg.norm(z)
            cuts.append(LpCut(z))
            rhs.append(float((z.conj() @ A @ z).real))
    rows = [c.row() for c in cuts]

    lam = np.zeros(n)
    for _ in range(max_cuts):
        lam, _ = simplex_lp(costs, np.array(rows), np.array(rhs))
        w, V = np.linalg.eigh(np.diag(lam) - A)
        if w[0] >= -tol * scale:
            lam = _polish_diag_dominance(A, lam)
            return lam, float(lam.sum()), cuts
        xi = V[:, 0]
        xi = xi / np.linalg.norm(xi)
        cuts.append(LpCut(xi))
        rows.append(np.abs(xi) ** 2)
        rhs.append(float((xi.conj() @ A @ xi).real))
    raise CutIterationCap(f"no convergence within {max_cuts} cuts")


def _polish_diag_dominance(A: np.ndarray, lam: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    sys = KktSystem(
        nv=n,
        dim=n,
        M_of_v=lambda v: np.diag(v) - A,
        stationarity=lambda v, Z: np.diag(Z).real - 1.0,
    )
    res = sys.polish(lam)
    out = res.v
    # never return an infeasible point: fall back if polish went indefinite
    scale = max(opnorm(A), 1.0)
    if res.residual_norm > 1e-9 * scale:
        return lam
    if np.linalg.eigvalsh(np.diag(out) - A)[0] < -1e-11 * scale:
        return lam
    return out


# ---------------------------------------------------------------------------
# high-precision block-PSD optimum refinement
# ---------------------------------------------------------------------------


class _HermBlock:
    """Real parametrization of a k x k Hermitian block: k diagonal entries,
    then Re/Im of the strict upper triangle."""

    def __init__(self, k: int):
        self.k = k
        self.iu = np.triu_indices(k, 1)
        self.size = k * k

    def pack(self, M: np.ndarray) -> np.ndarray:
        return np.concatenate(
            [np.diag(M).real, M[self.iu].real, M[self.iu].imag]
        )

    def unpack(self, v: np.ndarray) -> np.ndarray:
        k = self.k
        M = np.zeros((k, k), dtype=complex)
        off = v[k : k + self.iu[0].size] + 1j * v[k + self.iu[0].size :]
        M[self.iu] = off
        M = M + M.conj().T
        M[np.diag_indices(k)] = v[:k]
        return M

    def cut_coeffs(self, z: np.ndarray) -> np.ndarray:
        """Coefficients of z* M z as a linear form in the packed variables."""
        w = z.conj()[self.iu[0]] * z[self.iu[1]]
        return np.concatenate([np.abs(z) ** 2, 2 * w.real, -2 * w.imag])


class _DiagBlock:
    """Diagonal k x k block parametrized by its k real diagonal entries."""

    def __init__(self, k: int):
        self.k = k
        self.size = k

    def pack(self, M: np.ndarray) -> np.ndarray:
        return np.diag(M).real.copy()

    def unpack(self, v: np.ndarray) -> np.ndarray:
        return np.diag(v).astype(complex)

    def cut_coeffs(self, z: np.ndarray) -> np.ndarray:
        return np.abs(z) ** 2


# tolerance stages for the cut loop when a polish finisher is available:
# each pair is (eigenvalue tolerance, final trust radius)
_STAGES = ((1e-2, 3e-2), (1e-3, 1e-2), (1e-4, 1e-3), (1e-6, 1e-5), (1e-9, 3e-7))


class _BlockProblem:
    """min c.x over block-PSD feasible sets [[A, X], [X*, B]] >= 0 with
    structural linear rows, solved by Kelley cuts inside a shrinking
    trust box, finished by the Gauss-Newton KKT polish."""

    def __init__(self, X, top, bottom, costs, struct_ub, struct_rhs, extra=0):
        self.X = as_matrix(X)
        self.m, self.n = self.X.shape
        self.top = top
        self.bottom = bottom
        self.costs = np.asarray(costs, dtype=float)
        self.struct_ub = struct_ub      # rows of "row . x <= rhs"
        self.struct_rhs = struct_rhs
        self.extra = extra              # trailing scalar vars (e.g. t)
        self.nvar = top.size + bottom.size + extra

    def split(self, x):
        a = self.top.unpack(x[: self.top.size])
        b = self.bottom.unpack(x[self.top.size : self.top.size + self.bottom.size])
        return a, b

    def assemble(self, x) -> np.ndarray:
        A, B = self.split(x)
        M = np.zeros((self.m + self.n,) * 2, dtype=complex)
        M[: self.m, : self.m] = A
        M[self.m :, self.m :] = B
        M[: self.m, self.m :] = self.X
        M[self.m :, : self.m] = self.X.conj().T
        return M

    def cut_from(self, z: np.ndarray) -> tuple[np.ndarray, float]:
        """PSD cut z* M z >= 0 as `row . x >= rhs` in the packed variables."""
        u, v = z[: self.m], z[self.m :]
        row = np.concatenate(
            [
                self.top.cut_coeffs(u),
                self.bottom.cut_coeffs(v),
                np.zeros(self.extra),
            ]
        )
        rhs = float(-2 * (u.conj() @ self.X @ v).real)
        return row, rhs

    def seed_directions(self) -> list[np.ndarray]:
        """Coordinate directions plus phased singular-vector pairs of X;
        the latter are the binding directions of the block problem and
        give the cut model a sharp start."""
        dim = self.m + self.n
        dirs = [np.eye(dim, dtype=complex)[i] for i in range(dim)]
        U, s, V = np.linalg.svd(self.X)
        for i in range(s.size):
            for om in (1.0, -1.0, 1j, -1j):
                z = np.concatenate([U[:, i], om * V[i, :].conj()])
                dirs.append(z / np.linalg.norm(z))
        return dirs

    def solve(
        self,
        center: np.ndarray,
        radius: float,
        finisher=None,
        max_rounds: int = 10000,
        cuts_keep: int = 900,
    ) -> np.ndarray:
        """Run the staged cut loop; whenever the iterate is feasible at the
        current stage tolerance, offer it to `finisher` (which returns a
        certified-optimal variable vector or None).  Without a finisher the
        loop runs the final stage only and returns its own iterate."""
        scale = max(opnorm(self.X), 1e-300)
        stages = _STAGES if finisher is not None else _STAGES[-1:]
        stage = 0
        tol, radius_final = stages[stage]
        cut_rows: list[np.ndarray] = []
        cut_rhs: list[float] = []
        for z in self.seed_directions():
            r, b = self.cut_from(z)
            cut_rows.append(r)
            cut_rhs.append(b)
        n_seed = len(cut_rows)
        x_c = center.copy()
        r = radius
        x = center.copy()
        best_obj = np.inf
        feas_stall = 0
        last_attempt = 0
        attempt_gap = 10  # grows after each failed polish attempt
        if finisher is not None:
            out = finisher(center)
            if out is not None:
                return out
        for rnd in range(max_rounds):
            A_ub = np.array(self.struct_ub + [-row for row in cut_rows])
            b_ub = np.array(self.struct_rhs + [-v for v in cut_rhs])
            lo = x_c - r
            hi = x_c + r
            # loose LP tolerances until the late stages need sharp cuts
            lp_tol = 1e-10 if tol < 1e-5 else 1e-8
            res = linprog(
                self.costs,
                A_ub=A_ub,
                b_ub=b_ub,
                bounds=list(zip(lo, hi)),
                method="highs",
                options={
                    "primal_feasibility_tolerance": lp_tol,
                    "dual_feasibility_tolerance": lp_tol,
                },
            )
            if res.status != 0:
                r *= 2.0
                continue
            x = res.x
            w, V = np.linalg.eigh(self.assemble(x))
            if finisher is not None and rnd - last_attempt >= attempt_gap:
                last_attempt = rnd
                out = finisher(x)
                if out is not None:
                    return out
                attempt_gap = min(int(attempt_gap * 1.5) + 1, 20)
            if w[0] >= -tol * scale:
                obj = float(self.costs @ x)
                if obj >= best_obj - 1e-9 * max(scale, 1.0):
                    feas_stall += 1
                else:
                    feas_stall = 0
                best_obj = min(best_obj, obj)
                if r <= radius_final or feas_stall >= 4:
                    if stage + 1 < len(stages):
                        stage += 1
                        tol, radius_final = stages[stage]
                        feas_stall = 0
                        attempt_gap = 10
                        continue
                    if finisher is not None:
                        out = finisher(x)
                        if out is not None:
                            return out
                    return x
                at_edge = np.any(np.abs(x - x_c) > 0.9 * r)
                x_c = x.copy()
                r = r * 2.0 if at_edge else max(r * 0.2, radius_final)
                continue
            added = 0
            for j in range(w.size):
                if w[j] < -tol * scale and added < 8:
                    row, rhs = self.cut_from(V[:, j])
                    cut_rows.append(row)
                    cut_rhs.append(rhs)
                    added += 1
            if len(cut_rows) > cuts_keep:
                # drop the oldest non-seed cuts
                keep = cuts_keep // 2
                cut_rows = cut_rows[:n_seed] + cut_rows[-keep:]
                cut_rhs = cut_rhs[:n_seed] + cut_rhs[-keep:]
        raise CutIterationCap("block cutting-plane refinement did not converge")


class _SymBlockProblem(_BlockProblem):
    """Block problem for Hermitian X with the two diagonal blocks tied to a
    single P.  For self-adjoint X the feasible set is invariant under
    swapping the blocks, so an optimal symmetric point always exists; tying
    them removes the swap degeneracy that defeats the isolated-optimum
    polish."""

    def __init__(self, X, blk, costs, struct_ub, struct_rhs, extra=0):
        super().__init__(X, blk, blk, costs, struct_ub, struct_rhs, extra)
        self.nvar = blk.size + extra

    def split(self, x):
        P = self.top.unpack(x[: self.top.size])
        return P, P

    def cut_from(self, z: np.ndarray) -> tuple[np.ndarray, float]:
        u, v = z[: self.m], z[self.m :]
        row = np.concatenate(
            [
                self.top.cut_coeffs(u) + self.top.cut_coeffs(v),
                np.zeros(self.extra),
            ]
        )
        rhs = float(-2 * (u.conj() @ self.X @ v).real)
        return row, rhs


def _offdiag_parts(Z: np.ndarray) -> np.ndarray:
    iu = np.triu_indices(Z.shape[0], 1)
    return np.concatenate([Z[iu].real, Z[iu].imag])


def _try_polish(prob, x, stationarity, primal_eq, k, struct_ok):
    """One certified polish attempt with kernel dimension k; returns the
    polished variable vector or None."""
    sys = KktSystem(
        nv=x.size,
        dim=prob.m + prob.n,
        M_of_v=prob.assemble,
        stationarity=stationarity,
        primal_eq=primal_eq,
    )
    res = sys.polish(x, kernel_dim=k)
    scale = max(opnorm(prob.X), 1.0)
    if res.residual_norm > 1e-10 * scale:
        return None
    if np.linalg.eigvalsh(prob.assemble(res.v))[0] < -1e-11 * scale:
        return None
    thw = np.linalg.eigvalsh(res.Theta)
    if thw[0] < -1e-7 * max(abs(thw).max(), 1e-300):
        return None
    if not struct_ok(res.v):
        return None
    return res.v


def _kernel_candidates(prob, x, kmin: int = 1) -> list[int]:
    w = np.linalg.eigvalsh(prob.assemble(x))
    scale = max(abs(w[-1]), 1e-300)
    k0 = max(int(np.sum(w < 3e-2 * scale)), kmin)
    dim = prob.m + prob.n
    cand = [k0, k0 + 1, k0 - 1, k0 + 2, k0 - 2, k0 + 3]
    return [k for k in dict.fromkeys(cand) if kmin <= k < dim]


def _rank_one(X: np.ndarray):
    """(sigma, u, v) with X = sigma * outer(u, conj(v)) if X has numerical
    rank one, else None.  Rank-one inputs make the block optimality systems
    maximally degenerate, but they all have closed-form optimal points."""
    U, sv, Vh = np.linalg.svd(X, full_matrices=False)
    if sv.size == 0 or sv[0] == 0.0:
        return None
    if sv.size > 1 and sv[1] > 1e-12 * sv[0]:
        return None
    return float(sv[0]), U[:, 0], Vh[0].conj()


def refine_schur_point(
    X, t_hint: float | None = None, rng: np.random.Generator | None = None
) -> tuple[float, np.ndarray]:
    """Optimal (t, M) for min t s.t. [[P, X], [X*, Q]] >= 0, diag <= t."""
    X = as_matrix(X)
    m, n = X.shape
    r1 = _rank_one(X)
    if r1 is not None:
        # X = sigma u v*: the optimum is t = sigma |u|_inf |v|_inf with the
        # rank-one block point P = sigma (bv/bu) uu*, Q = sigma (bu/bv) vv*
        sigma, u, v = r1
        bu = float(np.abs(u).max())
        bv = float(np.abs(v).max())
        w = np.concatenate([np.sqrt(bv / bu) * u, np.sqrt(bu / bv) * v])
        return sigma * bu * bv, sigma * np.outer(w, w.conj())
    if m == n and np.abs(X - X.conj().T).max() <= 1e-12 * float(np.abs(X).max()):
        return _refine_schur_point_selfadjoint(X, t_hint, rng)
    top, bottom = _HermBlock(m), _HermBlock(n)
    nvar = top.size + bottom.size + 1
    costs = np.zeros(nvar)
    costs[-1] = 1.0
    struct_ub, struct_rhs = [], []
    for i in range(m):
        row = np.zeros(nvar)
        row[i] = 1.0
        row[-1] = -1.0
        struct_ub.append(row)
        struct_rhs.append(0.0)
    for j in range(n):
        row = np.zeros(nvar)
        row[top.size + j] = 1.0
        row[-1] = -1.0
        struct_ub.append(row)
        struct_rhs.append(0.0)
    prob = _BlockProblem(X, top, bottom, costs, struct_ub, struct_rhs, extra=1)

    def attempt(x):
        t = float(x[-1])
        P, Q = prob.split(x)
        cap_tol = 0.05 * max(t, 1.0)
        act_top = [i for i in range(m) if t - P[i, i].real <= cap_tol]
        act_bot = [j for j in range(n) if t - Q[j, j].real <= cap_tol]
        ina_top = [i for i in range(m) if i not in act_top]
        ina_bot = [j for j in range(n) if j not in act_bot]

        def stationarity(v, Z):
            Z11, Z22 = Z[:m, :m], Z[m:, m:]
            return np.concatenate(
                [
                    _offdiag_parts(Z11),
                    _offdiag_parts(Z22),
                    [np.trace(Z).real - 1.0],
                    [Z11[i, i].real for i in ina_top],
                    [Z22[j, j].real for j in ina_bot],
                ]
            )

        def primal_eq(v):
            P_, Q_ = prob.split(v)
            tt = v[-1]
            return np.concatenate(
                [
                    [P_[i, i].real - tt for i in act_top],
                    [Q_[j, j].real - tt for j in act_bot],
                ]
            )

        def struct_ok(v):
            P_, Q_ = prob.split(v)
            tt = v[-1]
            slack = 1e-9 * max(tt, 1.0)
            return (
                np.diag(P_).real.max() <= tt + slack
                and np.diag(Q_).real.max() <= tt + slack
            )

        for k in _kernel_candidates(prob, x):
            v = _try_polish(prob, x, stationarity, primal_eq, k, struct_ok)
            if v is not None:
                return v
        return None

    # feasible start: Gram point of the SVD factorization X = (S^1/2 U*)*(S^1/2 V*)
    U, sv, Vh = np.linalg.svd(X, full_matrices=False)
    P0 = herm((U * sv) @ U.conj().T)
    Q0 = herm((Vh.conj().T * sv) @ Vh)
    if rng is not None:
        # start from a randomly inflated feasible point (diagonal padding
        # preserves PSD-ness); perturbs the path, not the optimum
        pad = max(float(sv[0]) if sv.size else 0.0, 1e-3)
        P0 = herm(P0 + 0.3 * pad * np.diag(rng.uniform(size=m)))
        Q0 = herm(Q0 + 0.3 * pad * np.diag(rng.uniform(size=n)))
    t0 = max(
        float(np.diag(P0).real.max(initial=0.0)),
        float(np.diag(Q0).real.max(initial=0.0)),
    )
    if t_hint is not None:
        t0 = max(t_hint, t0)
    center = np.concatenate([top.pack(P0), bottom.pack(Q0), [t0]])
    x = prob.solve(center, radius=max(t0, 0.5), finisher=attempt)
    return float(x[-1]), prob.assemble(x)


def _refine_schur_point_selfadjoint(
    X, t_hint: float | None = None, rng: np.random.Generator | None = None
) -> tuple[float, np.ndarray]:
    """Schur block point for Hermitian X with both diagonal blocks tied."""
    m = X.shape[0]
    blk = _HermBlock(m)
    nvar = blk.size + 1
    costs = np.zeros(nvar)
    costs[-1] = 1.0
    struct_ub, struct_rhs = [], []
    for i in range(m):
        row = np.zeros(nvar)
        row[i] = 1.0
        row[-1] = -1.0
        struct_ub.append(row)
        struct_rhs.append(0.0)
    prob = _SymBlockProblem(X, blk, costs, struct_ub, struct_rhs, extra=1)

    def attempt(x):
        t = float(x[-1])
        P = prob.split(x)[0]
        cap_tol = 0.05 * max(t, 1.0)
        act = [i for i in range(m) if t - P[i, i].real <= cap_tol]
        ina = [i for i in range(m) if i not in act]

        def stationarity(v, Z):
            # gradient in the tied variables sees the sum of the two
            # diagonal dual blocks
            W = Z[:m, :m] + Z[m:, m:]
            return np.concatenate(
                [
                    _offdiag_parts(W),
                    [np.trace(Z).real - 1.0],
                    [W[i, i].real for i in ina],
                ]
            )

        def primal_eq(v):
            P_ = prob.split(v)[0]
            tt = v[-1]
            return np.array([P_[i, i].real - tt for i in act])

        def struct_ok(v):
            P_ = prob.split(v)[0]
            tt = v[-1]
            return np.diag(P_).real.max() <= tt + 1e-9 * max(tt, 1.0)

        for k in _kernel_candidates(prob, x):
            v = _try_polish(prob, x, stationarity, primal_eq, k, struct_ok)
            if v is not None:
                return v
        return None

    # feasible start: P = |X| dominates both X and -X
    w, V = np.linalg.eigh(herm(X))
    P0 = herm((V * np.abs(w)) @ V.conj().T)
    if rng is not None:
        pad = max(float(np.abs(w).max(initial=0.0)), 1e-3)
        P0 = herm(P0 + 0.3 * pad * np.diag(rng.uniform(size=m)))
    t0 = float(np.diag(P0).real.max(initial=0.0))
    if t_hint is not None:
        t0 = max(t_hint, t0)
    center = np.concatenate([blk.pack(P0), [t0]])
    x = prob.solve(center, radius=max(t0, 0.5), finisher=attempt)
    return float(x[-1]), prob.assemble(x)


def refine_cbb_point(
    X, rng: np.random.Generator | None = None
) -> tuple[float, np.ndarray, np.ndarray]:
    """Optimal (t, d1, d2) for the cb-bilinear block problem
    min (Tr D1 + Tr D2)/2 s.t. [[D1, X], [X*, D2]] >= 0, D diagonal."""
    X = as_matrix(X)
    m, n = X.shape
    r1 = _rank_one(X)
    if r1 is not None:
        # X = sigma u v*: optimum sigma |u|_1 |v|_1, certified by the
        # rank-one phase witness of unit Schur norm; D1 = sigma |v|_1 |u|,
        # D2 = sigma |u|_1 |v| dominate the rank-one middle block
        sigma, u, v = r1
        au, av = np.abs(u), np.abs(v)
        d1 = sigma * av.sum() * au
        d2 = sigma * au.sum() * av
        return float(sigma * au.sum() * av.sum()), d1, d2
    top, bottom = _DiagBlock(m), _DiagBlock(n)
    costs = 0.5 * np.ones(m + n)
    prob = _BlockProblem(X, top, bottom, costs, [], [])

    def attempt(x):
        for k in _kernel_candidates(prob, x):
            v = _try_polish(
                prob,
                x,
                lambda v_, Z: np.diag(Z).real - 0.5,
                None,
                k,
                lambda v_: True,
            )
            if v is not None:
                return v
        return None

    s = opnorm(X)
    t0 = np.sqrt(m * n) * s
    center = np.concatenate([np.full(m, t0 / m), np.full(n, t0 / n)])
    if rng is not None:
        center *= 1.0 + 0.5 * rng.uniform(size=m + n)
    x = prob.solve(center, radius=max(2 * t0, 1.0), finisher=attempt)
    d1, d2 = x[:m].copy(), x[m:].copy()
    return float(0.5 * (d1.sum() + d2.sum())), d1, d2


def refine_tnorm_point(
    X, rng: np.random.Generator | None = None
) -> tuple[float, np.ndarray]:
    """Optimal (t, M) for the bilinear-Schur block problem
    min Tr(M11) s.t. [[M11, X], [X*, M22]] >= 0, diag(M22) <= 1;
    the returned t is sqrt of the optimal trace."""
    X = as_matrix(X)
    m, n = X.shape
    r1 = _rank_one(X)
    if r1 is not None:
        # X = sigma u v*: min Tr(M11) = sigma^2 |v|_inf^2 since
        # v* M22+ v >= |v|_inf^2 whenever diag(M22) <= 1, with equality at
        # M22 = vv* / |v|_inf^2
        sigma, u, v = r1
        bv = float(np.abs(v).max())
        w = np.concatenate([sigma * bv * u, v / bv])
        return sigma * bv, np.outer(w, w.conj())
    top, bottom = _HermBlock(m), _HermBlock(n)
    nvar = top.size + bottom.size
    costs = np.zeros(nvar)
    costs[:m] = 1.0  # Tr(M11)
    struct_ub, struct_rhs = [], []
    for j in range(n):
        row = np.zeros(nvar)
        row[top.size + j] = 1.0
        struct_ub.append(row)
        struct_rhs.append(1.0)
    prob = _BlockProblem(X, top, bottom, costs, struct_ub, struct_rhs)

    def attempt(x):
        M22 = prob.split(x)[1]
        act = [j for j in range(n) if 1.0 - M22[j, j].real <= 0.05]
        ina = [j for j in range(n) if j not in act]

        def stationarity(v, Z):
            Z11, Z22 = Z[:m, :m], Z[m:, m:]
            return np.concatenate(
                [
                    (Z11 - np.eye(m)).real[np.triu_indices(m)],
                    Z11.imag[np.triu_indices(m, 1)],
                    _offdiag_parts(Z22),
                    [Z22[j, j].real for j in ina],
                ]
            )

        def primal_eq(v):
            B = prob.split(v)[1]
            return np.array([B[j, j].real - 1.0 for j in act])

        def struct_ok(v):
            B = prob.split(v)[1]
            return np.diag(B).real.max() <= 1.0 + 1e-9

        for k in _kernel_candidates(prob, x, kmin=m):
            v = _try_polish(prob, x, stationarity, primal_eq, k, struct_ok)
            if v is not None:
                return v
        return None

    s = opnorm(X)
    # feasible start: M11 = XX*, M22 = I (Schur complement is zero)
    M11_0 = herm(X @ X.conj().T)
    if rng is not None:
        M11_0 = herm(M11_0 + 0.3 * max(s * s, 1e-3) * np.diag(rng.uniform(size=m)))
    center = np.concatenate([top.pack(M11_0), bottom.pack(np.eye(n))])
    x = prob.solve(center, radius=max(1.0, s * s), finisher=attempt)
    M = prob.assemble(x)
    tr = float(np.trace(M[:m, :m]).real)
    return float(np.sqrt(max(tr, 0.0))), M
