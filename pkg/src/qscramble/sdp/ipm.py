"""Primal-dual interior-point solver for block Hermitian SDPs.

Solves the standard conic pair

    min <c, x>   s.t.  A(x) = b,  x in PSD cone (block Hermitian)
    max <b, y>   s.t.  A*(y) + z = c,  z in PSD cone

where x is a list of Hermitian blocks and every equality row is itself a
Hermitian block: row r reads  sum_j  A_j X_{k_j} A_j^dag = B_r.  Passing
``None`` for an A_j means the identity congruence; the Schur assembly
short-circuits on it.

The algorithm is the classic infeasible-start Nesterov-Todd
predictor-corrector: one NT scaling per block and iteration, a Schur
complement over the constraint blocks in svec coordinates, a Mehrotra
second-order corrector, and fraction-to-the-boundary steps with a
backtracking safeguard.  Everything is deterministic; identical inputs
produce identical iterates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular

from ._kernels import congruence_rep, smat, svec

DEFAULT_GAP_TOL = 1e-7
DEFAULT_FEAS_TOL = 1e-8
DEFAULT_MAX_ITER = 200
_STEP_FRACTION = 0.98


class NumericalFailure(RuntimeError):
    pass


@dataclass
class ConicResult:
    """Raw solver output; the steering layer interprets the blocks."""

    x: List[np.ndarray]
    y: List[np.ndarray]
    z: List[np.ndarray]
    pobj: float
    dobj: float
    gap: float            # relative duality gap
    abs_gap: float        # complementarity <x, z>
    pinf: float
    dinf: float
    iterations: int
    status: str
    history: List[Tuple[float, float, float]] = field(default_factory=list, repr=False)


def _herm(x: np.ndarray) -> np.ndarray:
    return 0.5 * (x + x.conj().T)


def _inner(xs: Sequence[np.ndarray], ys: Sequence[np.ndarray]) -> float:
    return float(sum(np.vdot(a, b).real for a, b in zip(xs, ys)))


def _chol_psd(mat: np.ndarray) -> np.ndarray:
    """Cholesky with a tiny escalating jitter fallback."""
    try:
        return np.linalg.cholesky(mat)
    except np.linalg.LinAlgError:
        pass
    n = mat.shape[0]
    base = max(np.trace(mat).real / n, 1.0)
    for k in range(3):
        jitter = base * 10.0 ** (-14 + 2 * k)
        try:
            return np.linalg.cholesky(mat + jitter * np.eye(n))
        except np.linalg.LinAlgError:
            continue
    raise NumericalFailure("cone block lost positive definiteness")


def _max_step(l_factor: np.ndarray, delta: np.ndarray) -> float:
    """Largest alpha with X + alpha * delta still PSD, X = L L^dag."""
    t = solve_triangular(l_factor, delta, lower=True, check_finite=False)
    s = solve_triangular(l_factor, t.conj().T, lower=True, check_finite=False)
    lam = np.linalg.eigvalsh(_herm(s.conj().T))[0]
    if lam >= 0.0:
        return np.inf
    return -1.0 / lam


class ConicSolver:
    """Holds problem data plus reusable buffers across iterations."""

    def __init__(self, var_sizes, con_sizes, c_blocks, b_blocks, rows):
        self.var_sizes = list(var_sizes)
        self.con_sizes = list(con_sizes)
        self.c = [np.asarray(m, dtype=complex) for m in c_blocks]
        self.b = [np.asarray(m, dtype=complex) for m in b_blocks]
        self.rows = [[(k, None if a is None else np.asarray(a, dtype=complex))
                      for k, a in row] for row in rows]
        # reverse index: variable -> [(row, A)]
        self.var_rows: List[List[Tuple[int, Optional[np.ndarray]]]] = \
            [[] for _ in self.var_sizes]
        for r, row in enumerate(self.rows):
            for k, a in row:
                self.var_rows[k].append((r, a))
        # svec offsets of the constraint rows inside the Schur matrix
        self.offsets = np.concatenate([[0], np.cumsum([s * s for s in self.con_sizes])])
        self.p = int(self.offsets[-1])
        # congruence representations of the fixed A maps (None = identity)
        self.reps: List[List[Optional[np.ndarray]]] = \
            [[None if a is None else congruence_rep(a) for _, a in self.var_rows[k]]
             for k in range(len(self.var_sizes))]
        self._schur = np.zeros((self.p, self.p))

    # -- linear operators ------------------------------------------------
    def aop(self, x: Sequence[np.ndarray]) -> List[np.ndarray]:
        out = []
        for r, row in enumerate(self.rows):
            acc = np.zeros((self.con_sizes[r], self.con_sizes[r]), dtype=complex)
            for k, a in row:
                acc += x[k] if a is None else a @ x[k] @ a.conj().T
            out.append(acc)
        return out

    def aadj(self, y: Sequence[np.ndarray]) -> List[np.ndarray]:
        out = []
        for k in range(len(self.var_sizes)):
            acc = np.zeros((self.var_sizes[k], self.var_sizes[k]), dtype=complex)
            for r, a in self.var_rows[k]:
                acc += y[r] if a is None else a.conj().T @ y[r] @ a
            out.append(acc)
        return out

    # -- Schur complement -------------------------------------------------
    def build_schur(self, w_blocks: Sequence[np.ndarray]) -> np.ndarray:
        m = self._schur
        m[:] = 0.0
        off = self.offsets
        for k, entries in enumerate(self.var_rows):
            kw = congruence_rep(w_blocks[k])
            reps = self.reps[k]
            n_e = len(entries)
            for i in range(n_e):
                ri, _ = entries[i]
                left = kw if reps[i] is None else reps[i] @ kw
                for j in range(i, n_e):
                    rj, _ = entries[j]
                    blk = left if reps[j] is None else left @ reps[j].T
                    i0, j0 = off[ri], off[rj]
                    si, sj = blk.shape
                    m[i0:i0 + si, j0:j0 + sj] += blk
                    if rj != ri:
                        m[j0:j0 + sj, i0:i0 + si] += blk.T
        return m

    def svec_rows(self, mats: Sequence[np.ndarray]) -> np.ndarray:
        return np.concatenate([svec(m) for m in mats])

    def smat_rows(self, vec: np.ndarray) -> List[np.ndarray]:
        out = []
        for r, s in enumerate(self.con_sizes):
            out.append(smat(vec[self.offsets[r]:self.offsets[r + 1]], s))
        return out


def solve_conic(var_sizes, con_sizes, c_blocks, b_blocks, rows,
                gap_tol: float = DEFAULT_GAP_TOL,
                feas_tol: float = DEFAULT_FEAS_TOL,
                max_iter: int = DEFAULT_MAX_ITER,
                callback=None) -> ConicResult:
    """Run the predictor-corrector iteration to convergence."""
    prob = ConicSolver(var_sizes, con_sizes, c_blocks, b_blocks, rows)
    nu = float(sum(prob.var_sizes))
    x = [np.eye(s, dtype=complex) for s in prob.var_sizes]
    z = [np.eye(s, dtype=complex) for s in prob.var_sizes]
    y = [np.zeros((s, s), dtype=complex) for s in prob.con_sizes]

    b_norm = 1.0 + np.sqrt(sum(np.linalg.norm(m) ** 2 for m in prob.b))
    c_norm = 1.0 + np.sqrt(sum(np.linalg.norm(m) ** 2 for m in prob.c))

    status = "MaxIterations"
    history: List[Tuple[float, float, float]] = []
    it = 0
    best_mu = np.inf
    stall = 0
    for it in range(1, max_iter + 1):
        try:
            lx = [_chol_psd(m) for m in x]
            lz = [_chol_psd(m) for m in z]
        except NumericalFailure:
            status = "NumericalFailure"
            break
        rw, rw_inv, sig = [], [], []
        for k in range(len(x)):
            g = lz[k].conj().T @ lx[k]
            u, s, vh = np.linalg.svd(g)
            if s.min() <= 0.0:
                status = "NumericalFailure"
                break
            inv_sqrt = 1.0 / np.sqrt(s)
            rw.append(lx[k] @ vh.conj().T * inv_sqrt)
            rw_inv.append((u * inv_sqrt).conj().T @ lz[k].conj().T)
            sig.append(s)
        else:
            pass
        if status == "NumericalFailure":
            break

        abs_gap = float(sum(np.dot(s, s) for s in sig))
        mu = abs_gap / nu
        rp = [prob.b[r] - m for r, m in enumerate(prob.aop(x))]
        atj = prob.aadj(y)
        rd = [prob.c[k] - atj[k] - z[k] for k in range(len(x))]
        pobj = _inner(prob.c, x)
        dobj = _inner(prob.b, y)
        pinf = np.sqrt(sum(np.linalg.norm(m) ** 2 for m in rp)) / b_norm
        dinf = np.sqrt(sum(np.linalg.norm(m) ** 2 for m in rd)) / c_norm
        rel_gap = abs_gap / (1.0 + abs(pobj) + abs(dobj))
        history.append((pinf, dinf, rel_gap))
        if callback is not None:
            callback(it, pinf, dinf, rel_gap, mu)
        if pinf <= feas_tol and dinf <= feas_tol and rel_gap <= gap_tol:
            status = "Optimal"
            break
        if mu < best_mu * 0.9999:
            best_mu = mu
            stall = 0
        else:
            stall += 1
            if stall >= 20:
                status = "SlowProgress"
                break

        w = [r @ r.conj().T for r in rw]
        schur = prob.build_schur(w)
        try:
            factor = cho_factor(schur, lower=True, check_finite=False)
        except np.linalg.LinAlgError:
            reg = max(1e-14, 1e-14 * float(np.trace(schur)) / prob.p)
            schur = schur + reg * np.eye(prob.p)
            try:
                factor = cho_factor(schur, lower=True, check_finite=False)
            except np.linalg.LinAlgError:
                status = "NumericalFailure"
                break

        w_rd_w = [w[k] @ rd[k] @ w[k] for k in range(len(x))]

        def newton(rc):
            rhs_mats = [rp[r] - m1 + m2 for r, (m1, m2)
                        in enumerate(zip(prob.aop(rc), prob.aop(w_rd_w)))]
            dy_vec = cho_solve(factor, prob.svec_rows(rhs_mats), check_finite=False)
            dy = prob.smat_rows(dy_vec)
            adj = prob.aadj(dy)
            dz = [rd[k] - adj[k] for k in range(len(x))]
            dx = [_herm(rc[k] - w[k] @ dz[k] @ w[k]) for k in range(len(x))]
            dz = [_herm(m) for m in dz]
            return dx, dy, dz

        # predictor
        rc_aff = [-m for m in x]
        dx_a, dy_a, dz_a = newton(rc_aff)
        ap = min((_max_step(lx[k], dx_a[k]) for k in range(len(x))), default=np.inf)
        ad = min((_max_step(lz[k], dz_a[k]) for k in range(len(x))), default=np.inf)
        ap_c, ad_c = min(1.0, ap), min(1.0, ad)
        gap_aff = (abs_gap + ap_c * _inner(dx_a, z) + ad_c * _inner(x, dz_a)
                   + ap_c * ad_c * _inner(dx_a, dz_a))
        sigma = min(0.99999, max(1e-8, (max(gap_aff, 0.0) / abs_gap) ** 3))

        # corrector: scaled-frame second-order term
        rc = []
        for k in range(len(x)):
            dxs = rw_inv[k] @ dx_a[k] @ rw_inv[k].conj().T
            dzs = rw[k].conj().T @ dz_a[k] @ rw[k]
            h2 = _herm(dxs @ dzs)
            core = np.diag(sigma * mu / sig[k] - sig[k]) - h2
            rc.append(_herm(rw[k] @ core @ rw[k].conj().T))
        dx, dy, dz = newton(rc)

        ap = min((_max_step(lx[k], dx[k]) for k in range(len(x))), default=np.inf)
        ad = min((_max_step(lz[k], dz[k]) for k in range(len(x))), default=np.inf)
        ap = min(1.0, _STEP_FRACTION * ap)
        ad = min(1.0, _STEP_FRACTION * ad)
        if ap < 1e-10 and ad < 1e-10:
            status = "SlowProgress"
            break
        for _ in range(40):
            ok = True
            for k in range(len(x)):
                if np.linalg.eigvalsh(_herm(x[k] + ap * dx[k]))[0] <= 0.0:
                    ok = False
                    break
                if np.linalg.eigvalsh(_herm(z[k] + ad * dz[k]))[0] <= 0.0:
                    ok = False
                    break
            if ok:
                break
            ap *= 0.8
            ad *= 0.8
        x = [_herm(x[k] + ap * dx[k]) for k in range(len(x))]
        z = [_herm(z[k] + ad * dz[k]) for k in range(len(x))]
        y = [y[r] + ad * dy[r] for r in range(len(y))]

    # final diagnostics on the returned iterate
    rp = [prob.b[r] - m for r, m in enumerate(prob.aop(x))]
    atj = prob.aadj(y)
    rd = [prob.c[k] - atj[k] - z[k] for k in range(len(x))]
    pobj = _inner(prob.c, x)
    dobj = _inner(prob.b, y)
    abs_gap = _inner(x, z)
    pinf = np.sqrt(sum(np.linalg.norm(m) ** 2 for m in rp)) / b_norm
    dinf = np.sqrt(sum(np.linalg.norm(m) ** 2 for m in rd)) / c_norm
    rel_gap = abs_gap / (1.0 + abs(pobj) + abs(dobj))
    if status != "Optimal" and pinf <= feas_tol and dinf <= feas_tol \
            and rel_gap <= gap_tol:
        status = "Optimal"
    return ConicResult(x, y, z, pobj, dobj, rel_gap, abs_gap, pinf, dinf,
                       it, status, history)
