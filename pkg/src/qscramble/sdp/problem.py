"""Steerable-weight SDP: problem setup, facial reduction, certificates.

The steerable weight of an assemblage {sigma_{a|x}} is 1 - mu* with

    mu* = max  sum_lam tr(sigma_lam)
          s.t. sum_lam D_lam(a|x) sigma_lam <= sigma_{a|x}  for all a, x
               sigma_lam >= 0

over deterministic strategies lam.  Assemblages produced by projective
measurements at t = 0 are rank deficient, so the primal has no interior
and a straight interior-point run stalls.  The fix implemented here is a
facial reduction: each sigma_lam is confined to the intersection of the
supports of the members its strategy selects, slack blocks are confined
to the member supports, and strategies whose intersection is trivial are
eliminated exactly.  For fully projective assemblages every strategy
dies and the weight is returned as exactly 1 with a synthesized dual
certificate; for full-rank assemblages the reduction is the identity and
adds no work.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import ipm
from .strategies import DeterministicStrategy, enumerate_strategies

#: refuse interior-point solves whose dense Schur factor would not fit in
#: memory; 64-dimensional members need ~4.8 GB, well past a small box
_SCHUR_BYTE_CAP = float(os.environ.get("QSCRAMBLE_SCHUR_CAP_BYTES", 2e9))

SUPPORT_RTOL = 1e-10
DROP_TRACE = 1e-12
_INTERSECT_TOL = 1e-9


@dataclass
class SdpSolution:
    """Solver output in the original (unreduced) assemblage space."""

    mu_star: float
    hidden_states: List[np.ndarray]
    dual_certificate: Optional[List[List[np.ndarray]]]
    status: str
    gap: float
    iterations: int
    pinf: float = 0.0
    dinf: float = 0.0
    reduced: bool = False
    eliminated: Tuple[int, ...] = ()

    @property
    def steerable_weight(self) -> float:
        return float(min(1.0, max(0.0, 1.0 - self.mu_star)))


def _support_basis(mat: np.ndarray) -> Optional[np.ndarray]:
    """Orthonormal basis of the numerical range of a PSD matrix.

    Returns None when the matrix has full rank (identity embedding) and a
    (d, 0) array when it vanishes entirely.
    """
    d = mat.shape[0]
    evals, evecs = np.linalg.eigh(mat)
    top = evals[-1]
    if top <= DROP_TRACE:
        return np.zeros((d, 0), dtype=complex)
    keep = evals > max(SUPPORT_RTOL * top, DROP_TRACE)
    if keep.all():
        return None
    return np.ascontiguousarray(evecs[:, keep])


def _intersect(basis_a: Optional[np.ndarray], basis_b: Optional[np.ndarray],
               dim: int) -> Optional[np.ndarray]:
    """Intersection of two subspaces given by orthonormal bases.

    None stands for the full space.  Uses principal angles: directions of
    B_a^dag B_b with singular value 1 span the intersection.
    """
    if basis_a is None:
        return basis_b
    if basis_b is None:
        return basis_a
    if basis_a.shape[1] == 0 or basis_b.shape[1] == 0:
        return np.zeros((dim, 0), dtype=complex)
    u, s, _ = np.linalg.svd(basis_a.conj().T @ basis_b)
    keep = s > 1.0 - _INTERSECT_TOL
    if not keep.any():
        return np.zeros((dim, 0), dtype=complex)
    return np.ascontiguousarray(basis_a @ u[:, : int(keep.sum())])


class SteeringWeightProblem:
    """Validated assemblage plus its deterministic-strategy structure.

    Parameters
    ----------
    members : sequence over settings of sequences over outcomes
        Subnormalized states sigma_{a|x} as Hermitian PSD matrices whose
        traces sum to one within each setting.
    """

    def __init__(self, members, validate: bool = True):
        self.members = [[np.asarray(m, dtype=complex) for m in row]
                        for row in members]
        self.n_settings = len(self.members)
        if self.n_settings == 0:
            raise ValueError("assemblage has no settings")
        self.n_outcomes = len(self.members[0])
        self.dim = self.members[0][0].shape[0]
        if validate:
            self._validate()
        self.strategies = enumerate_strategies(self.n_settings, self.n_outcomes)

    def _validate(self):
        for x, row in enumerate(self.members):
            if len(row) != self.n_outcomes:
                raise ValueError("ragged assemblage: outcome counts differ")
            total = 0.0
            for a, m in enumerate(row):
                if m.shape != (self.dim, self.dim):
                    raise ValueError(f"member ({a}|{x}) has shape {m.shape}")
                if not np.allclose(m, m.conj().T, atol=1e-8):
                    raise ValueError(f"member ({a}|{x}) is not Hermitian")
                lam_min = float(np.linalg.eigvalsh(m)[0])
                if lam_min < -1e-8:
                    raise ValueError(
                        f"member ({a}|{x}) has negative eigenvalue {lam_min:.2e}")
                total += float(np.trace(m).real)
            if abs(total - 1.0) > 1e-6:
                raise ValueError(
                    f"setting {x}: member traces sum to {total}, expected 1")
        marg = None
        for row in self.members:
            s = sum(row)
            if marg is None:
                marg = s
            elif not np.allclose(s, marg, atol=1e-7):
                raise ValueError("assemblage violates no-signaling: "
                                 "setting marginals differ")

    # -- facial reduction -------------------------------------------------
    def reduce(self):
        d = self.dim
        pis: List[List[Optional[np.ndarray]]] = []
        dropped: List[List[bool]] = []
        for row in self.members:
            pi_row, drop_row = [], []
            for m in row:
                basis = _support_basis(m)
                pi_row.append(basis)
                drop_row.append(basis is not None and basis.shape[1] == 0)
            pis.append(pi_row)
            dropped.append(drop_row)

        q_bases: List[Optional[np.ndarray]] = []
        eliminated: List[int] = []
        for strat in self.strategies:
            basis: Optional[np.ndarray] = None
            for x in range(self.n_settings):
                basis = _intersect(basis, pis[x][strat.outcomes[x]], d)
                if basis is not None and basis.shape[1] == 0:
                    break
            if basis is not None and basis.shape[1] == 0:
                eliminated.append(strat.index)
                q_bases.append(np.zeros((d, 0), dtype=complex))
            else:
                q_bases.append(basis)
        return _Reduction(self, pis, dropped, q_bases, tuple(eliminated))


@dataclass
class _Reduction:
    problem: SteeringWeightProblem
    pis: List[List[Optional[np.ndarray]]]
    dropped: List[List[bool]]
    q_bases: List[Optional[np.ndarray]]
    eliminated: Tuple[int, ...]

    @property
    def engaged(self) -> bool:
        if self.eliminated:
            return True
        return any(p is not None for row in self.pis for p in row)

    def compressed_member(self, x: int, a: int) -> np.ndarray:
        m = self.problem.members[x][a]
        pi = self.pis[x][a]
        return m if pi is None else pi.conj().T @ m @ pi


def solve_steering_weight(members, gap_tol: float = ipm.DEFAULT_GAP_TOL,
                          feas_tol: float = ipm.DEFAULT_FEAS_TOL,
                          max_iter: int = ipm.DEFAULT_MAX_ITER,
                          validate: bool = True) -> SdpSolution:
    """Steerable weight of an assemblage via the interior-point solver.

    Returns an :class:`SdpSolution`; the weight itself is
    ``solution.steerable_weight`` and the hidden-state decomposition and
    dual certificate live in the original member space.
    """
    problem = members if isinstance(members, SteeringWeightProblem) \
        else SteeringWeightProblem(members, validate=validate)
    red = problem.reduce()
    d = problem.dim
    survivors = [s for s in problem.strategies if s.index not in red.eliminated]

    if not survivors:
        return _exact_unit_weight(problem, red)

    schur_dim = 0
    for x in range(problem.n_settings):
        for a in range(problem.n_outcomes):
            if red.dropped[x][a]:
                continue
            pi = red.pis[x][a]
            s = d if pi is None else pi.shape[1]
            schur_dim += s * s
    if schur_dim ** 2 * 8 > _SCHUR_BYTE_CAP:
        raise ipm.NumericalFailure(
            f"Schur system {schur_dim}x{schur_dim} needs "
            f"~{schur_dim ** 2 * 8 / 1e9:.1f} GB; member dimension {d} is "
            "past the interior-point envelope (scan large regions with "
            "BoundTrackingAccelerator instead)")

    # conic blocks: one per surviving strategy, then one slack per kept member
    var_sizes, c_blocks = [], []
    strat_pos = {}
    for strat in survivors:
        q = red.q_bases[strat.index]
        r = d if q is None else q.shape[1]
        strat_pos[strat.index] = len(var_sizes)
        var_sizes.append(r)
        c_blocks.append(-np.eye(r, dtype=complex))

    con_sizes, b_blocks, rows, row_key = [], [], [], []
    for x in range(problem.n_settings):
        for a in range(problem.n_outcomes):
            if red.dropped[x][a]:
                continue
            pi = red.pis[x][a]
            s = d if pi is None else pi.shape[1]
            entries = []
            for strat in survivors:
                if strat.outcomes[x] != a:
                    continue
                q = red.q_bases[strat.index]
                if pi is None and q is None:
                    a_map = None
                elif pi is None:
                    a_map = q
                elif q is None:
                    a_map = pi.conj().T
                else:
                    a_map = pi.conj().T @ q
                entries.append((strat_pos[strat.index], a_map))
            slack_idx = len(var_sizes)
            var_sizes.append(s)
            c_blocks.append(np.zeros((s, s), dtype=complex))
            entries.append((slack_idx, None))
            con_sizes.append(s)
            b_blocks.append(red.compressed_member(x, a))
            rows.append(entries)
            row_key.append((x, a))

    res = ipm.solve_conic(var_sizes, con_sizes, c_blocks, b_blocks, rows,
                          gap_tol=gap_tol, feas_tol=feas_tol, max_iter=max_iter)

    mu = float(sum(np.trace(res.x[strat_pos[s.index]]).real for s in survivors))
    hidden = []
    for strat in problem.strategies:
        if strat.index in red.eliminated:
            hidden.append(np.zeros((d, d), dtype=complex))
            continue
        h = res.x[strat_pos[strat.index]]
        q = red.q_bases[strat.index]
        hidden.append(h.copy() if q is None else q @ h @ q.conj().T)

    # dual certificate: slack-block z is exactly PSD and approximates -y
    f_tilde = {}
    for pos, (x, a) in enumerate(row_key):
        slack_idx = len(var_sizes) - len(row_key) + pos
        f_tilde[(x, a)] = res.z[slack_idx]
    certificate = _lift_certificate(problem, red, f_tilde)
    return SdpSolution(mu, hidden, certificate, res.status, res.gap,
                       res.iterations, res.pinf, res.dinf,
                       red.engaged, red.eliminated)


def _exact_unit_weight(problem: SteeringWeightProblem,
                       red: _Reduction) -> SdpSolution:
    """Every strategy eliminated: mu* = 0 and TSW = 1, exactly."""
    d = problem.dim
    hidden = [np.zeros((d, d), dtype=complex) for _ in problem.strategies]
    certificate = _lift_certificate(problem, red, {})
    return SdpSolution(0.0, hidden, certificate, "Optimal", 0.0, 0,
                       reduced=True, eliminated=red.eliminated)


def _lift_certificate(problem: SteeringWeightProblem, red: _Reduction,
                      f_tilde) -> List[List[np.ndarray]]:
    """Map reduced dual blocks back to d x d steering-inequality operators.

    F_{a|x} = Pi F~ Pi^dag + kappa (1 - Pi Pi^dag); kappa grows until every
    strategy constraint sum_x F_{a(x)|x} >= 1 clears, which only involves
    the complement weight when the reduction eliminated strategies.
    """
    d = problem.dim
    base: List[List[np.ndarray]] = []
    comp: List[List[np.ndarray]] = []
    any_comp = False
    for x in range(problem.n_settings):
        row_b, row_c = [], []
        for a in range(problem.n_outcomes):
            pi = red.pis[x][a]
            ft = f_tilde.get((x, a))
            if pi is None:
                row_b.append(np.asarray(ft) if ft is not None
                             else np.zeros((d, d), dtype=complex))
                row_c.append(None)
            else:
                lifted = np.zeros((d, d), dtype=complex)
                if ft is not None and pi.shape[1] > 0:
                    lifted = pi @ ft @ pi.conj().T
                row_b.append(lifted)
                row_c.append(np.eye(d) - pi @ pi.conj().T)
                any_comp = True
        base.append(row_b)
        comp.append(row_c)

    if not any_comp:
        return base

    scale = max((float(np.linalg.norm(f, 2)) for row in base for f in row
                 if f.size), default=1.0)
    kappa = max(2.0, 2.0 * scale)
    while True:
        cert = [[base[x][a] + (kappa * comp[x][a] if comp[x][a] is not None else 0)
                 for a in range(problem.n_outcomes)]
                for x in range(problem.n_settings)]
        worst = _worst_strategy_margin(problem, cert)
        if worst >= 1e-9 or kappa > 1e6:
            return cert
        kappa *= 4.0


def _worst_strategy_margin(problem: SteeringWeightProblem, cert) -> float:
    worst = np.inf
    eye = np.eye(problem.dim)
    for strat in problem.strategies:
        total = sum(cert[x][strat.outcomes[x]] for x in range(problem.n_settings))
        worst = min(worst, float(np.linalg.eigvalsh(total - eye)[0]))
    return worst


def verify_certificate(problem, solution: SdpSolution,
                       obj_tol: float = 1e-6, psd_tol: float = 1e-9,
                       strategy_tol: float = 1e-7) -> bool:
    """Check the dual certificate independently of how it was produced.

    A valid certificate consists of PSD operators F_{a|x} with
    sum_x F_{a(x)|x} >= 1 for every deterministic strategy; then
    sum_ax tr(F_{a|x} sigma_{a|x}) is an upper bound on mu*, and matching
    the reported mu* within ``obj_tol`` certifies the weight.
    """
    if not isinstance(problem, SteeringWeightProblem):
        problem = SteeringWeightProblem(problem, validate=False)
    cert = solution.dual_certificate
    if cert is None:
        return False
    scale = max(1.0, max(float(np.linalg.norm(f, 2)) for row in cert for f in row))
    for row in cert:
        for f in row:
            if not np.allclose(f, f.conj().T, atol=1e-8 * scale):
                return False
            if float(np.linalg.eigvalsh(0.5 * (f + f.conj().T))[0]) \
                    < -psd_tol * scale:
                return False
    if _worst_strategy_margin(problem, cert) < -strategy_tol * scale:
        return False
    value = sum(float(np.trace(cert[x][a] @ problem.members[x][a]).real)
                for x in range(problem.n_settings)
                for a in range(problem.n_outcomes))
    return abs(value - solution.mu_star) <= obj_tol
