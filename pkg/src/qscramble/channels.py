"""Channel-state representations and the tripartite-information witness.

A unitary channel on N qubits is turned into a state in two ways:

* the Choi state: maximally entangled pairs between each input and a
  reference, with the channel applied to the input half.  By default only
  the first qubit keeps its reference (the witness never looks at the
  others), which caps the state at 2^(N+1) dimensions for long scans.
* the pseudo-density matrix (PDM): the two-time Pauli correlators of the
  channel packed into a Hermitian unit-trace matrix on input tensor
  output.  It is not positive; its negativity is exactly what temporal
  steering probes.  The PDM equals the partial transpose of the
  full-reference Choi state over the input block, and both constructions
  are implemented so each can check the other.

The tripartite information of the channel is evaluated on the Choi state:
with reference A and an output split C|D, scrambling shows up as
-I3 = I(A:CD) - I(A:C) - I(A:D) approaching its maximum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .qla import (ComplexMatrix, DensityMatrix, QubitRegister, kron,
                  mutual_information, partial_trace, partial_transpose)
from .models import haar_random_unitary, pauli_basis_labels, pauli_matrix

_BELL_DM = np.zeros((4, 4), dtype=complex)
_BELL_DM[0, 0] = _BELL_DM[0, 3] = _BELL_DM[3, 0] = _BELL_DM[3, 3] = 0.5


def system_labels(n: int) -> Tuple[str, ...]:
    return tuple(f"q{i}" for i in range(1, n + 1))


def reference_labels(n: int) -> Tuple[str, ...]:
    return tuple(f"r{i}" for i in range(1, n + 1))


@dataclass
class PartitionSpec:
    """Reference / output split used by the scrambling witnesses.

    ``region_a`` names reference qubits, ``region_c`` and ``region_d``
    split the channel output.  ``leading`` builds the standard split where
    C is the first ``n_c`` system qubits and A is the reference of q1.
    """

    region_a: Tuple[str, ...]
    region_c: Tuple[str, ...]
    region_d: Tuple[str, ...]

    def __post_init__(self):
        self.region_a = tuple(self.region_a)
        self.region_c = tuple(self.region_c)
        self.region_d = tuple(self.region_d)
        regions = self.region_a + self.region_c + self.region_d
        if len(set(regions)) != len(regions):
            raise ValueError("partition regions overlap")
        if not (self.region_a and self.region_c and self.region_d):
            raise ValueError("all three regions must be non-empty")

    @classmethod
    def leading(cls, n: int, n_c: int) -> "PartitionSpec":
        if not 1 <= n_c < n:
            raise ValueError(f"n_c must lie in 1..{n - 1}")
        sys = system_labels(n)
        return cls(("r1",), sys[:n_c], sys[n_c:])

    @property
    def n_c(self) -> int:
        return len(self.region_c)

    @property
    def n_d(self) -> int:
        return len(self.region_d)


@dataclass
class ChoiState:
    """Choi state of a unitary channel, with its register layout."""

    state: DensityMatrix
    n_qubits: int
    referenced: Tuple[str, ...]

    @property
    def full_reference(self) -> bool:
        return len(self.referenced) == self.n_qubits


def build_choi(unitary: ComplexMatrix, full_reference: bool = False) -> ChoiState:
    """Choi state of the unitary channel.

    With ``full_reference`` every input qubit is purified by its own
    reference (register ``r1..rN q1..qN``, dimension 4^N); otherwise only
    q1 keeps a reference and the remaining inputs enter maximally mixed
    (register ``r1 q1..qN``, dimension 2^(N+1)).  The reduced form is the
    full form with r2..rN traced out.
    """
    unitary = np.asarray(unitary, dtype=complex)
    dim = unitary.shape[0]
    n = dim.bit_length() - 1
    if unitary.shape != (dim, dim) or 2 ** n != dim:
        raise ValueError(f"unitary shape {unitary.shape} is not a qubit operator")
    sys = system_labels(n)
    if full_reference:
        # |Omega> = 2^{-N/2} sum_i |i>_R |i>_S, then (1 x U).
        psi = unitary.T.ravel() / np.sqrt(dim)
        reg = QubitRegister(reference_labels(n) + sys)
        return ChoiState(DensityMatrix.pure(psi, reg), n, reference_labels(n))
    rho0 = _BELL_DM if n == 1 else kron(_BELL_DM, np.eye(dim // 2) / (dim // 2))
    big_u = kron(np.eye(2), unitary)
    reg = QubitRegister(("r1",) + sys)
    rho = big_u @ rho0 @ big_u.conj().T
    return ChoiState(DensityMatrix(rho, reg), n, ("r1",))


@dataclass
class TmiResult:
    """Tripartite-information witness and its mutual-information parts."""

    minus_i3: float
    i_ac: float
    i_ad: float
    i_acd: float


def tripartite_mutual_information(choi: ChoiState,
                                  partition: PartitionSpec) -> TmiResult:
    """-I3 = I(A:CD) - I(A:C) - I(A:D) on a Choi state, in bits.

    For a unitary channel with single-qubit reference A this is bounded by
    [0, 2] and reaches 2 exactly when no information about the referenced
    input is recoverable from C or D alone.
    """
    dm = choi.state
    a, c, d = partition.region_a, partition.region_c, partition.region_d
    i_ac = mutual_information(dm, a, c)
    i_ad = mutual_information(dm, a, d)
    i_acd = mutual_information(dm, a, c + d)
    return TmiResult(i_acd - i_ac - i_ad, i_ac, i_ad, i_acd)


@dataclass
class PseudoDensityMatrix:
    """Two-time pseudo-density matrix of a unitary channel.

    Lives on ``in`` tensor ``out`` copies of the system register
    (labels ``i1..iN o1..oN``).  Hermitian with unit trace but generally
    not positive.
    """

    matrix: ComplexMatrix
    n_qubits: int

    @property
    def register(self) -> QubitRegister:
        n = self.n_qubits
        return QubitRegister(tuple(f"i{k}" for k in range(1, n + 1))
                             + tuple(f"o{k}" for k in range(1, n + 1)))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def negativity(self) -> float:
        """Sum of the absolute values of the negative eigenvalues."""
        evals = self.eigenvalues()
        return float(-evals[evals < 0.0].sum())


_PDM_MAX_QUBITS = 5  # 4^N-dimensional object; keep it a small-system tool


def build_pdm(unitary: ComplexMatrix, method: str = "choi") -> PseudoDensityMatrix:
    """Pseudo-density matrix of a unitary channel, two independent routes.

    method="choi"
        Partial transpose of the full-reference Choi state over the input
        block (cheap, one transpose).
    method="correlator"
        Direct Pauli-correlator assembly
        R = 4^-N sum_ij C_ij sigma_i x sigma_j with
        C_ij = 2^-N tr[sigma_j U sigma_i U^dag].

    Both produce the same matrix; tests use one to validate the other.
    """
    unitary = np.asarray(unitary, dtype=complex)
    dim = unitary.shape[0]
    n = dim.bit_length() - 1
    if 2 ** n != dim:
        raise ValueError("unitary dimension is not a power of two")
    if n > _PDM_MAX_QUBITS:
        raise ValueError(f"PDM limited to {_PDM_MAX_QUBITS} qubits (got {n})")
    if method == "choi":
        choi = build_choi(unitary, full_reference=True)
        pdm = partial_transpose(choi.state, reference_labels(n))
        return PseudoDensityMatrix(pdm.matrix, n)
    if method == "correlator":
        paulis = np.stack([pauli_matrix(lab) for lab in pauli_basis_labels(n)])
        rotated = np.einsum("ab,ibc,dc->iad", unitary, paulis, unitary.conj())
        corr = np.tensordot(rotated, paulis, axes=([1, 2], [2, 1])).real / dim
        tensor = np.einsum("ij,iab,jcd->acbd", corr, paulis, paulis)
        mat = tensor.reshape(dim * dim, dim * dim) / (4.0 ** n)
        return PseudoDensityMatrix(mat, n)
    raise ValueError(f"unknown method {method!r}")


def assemblage_from_pdm(pdm: PseudoDensityMatrix, effects, measured_qubit: int = 1):
    """Temporal assemblage from the PDM Born rule.

    sigma_{a|x} = tr_in[(E_{a|x} x 1_out) R] with the effect embedded on
    the measured input qubit.  ``effects`` is a sequence over settings of
    sequences over outcomes of single-qubit effect matrices.  Returns a
    steering Assemblage on the full output register.
    """
    from .steering import Assemblage  # circular at module level by design

    n = pdm.n_qubits
    reg = pdm.register
    in_labels = tuple(f"i{k}" for k in range(1, n + 1))
    out_labels = tuple(f"o{k}" for k in range(1, n + 1))
    if not 1 <= measured_qubit <= n:
        raise ValueError("measured qubit outside the register")
    dim = 1 << n
    members: List[List[ComplexMatrix]] = []
    for setting in effects:
        row = []
        for effect in setting:
            emb = _embed_single_qubit(np.asarray(effect, dtype=complex),
                                      measured_qubit, n)
            op = kron(emb, np.eye(dim))
            prod = DensityMatrix(op @ pdm.matrix, reg)
            # trace over the input block, keep outputs in order
            red = partial_trace(prod, out_labels)
            row.append(red.matrix)
        members.append(row)
    labels = tuple(f"q{k}" for k in range(1, n + 1))
    return Assemblage(members=members, labels=labels)


def _embed_single_qubit(op: ComplexMatrix, qubit: int, n: int) -> ComplexMatrix:
    factors = [np.eye(2, dtype=complex)] * n
    factors[qubit - 1] = op
    return kron(*factors)


@dataclass
class HaarBaseline:
    """Monte-Carlo scrambled-channel baseline for the tripartite witness."""

    mean: float
    stderr: float
    samples: int
    values: np.ndarray = field(repr=False)


def haar_scrambled_baseline(n_qubits: int, partition: PartitionSpec,
                            samples: int = 200, seed: int = 0) -> HaarBaseline:
    """Average -I3 over Haar-random unitaries on the full system.

    Estimates what a completely scrambled channel of the same size and
    partition would show, with the standard error of the mean.
    """
    if samples < 2:
        raise ValueError("need at least 2 samples for a standard error")
    rng = np.random.Generator(np.random.PCG64(seed))
    vals = np.empty(samples)
    for k in range(samples):
        u = haar_random_unitary(1 << n_qubits, rng)
        choi = build_choi(u)
        vals[k] = tripartite_mutual_information(choi, partition).minus_i3
    return HaarBaseline(float(vals.mean()),
                        float(vals.std(ddof=1) / np.sqrt(samples)),
                        samples, vals)
