"""Scan orchestration: configs, reports, backflow, size sweeps.

A scan evaluates both scrambling witnesses on a time grid of one model's
unitary and records them as rows of a report.  Reports serialize to CSV
with a fixed column set and 12 significant digits so reruns are bitwise
comparable, and the backflow functionals integrate the positive jumps of
the witnesses' negatives over any prefix of the grid.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .qla import Propagator
from .models import build_ising, build_syk, clifford_scan_unitary
from .channels import PartitionSpec, build_choi, tripartite_mutual_information
from .steering import (BoundTrackingAccelerator, MeasurementSet,
                       ScanAccelerator, minus_t3)

CSV_HEADER = ["t", "minusI3", "minusT3", "IAC", "IAD",
              "TSWC", "TSWD", "TSWtot", "status"]

#: default scan horizons, in units of the model's coupling
SPIN_T_MAX = 40.0
SYK_T_MAX = 148.0


@dataclass
class ExperimentConfig:
    """Everything needed to reproduce one scan."""

    model: str = "ising"
    n: int = 7
    g: float = 1.0
    h: float = 0.5
    j_coupling: float = 1.0
    seed: int = 0
    n_c: int = 0           # 0: default partition, see resolved_n_c
    t_start: float = 0.0
    t_max: float = 0.0     # 0: model default horizon
    points: int = 200
    measurements: str = "xyz"
    sdp_gap_tol: float = 1e-7
    unitary_file: Optional[str] = None
    jobs: int = 1
    accelerate: bool = True

    def __post_init__(self):
        if self.model not in ("ising", "syk", "clifford", "unitary-file"):
            raise ValueError(f"unknown model {self.model!r}")
        if self.model == "unitary-file" and not self.unitary_file:
            raise ValueError("model 'unitary-file' needs --unitary-file")
        if self.points < 2:
            raise ValueError("points must be at least 2")
        if self.t_start < 0:
            raise ValueError("t_start must be nonnegative")
        if self.t_max and self.t_max <= self.t_start:
            raise ValueError("t_max must exceed t_start")

    @classmethod
    def from_json(cls, path: str, **overrides) -> "ExperimentConfig":
        with open(path) as fh:
            data = json.load(fh)
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)

    def resolved_n_c(self) -> int:
        """Region-C width: q1 alone for the 3-qubit circuit scan, else the
        two-qubit block {q1, q2} that the backflow tables are built on."""
        if self.n_c:
            return self.n_c
        if self.model == "clifford":
            return 1
        return min(2, max(1, self.n - 1))

    def resolved_t_max(self) -> float:
        if self.t_max:
            return self.t_max
        if self.model == "syk":
            return SYK_T_MAX / self.j_coupling
        if self.model == "clifford":
            return float(np.pi)
        return SPIN_T_MAX / max(abs(self.g), 1e-12)

    def to_dict(self) -> Dict:
        return asdict(self)


@dataclass
class ScanRow:
    t: float
    minus_i3: float
    minus_t3: float
    i_ac: float
    i_ad: float
    tsw_c: float
    tsw_d: float
    tsw_tot: float
    status: str = "ok"

    def csv_fields(self) -> List[str]:
        nums = [self.t, self.minus_i3, self.minus_t3, self.i_ac, self.i_ad,
                self.tsw_c, self.tsw_d, self.tsw_tot]
        return [f"{v:.12g}" for v in nums] + [self.status]


@dataclass
class ScramblingReport:
    config: ExperimentConfig
    rows: List[ScanRow] = field(default_factory=list)

    @property
    def times(self) -> np.ndarray:
        return np.array([r.t for r in self.rows])

    def column(self, name: str) -> np.ndarray:
        attr = {"minusI3": "minus_i3", "minusT3": "minus_t3", "IAC": "i_ac",
                "IAD": "i_ad", "TSWC": "tsw_c", "TSWD": "tsw_d",
                "TSWtot": "tsw_tot", "t": "t"}[name]
        return np.array([getattr(r, attr) for r in self.rows])

    def to_csv(self, path: Optional[str] = None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(CSV_HEADER)
        for row in self.rows:
            writer.writerow(row.csv_fields())
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text

    @classmethod
    def from_csv(cls, path: str,
                 config: Optional[ExperimentConfig] = None) -> "ScramblingReport":
        rows = []
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if header != CSV_HEADER:
                raise ValueError(f"unexpected CSV header {header}")
            for rec in reader:
                vals = [float(v) for v in rec[:8]]
                rows.append(ScanRow(*vals, status=rec[8]))
        return cls(config or ExperimentConfig(), rows)


def model_propagator(config: ExperimentConfig) -> Propagator:
    if config.model == "ising":
        return Propagator(build_ising(config.n, config.g, config.h).matrix())
    if config.model == "syk":
        return Propagator(build_syk(config.n, config.j_coupling,
                                    config.seed).matrix())
    raise ValueError(f"model {config.model!r} has no Hamiltonian propagator")


def load_unitary_file(path: str) -> np.ndarray:
    """Load and validate a unitary from a plain-text matrix file.

    One matrix row per line, entries whitespace separated in complex
    literal form such as ``0.5-0.5j``.  The dimension must be a power of
    two and the matrix unitary to 1e-8.
    """
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append([complex(tok) for tok in line.split()])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ValueError(f"{path}: rows have inconsistent lengths")
    mat = np.array(rows, dtype=complex)
    if mat.shape[0] != mat.shape[1]:
        raise ValueError(f"{path}: expected a square matrix, got {mat.shape}")
    dim = mat.shape[0]
    if dim & (dim - 1) or dim < 2:
        raise ValueError(f"{path}: dimension {dim} is not a power of two")
    if not np.allclose(mat @ mat.conj().T, np.eye(dim), atol=1e-8):
        raise ValueError(f"{path}: matrix is not unitary")
    return mat


def save_unitary_file(path: str, unitary: np.ndarray) -> None:
    """Write a unitary in the plain-text format load_unitary_file reads."""
    with open(path, "w") as fh:
        for row in np.asarray(unitary, dtype=complex):
            fh.write(" ".join(f"{z.real:.17g}{z.imag:+.17g}j" for z in row))
            fh.write("\n")


def _witness_row(t: float, unitary: np.ndarray, partition: PartitionSpec,
                 ms: MeasurementSet, gap_tol: float,
                 accel: Optional[ScanAccelerator]) -> ScanRow:
    tmi = tripartite_mutual_information(build_choi(unitary), partition)
    try:
        rec = minus_t3(unitary, partition.region_c, partition.region_d,
                       measurements=ms, gap_tol=gap_tol, accelerator=accel)
    except Exception as exc:
        nan = float("nan")
        return ScanRow(t, tmi.minus_i3, nan, tmi.i_ac, tmi.i_ad,
                       nan, nan, nan, f"failed: {exc}")
    return ScanRow(t, tmi.minus_i3, rec.minus_t3, tmi.i_ac, tmi.i_ad,
                   rec.tsw_c, rec.tsw_d, rec.tsw_total, rec.status)


_worker_state: Dict = {}


def _scan_worker_init(config: ExperimentConfig, evals, evecs):
    prop = Propagator.__new__(Propagator)
    prop.evals = evals
    prop.evecs = evecs
    prop.dim = evals.shape[0]
    _worker_state["prop"] = prop
    _worker_state["config"] = config


def _scan_worker_chunk(times: Sequence[float]) -> List[ScanRow]:
    config: ExperimentConfig = _worker_state["config"]
    prop: Propagator = _worker_state["prop"]
    partition = PartitionSpec.leading(config.n, config.resolved_n_c())
    ms = MeasurementSet.pauli(config.measurements)
    accel = BoundTrackingAccelerator() if config.accelerate else None
    return [_witness_row(t, prop.unitary(t), partition, ms,
                         config.sdp_gap_tol, accel) for t in times]


def run_scan(config: ExperimentConfig, progress=None) -> ScramblingReport:
    """Evaluate both witnesses over the configured time grid.

    With ``jobs > 1`` the grid is split into contiguous chunks handled by
    worker processes; each chunk keeps its own warm-start state so results
    do not depend on scheduling.
    """
    if config.model == "clifford":
        return run_clifford_scan(config)
    if config.model == "unitary-file":
        unitary = load_unitary_file(config.unitary_file)
        n = unitary.shape[0].bit_length() - 1
        config = replace(config, n=n)
        partition = PartitionSpec.leading(n, config.resolved_n_c())
        ms = MeasurementSet.pauli(config.measurements)
        row = _witness_row(0.0, unitary, partition, ms, config.sdp_gap_tol, None)
        return ScramblingReport(config, [row])

    prop = model_propagator(config)
    times = np.linspace(config.t_start, config.resolved_t_max(), config.points)
    partition = PartitionSpec.leading(config.n, config.resolved_n_c())
    ms = MeasurementSet.pauli(config.measurements)

    jobs = max(1, config.jobs)
    if jobs == 1:
        accel = BoundTrackingAccelerator() if config.accelerate else None
        rows = []
        for i, t in enumerate(times):
            rows.append(_witness_row(float(t), prop.unitary(float(t)),
                                     partition, ms, config.sdp_gap_tol, accel))
            if progress is not None:
                progress(i + 1, len(times))
        return ScramblingReport(config, rows)

    chunks = np.array_split(times, jobs)
    rows = []
    with ProcessPoolExecutor(
            max_workers=jobs, initializer=_scan_worker_init,
            initargs=(config, prop.evals, prop.evecs)) as pool:
        for part in pool.map(_scan_worker_chunk,
                             [list(map(float, c)) for c in chunks]):
            rows.extend(part)
    return ScramblingReport(config, rows)


def run_clifford_scan(config: Optional[ExperimentConfig] = None,
                      points: Optional[int] = None) -> ScramblingReport:
    """Witness curves of the interpolating Clifford circuit over theta.

    The ``t`` column holds theta in [0, t_max] (default one period, pi).
    """
    config = config or ExperimentConfig(model="clifford", n=3, points=25)
    config = replace(config, model="clifford", n=3)   # circuit is 3 qubits
    if points is not None:
        config = replace(config, points=points)
    thetas = np.linspace(config.t_start, config.resolved_t_max(), config.points)
    partition = PartitionSpec.leading(3, config.resolved_n_c())
    ms = MeasurementSet.pauli(config.measurements)
    rows = [_witness_row(float(th), clifford_scan_unitary(float(th)),
                         partition, ms, config.sdp_gap_tol, None)
            for th in thetas]
    return ScramblingReport(config, rows)


@dataclass
class BackflowResult:
    quantity: str
    t_end: float
    value: float
    n_steps: int
    dt: float
    units: str


def backflow_integral(report: ScramblingReport, quantity: str = "I3",
                      t_end: Optional[float] = None,
                      units: str = "nats") -> BackflowResult:
    """Accumulated revivals of a scrambling quantity up to ``t_end``.

    The integrand is the *negative* of the stored witness column: the
    witness grows under scrambling, so its negative Q in {I3, T3}
    decreases, and every positive increment of Q on the grid is a
    backflow event.  The total is sum_k max(Q(t_{k+1}) - Q(t_k), 0).

    The stored mutual-information columns are base-2, but the customary
    normalization for the accumulated I3 backflow is natural log, so the
    default converts by ln 2; pass ``units="bits"`` to keep base-2.  The
    weight-based T3 backflow is dimensionless and ignores ``units``.
    """
    col = {"I3": "minusI3", "T3": "minusT3"}.get(quantity.upper())
    if col is None:
        raise ValueError(f"quantity must be I3 or T3, got {quantity!r}")
    if units not in ("nats", "bits"):
        raise ValueError(f"units must be 'nats' or 'bits', got {units!r}")
    times = report.times
    if times.size < 2:
        raise ValueError("backflow needs at least two grid points")
    if t_end is None:
        t_end = float(times[-1])
    if t_end < times[0] - 1e-12 or t_end > times[-1] + 1e-12:
        raise ValueError(f"t_end {t_end} outside scan grid "
                         f"[{times[0]}, {times[-1]}]")
    q = -report.column(col)
    mask = times <= t_end + 1e-12
    q = q[mask]
    jumps = np.diff(q)
    value = float(np.clip(jumps, 0.0, None).sum())
    if quantity.upper() == "I3":
        if units == "nats":
            value *= float(np.log(2.0))
    else:
        units = "unitless"
    kept = times[mask]
    dt = float(kept[1] - kept[0]) if kept.size > 1 else 0.0
    return BackflowResult(quantity.upper(), float(t_end), value,
                          int(jumps.size), dt, units)


@dataclass
class SweepEntry:
    n: int
    n_c: int
    backflow_i3: float
    backflow_t3: float
    report: ScramblingReport


def size_sweep(family: str, sizes: Sequence[int] = (3, 4, 5, 8),
               partition=None, points: int = 200, seed: int = 0,
               jobs: int = 1, sdp_gap_tol: float = 1e-7,
               progress=None) -> List[SweepEntry]:
    """Backflow of both witnesses across system sizes for one family.

    ``family`` is "integrable" (transverse-field chain), "chaotic"
    (mixed-field chain) or "syk".  ``partition`` picks region C per size:
    None keeps the two-qubit block {q1, q2} that the published backflow
    tables correspond to, an int fixes one width for every size, and a
    mapping gives a width per size (e.g. {3: 1, 4: 2, 5: 3, 8: 4}).
    """
    presets = {
        "integrable": dict(model="ising", g=1.0, h=0.0),
        "chaotic": dict(model="ising", g=1.0, h=0.5),
        "syk": dict(model="syk"),
    }
    if family not in presets:
        raise ValueError(f"unknown family {family!r}")
    entries = []
    for n in sizes:
        if partition is None:
            n_c = 0
        elif isinstance(partition, dict):
            n_c = partition[n]
        else:
            n_c = int(partition)
        config = ExperimentConfig(n=n, n_c=n_c, points=points, seed=seed,
                                  jobs=jobs, sdp_gap_tol=sdp_gap_tol,
                                  **presets[family])
        report = run_scan(config, progress=progress)
        entries.append(SweepEntry(
            n, config.resolved_n_c(),
            backflow_integral(report, "I3").value,
            backflow_integral(report, "T3").value,
            report))
    return entries
