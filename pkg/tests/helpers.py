"""Small constructions shared by the test modules."""

import numpy as np

from qscramble.channels import (PartitionSpec, build_choi,
                                tripartite_mutual_information)
from qscramble.experiments import (ExperimentConfig, ScanRow,
                                   ScramblingReport, model_propagator)

I2 = np.eye(2, dtype=complex)
PX = np.array([[0, 1], [1, 0]], dtype=complex)
PY = np.array([[0, -1j], [1j, 0]], dtype=complex)
PZ = np.array([[1, 0], [0, -1]], dtype=complex)


def tmi_report(config: ExperimentConfig) -> ScramblingReport:
    """Mutual-information columns only, no SDP; enough for the I3 backflow."""
    prop = model_propagator(config)
    part = PartitionSpec.leading(config.n, config.resolved_n_c())
    times = np.linspace(config.t_start, config.resolved_t_max(), config.points)
    nan = float("nan")
    rows = []
    for t in times:
        tmi = tripartite_mutual_information(build_choi(prop.unitary(float(t))),
                                            part)
        rows.append(ScanRow(float(t), tmi.minus_i3, nan, tmi.i_ac, tmi.i_ad,
                            nan, nan, nan, "tmi-only"))
    return ScramblingReport(config, rows)


def bloch_assemblage(rho, axes):
    """Members tr_A[(E_{a|x} (x) 1) rho] for projective spin measurements.

    ``rho`` is a two-qubit state, ``axes`` a list of Bloch vectors; outcome
    a = 0, 1 corresponds to the +/- eigenspace along the axis.
    """
    members = []
    for v in axes:
        v = np.asarray(v, dtype=float)
        v = v / np.linalg.norm(v)
        op = v[0] * PX + v[1] * PY + v[2] * PZ
        row = []
        for sign in (+1.0, -1.0):
            big = np.kron((I2 + sign * op) / 2.0, I2)
            t = (big @ rho).reshape(2, 2, 2, 2)
            row.append(np.trace(t, axis1=0, axis2=2))
        members.append(row)
    return members


def isotropic_assemblage(eta, axes):
    """sigma_{a|x} = (I/2 + (-1)^a eta P_x / 2) / 2 along Pauli axes.

    Steering a Bell pair through white noise of visibility ``eta``; the
    steerable weight is max(0, (sqrt(m) eta - 1) / (sqrt(m) - 1)) for m
    mutually unbiased axes.
    """
    return [[(I2 / 2 + s * eta * P / 2) / 2 for s in (+1.0, -1.0)]
            for P in axes]


def random_steerable_state(rng, vis_lo=0.7, vis_hi=0.95):
    """Random pure two-qubit state mixed lightly with white noise."""
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi /= np.linalg.norm(psi)
    vis = rng.uniform(vis_lo, vis_hi)
    return vis * np.outer(psi, psi.conj()) + (1 - vis) * np.eye(4) / 4


def random_axes(rng, n_axes=3):
    axes = rng.normal(size=(n_axes, 3))
    return axes / np.linalg.norm(axes, axis=1, keepdims=True)
