import numpy as np
import pytest

from helpers import PX, PZ, isotropic_assemblage
from qscramble.channels import PartitionSpec
from qscramble.models import (build_ising, clifford_scrambler_unitary,
                              haar_random_unitary, random_local_unitary)
from qscramble.qla import Propagator
from qscramble.sdp import NumericalFailure
from qscramble.sdp import problem as sdp_problem
from qscramble.steering import (Assemblage, BoundTrackingAccelerator,
                                MeasurementSet, ScanAccelerator,
                                encode_and_evolve, minus_t3,
                                reduce_assemblage, temporal_steerable_weight,
                                total_steerable_weight,
                                tsw_unitary_invariance_check)


def test_pauli_measurement_set():
    ms = MeasurementSet.pauli("xyz")
    assert ms.n_settings == 3 and ms.n_outcomes == 2
    for row in ms.effects:
        total = sum(row)
        np.testing.assert_allclose(total, np.eye(2), atol=1e-15)
        for e in row:
            assert np.linalg.eigvalsh(e).min() > -1e-12
    assert MeasurementSet.pauli("xz").n_settings == 2
    with pytest.raises(ValueError):
        MeasurementSet.pauli("xq")


def test_encode_and_evolve_shape_and_no_signaling(rng):
    ms = MeasurementSet.pauli()
    asm = encode_and_evolve(haar_random_unitary(8, rng), ms)
    assert asm.labels == ("q1", "q2", "q3")
    assert asm.n_settings == 3 and asm.n_outcomes == 2
    assert asm.dim == 8
    assert asm.no_signaling_defect() < 1e-12
    probs = asm.probabilities()
    np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-12)
    # measure-then-evolve on the maximally mixed register: the marginal
    # stays maximally mixed
    np.testing.assert_allclose(asm.marginal(), np.eye(8) / 8, atol=1e-12)


def test_encode_other_qubit(rng):
    ms = MeasurementSet.pauli()
    asm = encode_and_evolve(haar_random_unitary(4, rng), ms, measured_qubit=2)
    assert asm.no_signaling_defect() < 1e-12
    np.testing.assert_allclose(asm.marginal(), np.eye(4) / 4, atol=1e-12)


def test_reduce_assemblage(rng):
    ms = MeasurementSet.pauli()
    asm = encode_and_evolve(haar_random_unitary(8, rng), ms)
    red = reduce_assemblage(asm, ("q2", "q3"))
    assert red.labels == ("q2", "q3")
    assert red.dim == 4
    assert red.no_signaling_defect() < 1e-12
    # probabilities are preserved by the partial trace
    np.testing.assert_allclose(red.probabilities(), asm.probabilities(),
                               atol=1e-12)
    full = reduce_assemblage(asm, ("q1", "q2", "q3"))
    for row_a, row_b in zip(full.members, asm.members):
        for a, b in zip(row_a, row_b):
            np.testing.assert_allclose(a, b, atol=1e-13)


def test_identity_channel_is_maximally_steerable():
    asm = encode_and_evolve(np.eye(8), MeasurementSet.pauli())
    red = reduce_assemblage(asm, ("q1",))
    assert temporal_steerable_weight(red) == pytest.approx(1.0, abs=1e-9)


def test_classical_assemblage_is_unsteerable():
    # commuting diagonal members admit an exact hidden-state model
    zz = isotropic_assemblage(1.0, [PZ])[0]
    members = [zz, zz, [np.eye(2) / 4, np.eye(2) / 4]]
    asm = Assemblage(members, ("q1",))
    assert temporal_steerable_weight(asm) < 1e-7


def test_full_output_returns_solution():
    asm = encode_and_evolve(np.eye(4), MeasurementSet.pauli())
    w, sol = temporal_steerable_weight(reduce_assemblage(asm, ("q1",)),
                                       full_output=True)
    assert w == sol.steerable_weight
    assert sol.status in ("Optimal", "Reduced")


def test_total_weight_matches_direct_solve(rng):
    ms = MeasurementSet.pauli()
    total = total_steerable_weight(ms)
    assert total == pytest.approx(1.0, abs=1e-9)
    # the shortcut equals the honest full-register solve for a random U
    u = haar_random_unitary(4, rng)
    direct = temporal_steerable_weight(encode_and_evolve(u, ms))
    assert direct == pytest.approx(total, abs=2e-6)


def test_tsw_invariant_under_global_unitary():
    asm = encode_and_evolve(np.eye(4), MeasurementSet.pauli())
    red = reduce_assemblage(asm, ("q1",))
    assert tsw_unitary_invariance_check(red, seeds=(0, 1)) < 1e-6


def test_minus_t3_identity_and_scrambler():
    rec = minus_t3(np.eye(8), ("q1",), ("q2", "q3"))
    assert abs(rec.minus_t3) < 2e-6
    assert rec.tsw_c == pytest.approx(1.0, abs=1e-9)
    assert rec.tsw_d < 2e-6
    assert rec.status == "ok"
    rec = minus_t3(clifford_scrambler_unitary(), ("q1",), ("q2", "q3"))
    assert rec.minus_t3 == pytest.approx(1.0, abs=2e-6)
    assert rec.tsw_c < 2e-6 and rec.tsw_d < 2e-6


def test_minus_t3_identity_decomposition(rng):
    u = haar_random_unitary(8, rng)
    rec = minus_t3(u, ("q1",), ("q2", "q3"))
    assert rec.minus_t3 == pytest.approx(
        rec.tsw_total - rec.tsw_c - rec.tsw_d, abs=1e-15)
    assert 0.0 <= rec.tsw_c <= 1.0 and 0.0 <= rec.tsw_d <= 1.0


def test_local_unitary_cannot_scramble(rng):
    part = PartitionSpec.leading(4, 2)
    u = random_local_unitary(part, rng)
    rec = minus_t3(u, part.region_c, part.region_d)
    assert abs(rec.minus_t3) < 2e-6


def test_scan_accelerator_matches_cold_solves():
    prop = Propagator(build_ising(3, 1.0, 0.5).matrix())
    accel = ScanAccelerator()
    for t in (0.0, 0.4, 0.8, 1.2):
        u = prop.unitary(t)
        warm = minus_t3(u, ("q1", "q2"), ("q3",), accelerator=accel)
        cold = minus_t3(u, ("q1", "q2"), ("q3",))
        assert warm.minus_t3 == pytest.approx(cold.minus_t3, abs=5e-6)
        assert warm.tsw_c == pytest.approx(cold.tsw_c, abs=5e-6)
        assert warm.tsw_d == pytest.approx(cold.tsw_d, abs=5e-6)


def test_bound_tracker_small_dims_defer_to_exact():
    prop = Propagator(build_ising(3, 1.0, 0.5).matrix())
    accel = BoundTrackingAccelerator()
    rec = minus_t3(prop.unitary(0.8), ("q1", "q2"), ("q3",), accelerator=accel)
    assert rec.status in ("ok", "bounded")
    cold = minus_t3(prop.unitary(0.8), ("q1", "q2"), ("q3",))
    assert rec.minus_t3 == pytest.approx(cold.minus_t3, abs=5e-6)


def test_bound_tracker_certifies_large_region():
    # region D has dimension 64: the interior point method is out of its
    # envelope there, but a certified local model pins TSW_D ~ 0
    prop = Propagator(build_ising(8, 1.0, 0.5).matrix())
    rec = minus_t3(prop.unitary(2.0), ("q1", "q2"), tuple(
        f"q{i}" for i in range(3, 9)), accelerator=BoundTrackingAccelerator())
    assert rec.status == "bounded"
    assert 0.0 <= rec.tsw_d <= 1e-6
    assert rec.minus_t3 == pytest.approx(
        rec.tsw_total - rec.tsw_c - rec.tsw_d, abs=1e-15)


def test_schur_cap_raises_clean_failure(rng, monkeypatch):
    ms = MeasurementSet.pauli()
    total_steerable_weight(ms)  # warm the cache before capping
    monkeypatch.setattr(sdp_problem, "_SCHUR_BYTE_CAP", 1.0)
    u = haar_random_unitary(8, rng)
    with pytest.raises(NumericalFailure, match="region C"):
        minus_t3(u, ("q1",), ("q2", "q3"), measurements=ms)
