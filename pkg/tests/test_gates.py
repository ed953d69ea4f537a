"""Gate synthesis: ideal targets, realized propagators, frozen fidelities."""

import math

import numpy as np
import pytest
from scipy.special import erf

from geomgate.errors import CapabilityError, InputError, ParameterError
from geomgate.gates import (
    ErrorModel,
    GateResult,
    IdealGate,
    ideal_single,
    ideal_twoqubit,
    intrinsic_fidelity,
    lambda_drive,
    realize_single,
    realize_twoqubit,
)
from geomgate.hamiltonians import HyperfineParams, eigenframe
from geomgate.phases import wrap_angle
from geomgate.propagator import PropagatorConfig, evolve_unitary
from geomgate.schedules import (
    HolonomicParams,
    TwoLevelParams,
    build_holonomic_schedule,
    build_u1_schedule,
    sample,
)
from geomgate.sweeps import HOLONOMIC_PEAK_DIVISOR

OMEGA0 = 4.0 * math.pi
DELTA0 = 6.0
TAU = 0.16
OMEGA_SM = 8.0 * math.pi  # derived peak of the recast drive for these params
FROZEN_TOL = 5e-6

SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SZ = np.diag([1.0, -1.0]).astype(complex)


@pytest.fixture(scope="module")
def params():
    return TwoLevelParams(omega0=OMEGA0, delta0=DELTA0, tau=TAU)


def test_ideal_single_examples():
    g = 0.813
    np.testing.assert_allclose(
        ideal_single(0.0, g), np.diag([np.exp(1j * g), np.exp(-1j * g)]), atol=1e-15
    )
    np.testing.assert_allclose(
        ideal_single(math.pi / 2.0, math.pi / 2.0), 1j * SX, atol=1e-15
    )
    np.testing.assert_allclose(ideal_single(1.234, 0.0), np.eye(2), atol=1e-15)
    u = ideal_single(0.4, 1.1)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(2), atol=1e-14)


def test_ideal_single_is_rotation_about_tilted_axis():
    chi, g = 0.6, 0.9
    expected = (math.cos(g) * np.eye(2)
                + 1j * math.sin(g) * (math.cos(chi) * SZ + math.sin(chi) * SX))
    np.testing.assert_allclose(ideal_single(chi, g), expected, atol=1e-15)


def test_ideal_twoqubit_block_structure():
    chi, g = 0.3, 1.2
    u = ideal_twoqubit(chi, g)
    assert u.shape == (4, 4)
    np.testing.assert_allclose(u[:2, :2], np.eye(2), atol=1e-15)
    np.testing.assert_allclose(u[2:, 2:], ideal_single(chi, g), atol=1e-15)
    assert np.all(u[:2, 2:] == 0.0) and np.all(u[2:, :2] == 0.0)


def test_ideal_gate_dataclass():
    assert IdealGate(0.0, 0.5).matrix().shape == (2, 2)
    assert IdealGate(0.0, 0.5, dim=4).matrix().shape == (4, 4)
    with pytest.raises(ParameterError):
        IdealGate(0.0, 0.5, dim=3)


def test_intrinsic_fidelity_examples():
    u = ideal_single(0.2, 0.7)
    assert intrinsic_fidelity(u, u) == pytest.approx(1.0, abs=1e-15)
    assert intrinsic_fidelity(np.exp(1j * 0.9) * u, u) == pytest.approx(1.0, abs=1e-14)
    assert intrinsic_fidelity(SX, np.eye(2)) == pytest.approx(0.0, abs=1e-15)
    assert intrinsic_fidelity(np.diag([1.0, 1j]), np.eye(2)) == pytest.approx(
        math.sqrt(2.0) / 2.0, abs=1e-15
    )
    with pytest.raises(InputError):
        intrinsic_fidelity(np.eye(2), np.eye(3))
    with pytest.raises(InputError):
        intrinsic_fidelity(np.eye(2), np.eye(2), dim=4)


def test_error_model_modes():
    m = ErrorModel(eta=0.1, epsilon=0.02, omega_ref=100.0)
    assert m.applied_amplitude(10.0) == pytest.approx(11.0)
    assert m.static_detuning == pytest.approx(2.0)
    a = ErrorModel(eta=0.1, epsilon=0.0, omega_ref=100.0, eta_mode="additive")
    assert a.applied_amplitude(10.0) == pytest.approx(20.0)
    assert a.applied_amplitude(0.0) == pytest.approx(10.0)
    with pytest.raises(ParameterError):
        ErrorModel(eta_mode="divisive")
    with pytest.raises(ParameterError):
        ErrorModel(omega_ref=-1.0)


def test_family_and_program_validation(params):
    with pytest.raises(ParameterError):
        realize_single("SUPERDUPER", "U1", 0.5, params, ErrorModel())
    with pytest.raises(ParameterError):
        realize_single("SGQG", "U3", 0.5, params, ErrorModel())


# ---------------------------------------------------------------- SGQG loops


def test_sgqg_single_qubit_exact(params):
    for program in ("U1", "U2"):
        r = realize_single("SGQG", program, math.pi / 4.0, params, ErrorModel())
        assert r.fidelity >= 1.0 - 1e-6
        assert r.unitarity_defect < 1e-9
        assert r.family == "SGQG" and r.program == program
        assert r.timing == pytest.approx(4.0 * TAU)


def test_gamma_zero_is_identity(params):
    r = realize_single("SGQG", "U1", 0.0, params, ErrorModel())
    np.testing.assert_allclose(r.ideal, np.eye(2), atol=1e-15)
    assert r.fidelity >= 1.0 - 1e-6


def test_realized_gate_eigenphase_property(params):
    """Frame states at t=0 are eigenvectors with eigenphases +/- gamma."""
    for gamma in (0.7, math.pi / 2.0):
        r = realize_single("SGQG", "U1", gamma, params, ErrorModel())
        s = build_u1_schedule(params, 0.0, math.pi - gamma)
        frame = eigenframe(sample(s, 0.0))
        a_plus = np.vdot(frame.lambda_plus, r.realized @ frame.lambda_plus)
        a_minus = np.vdot(frame.lambda_minus, r.realized @ frame.lambda_minus)
        assert abs(a_plus) == pytest.approx(1.0, abs=1e-9)
        assert abs(a_minus) == pytest.approx(1.0, abs=1e-9)
        assert wrap_angle(np.angle(a_plus) - gamma) == pytest.approx(0.0, abs=1e-4)
        assert wrap_angle(np.angle(a_minus) + gamma) == pytest.approx(0.0, abs=1e-4)


def test_program_composition(params):
    """U2(pi/4) after U1(pi/4) composes to the product of the two targets."""
    g = math.pi / 4.0
    r1 = realize_single("SGQG", "U1", g, params, ErrorModel())
    r2 = realize_single("SGQG", "U2", g, params, ErrorModel())
    composed = r2.realized @ r1.realized
    target = ideal_single(math.pi / 2.0, g) @ ideal_single(0.0, g)
    assert intrinsic_fidelity(composed, target) >= 1.0 - 1e-5


def test_with_phases_attaches_report(params):
    r = realize_single("SGQG", "U1", math.pi / 2.0, params, ErrorModel(),
                       with_phases=True)
    assert r.phase_report is not None
    assert wrap_angle(r.phase_report.geometric_phase - math.pi / 2.0) == pytest.approx(
        0.0, abs=1e-3
    )
    assert abs(r.phase_report.dynamical_phase) < 1e-3


def test_zero_error_model_is_bit_identical(params):
    r_plain = realize_single("SGQG", "U1", math.pi / 2.0, params, ErrorModel())
    r_ref = realize_single(
        "SGQG", "U1", math.pi / 2.0, params,
        ErrorModel(eta=0.0, epsilon=0.0, omega_ref=123.456),
    )
    assert np.array_equal(r_plain.realized, r_ref.realized)


def test_error_knobs_degrade_fidelity(params):
    clean = realize_single("SGQG", "U1", math.pi / 2.0, params, ErrorModel())
    detuned = realize_single(
        "SGQG", "U1", math.pi / 2.0, params,
        ErrorModel(epsilon=0.1, omega_ref=OMEGA_SM),
    )
    scaled = realize_single(
        "SGQG", "U1", math.pi / 2.0, params, ErrorModel(eta=0.15)
    )
    assert detuned.fidelity < clean.fidelity - 1e-3
    assert scaled.fidelity < clean.fidelity - 1e-3


# ------------------------------------------------------------ adiabatic loops


def test_adiabatic_frozen_fidelities(params):
    raw = realize_single("ADIABATIC", "U1", math.pi / 2.0, params, ErrorModel(),
                         slowdown=1.0)
    slowed = realize_single("ADIABATIC", "U1", math.pi / 2.0, params, ErrorModel(),
                            slowdown=10.0)
    assert raw.fidelity == pytest.approx(0.8385266, abs=FROZEN_TOL)
    assert slowed.fidelity == pytest.approx(0.99998051, abs=FROZEN_TOL)
    assert slowed.timing == pytest.approx(40.0 * TAU)
    assert slowed.metadata["slowdown"] == 10.0


def test_adiabatic_phase_report_paths(params):
    slowed = realize_single("ADIABATIC", "U1", math.pi / 2.0, params, ErrorModel(),
                            slowdown=10.0, with_phases=True)
    assert slowed.phase_report is not None
    assert wrap_angle(
        slowed.phase_report.geometric_phase - math.pi / 2.0
    ) == pytest.approx(0.0, abs=1e-2)
    raw = realize_single("ADIABATIC", "U1", math.pi / 2.0, params, ErrorModel(),
                         slowdown=1.0, with_phases=True)
    assert raw.phase_report is None
    assert raw.metadata["cyclicity_defect"] > 1e-4


# ------------------------------------------------------------ holonomic gate


def test_holonomic_single_frozen(params):
    err = ErrorModel(omega_ref=OMEGA_SM / HOLONOMIC_PEAK_DIVISOR)
    r = realize_single("HOLONOMIC", "U1", math.pi / 2.0, params, err)
    assert r.fidelity == pytest.approx(0.99994601, abs=FROZEN_TOL)
    assert r.metadata["projected_from_levels"] == 3
    sigma = 2.0 * math.sqrt(math.pi) / err.omega_ref
    assert r.timing == pytest.approx(4.0 * sigma)


def test_holonomic_amplitude_compensation(params):
    """Overdriving by 1/erf(2) - 1 restores the truncated pulse area."""
    eta_star = 1.0 / erf(2.0) - 1.0
    err = ErrorModel(eta=eta_star, omega_ref=OMEGA_SM / HOLONOMIC_PEAK_DIVISOR)
    r = realize_single("HOLONOMIC", "U1", math.pi / 2.0, params, err)
    assert r.fidelity >= 1.0 - 1e-6


def test_holonomic_untruncated_window_is_exact():
    """With the window widened to 16 sigma the gate is the pi-phase gate."""
    omega_nh = 8.0 * math.pi / HOLONOMIC_PEAK_DIVISOR
    sigma = 2.0 * math.sqrt(math.pi) / omega_nh
    h = HolonomicParams(omega_nh=omega_nh, sigma=sigma, total_time=16.0 * sigma)
    schedule = build_holonomic_schedule(h)
    cfg = PropagatorConfig(steps_per_segment=16000)
    u = evolve_unitary(
        lambda_drive(schedule, ErrorModel(omega_ref=omega_nh)),
        schedule.total_time, 3, cfg, schedule.boundaries,
    )
    assert intrinsic_fidelity(u[:2, :2], ideal_single(0.0, math.pi / 2.0)) >= (
        1.0 - 1e-9
    )


def test_holonomic_rejects_other_gamma(params):
    with pytest.raises(CapabilityError):
        realize_single("HOLONOMIC", "U1", math.pi / 4.0, params,
                       ErrorModel(omega_ref=OMEGA_SM))
    hf = HyperfineParams(a_hf=2.0 * math.pi * 127.0, levels=6)
    with pytest.raises(CapabilityError):
        realize_twoqubit("HOLONOMIC", "U1", 1.0, params, hf,
                         ErrorModel(omega_ref=OMEGA_SM))


def test_holonomic_needs_peak_rate(params):
    with pytest.raises(ParameterError):
        realize_single("HOLONOMIC", "U1", math.pi / 2.0, params, ErrorModel())


# ------------------------------------------------------------- two qubits


def test_twoqubit_sgqg_frozen_over_splittings(params):
    frozen = {
        127.0: 0.99852793,
        100.0: 0.99762422,
        50.0: 0.99046317,
        10.0: 0.68838107,
    }
    fids = []
    for mult, expected in frozen.items():
        hf = HyperfineParams(a_hf=2.0 * math.pi * mult, levels=4)
        r = realize_twoqubit("SGQG", "U1", math.pi / 2.0, params, hf, ErrorModel())
        assert r.fidelity == pytest.approx(expected, abs=FROZEN_TOL)
        assert r.metadata["levels"] == 4
        fids.append(r.fidelity)
    assert all(a > b for a, b in zip(fids, fids[1:]))


def test_twoqubit_adiabatic_frozen(params):
    hf = HyperfineParams(a_hf=2.0 * math.pi * 127.0, levels=4)
    base = realize_twoqubit("ADIABATIC", "U1", math.pi / 2.0, params, hf,
                            ErrorModel(), slowdown=10.0)
    under = realize_twoqubit(
        "ADIABATIC", "U1", math.pi / 2.0, params, hf,
        ErrorModel(eta=-0.1, omega_ref=OMEGA_SM), slowdown=10.0,
    )
    over = realize_twoqubit(
        "ADIABATIC", "U1", math.pi / 2.0, params, hf,
        ErrorModel(eta=0.1, omega_ref=OMEGA_SM), slowdown=10.0,
    )
    assert base.fidelity == pytest.approx(0.94466605, abs=FROZEN_TOL)
    assert under.fidelity == pytest.approx(0.96336326, abs=FROZEN_TOL)
    assert over.fidelity == pytest.approx(0.91923463, abs=FROZEN_TOL)
    # asymmetric response: underdriving helps here, overdriving hurts
    assert under.fidelity > base.fidelity > over.fidelity


def test_twoqubit_holonomic_frozen(params):
    hf = HyperfineParams(a_hf=2.0 * math.pi * 127.0, levels=6)
    err = ErrorModel(omega_ref=OMEGA_SM / HOLONOMIC_PEAK_DIVISOR)
    r = realize_twoqubit("HOLONOMIC", "U1", math.pi / 2.0, params, hf, err)
    assert r.fidelity == pytest.approx(0.7015724, abs=FROZEN_TOL)
    assert r.metadata["levels"] == 6
    assert "Lambda" in r.metadata["construction"]


def test_twoqubit_large_splitting_decouples(params):
    hf = HyperfineParams(a_hf=1.0e6, levels=4)
    cfg = PropagatorConfig(steps_per_segment=40000)
    r = realize_twoqubit("SGQG", "U1", math.pi / 2.0, params, hf, ErrorModel(),
                         cfg=cfg)
    assert r.fidelity >= 1.0 - 1e-6
    u_down = r.realized[:2, :2]
    assert abs(np.trace(u_down)) / 2.0 >= 1.0 - 1e-6


def test_twoqubit_zero_splitting_blocks_equal(params):
    hf = HyperfineParams(a_hf=0.0, levels=4)
    r = realize_twoqubit("SGQG", "U1", math.pi / 2.0, params, hf, ErrorModel())
    assert np.array_equal(r.realized[:2, :2], r.realized[2:, 2:])


def test_twoqubit_result_shape_and_defect(params):
    hf = HyperfineParams(a_hf=2.0 * math.pi * 127.0, levels=4)
    r = realize_twoqubit("SGQG", "U1", math.pi / 2.0, params, hf, ErrorModel())
    assert isinstance(r, GateResult)
    assert r.realized.shape == (4, 4)
    assert r.ideal.shape == (4, 4)
    assert r.unitarity_defect < 1e-9
    assert np.all(r.realized[:2, 2:] == 0.0) and np.all(r.realized[2:, :2] == 0.0)
