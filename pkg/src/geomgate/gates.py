"""Gate synthesis: ideal targets, realized propagators, and their fidelity.

Three families are realized on a common footing:

* SGQG: the four-stroke loop driven with the superadiabatic resultant, so
  the eigenstates are followed exactly at any speed.
* ADIABATIC: the same loop stretched by a slowdown factor and driven bare,
  which only approximates eigenstate following.
* HOLONOMIC: a Gaussian 2*pi pulse on a three-level Lambda linkage whose
  bright-state rotation imprints a pi phase inside the qubit subspace.

The ideal single-qubit target is parameterized by the loop orientation chi
and the geometric phase gamma:

    U(chi, gamma) = [[cos g + i cos x sin g, i sin x sin g],
                     [i sin x sin g, cos g - i cos x sin g]]

which the loop programs reach by setting the stroke phase jump to
phi2 - phi1 = pi - gamma. The two-qubit conditional gate acts as U on the
spectator-up manifold and as the identity on spectator-down, scored after
removing the known spectator-conditioned frame rotation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapabilityError, CyclicityError, InputError, ParameterError
from .hamiltonians import (
    HyperfineParams,
    assemble_lambda,
    assemble_two_level,
    eigenframe,
    superadiabatic_fields,
)
from .phases import PhaseReport, phase_report, wrap_angle
from .propagator import PropagatorConfig, evolve_state, evolve_unitary, unitarity_defect
from .schedules import (
    HolonomicParams,
    PulseSchedule,
    TwoLevelParams,
    build_adiabatic_schedule,
    build_holonomic_schedule,
    build_u1_schedule,
    build_u2_schedule,
    sample,
)

__all__ = [
    "FAMILIES",
    "ErrorModel",
    "IdealGate",
    "GateResult",
    "ideal_single",
    "ideal_twoqubit",
    "intrinsic_fidelity",
    "two_level_drive",
    "lambda_drive",
    "realize_single",
    "realize_twoqubit",
]

FAMILIES = ("SGQG", "ADIABATIC", "HOLONOMIC")

GAMMA_CLASS_TOL = 1e-9


@dataclass(frozen=True)
class ErrorModel:
    """Static control miscalibration applied to a drive.

    eta scales the applied drive amplitude (multiplicatively by default,
    or additively as eta * omega_ref when eta_mode = "additive").
    epsilon adds a static detuning epsilon * omega_ref. omega_ref is the
    family's amplitude scale: the derived peak drive for the loop
    programs, the Gaussian peak for the holonomic gate.
    """

    eta: float = 0.0
    epsilon: float = 0.0
    omega_ref: float = 0.0
    eta_mode: str = "multiplicative"

    def __post_init__(self):
        if self.omega_ref < 0.0:
            raise ParameterError(f"omega_ref must be non-negative, got {self.omega_ref!r}")
        if self.eta_mode not in ("multiplicative", "additive"):
            raise ParameterError(f"unknown eta_mode {self.eta_mode!r}")

    def applied_amplitude(self, nominal):
        if self.eta_mode == "multiplicative":
            return np.asarray(nominal) * (1.0 + self.eta)
        return np.asarray(nominal) + self.eta * self.omega_ref

    @property
    def static_detuning(self) -> float:
        return self.epsilon * self.omega_ref


@dataclass(frozen=True)
class IdealGate:
    """Target gate labeled by loop orientation chi and phase gamma."""

    chi: float
    gamma: float
    dim: int = 2

    def __post_init__(self):
        if self.dim not in (2, 4):
            raise ParameterError(f"dim must be 2 or 4, got {self.dim!r}")

    def matrix(self) -> np.ndarray:
        if self.dim == 2:
            return ideal_single(self.chi, self.gamma)
        return ideal_twoqubit(self.chi, self.gamma)


@dataclass
class GateResult:
    """Realized propagator next to its target, with diagnostics."""

    realized: np.ndarray
    ideal: np.ndarray
    fidelity: float
    family: str
    program: str
    gamma_target: float
    timing: float
    phase_report: PhaseReport | None = None
    unitarity_defect: float = 0.0
    metadata: dict = field(default_factory=dict)


def ideal_single(chi: float, gamma: float) -> np.ndarray:
    cg, sg = math.cos(gamma), math.sin(gamma)
    cx, sx = math.cos(chi), math.sin(chi)
    return np.array(
        [[cg + 1j * cx * sg, 1j * sx * sg],
         [1j * sx * sg, cg - 1j * cx * sg]]
    )


def ideal_twoqubit(chi: float, gamma: float) -> np.ndarray:
    """Identity on the spectator-down pair, U(chi, gamma) on spectator-up."""
    u = np.eye(4, dtype=complex)
    u[2:, 2:] = ideal_single(chi, gamma)
    return u


def intrinsic_fidelity(u: np.ndarray, u0: np.ndarray, dim: int | None = None) -> float:
    """|Tr(u u0^dag)| / dim; insensitive to global phase, tolerant of leakage."""
    u = np.asarray(u, dtype=complex)
    u0 = np.asarray(u0, dtype=complex)
    if u.shape != u0.shape or u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise InputError(f"matching square matrices required, got {u.shape} and {u0.shape}")
    if dim is None:
        dim = u0.shape[0]
    elif dim != u0.shape[0]:
        raise InputError(f"dim {dim} does not match matrix size {u0.shape[0]}")
    return float(abs(np.trace(u @ np.conj(u0.T))) / dim)


def _program_chi(program: str) -> float:
    if program == "U1":
        return 0.0
    if program == "U2":
        return math.pi / 2.0
    raise ParameterError(f"program must be 'U1' or 'U2', got {program!r}")


def _loop_schedule(
    family: str,
    program: str,
    gamma_target: float,
    p: TwoLevelParams,
    slowdown: float,
    phi_base: float,
) -> PulseSchedule:
    phi1 = phi_base
    phi2 = phi_base + math.pi - gamma_target
    if family == "ADIABATIC":
        return build_adiabatic_schedule(p, program, slowdown, phi1, phi2)
    builder = build_u1_schedule if program == "U1" else build_u2_schedule
    return builder(p, phi1, phi2)


def two_level_drive(schedule: PulseSchedule, err: ErrorModel, extra_detuning: float = 0.0):
    """Hamiltonian builder for a driven two-level schedule with injected errors."""
    bare = schedule.program_tag.startswith("ADIABATIC")

    def hbuilder(t):
        f = superadiabatic_fields(schedule, t)
        if bare:
            amp = f.omega_r
            phase = np.asarray(f.phi)
        else:
            amp = f.omega_s
            phase = np.asarray(f.phi) + np.asarray(f.phi_s)
        amp = err.applied_amplitude(amp)
        delta = np.asarray(f.delta) + err.static_detuning + extra_detuning
        return assemble_two_level(delta, amp, phase)

    return hbuilder


def lambda_drive(schedule: PulseSchedule, err: ErrorModel, extra_e: float = 0.0):
    def hbuilder(t):
        envelope, _, _ = schedule.sample_fields(t)
        amp = err.applied_amplitude(envelope)
        return assemble_lambda(amp, 0.0, 0.0, err.static_detuning + extra_e)

    return hbuilder


def _check_holonomic_gamma(gamma_target: float) -> None:
    if abs(abs(wrap_angle(gamma_target)) - math.pi / 2.0) > GAMMA_CLASS_TOL:
        raise CapabilityError(
            "holonomic family realizes only the pi-phase gate class (gamma = pi/2); "
            f"got gamma = {gamma_target!r}"
        )


def _holonomic_schedule(err: ErrorModel) -> PulseSchedule:
    if not err.omega_ref > 0.0:
        raise ParameterError("holonomic realization needs err.omega_ref = peak rate > 0")
    return build_holonomic_schedule(HolonomicParams.from_peak(err.omega_ref))


def realize_single(
    family: str,
    program: str,
    gamma_target: float,
    p: TwoLevelParams,
    err: ErrorModel,
    *,
    slowdown: float = 10.0,
    cfg: PropagatorConfig | None = None,
    with_phases: bool = False,
    phi_base: float = 0.0,
) -> GateResult:
    """Synthesize one single-qubit gate and score it against its target.

    For the loop families the stroke phases are set from gamma_target and
    the propagator is compared with U(chi, gamma_target), chi fixed by the
    program. The holonomic family realizes only the pi-phase class; its
    3x3 propagator is projected onto the qubit pair before scoring, so
    leakage shows up directly as lost fidelity.
    """
    if family not in FAMILIES:
        raise ParameterError(f"unknown family {family!r}")
    cfg = cfg or PropagatorConfig()

    if family == "HOLONOMIC":
        _check_holonomic_gamma(gamma_target)
        schedule = _holonomic_schedule(err)
        hbuilder = lambda_drive(schedule, err)
        u_full = evolve_unitary(hbuilder, schedule.total_time, 3, cfg, schedule.boundaries)
        realized = u_full[:2, :2]
        ideal = ideal_single(0.0, gamma_target)
        return GateResult(
            realized=realized,
            ideal=ideal,
            fidelity=intrinsic_fidelity(realized, ideal),
            family=family,
            program=program,
            gamma_target=gamma_target,
            timing=schedule.total_time,
            unitarity_defect=unitarity_defect(u_full),
            metadata={"omega_nh": err.omega_ref, "projected_from_levels": 3},
        )

    schedule = _loop_schedule(family, program, gamma_target, p, slowdown, phi_base)
    hbuilder = two_level_drive(schedule, err)
    u = evolve_unitary(hbuilder, schedule.total_time, 2, cfg, schedule.boundaries)
    ideal = ideal_single(_program_chi(program), gamma_target)
    report = None
    metadata = {"slowdown": slowdown} if family == "ADIABATIC" else {}
    if with_phases:
        psi0 = eigenframe(sample(schedule, 0.0)).lambda_plus
        traj = evolve_state(hbuilder, psi0, schedule.total_time, cfg, schedule.boundaries)
        try:
            report = phase_report(traj)
        except CyclicityError as exc:
            metadata["cyclicity_defect"] = exc.defect
    return GateResult(
        realized=u,
        ideal=ideal,
        fidelity=intrinsic_fidelity(u, ideal),
        family=family,
        program=program,
        gamma_target=gamma_target,
        timing=schedule.total_time,
        phase_report=report,
        unitarity_defect=unitarity_defect(u),
        metadata=metadata,
    )


def _spectator_closure(a_shift: float, total_time: float) -> np.ndarray:
    """Frame rotation undoing the static spectator shift a_shift over the run."""
    half = 0.5 * a_shift * total_time
    return np.diag([np.exp(1j * half), np.exp(-1j * half)])


def realize_twoqubit(
    family: str,
    program: str,
    gamma_target: float,
    p: TwoLevelParams,
    hf: HyperfineParams,
    err: ErrorModel,
    *,
    slowdown: float = 10.0,
    cfg: PropagatorConfig | None = None,
    phi_base: float = 0.0,
) -> GateResult:
    """Conditional gate: drive tuned to the spectator-up manifold.

    The spectator-down block sees the same drive detuned by the hyperfine
    shift, is propagated separately (the blocks never couple), and is
    expressed in the frame co-rotating with that shift before scoring, so
    an infinitely large shift leaves it as the identity. Fidelity is taken
    against the four-level conditional target.
    """
    if family not in FAMILIES:
        raise ParameterError(f"unknown family {family!r}")
    cfg = cfg or PropagatorConfig()
    shift = hf.shift_sign * hf.a_hf
    chi = _program_chi(program)
    ideal = ideal_twoqubit(chi, gamma_target)

    if family == "HOLONOMIC":
        _check_holonomic_gamma(gamma_target)
        schedule = _holonomic_schedule(err)
        total = schedule.total_time
        u_up = evolve_unitary(lambda_drive(schedule, err), total, 3, cfg, schedule.boundaries)
        u_down = evolve_unitary(
            lambda_drive(schedule, err, extra_e=shift), total, 3, cfg, schedule.boundaries
        )
        realized = np.zeros((4, 4), dtype=complex)
        realized[:2, :2] = u_down[:2, :2]
        realized[2:, 2:] = u_up[:2, :2]
        defect = max(unitarity_defect(u_up), unitarity_defect(u_down))
        metadata = {
            "omega_nh": err.omega_ref,
            "levels": 6,
            "projected_from_levels": 6,
            "a_hf": hf.a_hf,
            "construction": "two Lambda blocks; spectator-down block has the"
            " excited level shifted by a_hf",
        }
    else:
        schedule = _loop_schedule(family, program, gamma_target, p, slowdown, phi_base)
        total = schedule.total_time
        u_up = evolve_unitary(
            two_level_drive(schedule, err), total, 2, cfg, schedule.boundaries
        )
        u_down_raw = evolve_unitary(
            two_level_drive(schedule, err, extra_detuning=shift),
            total, 2, cfg, schedule.boundaries,
        )
        u_down = _spectator_closure(shift, total) @ u_down_raw
        realized = np.zeros((4, 4), dtype=complex)
        realized[:2, :2] = u_down
        realized[2:, 2:] = u_up
        defect = max(unitarity_defect(u_up), unitarity_defect(u_down))
        metadata = {"levels": 4, "a_hf": hf.a_hf}
        if family == "ADIABATIC":
            metadata["slowdown"] = slowdown

    return GateResult(
        realized=realized,
        ideal=ideal,
        fidelity=intrinsic_fidelity(realized, ideal),
        family=family,
        program=program,
        gamma_target=gamma_target,
        timing=total,
        unitarity_defect=defect,
        metadata=metadata,
    )
