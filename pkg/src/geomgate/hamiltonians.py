"""Hamiltonian assembly for bare, superadiabatic, Lambda, and two-qubit drives.

The two-level rotating-frame Hamiltonian is

    H0 = (1/2) [[delta,                omega_r * exp(-i*phi)],
                [omega_r * exp(+i*phi), -delta             ]]

with instantaneous eigenvalues +/- Omega/2, Omega = sqrt(delta^2 + omega_r^2),
and mixing angle theta = atan2(omega_r, delta). The superadiabatic recast adds
the counterdiabatic field omega_c = d(theta)/dt in closed form and re-expresses
the total drive as a single resultant of amplitude omega_s and phase offset
phi_s, so the driven state follows the instantaneous eigenstates exactly.

All assembly functions broadcast over time: scalar t gives a (d, d) matrix,
an (n,) array gives an (n, d, d) stack.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapabilityError, DegenerateGapError, ParameterError
from .schedules import ControlSample, PulseSchedule, sample

__all__ = [
    "ControlSample",
    "EigenFrame",
    "HyperfineParams",
    "GAP_FLOOR",
    "h0",
    "eigenframe",
    "eigenframes",
    "superadiabatic_fields",
    "hs",
    "h_lambda",
    "h_twoqubit",
    "assemble_two_level",
    "assemble_lambda",
]

GAP_FLOOR = 1e-9


@dataclass(frozen=True)
class EigenFrame:
    """Instantaneous eigenbasis of a two-level control sample.

    lambda_plus  : upper eigenvector, energy +omega_gap/2
    lambda_minus : lower eigenvector, energy -omega_gap/2
    theta        : mixing angle in [0, pi]
    """

    theta: float
    lambda_plus: np.ndarray
    lambda_minus: np.ndarray
    e_plus: float
    e_minus: float
    omega_gap: float


@dataclass(frozen=True)
class HyperfineParams:
    """Static spectator-conditioned detuning shift.

    a_hf       : shift magnitude, rad/us
    levels     : 4 for two two-level blocks, 6 for two Lambda blocks
    shift_sign : sign of the shift applied to the spectator-down block
    """

    a_hf: float
    levels: int = 4
    shift_sign: int = 1

    def __post_init__(self):
        if self.a_hf < 0.0:
            raise ParameterError(f"a_hf must be non-negative, got {self.a_hf!r}")
        if self.levels not in (4, 6):
            raise ParameterError(f"levels must be 4 or 6, got {self.levels!r}")
        if self.shift_sign not in (1, -1):
            raise ParameterError(f"shift_sign must be +1 or -1, got {self.shift_sign!r}")


def assemble_two_level(delta, amplitude, phase) -> np.ndarray:
    """(1/2) [[delta, amp e^{-i phase}], [amp e^{+i phase}, -delta]], broadcast over inputs."""
    delta = np.asarray(delta, dtype=float)
    amplitude = np.asarray(amplitude, dtype=float)
    phase = np.asarray(phase, dtype=float)
    shape = np.broadcast_shapes(delta.shape, amplitude.shape, phase.shape)
    h = np.zeros(shape + (2, 2), dtype=complex)
    off = 0.5 * amplitude * np.exp(-1j * phase)
    h[..., 0, 0] = 0.5 * delta
    h[..., 1, 1] = -0.5 * delta
    h[..., 0, 1] = off
    h[..., 1, 0] = np.conj(off)
    return h


def assemble_lambda(envelope, theta_l: float, phi_l: float, delta_e) -> np.ndarray:
    """Lambda linkage on basis (|0>, |1>, |e>).

    Couplings are half the envelope, split between the two legs by the
    dark-state angle theta_l: the |0> leg carries sin(theta_l/2) e^{i phi_l},
    the |1> leg carries -cos(theta_l/2). delta_e sits on the |e> diagonal.
    """
    envelope = np.asarray(envelope, dtype=float)
    delta_e = np.asarray(delta_e, dtype=float)
    shape = np.broadcast_shapes(envelope.shape, delta_e.shape)
    h = np.zeros(shape + (3, 3), dtype=complex)
    half = 0.5 * envelope
    c0 = half * np.sin(theta_l / 2.0) * np.exp(1j * phi_l)
    c1 = -half * np.cos(theta_l / 2.0)
    h[..., 2, 0] = c0
    h[..., 0, 2] = np.conj(c0)
    h[..., 2, 1] = c1
    h[..., 1, 2] = np.conj(c1)
    h[..., 2, 2] = delta_e
    return h


def h0(c: ControlSample) -> np.ndarray:
    """Bare rotating-frame Hamiltonian of a control sample."""
    return assemble_two_level(c.delta, c.omega_r, c.phi)


def eigenframe(c: ControlSample) -> EigenFrame:
    """Instantaneous eigenbasis of h0(c), in the half-angle gauge.

    lambda_plus = (cos(theta/2) e^{-i phi/2}, sin(theta/2) e^{+i phi/2})
    lambda_minus = (-sin(theta/2) e^{-i phi/2}, cos(theta/2) e^{+i phi/2})

    Raises DegenerateGapError when the gap is below GAP_FLOOR.
    """
    omega_r = float(np.asarray(c.omega_r))
    delta = float(np.asarray(c.delta))
    phi = float(np.asarray(c.phi))
    gap = float(np.hypot(omega_r, delta))
    if gap < GAP_FLOOR:
        raise DegenerateGapError(f"gap {gap:.3e} below floor {GAP_FLOOR:.0e}")
    theta = float(np.arctan2(omega_r, delta))
    half = theta / 2.0
    gauge_m = np.exp(-0.5j * phi)
    gauge_p = np.exp(+0.5j * phi)
    plus = np.array([np.cos(half) * gauge_m, np.sin(half) * gauge_p])
    minus = np.array([-np.sin(half) * gauge_m, np.cos(half) * gauge_p])
    return EigenFrame(
        theta=theta,
        lambda_plus=plus,
        lambda_minus=minus,
        e_plus=+0.5 * gap,
        e_minus=-0.5 * gap,
        omega_gap=gap,
    )


def eigenframes(schedule: PulseSchedule, times) -> list[EigenFrame]:
    """Eigenframe at each requested time (right limit at segment joins)."""
    return [eigenframe(sample(schedule, float(t))) for t in np.atleast_1d(times)]


def superadiabatic_fields(schedule: PulseSchedule, t) -> ControlSample:
    """Control sample extended with the counterdiabatic trio.

    omega_c = (d_omega_r * delta - omega_r * d_delta) / (omega_r^2 + delta^2)
    omega_s = hypot(omega_r, omega_c)
    phi_s   = atan2(omega_c, omega_r), in (-pi, pi]

    Evaluation is exact (analytic waveform derivatives) and right-continuous
    at segment joins. Raises DegenerateGapError if the bare gap closes.
    """
    omega_r, delta, phi, d_omega_r, d_delta = schedule.sample_with_derivatives(t)
    omr = np.asarray(omega_r, dtype=float)
    det = np.asarray(delta, dtype=float)
    domr = np.asarray(d_omega_r, dtype=float)
    ddet = np.asarray(d_delta, dtype=float)
    gap_sq = omr * omr + det * det
    if np.any(gap_sq < GAP_FLOOR * GAP_FLOOR):
        raise DegenerateGapError("bare gap closes somewhere on the requested times")
    omega_c = (domr * det - omr * ddet) / gap_sq
    omega_s = np.hypot(omr, omega_c)
    phi_s = np.arctan2(omega_c, omr)
    scalar = np.asarray(t, dtype=float).ndim == 0
    if scalar:
        return ControlSample(
            t=float(t), omega_r=float(omr), delta=float(det), phi=float(phi),
            omega_c=float(omega_c), omega_s=float(omega_s), phi_s=float(phi_s),
        )
    return ControlSample(
        t=np.asarray(t, dtype=float), omega_r=omr, delta=det, phi=np.asarray(phi, dtype=float),
        omega_c=omega_c, omega_s=omega_s, phi_s=phi_s,
    )


def hs(schedule: PulseSchedule, t) -> np.ndarray:
    """Driving Hamiltonian actually applied for a two-level schedule.

    Superadiabatic programs replace the bare drive by the resultant
    (omega_s, phi + phi_s); ADIABATIC_* programs return h0 unchanged, so the
    slowed loop is driven with no correction. At segment boundaries the
    right-hand segment is used, and since the construction pins omega_r to 0
    or a shared value at every join, hs agrees with h0 there.
    """
    if schedule.program_tag == "HOLONOMIC":
        raise CapabilityError("hs is defined for two-level programs; use h_lambda")
    f = superadiabatic_fields(schedule, t)
    if schedule.program_tag.startswith("ADIABATIC"):
        return assemble_two_level(f.delta, f.omega_r, f.phi)
    return assemble_two_level(f.delta, f.omega_s, np.asarray(f.phi) + np.asarray(f.phi_s))


def h_lambda(
    schedule: PulseSchedule,
    t,
    theta_l: float = 0.0,
    phi_l: float = 0.0,
    delta_e: float = 0.0,
) -> np.ndarray:
    """Three-level Lambda Hamiltonian driven by the schedule's envelope."""
    if schedule.program_tag != "HOLONOMIC":
        raise CapabilityError("h_lambda needs a HOLONOMIC schedule")
    envelope, _, _ = schedule.sample_fields(t)
    return assemble_lambda(envelope, theta_l, phi_l, delta_e)


def h_twoqubit(schedule: PulseSchedule, t, hf: HyperfineParams) -> np.ndarray:
    """Block-diagonal drive conditioned on a spectator spin.

    levels = 4: basis (|0 down>, |1 down>, |0 up>, |1 up>). The up block is
    hs(schedule, t); the down block sees the same drive with the detuning
    shifted by shift_sign * a_hf. Off-diagonal blocks are exactly zero.

    levels = 6: two Lambda blocks, basis (|0 down>, |1 down>, |e down>,
    |0 up>, |1 up>, |e up>), with the shift on the down |e> diagonal.
    """
    if hf.levels == 6:
        if schedule.program_tag != "HOLONOMIC":
            raise ParameterError("levels=6 requires a HOLONOMIC schedule")
        up = h_lambda(schedule, t)
        down = h_lambda(schedule, t, delta_e=hf.shift_sign * hf.a_hf)
        dim = 6
    else:
        if schedule.program_tag == "HOLONOMIC":
            raise ParameterError("levels=4 requires a two-level schedule")
        f = superadiabatic_fields(schedule, t)
        if schedule.program_tag.startswith("ADIABATIC"):
            amp, phase = f.omega_r, np.asarray(f.phi)
        else:
            amp, phase = f.omega_s, np.asarray(f.phi) + np.asarray(f.phi_s)
        shift = hf.shift_sign * hf.a_hf
        up = assemble_two_level(f.delta, amp, phase)
        down = assemble_two_level(np.asarray(f.delta) + shift, amp, phase)
        dim = 4
    out = np.zeros(up.shape[:-2] + (dim, dim), dtype=complex)
    half = dim // 2
    out[..., :half, :half] = down
    out[..., half:, half:] = up
    return out
