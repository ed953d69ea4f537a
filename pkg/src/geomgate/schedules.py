"""Analytic pulse programs for driven two- and three-level systems.

A schedule is a contiguous chain of segments, each carrying closed-form
Rabi and detuning waveforms plus one constant drive phase. Two families
are provided:

* Loop programs built from half-cosine ramps. The drive vector starts at
  a pole or on the equator of the control sphere, sweeps a closed circuit
  in two or three strokes, and returns. The phase jumps between strokes
  set the enclosed solid angle. ``U1`` starts at the north pole
  (detuning-dominated), ``U2`` starts on the equator (drive-dominated).
* A single Gaussian envelope on a three-level Lambda linkage, used for
  the nonadiabatic holonomic comparison gate.

Units throughout: angular frequencies in rad/us, times in us, hbar = 1.
All waveform evaluation accepts scalars or numpy arrays and is exact at
segment joins (the right-hand segment owns the joint time).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Union

import numpy as np

from .errors import ParameterError, RangeError

__all__ = [
    "TwoLevelParams",
    "HolonomicParams",
    "ConstantWaveform",
    "CosineWaveform",
    "GaussianWaveform",
    "Waveform",
    "Segment",
    "PulseSchedule",
    "ControlSample",
    "PROGRAMS",
    "build_u1_schedule",
    "build_u2_schedule",
    "build_adiabatic_schedule",
    "build_holonomic_schedule",
    "sample",
]

PROGRAMS = ("U1", "U2", "ADIABATIC_U1", "ADIABATIC_U2", "HOLONOMIC")


def _as_float_array(t):
    arr = np.asarray(t, dtype=float)
    return arr, arr.ndim == 0


def _match_scalar(value, scalar: bool):
    return float(value) if scalar else value


@dataclass(frozen=True)
class TwoLevelParams:
    """Scales of a two-level loop program.

    omega0 : peak-to-half Rabi scale, rad/us (ramps run 0 to 2*omega0)
    delta0 : detuning scale, rad/us (ramps run 0 to +/-2*delta0)
    tau    : single-stroke duration, us
    """

    omega0: float
    delta0: float
    tau: float

    def __post_init__(self):
        for name in ("omega0", "delta0", "tau"):
            if not getattr(self, name) > 0.0:
                raise ParameterError(f"{name} must be positive, got {getattr(self, name)!r}")


@dataclass(frozen=True)
class HolonomicParams:
    """Gaussian envelope for the three-level holonomic gate.

    The canonical construction ties the width to the peak so the full-line
    pulse area is exactly 2*pi: sigma = 2*sqrt(pi)/omega_nh, and the window
    spans total_time = 4*sigma centered on the peak.
    """

    omega_nh: float
    sigma: float
    total_time: float

    def __post_init__(self):
        for name in ("omega_nh", "sigma", "total_time"):
            if not getattr(self, name) > 0.0:
                raise ParameterError(f"{name} must be positive, got {getattr(self, name)!r}")

    @classmethod
    def from_peak(cls, omega_nh: float) -> "HolonomicParams":
        if not omega_nh > 0.0:
            raise ParameterError(f"omega_nh must be positive, got {omega_nh!r}")
        sigma = 2.0 * math.sqrt(math.pi) / omega_nh
        return cls(omega_nh=omega_nh, sigma=sigma, total_time=4.0 * sigma)


@dataclass(frozen=True)
class ConstantWaveform:
    """Flat level, zero slope."""

    level: float

    def evaluate(self, t):
        arr, scalar = _as_float_array(t)
        return _match_scalar(np.full_like(arr, self.level), scalar)

    def derivative(self, t):
        arr, scalar = _as_float_array(t)
        return _match_scalar(np.zeros_like(arr), scalar)


@dataclass(frozen=True)
class CosineWaveform:
    """Half-cosine ramp: base + amp * cos(pi * (t - t0) / width)."""

    base: float
    amp: float
    t0: float
    width: float

    def _angle(self, t):
        return np.pi * (t - self.t0) / self.width

    def evaluate(self, t):
        arr, scalar = _as_float_array(t)
        return _match_scalar(self.base + self.amp * np.cos(self._angle(arr)), scalar)

    def derivative(self, t):
        arr, scalar = _as_float_array(t)
        rate = self.amp * np.pi / self.width
        return _match_scalar(-rate * np.sin(self._angle(arr)), scalar)


@dataclass(frozen=True)
class GaussianWaveform:
    """peak * exp(-((t - center)/sigma)^2)."""

    peak: float
    center: float
    sigma: float

    def evaluate(self, t):
        arr, scalar = _as_float_array(t)
        u = (arr - self.center) / self.sigma
        return _match_scalar(self.peak * np.exp(-u * u), scalar)

    def derivative(self, t):
        arr, scalar = _as_float_array(t)
        u = (arr - self.center) / self.sigma
        return _match_scalar(-2.0 * u / self.sigma * self.peak * np.exp(-u * u), scalar)


Waveform = Union[ConstantWaveform, CosineWaveform, GaussianWaveform]


@dataclass(frozen=True)
class ControlSample:
    """Instantaneous control fields, optionally with the recast drive.

    The bare fields (omega_r, delta, phi) always carry values. The
    counterdiabatic trio (omega_c, omega_s, phi_s) is filled by
    :func:`geomgate.hamiltonians.superadiabatic_fields` and is None on
    samples taken straight from a schedule.
    """

    t: object
    omega_r: object
    delta: object
    phi: object
    omega_c: object = None
    omega_s: object = None
    phi_s: object = None


@dataclass(frozen=True)
class Segment:
    """One stroke: waveforms on [t_start, t_end] under a constant phase."""

    t_start: float
    t_end: float
    rabi: Waveform
    detuning: Waveform
    phase: float

    def __post_init__(self):
        if not self.t_end > self.t_start:
            raise ParameterError(
                f"segment must have positive duration, got [{self.t_start}, {self.t_end}]"
            )

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start


@dataclass(frozen=True)
class PulseSchedule:
    """Contiguous segments plus a program tag identifying the construction."""

    segments: tuple[Segment, ...]
    program_tag: str

    def __post_init__(self):
        if not self.segments:
            raise ParameterError("schedule needs at least one segment")
        if self.program_tag not in PROGRAMS:
            raise ParameterError(f"unknown program tag {self.program_tag!r}")
        for left, right in zip(self.segments, self.segments[1:]):
            if left.t_end != right.t_start:
                raise ParameterError(
                    f"segments must be contiguous: {left.t_end!r} != {right.t_start!r}"
                )
        if self.segments[0].t_start != 0.0:
            raise ParameterError("schedule must start at t = 0")

    @property
    def total_time(self) -> float:
        return self.segments[-1].t_end

    @property
    def boundaries(self) -> np.ndarray:
        """All segment edges, including 0 and total_time."""
        return np.array([self.segments[0].t_start] + [s.t_end for s in self.segments])

    def _segment_indices(self, t: np.ndarray) -> np.ndarray:
        starts = np.array([s.t_start for s in self.segments])
        idx = np.searchsorted(starts, t, side="right") - 1
        return np.clip(idx, 0, len(self.segments) - 1)

    def _check_range(self, t: np.ndarray) -> None:
        total = self.total_time
        slack = 1e-12 * max(1.0, total)
        if np.any(t < -slack) or np.any(t > total + slack):
            bad = t[(t < -slack) | (t > total + slack)]
            raise RangeError(
                f"time {np.atleast_1d(bad).ravel()[0]!r} outside schedule [0, {total!r}]"
            )

    def sample_fields(self, t):
        """(omega_r, delta, phi) at time(s) t, right-continuous at joins."""
        omega_r, delta, phi, _, _ = self._evaluate(t, derivatives=False)
        return omega_r, delta, phi

    def sample_with_derivatives(self, t):
        """(omega_r, delta, phi, d_omega_r, d_delta) at time(s) t."""
        return self._evaluate(t, derivatives=True)

    def _evaluate(self, t, derivatives: bool):
        arr, scalar = _as_float_array(t)
        flat = np.atleast_1d(arr)
        self._check_range(flat)
        idx = self._segment_indices(flat)
        omega_r = np.empty_like(flat)
        delta = np.empty_like(flat)
        phi = np.empty_like(flat)
        d_omega_r = np.empty_like(flat) if derivatives else None
        d_delta = np.empty_like(flat) if derivatives else None
        for k, seg in enumerate(self.segments):
            mask = idx == k
            if not mask.any():
                continue
            ts = flat[mask]
            omega_r[mask] = seg.rabi.evaluate(ts)
            delta[mask] = seg.detuning.evaluate(ts)
            phi[mask] = seg.phase
            if derivatives:
                d_omega_r[mask] = seg.rabi.derivative(ts)
                d_delta[mask] = seg.detuning.derivative(ts)
        if scalar:
            out = (float(omega_r[0]), float(delta[0]), float(phi[0]))
            if derivatives:
                out += (float(d_omega_r[0]), float(d_delta[0]))
            else:
                out += (None, None)
            return out
        if derivatives:
            return omega_r, delta, phi, d_omega_r, d_delta
        return omega_r, delta, phi, None, None


def sample(schedule: PulseSchedule, t) -> ControlSample:
    """Bare control fields at time(s) t.

    Boundary times resolve to the later segment (right limit); times
    outside [0, total_time] raise RangeError.
    """
    omega_r, delta, phi = schedule.sample_fields(t)
    return ControlSample(t=t, omega_r=omega_r, delta=delta, phi=phi)


def _rising(omega0: float, t0: float, tau: float) -> CosineWaveform:
    # 0 at t0, 2*omega0 at t0 + tau
    return CosineWaveform(base=omega0, amp=-omega0, t0=t0, width=tau)


def _falling(omega0: float, t0: float, tau: float) -> CosineWaveform:
    # 2*omega0 at t0, 0 at t0 + tau
    return CosineWaveform(base=omega0, amp=omega0, t0=t0, width=tau)


def _det_upper(delta0: float, t0: float, tau: float) -> CosineWaveform:
    # +2*delta0 at t0, 0 at t0 + tau
    return CosineWaveform(base=delta0, amp=delta0, t0=t0, width=tau)


def _det_lower(delta0: float, t0: float, tau: float) -> CosineWaveform:
    # 0 at t0, -2*delta0 at t0 + tau
    return CosineWaveform(base=-delta0, amp=delta0, t0=t0, width=tau)


def build_u1_schedule(p: TwoLevelParams, phi1: float, phi2: float) -> PulseSchedule:
    """Pole-to-pole loop: down the Bloch sphere under phi1, back up under phi2.

    Four strokes of duration tau. The Rabi drive rises 0 to 2*omega0 and
    falls back once per half; the detuning sweeps +2*delta0 to -2*delta0,
    jumping back to +2*delta0 at the half-way point together with the
    phase jump phi1 -> phi2.
    """
    w0, d0, tau = p.omega0, p.delta0, p.tau
    segments = (
        Segment(0.0, tau, _rising(w0, 0.0, tau), _det_upper(d0, 0.0, tau), phi1),
        Segment(tau, 2 * tau, _falling(w0, tau, tau), _det_lower(d0, tau, tau), phi1),
        Segment(2 * tau, 3 * tau, _rising(w0, 2 * tau, tau), _det_upper(d0, 2 * tau, tau), phi2),
        Segment(3 * tau, 4 * tau, _falling(w0, 3 * tau, tau), _det_lower(d0, 3 * tau, tau), phi2),
    )
    return PulseSchedule(segments=segments, program_tag="U1")


def build_u2_schedule(p: TwoLevelParams, phi1p: float, phi2p: float) -> PulseSchedule:
    """Equator-started loop: south under phi1p, over the pole under phi2p, home under phi1p.

    Starts and ends drive-dominated (omega_r = 2*omega0, delta = 0). Phase
    pattern over the four strokes is (phi1p, phi2p, phi2p, phi1p).
    """
    w0, d0, tau = p.omega0, p.delta0, p.tau
    segments = (
        Segment(0.0, tau, _falling(w0, 0.0, tau), _det_lower(d0, 0.0, tau), phi1p),
        Segment(tau, 2 * tau, _rising(w0, tau, tau), _det_upper(d0, tau, tau), phi2p),
        Segment(2 * tau, 3 * tau, _falling(w0, 2 * tau, tau), _det_lower(d0, 2 * tau, tau), phi2p),
        Segment(3 * tau, 4 * tau, _rising(w0, 3 * tau, tau), _det_upper(d0, 3 * tau, tau), phi1p),
    )
    return PulseSchedule(segments=segments, program_tag="U2")


def build_adiabatic_schedule(
    p: TwoLevelParams,
    program: str,
    slowdown: float,
    phi1: float = 0.0,
    phi2: float = 0.0,
) -> PulseSchedule:
    """Same waveform shapes with every stroke stretched by `slowdown` >= 1.

    The returned schedule is tagged ADIABATIC_<program>, which makes the
    Hamiltonian layer drive with the bare fields instead of the recast
    superadiabatic ones.
    """
    if not slowdown >= 1.0:
        raise ParameterError(f"slowdown must be >= 1, got {slowdown!r}")
    if program not in ("U1", "U2"):
        raise ParameterError(f"program must be 'U1' or 'U2', got {program!r}")
    stretched = replace(p, tau=p.tau * slowdown)
    builder = build_u1_schedule if program == "U1" else build_u2_schedule
    base = builder(stretched, phi1, phi2)
    return PulseSchedule(segments=base.segments, program_tag=f"ADIABATIC_{program}")


def build_holonomic_schedule(h: HolonomicParams) -> PulseSchedule:
    """Single Gaussian stroke, zero detuning, zero phase, tagged HOLONOMIC."""
    envelope = GaussianWaveform(peak=h.omega_nh, center=h.total_time / 2.0, sigma=h.sigma)
    seg = Segment(0.0, h.total_time, envelope, ConstantWaveform(0.0), 0.0)
    return PulseSchedule(segments=(seg,), program_tag="HOLONOMIC")
