"""Fixed-step midpoint-exponential propagation.

Each step applies exp(-i * H(t_mid) * dt) exactly: analytically for 2x2
Hermitian matrices, by batched eigendecomposition for larger dimensions.
Steps never straddle a supplied breakpoint, so waveform discontinuities
are never averaged across. The scheme is second order in dt and every
step matrix is exactly unitary up to roundoff.

Hamiltonian builders are callables mapping an (n,) time array to an
(n, d, d) stack (a scalar-only builder that returns (d, d) also works,
it is just slower).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AccuracyError, InputError, ParameterError

__all__ = [
    "PropagatorConfig",
    "Trajectory",
    "expm_hermitian",
    "evolve_state",
    "evolve_unitary",
    "convergence_check",
    "evolve_unitary_converged",
    "DT_FLOOR",
]

DT_FLOOR = 1e-7


@dataclass(frozen=True)
class PropagatorConfig:
    """Step-size policy and accuracy guards.

    dt_max = None uses steps_per_segment uniform steps on each segment;
    a finite dt_max caps the step everywhere instead. The method field is
    fixed; it exists so artifacts can record how they were produced.
    """

    dt_max: float | None = None
    tolerance: float = 1e-9
    steps_per_segment: int = 4000
    method: str = "midpoint-exponential"

    def __post_init__(self):
        if self.dt_max is not None and not self.dt_max > 0.0:
            raise ParameterError(f"dt_max must be positive, got {self.dt_max!r}")
        if not self.tolerance > 0.0:
            raise ParameterError(f"tolerance must be positive, got {self.tolerance!r}")
        if self.steps_per_segment < 1:
            raise ParameterError("steps_per_segment must be at least 1")
        if self.method != "midpoint-exponential":
            raise ParameterError(f"unsupported method {self.method!r}")


@dataclass
class Trajectory:
    """Sampled state history.

    dyn_phase_integral holds the running integral of <psi|H|psi>; the
    accumulated dynamical phase at time t is minus its value there. bloch
    is the Bloch vector path for two-level states, None otherwise.
    """

    times: np.ndarray
    states: np.ndarray
    dyn_phase_integral: np.ndarray
    bloch: np.ndarray | None = None
    norm_defect: float = 0.0


def expm_hermitian(h: np.ndarray, dt: float) -> np.ndarray:
    """exp(-i * h * dt) for Hermitian h, shape (..., d, d).

    2x2 inputs use the closed form through the Pauli decomposition; larger
    dimensions go through np.linalg.eigh, batched over leading axes.
    """
    h = np.asarray(h, dtype=complex)
    d = h.shape[-1]
    if h.shape[-2] != d:
        raise InputError(f"square matrices required, got shape {h.shape}")
    if d == 2:
        trace_half = 0.5 * (h[..., 0, 0] + h[..., 1, 1]).real
        bx = 2.0 * h[..., 0, 1].real
        by = -2.0 * h[..., 0, 1].imag
        bz = (h[..., 0, 0] - h[..., 1, 1]).real
        bnorm = np.sqrt(bx * bx + by * by + bz * bz)
        angle = 0.5 * bnorm * dt
        cos_a = np.cos(angle)
        # sin(angle)/bnorm with the bnorm -> 0 limit dt/2
        with np.errstate(invalid="ignore", divide="ignore"):
            scale = np.where(bnorm > 0.0, np.sin(angle) / np.where(bnorm > 0.0, bnorm, 1.0), 0.5 * dt)
        phase = np.exp(-1j * trace_half * dt)
        out = np.empty(h.shape, dtype=complex)
        out[..., 0, 0] = phase * (cos_a - 1j * scale * bz)
        out[..., 1, 1] = phase * (cos_a + 1j * scale * bz)
        out[..., 0, 1] = phase * (-1j * scale * (bx - 1j * by))
        out[..., 1, 0] = phase * (-1j * scale * (bx + 1j * by))
        return out
    w, v = np.linalg.eigh(h)
    phases = np.exp(-1j * w * dt)
    return (v * phases[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))


def _normalize_breakpoints(total_time: float, breakpoints) -> np.ndarray:
    edges = {0.0, float(total_time)}
    if breakpoints is not None:
        for b in np.atleast_1d(np.asarray(breakpoints, dtype=float)):
            if 0.0 < b < total_time:
                edges.add(float(b))
    return np.array(sorted(edges))


def _segment_grid(a: float, b: float, cfg: PropagatorConfig) -> np.ndarray:
    if cfg.dt_max is not None:
        n = max(1, math.ceil((b - a) / cfg.dt_max))
    else:
        n = cfg.steps_per_segment
    return np.linspace(a, b, n + 1)


def _hamiltonian_stack(hbuilder, ts: np.ndarray) -> np.ndarray:
    try:
        h = np.asarray(hbuilder(ts), dtype=complex)
    except Exception:
        h = None
    if h is not None and h.ndim == 3 and h.shape[0] == ts.shape[0]:
        return h
    return np.stack([np.asarray(hbuilder(float(t)), dtype=complex) for t in ts])


def evolve_state(
    hbuilder,
    psi0: np.ndarray,
    total_time: float,
    cfg: PropagatorConfig | None = None,
    breakpoints=None,
) -> Trajectory:
    """Propagate a normalized state, recording the full step history.

    The running <psi|H|psi> integral is accumulated by the trapezoid rule
    segment by segment; at each internal breakpoint the left node is
    evaluated one ulp inside the closing segment, so discontinuous
    Hamiltonians contribute their correct one-sided values.
    """
    cfg = cfg or PropagatorConfig()
    if not total_time > 0.0:
        raise ParameterError(f"total_time must be positive, got {total_time!r}")
    psi0 = np.asarray(psi0, dtype=complex).ravel()
    norm = float(np.linalg.norm(psi0))
    if abs(norm - 1.0) > 1e-9:
        raise InputError(f"initial state norm {norm!r} is not 1 within 1e-9")
    dim = psi0.shape[0]

    edges = _normalize_breakpoints(total_time, breakpoints)
    all_times = [np.array([0.0])]
    all_states = [psi0[None, :]]
    all_dyn = [np.array([0.0])]
    psi = psi0
    dyn = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        ts = _segment_grid(float(a), float(b), cfg)
        dt = (b - a) / (ts.shape[0] - 1)
        mids = 0.5 * (ts[:-1] + ts[1:])
        steps = expm_hermitian(_hamiltonian_stack(hbuilder, mids), dt)
        seg_states = np.empty((ts.shape[0], dim), dtype=complex)
        seg_states[0] = psi
        for k in range(steps.shape[0]):
            psi = steps[k] @ psi
            seg_states[k + 1] = psi
        # node Hamiltonians: last node pulled one ulp left so the closing
        # segment's own fields are used at the joint
        node_ts = ts.copy()
        node_ts[-1] = np.nextafter(node_ts[-1], node_ts[0])
        h_nodes = _hamiltonian_stack(hbuilder, node_ts)
        energies = np.einsum("ni,nij,nj->n", np.conj(seg_states), h_nodes, seg_states).real
        increments = 0.5 * dt * (energies[:-1] + energies[1:])
        seg_dyn = dyn + np.concatenate([[0.0], np.cumsum(increments)])
        dyn = float(seg_dyn[-1])
        all_times.append(ts[1:])
        all_states.append(seg_states[1:])
        all_dyn.append(seg_dyn[1:])

    times = np.concatenate(all_times)
    states = np.concatenate(all_states)
    dyn_integral = np.concatenate(all_dyn)
    norms = np.linalg.norm(states, axis=1)
    norm_defect = float(np.max(np.abs(norms - 1.0)))
    if norm_defect > cfg.tolerance:
        raise AccuracyError(f"norm drift {norm_defect:.3e} exceeds tolerance {cfg.tolerance:.1e}")
    bloch = None
    if dim == 2:
        c0, c1 = states[:, 0], states[:, 1]
        cross = np.conj(c0) * c1
        bloch = np.column_stack([2.0 * cross.real, 2.0 * cross.imag,
                                 np.abs(c0) ** 2 - np.abs(c1) ** 2])
    return Trajectory(times=times, states=states, dyn_phase_integral=dyn_integral,
                      bloch=bloch, norm_defect=norm_defect)


def evolve_unitary(
    hbuilder,
    total_time: float,
    dim: int,
    cfg: PropagatorConfig | None = None,
    breakpoints=None,
) -> np.ndarray:
    """Full propagator over [0, total_time].

    Step matrices are combined by pairwise tree reduction, which keeps the
    roundoff growth mild for long products. Raises AccuracyError if the
    result fails unitarity at the configured tolerance.
    """
    cfg = cfg or PropagatorConfig()
    if not total_time > 0.0:
        raise ParameterError(f"total_time must be positive, got {total_time!r}")
    edges = _normalize_breakpoints(total_time, breakpoints)
    stacks = []
    for a, b in zip(edges[:-1], edges[1:]):
        ts = _segment_grid(float(a), float(b), cfg)
        dt = (b - a) / (ts.shape[0] - 1)
        mids = 0.5 * (ts[:-1] + ts[1:])
        stacks.append(expm_hermitian(_hamiltonian_stack(hbuilder, mids), dt))
    u = _ordered_product(np.concatenate(stacks))
    if u.shape != (dim, dim):
        raise InputError(f"builder produced dimension {u.shape[-1]}, expected {dim}")
    defect = unitarity_defect(u)
    if defect > cfg.tolerance:
        raise AccuracyError(f"unitarity defect {defect:.3e} exceeds tolerance {cfg.tolerance:.1e}")
    return u


def _ordered_product(mats: np.ndarray) -> np.ndarray:
    """Time-ordered product mats[-1] @ ... @ mats[0] by pairwise reduction."""
    m = mats
    while m.shape[0] > 1:
        if m.shape[0] % 2:
            paired = m[1:-1:2] @ m[0:-1:2]
            m = np.concatenate([paired, m[-1:]])
        else:
            m = m[1::2] @ m[0::2]
    return m[0]


def unitarity_defect(u: np.ndarray) -> float:
    """max |U^dag U - I|."""
    u = np.asarray(u)
    gram = np.conj(u.T) @ u
    return float(np.max(np.abs(gram - np.eye(u.shape[0]))))


def convergence_check(u_coarse: np.ndarray, u_fine: np.ndarray) -> float:
    """Operator-norm distance between two propagator estimates."""
    if u_coarse.shape != u_fine.shape:
        raise InputError(f"shape mismatch {u_coarse.shape} vs {u_fine.shape}")
    return float(np.linalg.norm(u_coarse - u_fine, ord=2))


def evolve_unitary_converged(
    hbuilder,
    total_time: float,
    dim: int,
    cfg: PropagatorConfig | None = None,
    breakpoints=None,
    max_halvings: int = 12,
):
    """Halve the step until successive propagators agree within tolerance.

    Returns (u, estimate, cfg_used). Raises AccuracyError if the step would
    fall below DT_FLOOR before converging.
    """
    cfg = cfg or PropagatorConfig()
    current = cfg
    u_prev = evolve_unitary(hbuilder, total_time, dim, current, breakpoints)
    for _ in range(max_halvings):
        edges = _normalize_breakpoints(total_time, breakpoints)
        shortest = float(np.min(np.diff(edges)))
        if current.dt_max is not None:
            next_cfg = PropagatorConfig(dt_max=current.dt_max / 2.0,
                                        tolerance=current.tolerance,
                                        steps_per_segment=current.steps_per_segment)
            next_dt = next_cfg.dt_max
        else:
            next_cfg = PropagatorConfig(dt_max=None, tolerance=current.tolerance,
                                        steps_per_segment=current.steps_per_segment * 2)
            next_dt = shortest / next_cfg.steps_per_segment
        if next_dt < DT_FLOOR:
            raise AccuracyError(
                f"step underflow: {next_dt:.3e} us below floor {DT_FLOOR:.0e} before convergence"
            )
        u_next = evolve_unitary(hbuilder, total_time, dim, next_cfg, breakpoints)
        estimate = convergence_check(u_prev, u_next)
        if estimate < current.tolerance:
            return u_next, estimate, next_cfg
        u_prev, current = u_next, next_cfg
    raise AccuracyError(f"no convergence after {max_halvings} halvings")
