"""Phase bookkeeping: total, dynamical, geometric, and solid angle.

For a cyclic trajectory the total phase arg<psi(0)|psi(T)> splits into a
dynamical part, minus the time integral of <psi|H|psi>, and a geometric
remainder that depends only on the traced path. For a two-level system the
geometric part equals minus half the solid angle enclosed by the Bloch
path, which this module computes independently by spherical-triangle
triangulation so the two routes can be cross-checked.

A discrete connection is also provided: the geometric phase of a closed
chain of frames is minus the accumulated argument of neighboring overlaps,
including the gauge jumps where the drive phase steps discontinuously.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CyclicityError, InputError, SamplingError
from .hamiltonians import EigenFrame
from .propagator import Trajectory

__all__ = [
    "PhaseReport",
    "wrap_angle",
    "bloch_vector",
    "solid_angle",
    "phase_report",
    "berry_connection",
    "loop_connection_phase",
    "effective_field",
]

CYCLICITY_LIMIT = 1e-4
OVERLAP_FLOOR = 0.99


def wrap_angle(x: float) -> float:
    """Map an angle to (-pi, pi]."""
    y = float((x + np.pi) % (2.0 * np.pi) - np.pi)
    return np.pi if y == -np.pi else y


@dataclass(frozen=True)
class PhaseReport:
    """Decomposition of the phase acquired over one closed loop.

    All phases are reported in (-pi, pi]. cyclicity_defect is
    1 - |<psi(0)|psi(T)>| and solid_angle is the signed area enclosed by
    the Bloch path (NaN when the state is not two-level).
    """

    total_phase: float
    dynamical_phase: float
    geometric_phase: float
    cyclicity_defect: float
    solid_angle: float


def bloch_vector(psi: np.ndarray) -> np.ndarray:
    """Pauli expectation values (x, y, z) of a two-level state."""
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.shape != (2,):
        raise InputError(f"two-level state required, got shape {psi.shape}")
    cross = np.conj(psi[0]) * psi[1]
    return np.array([2.0 * cross.real, 2.0 * cross.imag,
                     abs(psi[0]) ** 2 - abs(psi[1]) ** 2])


def solid_angle(points: np.ndarray) -> float:
    """Signed solid angle enclosed by a closed path on the unit sphere.

    The path is fanned into spherical triangles around the normalized mean
    point and each triangle contributes its signed excess, so the result
    follows the right-hand rule with the outward normal and winding is
    counted. The closing edge from the last point back to the first is
    included automatically.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 3 or pts.shape[0] < 3:
        raise InputError("need an (n, 3) path with n >= 3")
    norms = np.linalg.norm(pts, axis=1)
    if np.any(norms < 1e-12):
        raise InputError("path contains a zero vector")
    pts = pts / norms[:, None]
    pivot = pts.mean(axis=0)
    pivot_norm = np.linalg.norm(pivot)
    pivot = pts[0] if pivot_norm < 1e-9 else pivot / pivot_norm
    a = pivot
    b = pts
    c = np.roll(pts, -1, axis=0)
    triple = np.einsum("i,ni->n", a, np.cross(b, c))
    denom = 1.0 + b @ a + np.einsum("ni,ni->n", b, c) + c @ a
    return float(2.0 * np.sum(np.arctan2(triple, denom)))


def phase_report(traj: Trajectory, hbuilder=None) -> PhaseReport:
    """Split the phase of a closed trajectory into its parts.

    Raises CyclicityError when the final state fails to return to the
    initial ray within CYCLICITY_LIMIT. The hbuilder argument is accepted
    for callers that construct trajectories without an accumulated energy
    integral; trajectories from evolve_state always carry one.
    """
    psi0 = traj.states[0]
    psiT = traj.states[-1]
    overlap = complex(np.vdot(psi0, psiT))
    defect = 1.0 - abs(overlap)
    if defect >= CYCLICITY_LIMIT:
        raise CyclicityError(defect)
    total = wrap_angle(float(np.angle(overlap)))
    dyn_raw = -float(traj.dyn_phase_integral[-1])
    geometric = wrap_angle(total - dyn_raw)
    omega = float("nan")
    if traj.bloch is not None:
        omega = solid_angle(traj.bloch)
    return PhaseReport(
        total_phase=total,
        dynamical_phase=wrap_angle(dyn_raw),
        geometric_phase=geometric,
        cyclicity_defect=float(defect),
        solid_angle=omega,
    )


def _branch_vectors(frames, branch) -> np.ndarray:
    if branch in (1, "+", "plus"):
        return np.array([f.lambda_plus for f in frames])
    if branch in (-1, "-", "minus"):
        return np.array([f.lambda_minus for f in frames])
    raise InputError(f"branch must be +1 or -1, got {branch!r}")


def berry_connection(frames, branch) -> float:
    """Connection integral along one eigenbranch of a frame path.

    Discretized as minus the sum of overlap arguments between neighbors.
    Raises SamplingError if any neighboring overlap magnitude drops below
    OVERLAP_FLOOR, which means the frames were sampled too coarsely.
    """
    vecs = _branch_vectors(frames, branch)
    if vecs.shape[0] < 2:
        raise InputError("need at least two frames")
    overlaps = np.einsum("ni,ni->n", np.conj(vecs[:-1]), vecs[1:])
    if np.min(np.abs(overlaps)) < OVERLAP_FLOOR:
        raise SamplingError(
            f"minimum neighbor overlap {np.min(np.abs(overlaps)):.4f} below {OVERLAP_FLOOR}"
        )
    return float(-np.sum(np.angle(overlaps)))


def loop_connection_phase(segments) -> float:
    """Geometric phase of a closed chain of frame paths.

    segments is a sequence of (frames, branch) pairs, ordered in time.
    Within each pair the overlap density is checked; across pair joins and
    around the final closure the overlaps are taken as-is, which is where
    gauge jumps from discontinuous drive phases enter the bookkeeping.
    Returns the accumulated phase wrapped to (-pi, pi].
    """
    chains = []
    total = 0.0
    for frames, branch in segments:
        vecs = _branch_vectors(frames, branch)
        if vecs.shape[0] >= 2:
            overlaps = np.einsum("ni,ni->n", np.conj(vecs[:-1]), vecs[1:])
            if np.min(np.abs(overlaps)) < OVERLAP_FLOOR:
                raise SamplingError("frame path sampled too coarsely inside a segment")
            total += float(np.sum(np.angle(overlaps)))
        chains.append(vecs)
    for left, right in zip(chains, chains[1:]):
        total += float(np.angle(np.vdot(left[-1], right[0])))
    total += float(np.angle(np.vdot(chains[-1][-1], chains[0][0])))
    return wrap_angle(-total)


def effective_field(h: np.ndarray) -> np.ndarray:
    """Pauli components (Bx, By, Bz) of a traceless 2x2 Hamiltonian h = B.sigma/2."""
    h = np.asarray(h, dtype=complex)
    if h.shape != (2, 2):
        raise InputError(f"need a (2, 2) matrix, got {h.shape}")
    scale = max(1.0, float(np.max(np.abs(h))))
    if abs(h[0, 0] + h[1, 1]) > 1e-9 * scale:
        raise InputError(f"matrix is not traceless: trace {h[0, 0] + h[1, 1]!r}")
    return np.array([2.0 * h[1, 0].real, 2.0 * h[1, 0].imag, 2.0 * h[0, 0].real])
