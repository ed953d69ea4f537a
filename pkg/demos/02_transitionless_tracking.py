"""Exact eigenstate tracking at finite speed.

Propagates the upper instantaneous eigenstate through one U1 loop twice:
once under the recast drive that carries the counterdiabatic correction,
once under the bare fields at the same speed. The first run stays pinned
to the eigenbasis at machine precision; the second leaks heavily, which
is the whole argument for the recast.
"""

import math

import numpy as np

from geomgate import (
    ErrorModel,
    TwoLevelParams,
    build_adiabatic_schedule,
    build_u1_schedule,
    eigenframe,
    evolve_state,
    sample,
    superadiabatic_fields,
)
from geomgate.gates import two_level_drive

p = TwoLevelParams(omega0=4.0 * math.pi, delta0=6.0, tau=0.16)
recast = build_u1_schedule(p, 0.0, math.pi / 2.0)
bare = build_adiabatic_schedule(p, "U1", 1.0, 0.0, math.pi / 2.0)


def branch_populations(schedule):
    psi0 = eigenframe(sample(schedule, 0.0)).lambda_plus
    traj = evolve_state(two_level_drive(schedule, ErrorModel()), psi0,
                        schedule.total_time, breakpoints=schedule.boundaries)
    fields = superadiabatic_fields(schedule, traj.times)
    theta = np.arctan2(fields.omega_r, fields.delta)
    half_phi = 0.5 * np.asarray(fields.phi)
    plus = np.stack([np.cos(theta / 2.0) * np.exp(-1j * half_phi),
                     np.sin(theta / 2.0) * np.exp(1j * half_phi)], axis=1)
    p_plus = np.abs(np.einsum("ij,ij->i", plus.conj(), traj.states)) ** 2
    return traj.times, p_plus


for label, schedule in (("recast drive", recast), ("bare drive  ", bare)):
    times, p_plus = branch_populations(schedule)
    other = np.minimum(p_plus, 1.0 - p_plus)
    print(f"{label}: max population off the tracked branch ="
          f" {other.max():.2e}")
    marks = np.searchsorted(times, [0.16, 0.32, 0.48, 0.64])
    trace = "  ".join(f"t={times[min(k, len(times) - 1)]:.2f}:"
                      f" {p_plus[min(k, len(times) - 1)]:.6f}"
                      for k in marks)
    print(f"  upper-branch population  {trace}")

print()
print("note the tracked population swaps from 1 to 0 at t = 0.32 us: the")
print("detuning jump there relabels the eigenbranches while the physical")
print("state continues smoothly through the south pole")
