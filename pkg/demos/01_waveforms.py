"""Tour of the drive programs and the counterdiabatic recast.

Builds the two closed-loop programs plus the slowed and holonomic
baselines, samples the control fields at the instants where their shape
is easiest to recognize, and derives the peak recast amplitude that every
error sweep uses as its normalization scale.
"""

import math

import numpy as np

from geomgate import (
    HolonomicParams,
    TwoLevelParams,
    build_adiabatic_schedule,
    build_holonomic_schedule,
    build_u1_schedule,
    build_u2_schedule,
    sample,
    superadiabatic_fields,
)
from geomgate.sweeps import HOLONOMIC_PEAK_DIVISOR, omega_sm_report

p = TwoLevelParams(omega0=4.0 * math.pi, delta0=6.0, tau=0.16)
phi1, phi2 = 0.0, math.pi / 2.0

print("== bare loop waveforms ==")
for name, builder in (("U1", build_u1_schedule), ("U2", build_u2_schedule)):
    s = builder(p, phi1, phi2)
    print(f"{name}: {len(s.segments)} strokes over {s.total_time:.2f} us")
    for t in np.linspace(0.0, s.total_time, 9):
        c = sample(s, min(t, s.total_time))
        print(f"  t={t:5.2f}  omega_r={c.omega_r:8.3f}  delta={c.delta:+8.3f}"
              f"  phi={c.phi:+.3f}")

print("\n== counterdiabatic recast (U1) ==")
s = build_u1_schedule(p, phi1, phi2)
ts = np.linspace(0.0, s.total_time, 9)
f = superadiabatic_fields(s, ts)
for k in range(ts.shape[0]):
    print(f"  t={f.t[k]:5.2f}  omega_s={f.omega_s[k]:8.3f}"
          f"  phi + phi_s={f.phi[k] + f.phi_s[k]:+.3f}")
print("the correction vanishes at stroke boundaries, so omega_s = omega_r there")

print("\n== derived peak drive ==")
report = omega_sm_report(p, "U1")
print(f"omega_sm = {report.omega_sm:.6f} rad/us at t = {report.t_at_max:.3f} us")
print(f"hardware bound 2*omega0 = {report.bound:.6f} rad/us;"
      f" satisfied: {report.satisfied}")

print("\n== equal-time baselines ==")
slowed = build_adiabatic_schedule(p, "U1", 10.0, phi1, phi2)
print(f"adiabatic x10: same waveform stretched to {slowed.total_time:.2f} us")
omega_nh = report.omega_sm / HOLONOMIC_PEAK_DIVISOR
h = HolonomicParams.from_peak(omega_nh)
holo = build_holonomic_schedule(h)
print(f"holonomic: Gaussian peak {omega_nh:.3f} rad/us, sigma {h.sigma:.4f} us,"
      f" window {holo.total_time:.4f} us")
print(f"the window tracks the 4*tau = {4 * p.tau:.2f} us loop to within 2%")
