#!/usr/bin/env python3
"""Experiment design: coupling windows, mass windows, and a magnetic trap.

Fixing the leading-order phase to pi/20 leaves one free parameter.  The
coupling is then boxed in from below by the validity of the quadratic
interaction (and by diffusion) and from above by trap stability, thermal
occupation, and squeezing-amplified deflection; translating through
g = G M/(d^3 omega^2) boxes in the mass.
"""

from sgipair import design
from sgipair.potentials import NVParams, PhysicalParams, to_unitless

D, OMEGA = 30e-6, 0.1

print(f"separation d = {D*1e6:.0f} um, trap frequency omega = {OMEGA} rad/s")
m_min, m_max = design.mass_bounds(D, OMEGA)
print(f"ideal-dynamics mass window:  {m_min:.2e} kg  <  M  <  {m_max:.2e} kg")

m_min_n, m_max_n = design.mass_bounds_noisy(D, OMEGA, s_ff=1e-64, s=1e-4, n_p=10.0)
print(f"with force noise sqrt(S_FF) = 1e-32 N/sqrt(Hz), s = 1e-4, n_p = 10:")
print(f"                             {m_min_n:.2e} kg  <  M  <  {m_max_n:.2e} kg")
print()

print("coupling-window candidates for a squeezed thermal run "
      "(s = 1e-4, n_p = 100, gamma_x = 0.01):")
report = design.g_bounds(x0_over_d=1e-5, gamma_x=0.01, s=1e-4, n_p=100.0)
for bound in report.lower_candidates:
    marker = "  (sets g_min)" if bound.mechanism == report.min_mechanism else ""
    print(f"  lower  {bound.mechanism:22s} {bound.value:.3e}{marker}")
for bound in report.upper_candidates:
    marker = "  (sets g_max)" if bound.mechanism == report.max_mechanism else ""
    applies = "" if bound.applies else "  [not binding here]"
    print(f"  upper  {bound.mechanism:22s} {bound.value:.3e}{marker}{applies}")
print(f"  window: {report.g_min:.3e} < g < {report.g_max:.3e} "
      f"({'feasible' if report.feasible else 'EMPTY'})")
print()

budget = design.dephasing_budget(gamma_z=0.01, gamma_x=0.005, f_q=1.0)
print(f"contrast budget N/(1+N) = {budget.budget:.4f}; spent {budget.total_contrast:.4f}; "
      f"slack {budget.slack:+.4f} -> {'feasible' if budget.feasible else 'infeasible'}")
print()

nv = NVParams(dB=1.0)
point = design.nv_operating_point(nv, d=D)
print("diamagnetically trapped diamond with an embedded spin qubit:")
print(f"  gradient-independent product omega*d = {point.omega_d:.3e} m/s")
print(f"  at d = {D*1e6:.0f} um the constraint fixes dB = {point.dB:.3f} T/m, "
      f"omega = {point.omega:.4f} rad/s, F_q = {point.F_q:.3e} N")

physical = PhysicalParams(M=1e-9, omega=point.omega, d=D, F_q=point.F_q)
unitless = to_unitless(physical)
print(f"  a 1 ug mass there sits at g = {unitless.g:.3e}, f_q = {unitless.f_q:.3f}")
print()
print("the same report as a file:  sgipair bounds --config demos/mesoscopic.cfg "
      "--out bounds.txt")
