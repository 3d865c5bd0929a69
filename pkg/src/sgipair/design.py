"""Experiment-design algebra: detection constraint, coupling and mass windows.

Fixing the leading-order entangling phase to pi/20 removes one parameter
from the design space: the required force is f_q = 1/sqrt(120 g).  The
remaining coupling window is bounded below by the validity of the quadratic
interaction treatment (and, with noise, by diffusion) and above by trap
stability, thermal occupation, and squeezing-amplified deflection.  All
bound formulas here are leading order; reports label them as
order-of-magnitude statements and the numeric negativity at the bound points
is the sharper check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .potentials import G_NEWTON, HBAR, NVParams, nv_map

__all__ = [
    "DEFAULT_TARGET_PHASE",
    "ideal_negativity",
    "DetectionConstraint",
    "required_force",
    "GBound",
    "GBoundsReport",
    "g_bounds",
    "mass_bounds",
    "mass_bounds_noisy",
    "quartic_ratio",
    "SemiclassicalResult",
    "semiclassical_phase",
    "BudgetVerdict",
    "dephasing_budget",
    "NVOperatingPoint",
    "nv_operating_point",
]

DEFAULT_TARGET_PHASE = math.pi / 20.0


def ideal_negativity(target_phase: float = DEFAULT_TARGET_PHASE) -> float:
    """Witness negativity sin(phi) of the zero-contrast state at the target phase."""
    return math.sin(target_phase)


@dataclass(frozen=True)
class DetectionConstraint:
    """Leading-order phase target and the force that reaches it at coupling g."""

    target_phase: float = DEFAULT_TARGET_PHASE
    g: float = 0.0

    @property
    def required_force(self) -> float:
        if self.g <= 0.0:
            raise ValueError(f"coupling g={self.g} must be > 0")
        return math.sqrt(self.target_phase / (6.0 * math.pi * self.g))

    @property
    def leading_phase(self) -> float:
        """6 pi g f_q^2 at the required force; equals target_phase by construction."""
        return 6.0 * math.pi * self.g * self.required_force**2


def required_force(g: float, target_phase: float = DEFAULT_TARGET_PHASE) -> float:
    """Force 1/sqrt(120 g) (for the default pi/20 target) sensing entanglement at g."""
    return DetectionConstraint(target_phase=target_phase, g=g).required_force


@dataclass(frozen=True)
class GBound:
    """One candidate bound on the coupling with its limiting mechanism."""

    value: float
    mechanism: str
    applies: bool = True


@dataclass(frozen=True)
class GBoundsReport:
    """Feasible coupling window with every candidate bound reported."""

    g_min: float
    g_max: float
    min_mechanism: str
    max_mechanism: str
    lower_candidates: tuple[GBound, ...] = field(default=())
    upper_candidates: tuple[GBound, ...] = field(default=())

    @property
    def feasible(self) -> bool:
        return self.g_min <= self.g_max


def g_bounds(
    x0_over_d: float,
    gamma_x: float = 0.0,
    s: float = 1.0,
    n_p: float = 0.0,
    n_ideal: float | None = None,
) -> GBoundsReport:
    """Coupling window from quartic validity, diffusion, stability, and state prep.

    Lower candidates: quartic validity 2 (x0/d)^2 and, with diffusion, both
    pi Gamma_x (1+N)/(40 N) and its rounded form Gamma_x/2 (the exact form
    sets the bound; both are reported).  Upper candidates: trap stability
    1/2, ideal-deflection ~0.8 (never binding), thermal 0.8/(1+2 n_p), and
    for squeezed states 0.45 (s/(1+2 n_p))^(1/3), applied when the squeezing
    amplification is active (s < 1 and s above the cube of the squeezed
    candidate itself).
    """
    if x0_over_d <= 0.0:
        raise ValueError("x0_over_d must be > 0")
    n_i = ideal_negativity() if n_ideal is None else n_ideal
    occupation = 1.0 + 2.0 * n_p

    lower = [GBound(2.0 * x0_over_d**2, "quartic validity")]
    if gamma_x > 0.0:
        lower.append(
            GBound(math.pi * gamma_x * (1.0 + n_i) / (40.0 * n_i), "diffusion")
        )
        lower.append(GBound(gamma_x / 2.0, "diffusion (rounded)", applies=False))
    g_min_bound = max((b for b in lower if b.applies), key=lambda b: b.value)

    deflection = 60.0 * n_i / (math.pi**2 * (1.0 + n_i))
    upper = [
        GBound(0.5, "trap stability"),
        GBound(deflection, "deflection (ideal)", applies=deflection < 0.5),
        GBound(0.8 / occupation, "thermal deflection", applies=n_p > 0.0),
    ]
    squeezed_value = 0.45 * (s / occupation) ** (1.0 / 3.0)
    squeezed_applies = s < 1.0 and s > squeezed_value**3
    upper.append(GBound(squeezed_value, "squeezed deflection", applies=squeezed_applies))
    g_max_bound = min((b for b in upper if b.applies), key=lambda b: b.value)

    return GBoundsReport(
        g_min=g_min_bound.value,
        g_max=g_max_bound.value,
        min_mechanism=g_min_bound.mechanism,
        max_mechanism=g_max_bound.mechanism,
        lower_candidates=tuple(lower),
        upper_candidates=tuple(upper),
    )


def mass_bounds(d: float, omega: float) -> tuple[float, float]:
    """Ideal-dynamics mass window sqrt(hbar d omega/G) <= M <= d^3 omega^2/(2G).

    The lower end keeps the quartic interaction term an order of magnitude
    below the quadratic one; the upper end is trap stability g < 1/2.
    """
    if d <= 0.0 or omega <= 0.0:
        raise ValueError("d and omega must be > 0")
    m_min = math.sqrt(HBAR * d * omega / G_NEWTON)
    m_max = d**3 * omega**2 / (2.0 * G_NEWTON)
    return m_min, m_max


def mass_bounds_noisy(
    d: float, omega: float, s_ff: float, s: float, n_p: float
) -> tuple[float, float]:
    """Mass window with force noise s_ff and a squeezed thermal initial state.

    M_min = sqrt(pi d^3 S_FF/(2 G hbar)) from the diffusion bound on g;
    M_max = (s/(1+2 n_p))^(1/3) d^3 omega^2/(2G) from squeezing-amplified
    deflection.  At s = 1, n_p = 0 the upper end reverts toward the ideal
    stability bound (up to the 0.45-versus-1/2 prefactor of the two
    leading-order analyses).
    """
    if d <= 0.0 or omega <= 0.0:
        raise ValueError("d and omega must be > 0")
    if s_ff < 0.0 or n_p < 0.0 or not 0.0 < s <= 1.0:
        raise ValueError("require S_FF >= 0, n_p >= 0, 0 < s <= 1")
    m_min = math.sqrt(math.pi * d**3 * s_ff / (2.0 * G_NEWTON * HBAR))
    m_max = (s / (1.0 + 2.0 * n_p)) ** (1.0 / 3.0) * d**3 * omega**2 / (2.0 * G_NEWTON)
    return m_min, m_max


def quartic_ratio(g: float, x0: float, d: float) -> tuple[float, bool]:
    """Quartic-to-quadratic energy ratio x0^2/(5 d^2 g) and its validity verdict.

    The Gaussian treatment is declared valid when the ratio is below 0.1
    (one order of magnitude); g -> 0 diverges and is flagged invalid.
    """
    if x0 <= 0.0 or d <= 0.0:
        raise ValueError("x0 and d must be > 0")
    if g <= 0.0:
        return math.inf, False
    ratio = x0**2 / (5.0 * d**2 * g)
    return ratio, ratio < 0.1


@dataclass(frozen=True)
class SemiclassicalResult:
    """Static-path estimate of the superposition size and entangling phase."""

    delta_x: float        # path separation 2 sqrt(2) F_q/(M omega^2), m
    phase_rate: float     # accumulated phase per unit dimensionless time
    phase: float          # phase over the requested physical duration
    phase_at_2pi: float   # phase over one trap period


def semiclassical_phase(
    M: float, F_q: float, omega: float, d: float, tau_phys: float
) -> SemiclassicalResult:
    """Mass-independent phase estimate from superposed static trajectories.

    Two spin-dependent paths separated by delta_x = 2 sqrt(2) F_q/(M omega^2)
    accumulate relative phase at rate 16 G F_q^2/(hbar d^3 omega^4) per
    second; M cancels exactly, which is the heuristic content of the
    mass-independence statement.  The rate over one trap period carries the
    same parameter exponents as the exact closure-time phase.
    """
    if min(M, omega, d) <= 0.0:
        raise ValueError("M, omega, d must be > 0")
    delta_x = 2.0 * math.sqrt(2.0) * F_q / (M * omega**2)
    rate_per_second = 16.0 * G_NEWTON * F_q**2 / (HBAR * d**3 * omega**4)
    return SemiclassicalResult(
        delta_x=delta_x,
        phase_rate=rate_per_second / omega,
        phase=rate_per_second * tau_phys,
        phase_at_2pi=rate_per_second * 2.0 * math.pi / omega,
    )


@dataclass(frozen=True)
class BudgetVerdict:
    """Feasibility of entanglement detection against the contrast budget."""

    feasible: bool
    boundary: bool
    slack: float
    budget: float
    total_contrast: float


def dephasing_budget(
    gamma_z: float,
    gamma_x: float,
    f_q: float,
    c_s_np: float = 0.0,
    n_ideal: float | None = None,
) -> BudgetVerdict:
    """Check C_s_np + C_x + C_z < N/(1+N) with the leading-order noise contrasts.

    C_x = 3 pi Gamma_x f_q^2 and C_z = 2 pi Gamma_z; N defaults to the ideal
    negativity sin(pi/20), giving a budget of about 0.135.
    """
    if gamma_z < 0.0 or gamma_x < 0.0 or c_s_np < 0.0:
        raise ValueError("rates and contrasts must be >= 0")
    n_i = ideal_negativity() if n_ideal is None else n_ideal
    budget = n_i / (1.0 + n_i)
    total = c_s_np + 3.0 * math.pi * gamma_x * f_q**2 + 2.0 * math.pi * gamma_z
    slack = budget - total
    return BudgetVerdict(
        feasible=slack > 0.0,
        boundary=slack == 0.0,
        slack=slack,
        budget=budget,
        total_contrast=total,
    )


@dataclass(frozen=True)
class NVOperatingPoint:
    """Gradient-driven operating point meeting the detection constraint."""

    dB: float        # magnetic gradient, T/m
    omega: float     # trap frequency, rad/s
    F_q: float       # qubit force, N
    omega_d: float   # the gradient-independent product omega * d, m/s


def nv_operating_point(
    nv: NVParams, d: float, target_phase: float = DEFAULT_TARGET_PHASE
) -> NVOperatingPoint:
    """Solve the detection constraint for the magnetic gradient at separation d.

    Since omega and F_q are both linear in the gradient, the constraint
    F_q = sqrt(hbar d^3 omega^5 target/(6 pi G))... fixes the product
    omega*d independently of the gradient: (omega d)^3 =
    (6 pi/target) G (g_factor mu_B)^2 mu_0 / (hbar |chi_m|).
    """
    if d <= 0.0:
        raise ValueError("d must be > 0")
    omega_d = (
        (6.0 * math.pi / target_phase)
        * G_NEWTON
        * (nv.g_factor * nv.mu_B) ** 2
        * nv.mu_0
        / (HBAR * abs(nv.chi_m))
    ) ** (1.0 / 3.0)
    omega = omega_d / d
    slope = math.sqrt(abs(nv.chi_m) / nv.mu_0)
    gradient = omega / slope
    check_omega, f_q = nv_map(
        NVParams(
            dB=gradient,
            g_factor=nv.g_factor,
            mu_B=nv.mu_B,
            mu_0=nv.mu_0,
            chi_m=nv.chi_m,
        )
    )
    assert abs(check_omega - omega) < 1e-9 * omega
    return NVOperatingPoint(dB=gradient, omega=omega, F_q=f_q, omega_d=omega_d)
