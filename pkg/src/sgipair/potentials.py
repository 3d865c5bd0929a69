"""Two-body potential expansion, coupling catalogue, and unit conversions.

Couplings between two identical trapped masses interacting through a power-law
potential -A/|d|^n are expanded to quartic order in the unitless centre-of-mass
displacements for an arbitrary trap-axis orientation, and the standard
Coulomb / Casimir / Newton entries are provided for the linear (theta = 0) and
parallel (theta = pi/2) geometries.  SI-unit experimental parameters map to the
dimensionless set (f_q, g, s, n_p, Gamma_x, Gamma_z) that fixes the dynamics.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from pathlib import Path

__all__ = [
    "G_NEWTON",
    "HBAR",
    "C_LIGHT",
    "EPSILON_0",
    "MU_0",
    "K_BOLTZMANN",
    "MU_BOHR",
    "PotentialSpec",
    "ExpansionCoefficients",
    "PhysicalParams",
    "UnitlessParams",
    "NVParams",
    "expand_potential",
    "table_coupling",
    "to_unitless",
    "physical_from_unitless",
    "nv_map",
    "read_key_values",
    "load_physical_config",
    "nv_params_from_config",
]

# CODATA-2018 values, SI units.
G_NEWTON = 6.67430e-11      # m^3 kg^-1 s^-2
HBAR = 1.054571817e-34      # J s
C_LIGHT = 2.99792458e8      # m / s
EPSILON_0 = 8.8541878128e-12  # F / m
MU_0 = 1.25663706212e-6     # N / A^2
K_BOLTZMANN = 1.380649e-23  # J / K
MU_BOHR = 9.2740100783e-24  # J / T


@dataclass(frozen=True)
class PotentialSpec:
    """Power-law two-body potential -A/|d|^n at orientation theta.

    theta is the angle between the trap axis (the x direction of motion) and
    the line joining the trap centres; d is the centre separation in metres.
    """

    A: float      # interaction strength, N * m^n
    n: int        # interaction power, >= 1
    theta: float  # orientation angle, radians
    d: float      # trap separation, m

    def __post_init__(self) -> None:
        if self.d <= 0.0:
            raise ValueError(f"separation d={self.d} must be > 0")
        if self.n < 1:
            raise ValueError(f"interaction power n={self.n} must be >= 1")

    def exact(self, delta_x: float) -> float:
        """Potential at physical relative displacement delta_x = X1 - X2 (m)."""
        r2 = (delta_x - self.d * math.cos(self.theta)) ** 2 + (
            self.d * math.sin(self.theta)
        ) ** 2
        return -self.A / r2 ** (self.n / 2.0)


@dataclass(frozen=True)
class ExpansionCoefficients:
    """Unitless expansion 2V/(hbar*omega) = const - f*u - g*u^2 - h*u^3 - p*u^4.

    u = x1 - x2 is the relative displacement in ground-state-spread units;
    the constant term is omitted.
    """

    f: float
    g: float
    h: float
    p: float


@dataclass(frozen=True)
class PhysicalParams:
    """SI-unit experimental parameters of the two-trap qubit-mass system."""

    M: float                    # mass, kg
    omega: float                # trap angular frequency, rad/s
    d: float                    # trap separation, m
    F_q: float = 0.0            # qubit-controlled force, N
    S_FF: float = 0.0           # force-noise power spectrum, N^2/Hz
    Gamma_z_phys: float = 0.0   # qubit dephasing rate, 1/s
    omega_t: float | None = None  # preparation-trap frequency, rad/s
    n_p: float | None = None    # initial phonon number (overrides T_m)
    T_m: float | None = None    # preparation temperature, K
    Q: float | None = None      # charge, C (Coulomb coupling)
    eps_r: float | None = None  # relative permittivity (Casimir coupling)
    rho_m: float | None = None  # mass density, kg/m^3 (Casimir coupling)

    def __post_init__(self) -> None:
        for name in ("M", "omega", "d"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name}={getattr(self, name)} must be > 0")
        for name in ("S_FF", "Gamma_z_phys"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name}={getattr(self, name)} must be >= 0")
        if self.omega_t is not None and self.omega_t <= 0.0:
            raise ValueError("omega_t must be > 0 when given")

    @property
    def x0(self) -> float:
        """Ground-state spread sqrt(hbar / (2 M omega)), m."""
        return math.sqrt(HBAR / (2.0 * self.M * self.omega))


@dataclass(frozen=True)
class UnitlessParams:
    """Dimensionless parameterization of the entangling dynamics.

    Rates are in units of the trap frequency; s and n_p describe the initial
    squeezed thermal state with covariance (1+2n_p)*diag(s, 1/s) per mode.
    """

    f_q: float
    g: float
    s: float = 1.0
    n_p: float = 0.0
    gamma_x: float = 0.0
    gamma_z: float = 0.0

    def __post_init__(self) -> None:
        if self.f_q < 0.0:
            raise ValueError(f"f_q={self.f_q} must be >= 0")
        if self.g < 0.0:
            raise ValueError(f"g={self.g} must be >= 0")
        if not 0.0 < self.s <= 1.0:
            raise ValueError(f"squeezing s={self.s} must lie in (0, 1]")
        if self.n_p < 0.0:
            raise ValueError(f"n_p={self.n_p} must be >= 0")
        if self.gamma_x < 0.0 or self.gamma_z < 0.0:
            raise ValueError("noise rates must be >= 0")

    @property
    def stable(self) -> bool:
        """Trap stability: the coupled mode frequency is real for g < 1/2."""
        return self.g < 0.5


@dataclass(frozen=True)
class NVParams:
    """Magnetic parameters tying trap frequency and qubit force to a gradient.

    chi_m is the mass magnetic susceptibility (m^3/kg, negative for
    diamagnets); g_factor and the Bohr magneton set the qubit force.
    """

    dB: float                   # magnetic gradient, T/m
    g_factor: float = 2.0028    # NV electron g-factor
    mu_B: float = MU_BOHR       # Bohr magneton, J/T
    mu_0: float = MU_0          # vacuum permeability
    chi_m: float = -6.3e-9      # mass susceptibility of diamond, m^3/kg

    def __post_init__(self) -> None:
        if self.dB <= 0.0:
            raise ValueError(f"magnetic gradient dB={self.dB} must be > 0")
        if self.chi_m >= 0.0:
            raise ValueError("chi_m must be negative (diamagnetic trapping)")


def expand_potential(spec: PotentialSpec, M: float, omega: float) -> ExpansionCoefficients:
    """Quartic Taylor expansion of -A/|d|^n in unitless relative displacement.

    Valid for x0/d << 1; a warning is emitted when x0/d >= 0.1.  The linear
    and cubic coefficients carry cos(theta) factors and vanish identically in
    the parallel orientation theta = pi/2.
    """
    if M <= 0.0 or omega <= 0.0:
        raise ValueError("M and omega must be > 0")
    x0 = math.sqrt(HBAR / (2.0 * M * omega))
    if x0 / spec.d >= 0.1:
        warnings.warn(
            f"x0/d = {x0 / spec.d:.3g} >= 0.1: quartic truncation is unreliable",
            stacklevel=2,
        )
    n = spec.n
    cos_t = math.cos(spec.theta)
    if abs(cos_t) < 1e-15:
        cos_t = 0.0  # odd coefficients vanish identically at theta = pi/2
    hw = HBAR * omega
    base = spec.A / (hw * spec.d**n)
    f = 2.0 * math.sqrt(2.0) * n * base * (x0 / spec.d) * cos_t
    g = n * base * (x0 / spec.d) ** 2 * (n + (n + 2) * math.cos(2.0 * spec.theta))
    h = (
        (2.0 * math.sqrt(2.0) * n * (n + 2) / 3.0)
        * base
        * (x0 / spec.d) ** 3
        * cos_t
        * ((n + 4) * cos_t**2 - 3.0)
    )
    p = (
        (n * (n + 2) / 3.0)
        * base
        * (x0 / spec.d) ** 4
        * ((n + 4) * cos_t**2 * ((n + 6) * cos_t**2 - 6.0) + 3.0)
    )
    return ExpansionCoefficients(f=f, g=g, h=h, p=p)


def _casimir_strength(p: PhysicalParams) -> float:
    if p.eps_r is None or p.rho_m is None:
        raise ValueError("Casimir coupling requires eps_r and rho_m")
    eps_frac = (p.eps_r - 1.0) / (p.eps_r + 2.0)
    return (207.0 / (64.0 * math.pi**3)) * eps_frac**2 * C_LIGHT * HBAR * p.M**2 / p.rho_m**2


def potential_spec(kind: str, p: PhysicalParams, theta: float) -> PotentialSpec:
    """Table entry (A, n) for one of coulomb / casimir / newton at angle theta."""
    if kind == "newton":
        return PotentialSpec(A=G_NEWTON * p.M**2, n=1, theta=theta, d=p.d)
    if kind == "coulomb":
        if p.Q is None:
            raise ValueError("Coulomb coupling requires the charge Q")
        return PotentialSpec(A=-p.Q**2 / (4.0 * math.pi * EPSILON_0), n=1, theta=theta, d=p.d)
    if kind == "casimir":
        return PotentialSpec(A=_casimir_strength(p), n=7, theta=theta, d=p.d)
    raise ValueError(f"unknown interaction kind {kind!r}")


def table_coupling(kind: str, orientation: str, p: PhysicalParams) -> tuple[float, float]:
    """Catalogue values (mean force, entangling coupling), both unitless.

    The entries are the standard closed forms for the three interactions in
    the two reference geometries; the linear orientation carries a non-zero
    mean force, the parallel orientation does not, and the Newtonian coupling
    is exactly twice as large in the linear geometry.
    """
    if orientation not in ("linear", "parallel"):
        raise ValueError(f"unknown orientation {orientation!r}")
    eps_frac = None
    if kind == "casimir":
        if p.eps_r is None or p.rho_m is None:
            raise ValueError("Casimir coupling requires eps_r and rho_m")
        eps_frac = (p.eps_r - 1.0) / (p.eps_r + 2.0)
    if kind == "coulomb" and p.Q is None:
        raise ValueError("Coulomb coupling requires the charge Q")

    if kind == "newton":
        g_par = G_NEWTON * p.M / (p.d**3 * p.omega**2)
        if orientation == "parallel":
            return 0.0, g_par
        force = 2.0 * G_NEWTON * p.M**1.5 / (math.sqrt(HBAR * p.omega**3) * p.d**2)
        return force, 2.0 * g_par
    if kind == "coulomb":
        g_par = -p.Q**2 / (4.0 * math.pi * EPSILON_0 * p.M * p.omega**2 * p.d**3)
        if orientation == "parallel":
            return 0.0, g_par
        force = -p.Q**2 / (2.0 * math.pi * EPSILON_0 * math.sqrt(HBAR * p.M * p.omega**3) * p.d**2)
        return force, 2.0 * g_par
    if kind == "casimir":
        assert eps_frac is not None
        common = eps_frac**2 * C_LIGHT * HBAR * p.M / (p.omega**2 * p.rho_m**2 * p.d**9)
        g_par = (1449.0 / (64.0 * math.pi**3)) * common
        if orientation == "parallel":
            return 0.0, g_par
        force = (
            (1449.0 / (32.0 * math.pi**3))
            * eps_frac**2
            * C_LIGHT
            * math.sqrt(HBAR)
            * (p.M / p.omega) ** 1.5
            / (p.d**8 * p.rho_m**2)
        )
        return force, 8.0 * g_par
    raise ValueError(f"unknown interaction kind {kind!r}")


def thermal_phonons(omega_t: float, T_m: float) -> float:
    """Bose occupation 1/(exp(hbar*omega_t/(k_B T)) - 1) of the cooling trap."""
    if T_m <= 0.0:
        return 0.0
    return 1.0 / math.expm1(HBAR * omega_t / (K_BOLTZMANN * T_m))


def to_unitless(p: PhysicalParams) -> UnitlessParams:
    """Map SI parameters to the dimensionless dynamical set.

    f_q = F_q/sqrt(hbar M omega^3), g = G M/(d^3 omega^2), s = omega/omega_t,
    Gamma_x = pi S_FF/(hbar M omega^2), Gamma_z = Gamma_z_phys/omega; n_p is
    passed through or derived from (omega_t, T_m).  A coupling at or beyond
    the g = 1/2 stability edge is returned flagged, not rejected.
    """
    f_q = p.F_q / math.sqrt(HBAR * p.M * p.omega**3)
    g = G_NEWTON * p.M / (p.d**3 * p.omega**2)
    s = 1.0 if p.omega_t is None else p.omega / p.omega_t
    if p.n_p is not None:
        n_p = p.n_p
    elif p.omega_t is not None and p.T_m is not None:
        n_p = thermal_phonons(p.omega_t, p.T_m)
    else:
        n_p = 0.0
    gamma_x = math.pi * p.S_FF / (HBAR * p.M * p.omega**2)
    gamma_z = p.Gamma_z_phys / p.omega
    if g >= 0.5:
        warnings.warn(
            f"g = {g:.4g} >= 1/2: trap unstable for this mass/separation",
            stacklevel=2,
        )
    return UnitlessParams(f_q=f_q, g=g, s=s, n_p=n_p, gamma_x=gamma_x, gamma_z=gamma_z)


def physical_from_unitless(
    f_q: float, g: float, omega: float, d: float, **extra: float
) -> PhysicalParams:
    """Invert (f_q, g) to (F_q, M) at fixed trap frequency and separation."""
    M = g * d**3 * omega**2 / G_NEWTON
    F_q = f_q * math.sqrt(HBAR * M * omega**3)
    return PhysicalParams(M=M, omega=omega, d=d, F_q=F_q, **extra)


def nv_map(nv: NVParams) -> tuple[float, float]:
    """Trap frequency and qubit force induced by the magnetic gradient.

    omega = sqrt(|chi_m|/mu_0) * dB and F_q = g_factor * mu_B * dB; both are
    linear in dB, so their ratio is gradient-independent.
    """
    omega = math.sqrt(abs(nv.chi_m) / nv.mu_0) * nv.dB
    f_q_newton = nv.g_factor * nv.mu_B * nv.dB
    return omega, f_q_newton


_CONFIG_FIELDS = {f for f in PhysicalParams.__dataclass_fields__}


def read_key_values(path: str | Path) -> dict[str, float]:
    """Parse a flat ``name = value`` file; '#' comments and blank lines ignored."""
    values: dict[str, float] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        try:
            values[key.strip()] = float(value.strip())
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: non-numeric value {value.strip()!r}") from exc
    return values


def load_physical_config(path: str | Path) -> PhysicalParams:
    """Read SI-unit physical parameters from a flat key-value config file.

    Keys must match PhysicalParams field names; keys prefixed ``nv_`` are
    reserved for magnetic-trap parameters and ignored here.
    """
    values = read_key_values(path)
    plain = {k: v for k, v in values.items() if not k.startswith("nv_")}
    unknown = sorted(set(plain) - _CONFIG_FIELDS)
    if unknown:
        raise ValueError(f"{path}: unknown parameters {unknown}")
    return PhysicalParams(**plain)


def nv_params_from_config(values: dict[str, float]) -> NVParams | None:
    """Build NVParams from ``nv_``-prefixed config keys, if a gradient is given."""
    if "nv_dB" not in values:
        return None
    kwargs = {"dB": values["nv_dB"]}
    for name in ("g_factor", "mu_B", "mu_0", "chi_m"):
        key = f"nv_{name}"
        if key in values:
            kwargs[name] = values[key]
    return NVParams(**kwargs)
