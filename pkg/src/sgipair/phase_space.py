"""Symplectic linear algebra and Gaussian-moment evolution for two coupled modes.

Quadratures are ordered (x1, p1, x2, p2) throughout, in ground-state-spread
units where the vacuum covariance matrix is the identity.  The two trapped
modes are coupled by a bilinear term of strength ``g``; the normal modes are
the symmetric combination (frequency 1) and the antisymmetric combination
(frequency ``omega_g = sqrt(1 - 2g)``), which is real only for g < 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad_vec
from scipy.linalg import expm

__all__ = [
    "DriftSpec",
    "symplectic_form",
    "mode_frequency",
    "final_time",
    "sgi_hamiltonian_matrix",
    "sgi_diffusion_matrix",
    "sgi_drift_spec",
    "propagator",
    "propagator_expm",
    "evolve_covariance",
    "lyapunov_integral",
    "heisenberg_ok",
]

# Single-mode symplectic block and its two-mode direct sum.
_OMEGA1 = np.array([[0.0, 1.0], [-1.0, 0.0]])
_OMEGA = np.block(
    [[_OMEGA1, np.zeros((2, 2))], [np.zeros((2, 2)), _OMEGA1]]
)

# Orthogonal (and symplectic) map from (x1,p1,x2,p2) to normal-mode
# quadratures (x+, p+, x-, p-), with x± = (x1 ± x2)/sqrt(2).
_TO_MODES = np.array(
    [
        [1.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 1.0],
        [1.0, 0.0, -1.0, 0.0],
        [0.0, 1.0, 0.0, -1.0],
    ]
) / np.sqrt(2.0)


def symplectic_form() -> np.ndarray:
    """Two-mode symplectic form with blocks [[0, 1], [-1, 0]]."""
    return _OMEGA.copy()


@dataclass(frozen=True)
class DriftSpec:
    """Linear drift vectors: one per qubit plus a qubit-independent term.

    The branch with qubit eigenvalues (j, m) feels the combined drift
    j*r_q1 + m*r_q2 + r_f, entering the mean-motion equation as
    dr/dtau = Omega H r + Omega r_branch.
    """

    r_q1: np.ndarray
    r_q2: np.ndarray
    r_f: np.ndarray = field(default_factory=lambda: np.zeros(4))

    def branch_drift(self, j: int, m: int) -> np.ndarray:
        return j * self.r_q1 + m * self.r_q2 + self.r_f


def sgi_drift_spec(f_q: float) -> DriftSpec:
    """Qubit-controlled force f_q on each mode's position, no common drift."""
    return DriftSpec(
        r_q1=np.array([f_q, 0.0, 0.0, 0.0]),
        r_q2=np.array([0.0, 0.0, f_q, 0.0]),
    )


def _check_coupling(g: float) -> None:
    if not 0.0 <= g < 0.5:
        raise ValueError(
            f"coupling g={g} outside [0, 1/2); the trap is unstable at g >= 1/2"
        )


def mode_frequency(g: float) -> float:
    """Antisymmetric-mode frequency sqrt(1 - 2g)."""
    _check_coupling(g)
    return float(np.sqrt(1.0 - 2.0 * g))


def final_time(g: float) -> float:
    """Interferometer closure time 2*pi / sqrt(1 - 2g)."""
    return 2.0 * np.pi / mode_frequency(g)


def sgi_hamiltonian_matrix(g: float) -> np.ndarray:
    """Quadratic-form matrix of the coupled-trap Hamiltonian.

    Returns the symmetric matrix H such that the quadratic part of the
    Hamiltonian is r^T H r / 2 (units of hbar*omega), i.e.
    diag(1-g, 1, 1-g, 1) plus a g coupling between x1 and x2.
    """
    _check_coupling(g)
    h = np.diag([1.0 - g, 1.0, 1.0 - g, 1.0])
    h[0, 2] = h[2, 0] = g
    return h


def sgi_diffusion_matrix(gamma_x: float) -> np.ndarray:
    """Momentum-diffusion matrix gamma_x * diag(0, 1, 0, 1).

    Normalized so that the Lyapunov integral of this matrix reproduces the
    closed-form diffusive covariance used by the open-dynamics contrast
    formulas (position dephasing at rate gamma_x/4 per mode).
    """
    if gamma_x < 0.0:
        raise ValueError(f"diffusion rate gamma_x={gamma_x} must be >= 0")
    return gamma_x * np.diag([0.0, 1.0, 0.0, 1.0])


def _mode_propagator(w: float, tau: float) -> np.ndarray:
    """Propagator of a single mode with (p^2 + w^2 x^2)/2: exp(tau*Omega1*H)."""
    c, s = np.cos(w * tau), np.sin(w * tau)
    return np.array([[c, s / w], [-w * s, c]])


def propagator(g: float, tau: float) -> np.ndarray:
    """Closed-form symplectic propagator S_g(tau) = exp(tau * Omega * H).

    Built from the two normal modes: a rotation at frequency 1 in the
    symmetric mode and a rotation at frequency omega_g in the antisymmetric
    mode, mapped back to the (x1,p1,x2,p2) ordering.
    """
    _check_coupling(g)
    s_plus = _mode_propagator(1.0, tau)
    s_minus = _mode_propagator(mode_frequency(g), tau)
    half_sum = 0.5 * (s_plus + s_minus)
    half_diff = 0.5 * (s_plus - s_minus)
    return np.block([[half_sum, half_diff], [half_diff, half_sum]])


def propagator_expm(g: float, tau: float) -> np.ndarray:
    """Generic propagator via the scaling-and-squaring matrix exponential."""
    return expm(tau * _OMEGA @ sgi_hamiltonian_matrix(g))


def heisenberg_ok(sigma: np.ndarray, tol: float = 1e-10) -> tuple[bool, float]:
    """Check sigma + i*Omega >= 0 and return (verdict, margin).

    The margin is the smallest eigenvalue of the Hermitian matrix
    sigma + i*Omega; vacuum saturates the bound with margin 0.
    """
    sigma = np.asarray(sigma, dtype=float)
    if not np.allclose(sigma, sigma.T, atol=1e-12):
        raise ValueError("covariance matrix must be symmetric")
    margin = float(np.linalg.eigvalsh(sigma + 1j * _OMEGA)[0])
    return margin >= -tol, margin


def _is_sgi_diffusion(d_matrix: np.ndarray) -> bool:
    """True when D is diagonal momentum diffusion, equal on both modes."""
    if not np.allclose(d_matrix, np.diag(np.diagonal(d_matrix)), atol=0.0):
        return False
    diag = np.diagonal(d_matrix)
    return diag[0] == 0.0 and diag[2] == 0.0 and diag[1] == diag[3]


def _mode_lyapunov(w: float, rate: float, tau: float) -> np.ndarray:
    """Closed form of int_0^tau S_w(t) diag(0, rate) S_w(t)^T dt."""
    c2 = np.sin(2.0 * w * tau) / (4.0 * w)
    xx = (tau / 2.0 - c2) / w**2
    xp = np.sin(w * tau) ** 2 / (2.0 * w**2)
    pp = tau / 2.0 + c2
    return rate * np.array([[xx, xp], [xp, pp]])


def lyapunov_integral(
    g: float, tau: float, d_matrix: np.ndarray, rtol: float = 1e-11
) -> np.ndarray:
    """Accumulated diffusion int_0^tau S(tau-t) D S(tau-t)^T dt.

    Momentum diffusion equal on both modes is evaluated in closed form via
    the normal modes; any other positive-semidefinite D falls back to
    adaptive Gauss-Kronrod quadrature with relative tolerance ``rtol``.
    """
    _check_coupling(g)
    if tau < 0.0:
        raise ValueError(f"tau={tau} must be >= 0")
    d_matrix = np.asarray(d_matrix, dtype=float)
    if tau == 0.0 or not d_matrix.any():
        return np.zeros((4, 4))
    if _is_sgi_diffusion(d_matrix):
        rate = float(d_matrix[1, 1])
        block_plus = _mode_lyapunov(1.0, rate, tau)
        block_minus = _mode_lyapunov(mode_frequency(g), rate, tau)
        half_sum = 0.5 * (block_plus + block_minus)
        half_diff = 0.5 * (block_plus - block_minus)
        return np.block([[half_sum, half_diff], [half_diff, half_sum]])

    def integrand(t: float) -> np.ndarray:
        s = propagator(g, tau - t)
        return s @ d_matrix @ s.T

    result, _ = quad_vec(integrand, 0.0, tau, epsrel=rtol, epsabs=1e-14)
    return result


def evolve_covariance(
    sigma0: np.ndarray,
    g: float,
    tau: float,
    d_matrix: np.ndarray | None = None,
) -> np.ndarray:
    """Covariance at time tau: S sigma0 S^T plus the diffusion integral."""
    sigma0 = np.asarray(sigma0, dtype=float)
    ok, margin = heisenberg_ok(sigma0)
    if not ok:
        raise ValueError(
            f"initial covariance violates the uncertainty bound (margin {margin:.3e})"
        )
    s = propagator(g, tau)
    sigma = s @ sigma0 @ s.T
    if d_matrix is not None:
        sigma = sigma + lyapunov_integral(g, tau, d_matrix)
    return 0.5 * (sigma + sigma.T)
