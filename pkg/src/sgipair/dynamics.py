"""Closed-form evolution of the Gaussian-branched cat state of two SGIs.

The two-qubit / two-mode state is parameterized by one covariance matrix,
sixteen branch first-moment vectors labeled by qubit eigenvalues, and a 4x4
qubit reduced density matrix (QRDM).  Unitary and diffusive-dephasing
dynamics both close over this family; this module provides the branch
trajectories, the QRDM phases and contrasts, and the assembled state, each
as an explicit function of the dimensionless parameters.

Branch labels are sigma_z eigenvalues, with computational bit 0 mapped to
+1.  The branch with both qubits in bit 0 is deflected toward negative
positions, which fixes the sign convention of the drift vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np
from scipy.integrate import quad_vec

from .phase_space import (
    final_time,
    lyapunov_integral,
    mode_frequency,
    propagator,
    sgi_diffusion_matrix,
    sgi_drift_spec,
    sgi_hamiltonian_matrix,
    symplectic_form,
)
from .potentials import UnitlessParams

__all__ = [
    "BranchLabel",
    "BranchMoments",
    "ContrastSet",
    "GaussianCatState",
    "final_time",
    "entangling_phase",
    "contrast_c1",
    "contrast_c2",
    "final_contrast",
    "residual_separation",
    "branch_trajectories",
    "general_first_moments",
    "unitary_qrdm",
    "open_qrdm",
    "squeezed_thermal_covariance",
    "initial_cat_state",
    "evolve_cat_state",
]

_EYE4 = np.eye(4)
_OMEGA = symplectic_form()


@dataclass(frozen=True, order=True)
class BranchLabel:
    """Qubit eigenvalue labels (j, k) for qubit 1 and (m, n) for qubit 2.

    (j, m) label the ket side and (k, n) the bra side of the density-matrix
    branch; each entry is a sigma_z eigenvalue +1 or -1.
    """

    j: int
    k: int
    m: int
    n: int

    def __post_init__(self) -> None:
        for value in (self.j, self.k, self.m, self.n):
            if value not in (+1, -1):
                raise ValueError(f"branch labels must be +1 or -1, got {value}")

    @classmethod
    def from_bits(cls, row: int, col: int) -> "BranchLabel":
        """Label for QRDM entry (row, col) in the computational basis 00..11."""
        if not (0 <= row < 4 and 0 <= col < 4):
            raise ValueError("row and col must index a 4x4 matrix")
        to_eig = (+1, -1)
        return cls(
            j=to_eig[row >> 1], k=to_eig[col >> 1], m=to_eig[row & 1], n=to_eig[col & 1]
        )

    @property
    def is_diagonal(self) -> bool:
        return self.j == self.k and self.m == self.n

    @property
    def n_differing(self) -> int:
        """Number of qubits whose ket and bra eigenvalues differ."""
        return (self.j != self.k) + (self.m != self.n)

    @property
    def swapped(self) -> "BranchLabel":
        """Conjugate label with ket and bra sides exchanged."""
        return BranchLabel(j=self.k, k=self.j, m=self.n, n=self.m)


@dataclass(frozen=True)
class BranchMoments:
    """First-moment vector (x1, p1, x2, p2) of one branch; complex off the diagonal."""

    label: BranchLabel
    vector: np.ndarray

    @property
    def positions(self) -> np.ndarray:
        return self.vector[[0, 2]]


@dataclass(frozen=True)
class ContrastSet:
    """Nonnegative decay exponents suppressing QRDM off-diagonal entries.

    c1/c2 are the unitary recombination-mismatch terms (antisymmetric and
    symmetric mode); c_s_np_1/c_s_np_2 their squeezed-thermal versions;
    c_gamma_1/c_gamma_2 the diffusion terms; c_z the qubit dephasing term.
    """

    c1: float = 0.0
    c2: float = 0.0
    c_s_np_1: float = 0.0
    c_s_np_2: float = 0.0
    c_gamma_1: float = 0.0
    c_gamma_2: float = 0.0
    c_z: float = 0.0

    def __post_init__(self) -> None:
        for name in self.__dataclass_fields__:
            value = getattr(self, name)
            if value < -1e-12:
                raise ValueError(f"contrast {name}={value} must be >= 0")

    @property
    def single_flip_total(self) -> float:
        """Exponent of the QRDM entries where exactly one qubit flips."""
        return (
            self.c1
            + self.c2
            + self.c_s_np_1
            + self.c_s_np_2
            + self.c_gamma_1
            + self.c_gamma_2
            + self.c_z
        )

    @property
    def symmetric_flip_total(self) -> float:
        """Exponent of the both-flip, equal-sign entry (00|11).

        The Gaussian terms quadruple relative to a single flip (the branch
        separation doubles); dephasing only doubles, since each qubit
        dephases independently.  A quadrupled dephasing term would render
        the matrix non-positive, so the doubled coefficient is used even
        where published displays quadruple it.
        """
        return 4.0 * (self.c2 + self.c_s_np_2 + self.c_gamma_2) + 2.0 * self.c_z

    @property
    def antisymmetric_flip_total(self) -> float:
        """Exponent of the both-flip, opposite-sign entry (01|10)."""
        return 4.0 * (self.c1 + self.c_s_np_1 + self.c_gamma_1) + 2.0 * self.c_z


@dataclass(frozen=True)
class GaussianCatState:
    """Covariance matrix, 16 branch first-moment vectors, and the QRDM."""

    tau: float
    sigma: np.ndarray
    branches: dict[BranchLabel, BranchMoments]
    qrdm: np.ndarray
    contrasts: ContrastSet = field(default_factory=ContrastSet)
    phase: float = 0.0


# --------------------------------------------------------------------------
# Closed-form phases and contrasts
# --------------------------------------------------------------------------


def entangling_phase(f_q: float, g: float, tau: float) -> float:
    """Qubit-qubit phase f_q^2 (sin tau + 2 g tau/w^2 - sin(w tau)/w^3), w = omega_g.

    Depends only on (f_q, g, tau); in particular it is independent of the
    mass, the initial squeezing/temperature, and the diffusion rate.
    """
    w = mode_frequency(g)
    return f_q**2 * (np.sin(tau) + 2.0 * g * tau / w**2 - np.sin(w * tau) / w**3)


def contrast_c1(f_q: float, g: float, tau: float) -> float:
    """Antisymmetric-mode recombination mismatch, vanishing at tau = 2 pi/omega_g."""
    w = mode_frequency(g)
    return (
        (2.0 * f_q**2 / w**4)
        * np.sin(tau * w / 2.0) ** 2
        * (1.0 - g * (1.0 + np.cos(tau * w)))
    )


def contrast_c2(f_q: float, g: float, tau: float) -> float:
    """Symmetric-mode recombination mismatch 2 f_q^2 sin^2(tau/2).

    Normalized to be nonnegative and to reach 2 f_q^2 sin^2(pi/omega_g) at
    the closure time, which is the final-time contrast of the ideal QRDM.
    """
    mode_frequency(g)  # validate the coupling range
    return 2.0 * f_q**2 * np.sin(tau / 2.0) ** 2


def final_contrast(f_q: float, g: float) -> float:
    """Ideal closure-time contrast 2 f_q^2 sin^2(pi/omega_g)."""
    return 2.0 * f_q**2 * np.sin(np.pi / mode_frequency(g)) ** 2


def residual_separation(f_q: float, g: float) -> float:
    """Position gap 4 f_q sin^2(pi/omega_g) between the 00 and 11 branches at closure."""
    return 4.0 * f_q * np.sin(np.pi / mode_frequency(g)) ** 2


def _open_contrasts(params: UnitlessParams, tau: float) -> ContrastSet:
    """Closed-form contrast components for squeezed-thermal diffusive dynamics."""
    f_q, g, s = params.f_q, params.g, params.s
    w = mode_frequency(g)
    occ = 1.0 + 2.0 * params.n_p
    c_s_1 = (
        occ
        * (f_q**2 / (4.0 * w**4 * s))
        * (
            (1.0 - s**2 * w**2) * np.cos(2.0 * tau * w)
            + s**2 * w**2
            - 4.0 * np.cos(tau * w)
            + 3.0
        )
    )
    c_s_2 = (
        occ
        * f_q**2
        * np.sin(tau / 2.0) ** 2
        * ((s - 1.0 / s) * np.cos(tau) + s + 1.0 / s)
    )
    c_g_1 = (
        params.gamma_x
        * (f_q**2 / (8.0 * w**5))
        * (6.0 * tau * w - 8.0 * np.sin(tau * w) + np.sin(2.0 * tau * w))
    )
    c_g_2 = (
        params.gamma_x
        * (f_q**2 / 4.0)
        * (3.0 * tau + np.sin(tau) * (np.cos(tau) - 4.0))
    )
    return ContrastSet(
        c_s_np_1=max(c_s_1, 0.0),
        c_s_np_2=max(c_s_2, 0.0),
        c_gamma_1=max(c_g_1, 0.0),
        c_gamma_2=max(c_g_2, 0.0),
        c_z=params.gamma_z * tau,
    )


# --------------------------------------------------------------------------
# Branch first moments
# --------------------------------------------------------------------------


def _displaced_equilibrium(j: int, m: int, f_q: float, g: float) -> np.ndarray:
    """H^-1 (j r_q1 + m r_q2 + r_f) for the (j, m) branch."""
    drift = sgi_drift_spec(f_q).branch_drift(j, m)
    return np.linalg.solve(sgi_hamiltonian_matrix(g), drift)


def branch_trajectories(
    f_q: float, g: float, tau: float
) -> dict[BranchLabel, BranchMoments]:
    """First moments of the four diagonal branches (the interferometric paths).

    The branch with both qubits in bit 0 follows
    f_q (cos tau - 1, -sin tau, cos tau - 1, -sin tau); the equal-bit branches
    evolve at frequency 1 and the opposite-bit branches at omega_g, so only
    the latter recombine exactly at tau = 2 pi/omega_g.
    """
    s_minus_one = propagator(g, tau) - _EYE4
    out: dict[BranchLabel, BranchMoments] = {}
    for j, m in product((+1, -1), repeat=2):
        label = BranchLabel(j=j, k=j, m=m, n=m)
        vector = s_minus_one @ _displaced_equilibrium(j, m, f_q, g)
        out[label] = BranchMoments(label=label, vector=vector)
    return out


def general_first_moments(
    label: BranchLabel,
    params: UnitlessParams,
    tau: float,
    d_matrix: np.ndarray | None = None,
) -> BranchMoments:
    """First-moment vector of an arbitrary density-matrix branch.

    Diagonal branches are real and unaffected by momentum diffusion; the
    off-diagonal branches carry imaginary parts set by the evolved covariance
    and, under diffusion, by an additional memory integral over the
    propagated noise kernel.
    """
    f_q, g = params.f_q, params.g
    if d_matrix is None:
        d_matrix = sgi_diffusion_matrix(params.gamma_x)
    s = propagator(g, tau)
    r_ket = _displaced_equilibrium(label.j, label.m, f_q, g)
    r_bra = _displaced_equilibrium(label.k, label.n, f_q, g)
    delta_ket = (s - _EYE4) @ r_ket
    delta_bra = (s - _EYE4) @ r_bra
    vector = 0.5 * (delta_ket + delta_bra) + 0j
    if label.is_diagonal:
        return BranchMoments(label=label, vector=vector.real + 0j)

    sigma0 = squeezed_thermal_covariance(params.s, params.n_p)
    sigma = s @ sigma0 @ s.T + lyapunov_integral(g, tau, d_matrix)
    mismatch = delta_ket - delta_bra
    vector += 0.5j * sigma @ _OMEGA @ mismatch

    if d_matrix.any() and tau > 0.0:
        delta_eq = r_ket - r_bra

        def integrand(t: float) -> np.ndarray:
            s_u = propagator(g, tau - t)
            kernel = s_u @ d_matrix @ s_u.T
            return kernel @ _OMEGA @ ((s_u - s) @ delta_eq)

        memory, _ = quad_vec(integrand, 0.0, tau, epsrel=1e-11, epsabs=1e-14)
        vector += 0.5j * memory
    return BranchMoments(label=label, vector=vector)


def branch_pair_phase_contrast(
    label: BranchLabel,
    params: UnitlessParams,
    tau: float,
    d_matrix: np.ndarray | None = None,
) -> tuple[float, float]:
    """Phase and decay exponent of one QRDM entry from the moment machinery.

    Evaluates the general branch-pair formulas (quadratic form of the evolved
    covariance plus, under diffusion, a noise-kernel memory integral) rather
    than the precomputed closed forms; the two routes agree and the closed
    forms are the fast path.  Dephasing adds gamma_z * tau per flipped qubit,
    independently for each qubit.
    """
    f_q, g = params.f_q, params.g
    if d_matrix is None:
        d_matrix = sgi_diffusion_matrix(params.gamma_x)
    s = propagator(g, tau)
    r_ket = _displaced_equilibrium(label.j, label.m, f_q, g)
    r_bra = _displaced_equilibrium(label.k, label.n, f_q, g)
    delta_ket = (s - _EYE4) @ r_ket
    delta_bra = (s - _EYE4) @ r_bra
    delta_eq = r_ket - r_bra
    mismatch = delta_ket - delta_bra

    phase = float(
        delta_eq @ _OMEGA @ (0.5 * (delta_ket + delta_bra))
        + 0.5 * tau * delta_eq @ sgi_hamiltonian_matrix(g) @ (r_ket + r_bra)
    )

    sigma0 = squeezed_thermal_covariance(params.s, params.n_p)
    sigma = s @ sigma0 @ s.T + lyapunov_integral(g, tau, d_matrix)
    contrast = float(0.25 * mismatch @ _OMEGA.T @ sigma @ _OMEGA @ mismatch)
    # Independent qubit dephasing: (j-k)^2 + (m-n)^2 in units of gamma_z/4.
    dephasing = ((label.j - label.k) ** 2 + (label.m - label.n) ** 2) / 4.0
    contrast += params.gamma_z * tau * dephasing

    if d_matrix.any() and tau > 0.0 and delta_eq.any():

        def integrand(t: float) -> np.ndarray:
            s_u = propagator(g, tau - t)
            kernel = s_u @ d_matrix @ s_u.T
            past = (s_u - s) @ delta_eq
            sym = (s_u + s - 2.0 * _EYE4) @ delta_eq
            return np.array([past @ _OMEGA.T @ kernel @ _OMEGA @ sym])

        memory, _ = quad_vec(integrand, 0.0, tau, epsrel=1e-11, epsabs=1e-14)
        contrast += 0.25 * float(memory[0])
    return phase, contrast


# --------------------------------------------------------------------------
# QRDM assembly
# --------------------------------------------------------------------------


def _qrdm_from_components(phase: float, contrasts: ContrastSet) -> np.ndarray:
    """4x4 QRDM for initial |+>|+> qubits from a phase and contrast exponents."""
    single = np.exp(-contrasts.single_flip_total)
    both_sym = np.exp(-contrasts.symmetric_flip_total)
    both_anti = np.exp(-contrasts.antisymmetric_flip_total)
    lower = single * np.exp(1j * phase)
    upper = single * np.exp(-1j * phase)
    rho = np.array(
        [
            [1.0, upper, upper, both_sym],
            [lower, 1.0, both_anti, lower],
            [lower, both_anti, 1.0, lower],
            [both_sym, upper, upper, 1.0],
        ],
        dtype=complex,
    )
    return rho / 4.0


def unitary_qrdm(
    f_q: float, g: float, tau: float
) -> tuple[np.ndarray, ContrastSet, float]:
    """QRDM of the ideal dynamics from ground states and |+>|+> qubits.

    Returns the 4x4 matrix, the contrast exponents, and the entangling
    phase.  At the closure time the single-flip entries reduce to
    exp(-C_g -/+ i phi_g) with C_g the final contrast.
    """
    phase = entangling_phase(f_q, g, tau)
    contrasts = ContrastSet(c1=contrast_c1(f_q, g, tau), c2=contrast_c2(f_q, g, tau))
    return _qrdm_from_components(phase, contrasts), contrasts, phase


def open_qrdm(
    params: UnitlessParams, tau: float
) -> tuple[np.ndarray, ContrastSet, float]:
    """QRDM under diffusion and dephasing from a squeezed thermal state.

    The entangling phase is the unitary one; only the contrast exponents
    pick up the initial-state and noise dependence.  At zero noise and unit
    squeezing this reduces entrywise to the unitary QRDM.
    """
    phase = entangling_phase(params.f_q, params.g, tau)
    contrasts = _open_contrasts(params, tau)
    return _qrdm_from_components(phase, contrasts), contrasts, phase


# --------------------------------------------------------------------------
# Full state assembly
# --------------------------------------------------------------------------


def squeezed_thermal_covariance(s: float, n_p: float) -> np.ndarray:
    """Initial covariance (1+2 n_p) diag(s, 1/s, s, 1/s)."""
    if not 0.0 < s <= 1.0:
        raise ValueError(f"squeezing s={s} must lie in (0, 1]")
    if n_p < 0.0:
        raise ValueError(f"n_p={n_p} must be >= 0")
    return (1.0 + 2.0 * n_p) * np.diag([s, 1.0 / s, s, 1.0 / s])


def _all_labels() -> list[BranchLabel]:
    return [BranchLabel.from_bits(row, col) for row in range(4) for col in range(4)]


def initial_cat_state(params: UnitlessParams) -> GaussianCatState:
    """State at tau = 0: squeezed thermal covariance, centred branches, |+>|+> QRDM."""
    sigma = squeezed_thermal_covariance(params.s, params.n_p)
    branches = {
        label: BranchMoments(label=label, vector=np.zeros(4, dtype=complex))
        for label in _all_labels()
    }
    qrdm = np.full((4, 4), 0.25, dtype=complex)
    return GaussianCatState(tau=0.0, sigma=sigma, branches=branches, qrdm=qrdm)


def evolve_cat_state(
    initial: GaussianCatState, params: UnitlessParams, tau: float
) -> GaussianCatState:
    """Evolve the reference initial state to time tau.

    The covariance splits as (1+2 n_p) * (propagated squeezed vacuum) plus
    gamma_x times the accumulated diffusion; branch moments and the QRDM come
    from the corresponding closed forms.  Only evolution of the centred
    initial state produced by ``initial_cat_state`` is supported.
    """
    if initial.tau != 0.0:
        raise ValueError("evolution starts from the tau = 0 reference state")
    if any(moments.vector.any() for moments in initial.branches.values()):
        raise ValueError("initial branch moments must be centred at the origin")
    d_matrix = sgi_diffusion_matrix(params.gamma_x)
    s = propagator(params.g, tau)
    sigma = s @ initial.sigma @ s.T + lyapunov_integral(params.g, tau, d_matrix)
    branches = {
        label: general_first_moments(label, params, tau, d_matrix)
        for label in _all_labels()
    }
    qrdm, contrasts, phase = open_qrdm(params, tau)
    return GaussianCatState(
        tau=tau,
        sigma=0.5 * (sigma + sigma.T),
        branches=branches,
        qrdm=qrdm,
        contrasts=contrasts,
        phase=phase,
    )
