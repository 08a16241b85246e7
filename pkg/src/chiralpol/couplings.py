"""Dressed frequencies and effective couplings consumed by the analytic solvers.

All formulas here are c-free: the self-magnetization dressing is written in
terms of the mode wavenumber k_z (equal to omega_k/c for a physical vacuum
mode), and the factor c in m = -i c xi mu cancels against the magnetic mode
normalization.
"""

from dataclasses import dataclass

import numpy as np

from .emitters import Emitter, chiral_tdm_vector
from .fields import CavityMode, polarization_gradient, standing_wave_polarization


class InstabilityError(Exception):
    """A dressed frequency or polariton branch turned non-real."""

    def __init__(self, message: str, value: float):
        super().__init__(f"{message} (offending value {value:.6e})")
        self.value = value


class MagneticInstabilityError(InstabilityError):
    """Self-magnetization drove the dressed photon frequency squared negative."""


@dataclass(frozen=True)
class DerivedCouplings:
    """The numbers the polariton eigenvalue formula consumes.

    omega_k_bar   : dressed photon frequency (a.u.)
    omega_m_tilde : self-polarization-dressed matter frequency (a.u.)
    g_tilde       : effective Hopfield coupling (a.u.)
    xi_tilde      : effective Hopfield chirality factor (dimensionless)
    g_bar         : Tavis-Cummings coupling (a.u.)
    xi_bar        : Tavis-Cummings chirality factor (dimensionless)
    n_emitters    : ensemble size N
    handedness    : cavity helicity, +1 or -1
    decoupled     : True when the electric contraction (mu + Q).eps vanishes,
                    in which case g and xi are defined as 0
    """

    omega_k_bar: float
    omega_m_tilde: float
    g_tilde: float
    xi_tilde: float
    g_bar: float
    xi_bar: float
    n_emitters: int
    handedness: int
    decoupled: bool = False

    def __post_init__(self):
        if not self.omega_k_bar > 0:
            raise ValueError(f"omega_k_bar must be positive, got {self.omega_k_bar}")
        if not self.omega_m_tilde > 0:
            raise ValueError(
                f"omega_m_tilde must be positive, got {self.omega_m_tilde}"
            )
        if self.handedness not in (+1, -1):
            raise ValueError(f"handedness must be +1 or -1, got {self.handedness}")
        if self.n_emitters < 1:
            raise ValueError(f"n_emitters must be at least 1, got {self.n_emitters}")


def dressed_photon_frequency(chi_m, mode: CavityMode, n_emitters: int) -> float:
    """Photon frequency dressed by the parametric self-magnetization.

    omega_k_bar^2 = omega_k^2 + 2 N k_z^2 eta^2 (eps' chi_m eps); raises
    MagneticInstabilityError carrying the chi_m contraction if the square
    turns nonpositive.
    """
    chi = np.asarray(chi_m, dtype=float)
    if chi.shape != (3, 3):
        raise ValueError(f"chi_m must be a 3x3 matrix, got shape {chi.shape}")
    if np.linalg.norm(chi - chi.T) > 1e-12:
        raise ValueError("chi_m must be symmetric")
    eps = standing_wave_polarization(mode)
    contraction = float(eps @ chi @ eps)
    wbar_sq = mode.omega_k**2 + 2.0 * n_emitters * mode.k_z**2 * mode.eta**2 * contraction
    if wbar_sq <= 0.0:
        raise MagneticInstabilityError(
            f"self-magnetization contraction {contraction:.6e} makes "
            "omega_k_bar^2 nonpositive",
            wbar_sq,
        )
    return float(np.sqrt(wbar_sq))


def dressed_matter_frequency(
    emitter: Emitter, mode: CavityMode, n_emitters: int, collective: bool = True
) -> float:
    """Matter frequency dressed by the self-polarization term.

    Collective form omega_m_tilde^2 = omega_m^2 + 2 N omega_m eta^2 (eps.mu)^2.
    With collective=False the factor N is dropped (local self-polarization
    only, the alternative model in which intermolecular contributions are
    assumed to cancel). Always >= omega_m: a sum of squares.
    """
    eps = standing_wave_polarization(mode)
    mu_proj = float(emitter.mu @ eps)
    factor = n_emitters if collective else 1
    wt_sq = emitter.omega_m**2 + 2.0 * factor * emitter.omega_m * mode.eta**2 * mu_proj**2
    assert wt_sq > 0.0  # sum of squares with omega_m > 0
    return float(np.sqrt(wt_sq))


def derive_couplings(
    emitter: Emitter,
    mode: CavityMode,
    n_emitters: int,
    selfpol: str = "collective",
) -> DerivedCouplings:
    """Evaluate the dressed frequencies and effective couplings.

    selfpol='collective' uses the N-dressed matter frequency of the full
    model; selfpol='local' drops the factor N (cancelling-intermolecular
    variant, unstable for large N). The quadrupole enters only through the
    scalar contraction Q_ab d_a eps_b, added to mu.eps with the paper's +Q
    sign. A vanishing electric contraction yields g = xi = 0 with the
    decoupled flag instead of an error, so orientation scans do not abort.
    """
    if selfpol not in ("collective", "local"):
        raise ValueError(f"selfpol must be 'collective' or 'local', got {selfpol!r}")
    eps = standing_wave_polarization(mode)
    grad = polarization_gradient(mode)

    mu_proj = float(emitter.mu @ eps)
    quad_proj = float(np.sum(emitter.quadrupole * grad))
    electric = mu_proj + quad_proj
    magnetic = float(chiral_tdm_vector(emitter) @ eps)

    omega_k_bar = dressed_photon_frequency(emitter.chi_m, mode, n_emitters)
    omega_m_tilde = dressed_matter_frequency(
        emitter, mode, n_emitters, collective=(selfpol == "collective")
    )
    omega_m = emitter.omega_m
    omega_k = mode.omega_k

    if electric == 0.0:
        return DerivedCouplings(
            omega_k_bar=omega_k_bar,
            omega_m_tilde=omega_m_tilde,
            g_tilde=0.0,
            xi_tilde=0.0,
            g_bar=0.0,
            xi_bar=0.0,
            n_emitters=n_emitters,
            handedness=mode.handedness,
            decoupled=True,
        )

    g_tilde = mode.eta * np.sqrt(omega_k_bar * omega_m / (2.0 * omega_m_tilde)) * electric
    xi_tilde = (omega_m_tilde * omega_k) / (omega_m * omega_k_bar) * magnetic / electric
    g_bar = mode.eta * np.sqrt(omega_k_bar / 2.0) * electric
    xi_bar = (omega_k / omega_k_bar) * magnetic / electric

    return DerivedCouplings(
        omega_k_bar=float(omega_k_bar),
        omega_m_tilde=float(omega_m_tilde),
        g_tilde=float(g_tilde),
        xi_tilde=float(xi_tilde),
        g_bar=float(g_bar),
        xi_bar=float(xi_bar),
        n_emitters=n_emitters,
        handedness=mode.handedness,
    )
