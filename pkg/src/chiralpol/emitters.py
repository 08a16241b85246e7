"""Chiral emitters: tensor electric-to-magnetic TDM mapping, reciprocity,
and orientation averages of the squared coupling."""

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.spatial.transform import Rotation

from .fields import CavityMode, standing_wave_polarization

_ORTHOGONALITY_TOL = 1e-12
_SYMMETRY_TOL = 1e-12
_RECIPROCITY_TOL = 1e-10


def _as_matrix(value, name: str) -> np.ndarray:
    mat = np.asarray(value, dtype=float)
    if mat.shape != (3, 3):
        raise ValueError(f"{name} must be a 3x3 matrix, got shape {mat.shape}")
    return mat


@dataclass(frozen=True, eq=False)
class Emitter:
    """Chiral emitter with a tensor chirality mapping m = -i c (s R_mu(delta) U) mu.

    omega_m     : matter transition frequency (a.u.)
    mu          : electric transition dipole moment, real 3-vector (a.u.)
    quadrupole  : electric quadrupole tensor Q_ab, real symmetric 3x3 (a.u.)
    xi_scale    : chirality scale s (real by reciprocity)
    xi_rotation : orthogonal 3x3 part U of the mapping (default identity)
    roll_delta  : rotation angle about mu completing the mapping, in [0, 2pi)
    chi_m       : parametric self-magnetization tensor, real symmetric 3x3
    """

    omega_m: float
    mu: np.ndarray
    quadrupole: np.ndarray = field(default_factory=lambda: np.zeros((3, 3)))
    xi_scale: float = 0.0
    xi_rotation: np.ndarray = field(default_factory=lambda: np.eye(3))
    roll_delta: float = 0.0
    chi_m: np.ndarray = field(default_factory=lambda: np.zeros((3, 3)))

    def __post_init__(self):
        if not self.omega_m > 0:
            raise ValueError(f"omega_m must be positive, got {self.omega_m}")
        mu = np.asarray(self.mu)
        if np.iscomplexobj(mu) and np.any(mu.imag != 0):
            raise ValueError("mu must be real-valued (complex TDMs are rejected)")
        mu = mu.real.astype(float)
        if mu.shape != (3,):
            raise ValueError(f"mu must be a 3-vector, got shape {mu.shape}")
        if np.iscomplex(self.xi_scale) and self.xi_scale.imag != 0:
            raise ValueError("xi_scale must be real (reciprocity)")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "xi_scale", float(np.real(self.xi_scale)))
        object.__setattr__(self, "roll_delta", float(self.roll_delta) % (2 * np.pi))

        rot = _as_matrix(self.xi_rotation, "xi_rotation")
        defect = np.linalg.norm(rot.T @ rot - np.eye(3))
        if defect > _ORTHOGONALITY_TOL:
            raise ValueError(f"xi_rotation is not orthogonal (defect {defect:.3e})")
        object.__setattr__(self, "xi_rotation", rot)

        for name in ("quadrupole", "chi_m"):
            mat = _as_matrix(getattr(self, name), name)
            asym = np.linalg.norm(mat - mat.T)
            if asym > _SYMMETRY_TOL:
                raise ValueError(f"{name} is not symmetric (defect {asym:.3e})")
            object.__setattr__(self, name, mat)

    @classmethod
    def collinear(cls, omega_m, mu, xi, quadrupole=None, chi_m=None) -> "Emitter":
        """Scalar collinear case m = -i c xi mu: s = xi, U = identity, delta = 0."""
        kwargs = {}
        if quadrupole is not None:
            kwargs["quadrupole"] = quadrupole
        if chi_m is not None:
            kwargs["chi_m"] = chi_m
        return cls(omega_m=omega_m, mu=mu, xi_scale=xi, **kwargs)


def chiral_tdm_vector(emitter: Emitter) -> np.ndarray:
    """Magnetic transition moment over -i c, i.e. R_mu(delta) * s * U * mu.

    The norm equals |s|*|mu| since rotations preserve length.
    """
    mu = emitter.mu
    core = emitter.xi_scale * emitter.xi_rotation @ mu
    if emitter.roll_delta == 0.0:
        return core
    norm = np.linalg.norm(mu)
    if norm == 0.0:
        raise ValueError("roll_delta rotation undefined for mu = 0 (no axis)")
    roll = Rotation.from_rotvec(emitter.roll_delta * mu / norm)
    return roll.apply(core)


class ReciprocityResult(NamedTuple):
    ok: bool
    imag_magnitude: float
    orthogonality_defect: float


def check_reciprocity(xi_scale, rotation) -> ReciprocityResult:
    """Onsager-Casimir constraint on the chirality mapping: Im(s) = 0, U'U = 1.

    Violations carry the offending imaginary magnitude and orthogonality
    defect; tolerance 1e-10 on both.
    """
    imag = abs(np.imag(complex(xi_scale)))
    rot = _as_matrix(rotation, "rotation")
    defect = float(np.linalg.norm(rot.T @ rot - np.eye(3)))
    ok = imag <= _RECIPROCITY_TOL and defect <= _RECIPROCITY_TOL
    return ReciprocityResult(ok, float(imag), defect)


def _coupling_sq_prefactor(emitter: Emitter, mode: CavityMode, n_emitters: int) -> float:
    # hbar*omega_m_tilde*omega_k^2 / (2*eps0*V*omega_k_bar*omega_m) with
    # 1/(eps0*V) = eta^2; dressed frequencies at the reference orientation.
    from .couplings import dressed_matter_frequency, dressed_photon_frequency

    omega_k_bar = dressed_photon_frequency(emitter.chi_m, mode, n_emitters)
    omega_m_tilde = dressed_matter_frequency(emitter, mode, n_emitters)
    return (
        mode.eta**2
        * omega_m_tilde
        * mode.omega_k**2
        / (2.0 * omega_k_bar * emitter.omega_m)
    )


def orientation_averaged_coupling_sq(
    emitter: Emitter, mode: CavityMode, n_emitters: int
) -> float:
    """Isotropic average of the squared collective coupling |g|^2.

    Closed form (N/3) * prefactor * [(1+s^2)|mu|^2 + 2 lambda s <mu|U mu>];
    only the chiral component (parallel projection of U mu on mu) is
    handedness-selective.
    """
    s = emitter.xi_scale
    lam = mode.handedness
    mu = emitter.mu
    bracket = (1.0 + s * s) * float(mu @ mu) + 2.0 * lam * s * float(
        mu @ emitter.xi_rotation @ mu
    )
    prefactor = _coupling_sq_prefactor(emitter, mode, n_emitters)
    return n_emitters / 3.0 * prefactor * bracket


class MonteCarloEstimate(NamedTuple):
    value: float
    stderr: float


def _geodesic_rotations(mu_hat: np.ndarray, n_hat: np.ndarray) -> Rotation:
    """Minimal rotations mapping mu_hat onto each row of n_hat."""
    axis = np.cross(mu_hat, n_hat)
    sin = np.linalg.norm(axis, axis=1)
    cos = n_hat @ mu_hat
    angle = np.arctan2(sin, cos)
    # antipodal draws: rotate by pi about any axis perpendicular to mu_hat
    perp = np.cross(mu_hat, [1.0, 0.0, 0.0])
    if np.linalg.norm(perp) < 1e-6:
        perp = np.cross(mu_hat, [0.0, 1.0, 0.0])
    perp /= np.linalg.norm(perp)
    degen = sin < 1e-15
    safe_sin = np.where(degen, 1.0, sin)
    axis = np.where(degen[:, None], perp, axis / safe_sin[:, None])
    return Rotation.from_rotvec(axis * angle[:, None])


def sample_orientation_coupling(
    emitter: Emitter,
    mode: CavityMode,
    n_emitters: int,
    seed: int,
    n_samples: int,
) -> MonteCarloEstimate:
    """Monte-Carlo estimate of the orientation-averaged squared coupling.

    Samples molecular orientations from the Haar measure (cos(theta)
    uniform on [-1, 1]; azimuth and roll delta uniform on [0, 2pi)) and
    averages the squared projection of the rotated combined moment
    (1 + lambda s U) mu onto the mode polarization. Deterministic for a
    fixed seed; converges to orientation_averaged_coupling_sq.
    """
    if n_samples < 100:
        raise ValueError(f"n_samples must be at least 100, got {n_samples}")
    eps = standing_wave_polarization(mode)
    mu = emitter.mu
    mu_norm = np.linalg.norm(mu)
    if mu_norm == 0.0:
        raise ValueError("orientation sampling undefined for mu = 0")
    mu_hat = mu / mu_norm

    rng = np.random.default_rng(seed)
    cos_theta = rng.uniform(-1.0, 1.0, n_samples)
    phi = rng.uniform(0.0, 2.0 * np.pi, n_samples)
    delta = rng.uniform(0.0, 2.0 * np.pi, n_samples)

    sin_theta = np.sqrt(1.0 - cos_theta**2)
    n_hat = np.column_stack(
        (sin_theta * np.cos(phi), sin_theta * np.sin(phi), cos_theta)
    )
    rotations = Rotation.from_rotvec(n_hat * delta[:, None]) * _geodesic_rotations(
        mu_hat, n_hat
    )

    combined = mu + mode.handedness * emitter.xi_scale * emitter.xi_rotation @ mu
    projections = rotations.apply(combined) @ eps
    samples = projections**2

    scale = n_emitters * _coupling_sq_prefactor(emitter, mode, n_emitters)
    value = scale * float(np.mean(samples))
    stderr = scale * float(np.std(samples, ddof=1) / np.sqrt(n_samples))
    return MonteCarloEstimate(value, stderr)
