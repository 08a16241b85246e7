"""Independent brute-force validator: exact diagonalization of the two-mode
chiral Hopfield Hamiltonian in a truncated Fock basis.

The Hamiltonian only involves the two collective modes (the dark states are
already eliminated), so a dense eigensolver at the default cutoff 40 means a
1681-dimensional matrix. Spectra are computed from a unitarily equivalent
real-symmetric gauge (photon phase a -> i a) split into even/odd total
occupation parity blocks, which is an order of magnitude faster than the
complex solve; the faithful complex Hermitian matrix remains the contract of
build_fock_hamiltonian and the equivalence is tested.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import hopfield
from .couplings import DerivedCouplings


@dataclass(frozen=True)
class FockConfig:
    """cutoff: max occupation per mode; tol: relative acceptance tolerance on
    the polariton frequencies; convergence_factor: cutoff multiplier for the
    doubling check."""

    cutoff: int = 40
    tol: float = 1e-8
    convergence_factor: int = 2

    def __post_init__(self):
        if self.cutoff < 4:
            raise ValueError(f"cutoff must be at least 4, got {self.cutoff}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.convergence_factor < 2:
            raise ValueError(
                f"convergence_factor must be at least 2, got {self.convergence_factor}"
            )


def _destroy(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1.0, dim)), 1)


def build_fock_hamiltonian(c: DerivedCouplings, config: FockConfig) -> np.ndarray:
    """Two-mode Hamiltonian in the basis |n_photon, n_matter>, row-major
    (index = n_photon*(cutoff+1) + n_matter), dimension (cutoff+1)^2.

    H = wk(a'a + 1/2) + wm(B'B + 1/2)
        - i sqrt(N) g [(B' + B)(a - a') + xi lam (B' - B)(a + a')]
    with dressed frequencies; Hermitian by construction.
    """
    dim = config.cutoff + 1
    single = np.eye(dim)
    a = np.kron(_destroy(dim), single)
    b = np.kron(single, _destroy(dim))
    ad, bd = a.T.copy(), b.T.copy()
    ident = np.eye(dim * dim)

    g_root = np.sqrt(c.n_emitters) * c.g_tilde
    p = c.xi_tilde * c.handedness
    h0 = c.omega_k_bar * (ad @ a + 0.5 * ident) + c.omega_m_tilde * (
        bd @ b + 0.5 * ident
    )
    coupling = (bd + b) @ (a - ad) + p * (bd - b) @ (a + ad)
    return h0.astype(complex) - 1j * g_root * coupling


def _real_gauge_hamiltonian(c: DerivedCouplings, cutoff: int) -> np.ndarray:
    # photon gauge a -> i a turns the +-i couplings real; spectrum unchanged
    dim = cutoff + 1
    low = _destroy(dim)
    number = low.T @ low
    plus = low + low.T
    minus = low - low.T
    single = np.eye(dim)
    g_root = np.sqrt(c.n_emitters) * c.g_tilde
    p = c.xi_tilde * c.handedness
    h = c.omega_k_bar * np.kron(number + 0.5 * single, single)
    h += c.omega_m_tilde * np.kron(single, number + 0.5 * single)
    h += g_root * (np.kron(plus, plus) - p * np.kron(minus, minus))
    return h


def _parity_split_levels(h: np.ndarray, dim: int, count: int) -> np.ndarray:
    # coupling changes both occupations by one, so (n_a + n_B) mod 2 is conserved
    total = np.arange(dim * dim) // dim + np.arange(dim * dim) % dim
    levels = [
        np.linalg.eigvalsh(h[np.ix_(idx, idx)])
        for idx in (np.where(total % 2 == 0)[0], np.where(total % 2 == 1)[0])
    ]
    merged = np.sort(np.concatenate(levels))
    return merged[:count]


def low_levels(c: DerivedCouplings, cutoff: int, count: int = 48) -> np.ndarray:
    """Lowest eigenvalues of the truncated Hamiltonian, ascending."""
    dim = cutoff + 1
    h = _real_gauge_hamiltonian(c, cutoff)
    return _parity_split_levels(h, dim, min(count, dim * dim))


def oracle_spectrum(hamiltonian: np.ndarray) -> np.ndarray:
    """Sorted real eigenvalues of a Hermitian matrix."""
    deviation = np.linalg.norm(hamiltonian - hamiltonian.conj().T)
    if deviation > 1e-12 * max(np.linalg.norm(hamiltonian), 1.0):
        raise ValueError(f"matrix is not Hermitian (defect {deviation:.3e})")
    return np.sort(np.linalg.eigvalsh(hamiltonian))


def _lattice(om_minus: float, om_plus: float, limit: float, count: int) -> np.ndarray:
    values = []
    n = 0
    while n * om_minus <= limit:
        m = 0 if n > 0 else 1
        while n * om_minus + m * om_plus <= limit:
            values.append(n * om_minus + m * om_plus)
            m += 1
        n += 1
    values.sort()
    return np.asarray(values[:count])


@dataclass(frozen=True)
class LadderFit:
    """Gap structure read off a quadratic-Hamiltonian spectrum.

    omega_minus is the first gap E1 - E0; omega_plus the value whose ladder
    E0 + n omega_minus + m omega_plus best reproduces the observed levels
    (multiplicities included). `degenerate` marks a doubly degenerate first
    gap (omega_plus = omega_minus); `ambiguous` marks near-commensurate or
    unidentifiable ladders.
    """

    omega_minus: float
    omega_plus: float
    residual: float
    degenerate: bool
    ambiguous: bool


def fit_ladder(levels, tol: float) -> LadderFit:
    levels = np.sort(np.asarray(levels, dtype=float))
    if levels.size < 4:
        raise ValueError("need at least 4 levels to identify the gap structure")
    gaps = levels[1:] - levels[0]
    om = float(gaps[0])
    if om <= 0:
        raise ValueError("first gap is nonpositive; spectrum is not a ladder")
    scale = abs(levels[0]) + om
    match_tol = 10.0 * tol * scale

    # Walk up the pure soft ladder om, 2 om, 3 om, ...; the first position
    # that breaks the pattern marks the onset of the stiff gap, either as a
    # new value or as an extra copy of a commensurate rung. Restricting the
    # fit to a small window around it keeps unconverged high rungs (whose
    # occupations approach the cutoff) out of the comparison.
    onset = None
    for index, gap in enumerate(gaps):
        if abs(gap - (index + 1) * om) > match_tol:
            onset = index
            break
    if onset is None:
        # stiff gap beyond the retained window: not identifiable
        return LadderFit(om, om, float("inf"), False, True)

    window = gaps[: min(onset + 5, gaps.size)]

    def residual_for(cand: float) -> float:
        lattice = _lattice(om, cand, limit=float(window[-1]) + match_tol, count=window.size)
        if lattice.size < window.size:
            return float("inf")
        return float(np.max(np.abs(lattice - window)))

    candidates: list[float] = []
    for gap in window[onset:]:
        if all(abs(gap - known) > match_tol for known in candidates):
            candidates.append(float(gap))
    if abs(gaps[onset] - om) <= match_tol and om not in candidates:
        candidates.append(om)  # doubly degenerate first gap
    scored = sorted((residual_for(cand), cand) for cand in candidates)
    best_resid, best = scored[0]
    degenerate = abs(best - om) <= match_tol
    ambiguous = best_resid > match_tol
    if len(scored) > 1:
        second_resid, second = scored[1]
        if second_resid < 2.0 * best_resid and abs(second - best) > match_tol:
            ambiguous = True
    return LadderFit(om, om if degenerate else best, best_resid, degenerate, ambiguous)


@dataclass(frozen=True)
class OracleReport:
    """Comparison of the Fock-oracle gaps against the analytic frequencies."""

    omega_plus: float
    omega_minus: float
    e0: float
    analytic_plus: float
    analytic_minus: float
    deviation_plus: float
    deviation_minus: float
    e0_deviation: float
    ladder_residual: float
    degenerate: bool
    ambiguous: bool
    cutoff: int
    converged: Optional[bool] = None
    omega_plus_doubled: Optional[float] = None
    omega_minus_doubled: Optional[float] = None

    CSV_COLUMNS = (
        "oracle_plus",
        "oracle_minus",
        "e0",
        "analytic_plus",
        "analytic_minus",
        "dev_plus",
        "dev_minus",
        "e0_dev",
        "ladder_residual",
        "degenerate",
        "ambiguous",
    )

    def csv_row(self) -> tuple:
        return (
            self.omega_plus,
            self.omega_minus,
            self.e0,
            self.analytic_plus,
            self.analytic_minus,
            self.deviation_plus,
            self.deviation_minus,
            self.e0_deviation,
            self.ladder_residual,
            float(self.degenerate),
            float(self.ambiguous),
        )


def oracle_check(
    c: DerivedCouplings,
    config: FockConfig = FockConfig(),
    check_convergence: bool = True,
) -> OracleReport:
    """Diagonalize, read off the gaps, and compare against the analytic values.

    E0 is compared against (Omega+ + Omega-)/2 for information only; the
    physically meaningful vacuum comparison is on differences across the
    sign of xi, for which absolute constants drop out. With
    check_convergence the run is repeated at cutoff*convergence_factor and
    `converged` records whether the deviations stopped growing (down to the
    tol floor); both gap values are reported either way.
    """
    analytic_plus, analytic_minus = hopfield.polariton_frequencies(c)

    def gaps_at(cutoff: int):
        levels = low_levels(c, cutoff)
        fit = fit_ladder(levels, config.tol)
        dev_plus = abs(fit.omega_plus - analytic_plus) / analytic_plus
        dev_minus = abs(fit.omega_minus - analytic_minus) / max(
            analytic_minus, 1e-300
        )
        return levels, fit, dev_plus, dev_minus

    levels, fit, dev_plus, dev_minus = gaps_at(config.cutoff)
    e_vac = 0.5 * (analytic_plus + analytic_minus)
    report = dict(
        omega_plus=fit.omega_plus,
        omega_minus=fit.omega_minus,
        e0=float(levels[0]),
        analytic_plus=analytic_plus,
        analytic_minus=analytic_minus,
        deviation_plus=dev_plus,
        deviation_minus=dev_minus,
        e0_deviation=abs(float(levels[0]) - e_vac) / e_vac,
        ladder_residual=fit.residual,
        degenerate=fit.degenerate,
        ambiguous=fit.ambiguous,
        cutoff=config.cutoff,
    )
    if check_convergence:
        _, fit2, dev2_plus, dev2_minus = gaps_at(
            config.cutoff * config.convergence_factor
        )
        report.update(
            converged=(
                dev2_plus <= max(dev_plus, config.tol)
                and dev2_minus <= max(dev_minus, config.tol)
            ),
            omega_plus_doubled=fit2.omega_plus,
            omega_minus_doubled=fit2.omega_minus,
        )
    return OracleReport(**report)
