"""Chiral-cavity polaritonics: analytic chiral Hopfield and Tavis-Cummings
solvers, orientation averaging, and a truncated-Fock exact-diagonalization
oracle. Atomic units with hbar = 1 throughout."""

from .couplings import (
    DerivedCouplings,
    InstabilityError,
    MagneticInstabilityError,
    derive_couplings,
    dressed_matter_frequency,
    dressed_photon_frequency,
)
from .emitters import (
    Emitter,
    MonteCarloEstimate,
    ReciprocityResult,
    check_reciprocity,
    chiral_tdm_vector,
    orientation_averaged_coupling_sq,
    sample_orientation_coupling,
)
from .fields import (
    SPEED_OF_LIGHT_AU,
    CavityMode,
    oblique_mode,
    optical_chirality_density,
    polarization_gradient,
    standing_wave_polarization,
    standing_wave_polarization_oblique,
)
from .fock_oracle import (
    FockConfig,
    LadderFit,
    OracleReport,
    build_fock_hamiltonian,
    fit_ladder,
    low_levels,
    oracle_check,
    oracle_spectrum,
)
from .hopfield import (
    BranchCoefficients,
    DiscriminationResult,
    PolaritonInstabilityError,
    PolaritonSolution,
    discrimination,
    dynamical_matrix,
    find_critical_n,
    hopfield_coefficients,
    polariton_frequencies,
    polariton_frequencies_local_selfpol,
    solve_polaritons,
    stability_factors,
    vacuum_energy,
)
from .scantable import ScanTable
from .tavis_cummings import TCSpectrum, dispersion_scan, single_excitation_spectrum

__version__ = "0.1.0"
