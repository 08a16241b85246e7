"""Deterministic parameter scans over the analytic solvers, as CSV tables.

Each scan consumes a flat string config table (defaults overlaid by config
file and --set pairs, see `config`), resolves `auto` values, and echoes the
full effective configuration into the table metadata so the CSV header
reproduces the run. Instabilities become rows flagged unstable=1 with
zeroed value columns rather than aborting the scan.

Default system values: the fundamental coupling eta = 0.001 and the
chirality estimate xi = 3.712e-5 for the ensemble-size scan are the
published figure parameters; omega_m = 0.1 a.u. and mu = (2, 0, 0) a.u. are
placeholder dye-like values (the source work cites these to external data
without printing them) and can be overridden per run.
"""

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .config import (
    ConfigError,
    config_bool,
    config_choice,
    config_float,
    config_floats,
    config_int,
    render_value,
)
from .couplings import DerivedCouplings, InstabilityError, derive_couplings
from .emitters import Emitter
from .fields import SPEED_OF_LIGHT_AU, CavityMode
from .fock_oracle import FockConfig, OracleReport, oracle_check
from .hopfield import polariton_frequencies, solve_polaritons, stability_factors
from .scantable import ScanTable
from .tavis_cummings import dispersion_scan as tc_dispersion_scan

# Rejection thresholds for the randomized oracle suite: both stability
# factors must clear a 10% margin (thermodynamic stability, not merely real
# Omega) and the gap ratio must keep Omega_plus within the first soft-mode
# rungs, which stay converged only while their occupation is well below the
# Fock cutoff — hence the cutoff/3 scaling of the admissible ratio.
ORACLE_STABILITY_MARGIN = 0.1
ORACLE_MAX_GAP_RATIO = 12.0


def _max_gap_ratio(cutoff: int) -> float:
    return min(ORACLE_MAX_GAP_RATIO, cutoff / 3.0)

_SYSTEM_DEFAULTS = {
    "handedness": "1",
    "eta": "0.001",
    "omega_m": "0.1",
    "mu": "2,0,0",
    "quadrupole": "0,0,0,0,0,0,0,0,0",
    "chi_m": "0,0,0,0,0,0,0,0,0",
    "xi_rotation": "1,0,0,0,1,0,0,0,1",
    "roll_delta": "0",
    "z": "0",
    "k_z": "auto",
}

CAVITY_DEFAULTS = {
    **_SYSTEM_DEFAULTS,
    "n_emitters": "100",
    "omega_k_min": "auto",
    "omega_k_max": "auto",
    "omega_k_points": "41",
    "xi_min": "-1",
    "xi_max": "1",
    "xi_points": "21",
    "seed": "0",
}

N_SCAN_DEFAULTS = {
    **_SYSTEM_DEFAULTS,
    "xi": "3.712e-5",
    "omega_k": "auto",
    "n_max_exp": "20",
    "selfpol": "collective",
    "seed": "0",
}

DISPERSION_DEFAULTS = {
    **_SYSTEM_DEFAULTS,
    "xi": "0.5",
    "n_emitters": "100",
    "k_par_min": "0",
    "k_par_max": "auto",
    "k_par_points": "41",
    "seed": "0",
}

ORACLE_DEFAULTS = {
    "oracle_sets": "200",
    "fock_cutoff": "40",
    "fock_tol": "1e-8",
    "tol": "1e-7",
    "check_convergence": "0",
    "seed": "20240",
}


@dataclass(frozen=True)
class SystemConfig:
    """Typed emitter-plus-mode block shared by all scans."""

    handedness: int
    eta: float
    omega_m: float
    mu: np.ndarray
    quadrupole: np.ndarray
    chi_m: np.ndarray
    xi_rotation: np.ndarray
    roll_delta: float
    z: float
    k_z: float

    def emitter(self, xi: float) -> Emitter:
        return Emitter(
            omega_m=self.omega_m,
            mu=self.mu,
            quadrupole=self.quadrupole,
            xi_scale=xi,
            xi_rotation=self.xi_rotation,
            roll_delta=self.roll_delta,
            chi_m=self.chi_m,
        )

    def mode(self, omega_k: float) -> CavityMode:
        return CavityMode(
            handedness=self.handedness,
            omega_k=omega_k,
            eta=self.eta,
            k_z=self.k_z,
            z=self.z,
        )


def _system_from(table: dict) -> SystemConfig:
    handedness = config_int(table, "handedness")
    if handedness not in (1, -1):
        raise ConfigError(f"key 'handedness': expected 1 or -1, got {handedness}")
    omega_m = config_float(table, "omega_m")
    if not omega_m > 0:
        raise ConfigError(f"key 'omega_m': must be positive, got {omega_m}")
    # k_z = omega_m/c is the resonant vertical vacuum mode; it only enters
    # through quadrupole/self-magnetization contractions and the dispersion
    if table["k_z"] == "auto":
        k_z = omega_m / SPEED_OF_LIGHT_AU
    else:
        k_z = config_float(table, "k_z")
    try:
        return SystemConfig(
            handedness=handedness,
            eta=config_float(table, "eta"),
            omega_m=omega_m,
            mu=config_floats(table, "mu", 3),
            quadrupole=config_floats(table, "quadrupole", 9).reshape(3, 3),
            chi_m=config_floats(table, "chi_m", 9).reshape(3, 3),
            xi_rotation=config_floats(table, "xi_rotation", 9).reshape(3, 3),
            roll_delta=config_float(table, "roll_delta"),
            z=config_float(table, "z"),
            k_z=k_z,
        )
    except ValueError as err:
        raise ConfigError(str(err)) from err


def _system_echo(system: SystemConfig) -> list:
    return [
        ("handedness", render_value(system.handedness)),
        ("eta", render_value(system.eta)),
        ("omega_m", render_value(system.omega_m)),
        ("mu", render_value(system.mu)),
        ("quadrupole", render_value(system.quadrupole)),
        ("chi_m", render_value(system.chi_m)),
        ("xi_rotation", render_value(system.xi_rotation)),
        ("roll_delta", render_value(system.roll_delta)),
        ("z", render_value(system.z)),
        ("k_z", render_value(system.k_z)),
    ]


def _grid(low: float, high: float, points: int, key: str) -> np.ndarray:
    if points < 1:
        raise ConfigError(f"key '{key}': needs at least one point, got {points}")
    if points == 1:
        return np.array([low])
    return np.linspace(low, high, points)


def scan_cavity(table: dict) -> ScanTable:
    """Polariton spectra and fractions over an (omega_k, xi) grid.

    The xi = 0 slice is the standard (achiral) Hopfield model; the minimum
    splitting closes toward xi*lambda = -1 as the mismatched enantiomer
    decouples.
    """
    system = _system_from(table)
    n_emitters = config_int(table, "n_emitters")
    omega_lo = (
        0.8 * system.omega_m
        if table["omega_k_min"] == "auto"
        else config_float(table, "omega_k_min")
    )
    omega_hi = (
        1.2 * system.omega_m
        if table["omega_k_max"] == "auto"
        else config_float(table, "omega_k_max")
    )
    omegas = _grid(omega_lo, omega_hi, config_int(table, "omega_k_points"), "omega_k_points")
    xis = _grid(
        config_float(table, "xi_min"),
        config_float(table, "xi_max"),
        config_int(table, "xi_points"),
        "xi_points",
    )

    rows = []
    for omega_k in omegas:
        mode = system.mode(float(omega_k))
        for xi in xis:
            try:
                c = derive_couplings(system.emitter(float(xi)), mode, n_emitters)
                sol = solve_polaritons(c)
                rows.append(
                    (
                        omega_k,
                        xi,
                        c.omega_k_bar,
                        c.omega_m_tilde,
                        sol.omega_plus,
                        sol.omega_minus,
                        sol.photon_fraction_plus,
                        sol.matter_fraction_plus,
                        sol.photon_fraction_minus,
                        sol.matter_fraction_minus,
                        sol.e_vac,
                        0.0,
                    )
                )
            except InstabilityError:
                rows.append((omega_k, xi) + (0.0,) * 9 + (1.0,))

    metadata = (
        [("command", "scan-cavity")]
        + _system_echo(system)
        + [
            ("n_emitters", render_value(n_emitters)),
            ("omega_k_min", render_value(omega_lo)),
            ("omega_k_max", render_value(omega_hi)),
            ("omega_k_points", render_value(len(omegas))),
            ("xi_min", render_value(xis[0])),
            ("xi_max", render_value(xis[-1])),
            ("xi_points", render_value(len(xis))),
            ("seed", table["seed"]),
        ]
    )
    return ScanTable(
        column_names=(
            "omega_k",
            "xi",
            "omega_k_bar",
            "omega_m_tilde",
            "omega_plus",
            "omega_minus",
            "photon_frac_plus",
            "matter_frac_plus",
            "photon_frac_minus",
            "matter_frac_minus",
            "e_vac",
            "unstable",
        ),
        rows=tuple(rows),
        metadata=tuple(metadata),
    )


def _loglog_slopes(n_values, deltas, usable) -> list:
    """Centered log-log slope of |delta| vs N; 0.0 where undefined."""
    slopes = []
    for i in range(len(n_values)):
        left = i - 1 if i > 0 and usable[i - 1] else i
        right = i + 1 if i + 1 < len(n_values) and usable[i + 1] else i
        if not usable[i] or left == right:
            slopes.append(0.0)
            continue
        slopes.append(
            (np.log(abs(deltas[right])) - np.log(abs(deltas[left])))
            / (np.log(n_values[right]) - np.log(n_values[left]))
        )
    return slopes


def scan_n(table: dict) -> ScanTable:
    """Enantio-discrimination observables over N in {1, 2, 4, ..., 2^n_max_exp}.

    delta quantities are spectra at xi = +|xi| minus xi = -|xi| at fixed
    everything else. selfpol='local' switches to the cancelling-
    intermolecular variant whose lower branch goes unstable at a finite N.
    """
    system = _system_from(table)
    xi = config_float(table, "xi")
    omega_k = (
        system.omega_m
        if table["omega_k"] == "auto"
        else config_float(table, "omega_k")
    )
    n_max_exp = config_int(table, "n_max_exp")
    if not 0 <= n_max_exp <= 60:
        raise ConfigError(f"key 'n_max_exp': expected 0..60, got {n_max_exp}")
    selfpol = config_choice(table, "selfpol", ("collective", "local"))
    mode = system.mode(omega_k)
    left = system.emitter(abs(xi))
    right = system.emitter(-abs(xi))

    n_values = [2**k for k in range(n_max_exp + 1)]
    deltas = []
    for n in n_values:
        try:
            up_l, low_l = polariton_frequencies(derive_couplings(left, mode, n, selfpol))
            up_r, low_r = polariton_frequencies(derive_couplings(right, mode, n, selfpol))
            d_up, d_low = up_l - up_r, low_l - low_r
            deltas.append((d_up, d_low, 0.5 * (d_up + d_low), False))
        except InstabilityError:
            deltas.append((0.0, 0.0, 0.0, True))

    usable = [not unstable and d_evac != 0.0 for _, _, d_evac, unstable in deltas]
    slopes = _loglog_slopes(n_values, [d[2] for d in deltas], usable)
    rows = tuple(
        (n, d_up, d_low, d_evac, slope, float(unstable))
        for n, (d_up, d_low, d_evac, unstable), slope in zip(n_values, deltas, slopes)
    )

    metadata = (
        [("command", "scan-n")]
        + _system_echo(system)
        + [
            ("xi", render_value(xi)),
            ("omega_k", render_value(omega_k)),
            ("n_max_exp", render_value(n_max_exp)),
            ("selfpol", selfpol),
            ("seed", table["seed"]),
        ]
    )
    return ScanTable(
        column_names=(
            "n",
            "delta_omega_plus",
            "delta_omega_minus",
            "delta_e_vac",
            "slope_delta_e_vac",
            "unstable",
        ),
        rows=rows,
        metadata=tuple(metadata),
    )


def scan_dispersion(table: dict) -> ScanTable:
    """Bright-sector Tavis-Cummings polaritons along the in-plane dispersion."""
    system = _system_from(table)
    n_emitters = config_int(table, "n_emitters")
    xi = config_float(table, "xi")
    k_par_max = (
        system.k_z
        if table["k_par_max"] == "auto"
        else config_float(table, "k_par_max")
    )
    k_pars = _grid(
        config_float(table, "k_par_min"),
        k_par_max,
        config_int(table, "k_par_points"),
        "k_par_points",
    )
    base = system.mode(SPEED_OF_LIGHT_AU * system.k_z)
    core = tc_dispersion_scan(system.emitter(xi), base, k_pars, n_emitters)

    metadata = (
        [("command", "scan-dispersion")]
        + _system_echo(system)
        + [
            ("xi", render_value(xi)),
            ("n_emitters", render_value(n_emitters)),
            ("k_par_min", render_value(k_pars[0])),
            ("k_par_max", render_value(k_par_max)),
            ("k_par_points", render_value(len(k_pars))),
            ("seed", table["seed"]),
        ]
    )
    return ScanTable(
        column_names=core.column_names, rows=core.rows, metadata=tuple(metadata)
    )


class OracleSuiteResult(NamedTuple):
    table: ScanTable
    worst_deviation: float
    tol: float


def sample_stable_couplings(
    rng: np.random.Generator, max_gap_ratio: float = ORACLE_MAX_GAP_RATIO
) -> DerivedCouplings:
    """One random thermodynamically stable parameter set for the oracle.

    omega_k_bar, omega_m_tilde uniform on [0.5, 2], sqrt(N)*g uniform on
    [0, 0.3*omega_m_tilde], xi*lambda uniform on [-1, 1]; rejected until the
    stability factors clear ORACLE_STABILITY_MARGIN and the gap ratio stays
    below max_gap_ratio (identifiability of the stiff gap at finite cutoff).
    """
    for _ in range(10_000):
        w_photon = rng.uniform(0.5, 2.0)
        w_matter = rng.uniform(0.5, 2.0)
        coupling = rng.uniform(0.0, 0.3 * w_matter)
        chirality = rng.uniform(-1.0, 1.0)
        c = DerivedCouplings(
            omega_k_bar=w_photon,
            omega_m_tilde=w_matter,
            g_tilde=coupling,
            xi_tilde=chirality,
            g_bar=coupling,
            xi_bar=chirality,
            n_emitters=1,
            handedness=1,
        )
        f1, f2 = stability_factors(c)
        if min(f1, f2) < ORACLE_STABILITY_MARGIN * w_photon * w_matter:
            continue
        upper, lower = polariton_frequencies(c)
        if upper > max_gap_ratio * lower:
            continue
        return c
    raise RuntimeError("rejection sampling failed to find a stable parameter set")


def run_oracle_suite(table: dict) -> OracleSuiteResult:
    """Randomized analytic-vs-Fock regression grid.

    Deterministic for a fixed seed. The worst relative deviation of either
    branch across the grid decides the CLI exit status (2 when above tol).
    """
    n_sets = config_int(table, "oracle_sets")
    cutoff = config_int(table, "fock_cutoff")
    fock_tol = config_float(table, "fock_tol")
    tol = config_float(table, "tol")
    check_convergence = config_bool(table, "check_convergence")
    seed = config_int(table, "seed")
    try:
        fock_config = FockConfig(cutoff=cutoff, tol=fock_tol)
    except ValueError as err:
        raise ConfigError(str(err)) from err

    rng = np.random.default_rng(seed)
    max_ratio = _max_gap_ratio(cutoff)
    rows = []
    worst = 0.0
    for index in range(n_sets):
        c = sample_stable_couplings(rng, max_ratio)
        report = oracle_check(c, fock_config, check_convergence=check_convergence)
        worst = max(worst, report.deviation_plus, report.deviation_minus)
        rows.append(
            (
                float(index),
                c.omega_k_bar,
                c.omega_m_tilde,
                c.g_tilde,
                c.xi_tilde * c.handedness,
            )
            + report.csv_row()
        )

    metadata = [("command", "oracle")] + [
        (key, table[key]) for key in ORACLE_DEFAULTS
    ]
    result_table = ScanTable(
        column_names=("set_index", "omega_k_bar", "omega_m_tilde", "coupling", "xi_lambda")
        + OracleReport.CSV_COLUMNS,
        rows=tuple(rows),
        metadata=tuple(metadata),
    )
    return OracleSuiteResult(result_table, worst, tol)


SCAN_COMMANDS: dict[str, tuple[dict, Callable]] = {
    "scan-cavity": (CAVITY_DEFAULTS, scan_cavity),
    "scan-n": (N_SCAN_DEFAULTS, scan_n),
    "scan-dispersion": (DISPERSION_DEFAULTS, scan_dispersion),
    "oracle": (ORACLE_DEFAULTS, run_oracle_suite),
}
