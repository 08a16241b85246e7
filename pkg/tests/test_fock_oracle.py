import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from chiralpol.couplings import DerivedCouplings
from chiralpol.fock_oracle import (
    FockConfig,
    _real_gauge_hamiltonian,
    build_fock_hamiltonian,
    fit_ladder,
    low_levels,
    oracle_check,
    oracle_spectrum,
)
from chiralpol.hopfield import polariton_frequencies


def couplings(w_photon=1.0, w_matter=1.0, g=0.1, xi=0.0, lam=1):
    return DerivedCouplings(
        omega_k_bar=w_photon,
        omega_m_tilde=w_matter,
        g_tilde=g,
        xi_tilde=xi,
        g_bar=g,
        xi_bar=xi,
        n_emitters=1,
        handedness=lam,
    )


def stable_random_couplings(rng):
    while True:
        c = couplings(
            w_photon=rng.uniform(0.5, 2.0),
            w_matter=rng.uniform(0.5, 2.0),
            g=rng.uniform(0.0, 0.25),
            xi=rng.uniform(-1.0, 1.0),
        )
        try:
            upper, lower = polariton_frequencies(c)
        except Exception:
            continue
        if upper < 8 * lower:
            return c


class TestHamiltonianBuild:
    def test_free_hamiltonian_is_diagonal(self):
        c = couplings(w_photon=0.9, w_matter=1.7, g=0.0)
        h = build_fock_hamiltonian(c, FockConfig(cutoff=4))
        assert_allclose(h, np.diag(np.diag(h)))
        dim = 5
        n_photon, n_matter = np.divmod(np.arange(dim * dim), dim)
        expected = 0.9 * (n_photon + 0.5) + 1.7 * (n_matter + 0.5)
        assert_allclose(np.diag(h).real, expected)

    def test_dimension_and_basis_order(self):
        h = build_fock_hamiltonian(couplings(), FockConfig(cutoff=6))
        assert h.shape == (49, 49)

    @given(
        w1=st.floats(0.5, 2.0),
        w2=st.floats(0.5, 2.0),
        g=st.floats(0.0, 0.3),
        xi=st.floats(-1.0, 1.0),
    )
    @settings(max_examples=25, deadline=None)
    def test_hermiticity(self, w1, w2, g, xi):
        h = build_fock_hamiltonian(couplings(w1, w2, g, xi), FockConfig(cutoff=5))
        assert np.linalg.norm(h - h.conj().T) == 0.0

    def test_cutoff_one_enumerated_by_hand(self):
        # basis |n_a n_B>: 00, 01, 10, 11; couplings g(1 +- xi lam) on the
        # counter-rotating (00<->11) and rotating (01<->10) pairs
        g, xi = 0.07, 0.4
        c = couplings(w_photon=1.1, w_matter=0.9, g=g, xi=xi)
        h = build_fock_hamiltonian(c, FockConfig(cutoff=4))[:4, :4]
        # rebuild the 4x4 block by hand (cutoff=4 matrix restricted to
        # occupations {0,1} x {0,1} has the same entries as cutoff=1)
        expected = np.zeros((4, 4), dtype=complex)
        expected[0, 0] = 0.5 * 1.1 + 0.5 * 0.9
        expected[1, 1] = 0.5 * 1.1 + 1.5 * 0.9
        expected[2, 2] = 1.5 * 1.1 + 0.5 * 0.9
        expected[3, 3] = 1.5 * 1.1 + 1.5 * 0.9
        expected[0, 3] = -1j * g * (1 - xi)
        expected[3, 0] = 1j * g * (1 - xi)
        expected[1, 2] = -1j * g * (1 + xi)
        expected[2, 1] = 1j * g * (1 + xi)
        hand_indices = [0, 1, 5, 6]  # 00, 01, 10, 11 at cutoff 4
        assert_allclose(h[np.ix_([0, 1], [0, 1])], expected[:2, :2])
        full = build_fock_hamiltonian(c, FockConfig(cutoff=4))
        assert_allclose(
            full[np.ix_(hand_indices, hand_indices)], expected, atol=1e-15
        )

    def test_real_gauge_is_unitarily_equivalent(self):
        c = couplings(w_photon=1.2, w_matter=0.8, g=0.11, xi=-0.6)
        complex_h = build_fock_hamiltonian(c, FockConfig(cutoff=6))
        real_h = _real_gauge_hamiltonian(c, 6)
        assert np.linalg.norm(real_h - real_h.T) == 0.0
        assert_allclose(
            np.linalg.eigvalsh(complex_h), np.linalg.eigvalsh(real_h), atol=1e-12
        )

    def test_parity_blocks_do_not_mix(self):
        c = couplings(g=0.2, xi=0.5)
        h = _real_gauge_hamiltonian(c, 5)
        total = np.arange(36) // 6 + np.arange(36) % 6
        even, odd = np.where(total % 2 == 0)[0], np.where(total % 2 == 1)[0]
        assert np.linalg.norm(h[np.ix_(even, odd)]) == 0.0


class TestSpectrum:
    def test_requires_hermitian_input(self):
        bad = np.array([[0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(ValueError, match="Hermitian"):
            oracle_spectrum(bad)

    def test_free_gaps_and_ground_energy(self):
        c = couplings(w_photon=0.8, w_matter=1.9, g=0.0)
        levels = low_levels(c, cutoff=8, count=6)
        assert levels[0] == pytest.approx((0.8 + 1.9) / 2, rel=1e-14)
        assert levels[1] - levels[0] == pytest.approx(0.8, rel=1e-13)
        fit = fit_ladder(levels, tol=1e-10)
        assert fit.omega_minus == pytest.approx(0.8, rel=1e-13)
        assert fit.omega_plus == pytest.approx(1.9, rel=1e-13)

    def test_clean_chiral_resonance_to_1e8(self):
        c = couplings(g=0.1, xi=1.0)
        report = oracle_check(c, FockConfig(cutoff=40), check_convergence=False)
        assert report.omega_plus == pytest.approx(1.2, abs=1e-8)
        assert report.omega_minus == pytest.approx(0.8, abs=1e-8)
        assert report.deviation_plus < 1e-8
        assert report.deviation_minus < 1e-8

    def test_achiral_resonance_matches_closed_form(self):
        c = couplings(g=0.1, xi=0.0)
        report = oracle_check(c, FockConfig(cutoff=40), check_convergence=False)
        assert report.omega_plus == pytest.approx(np.sqrt(1.2), rel=1e-8)
        assert report.omega_minus == pytest.approx(np.sqrt(0.8), rel=1e-8)

    def test_ladder_residual_within_ten_tol(self):
        config = FockConfig(cutoff=30, tol=1e-8)
        rng = np.random.default_rng(42)
        for _ in range(5):
            c = stable_random_couplings(rng)
            levels = low_levels(c, config.cutoff, count=7)
            fit = fit_ladder(levels, config.tol)
            scale = abs(levels[0]) + fit.omega_minus
            assert fit.residual <= 10 * config.tol * scale

    def test_ground_state_chirality_difference_matches_analytic(self):
        # enantio-discriminating part of E0: compare xi -> -xi differences
        base = couplings(g=0.07, xi=0.35)
        flipped = dataclasses.replace(base, xi_tilde=-0.35, xi_bar=-0.35)
        e0_base = low_levels(base, 30, count=1)[0]
        e0_flipped = low_levels(flipped, 30, count=1)[0]
        up_b, low_b = polariton_frequencies(base)
        up_f, low_f = polariton_frequencies(flipped)
        analytic = 0.5 * (up_b + low_b) - 0.5 * (up_f + low_f)
        assert e0_base - e0_flipped == pytest.approx(analytic, rel=1e-9)

    def test_cutoff_monotonicity(self):
        rng = np.random.default_rng(7)
        for _ in range(3):
            c = stable_random_couplings(rng)
            upper, lower = polariton_frequencies(c)

            def deviation(cutoff):
                fit = fit_ladder(low_levels(c, cutoff, count=10), 1e-10)
                return max(
                    abs(fit.omega_plus - upper) / upper,
                    abs(fit.omega_minus - lower) / lower,
                )

            assert deviation(24) <= deviation(12) + 1e-11

    def test_handedness_symmetry_of_spectrum(self):
        c = couplings(g=0.15, xi=0.6, lam=1)
        mirrored = dataclasses.replace(c, xi_tilde=-0.6, xi_bar=-0.6, handedness=-1)
        assert_allclose(
            low_levels(c, 12, count=20), low_levels(mirrored, 12, count=20), atol=1e-13
        )

    def test_degenerate_regime_reports_single_gap(self):
        c = couplings(g=0.1, xi=-1.0)
        levels = low_levels(c, 30, count=10)
        fit = fit_ladder(levels, tol=1e-8)
        assert fit.degenerate
        assert fit.omega_plus == fit.omega_minus
        assert fit.omega_minus == pytest.approx(np.sqrt(0.96), rel=1e-8)

    def test_convergence_flag_on_clean_case(self):
        c = couplings(g=0.1, xi=0.3)
        report = oracle_check(c, FockConfig(cutoff=12), check_convergence=True)
        assert report.converged
        assert report.omega_plus_doubled is not None

    def test_commensurate_ladder_identified_by_multiplicity(self):
        # synthetic spectrum with omega_plus exactly 2*omega_minus
        om, op = 0.5, 1.0
        lattice = sorted(
            n * om + m * op for n in range(8) for m in range(4) if n + m > 0
        )
        levels = [3.0] + [3.0 + v for v in lattice[:10]]
        fit = fit_ladder(levels, tol=1e-10)
        assert fit.omega_minus == pytest.approx(om)
        assert fit.omega_plus == pytest.approx(op)
        assert fit.residual < 1e-9

    def test_config_validation(self):
        with pytest.raises(ValueError, match="cutoff"):
            FockConfig(cutoff=2)
        with pytest.raises(ValueError, match="tol"):
            FockConfig(tol=0.0)
        with pytest.raises(ValueError, match="convergence_factor"):
            FockConfig(convergence_factor=1)
