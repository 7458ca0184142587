"""
Unit tests for the Jaynes-Cummings closed forms and the master-equation series
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from src.jcwitness.jcmodel import (
    JCConfig,
    SeriesConvergenceError,
    case1_coefficients,
    case1_negativity_closed,
    case1_state,
    case2_coefficients,
    case2_initial_state,
    case2_negativity_closed,
    case2_state,
    embed_block,
    jc_hamiltonian,
    master_equation_series,
    rabi,
)
from src.jcwitness.linalg_core import negativity


class TestJCConfig:
    """Test cases for JCConfig and rabi"""

    def test_detuning_is_derived(self):
        cfg = JCConfig.from_detuning(5.0, omega_f=2.0)
        assert cfg.omega_a == pytest.approx(7.0)
        assert cfg.delta == pytest.approx(5.0)

    def test_lambda_alias(self):
        assert JCConfig(**{"lambda": 0.3}).lam == pytest.approx(0.3)
        assert JCConfig(lam=0.2).lam == pytest.approx(0.2)

    def test_invalid_values(self):
        with pytest.raises(ValidationError):
            JCConfig(g=0.0)
        with pytest.raises(ValidationError):
            JCConfig(gamma=-0.1)
        with pytest.raises(ValidationError):
            JCConfig(lam=1.5)

    def test_rabi(self):
        assert rabi(1, JCConfig.from_detuning(1.0)) == pytest.approx(1.5)
        assert rabi(0, JCConfig.from_detuning(0.0)) == pytest.approx(1.0)
        assert rabi(1, JCConfig.from_detuning(5.0)) == pytest.approx(math.sqrt(8.25))
        with pytest.raises(ValueError):
            rabi(-1, JCConfig())


class TestCase1:
    """Test cases for the decohered excited-atom evolution"""

    def setup_method(self):
        self.rng = np.random.default_rng(31)

    def test_initial_state(self):
        coeffs = case1_coefficients(1, 0.0, JCConfig.from_detuning(1.0, gamma=0.3))
        assert coeffs.E == pytest.approx(1.0)
        assert coeffs.F == pytest.approx(0.0)
        assert abs(coeffs.G) == pytest.approx(0.0)

    def test_resonant_unitary_forms(self):
        cfg = JCConfig.from_detuning(0.0, g=0.7)
        omega = 0.7 * math.sqrt(3)
        for t in (0.1, 0.9, 2.3):
            coeffs = case1_coefficients(2, t, cfg)
            assert coeffs.E == pytest.approx(math.cos(omega * t) ** 2)
            assert coeffs.F == pytest.approx(math.sin(omega * t) ** 2)
            assert coeffs.G == pytest.approx(0.5j * math.sin(2 * omega * t))
            assert case1_negativity_closed(2, t, cfg) == pytest.approx(0.5 * abs(math.sin(2 * omega * t)))

    def test_full_rabi_flop(self):
        cfg = JCConfig.from_detuning(0.0)
        coeffs = case1_coefficients(1, math.pi / (2 * math.sqrt(2)), cfg)
        assert coeffs.E == pytest.approx(0.0, abs=1e-12)
        assert coeffs.F == pytest.approx(1.0)

    def test_strong_decoherence_limit(self):
        cfg = JCConfig.from_detuning(2.0, gamma=50.0)
        omega2 = rabi(1, cfg) ** 2
        coeffs = case1_coefficients(1, 10.0, cfg)
        assert coeffs.E == pytest.approx(0.5 + 4.0 / (8 * omega2))
        assert coeffs.F == pytest.approx(2.0 / (2 * omega2))
        assert coeffs.G == pytest.approx(math.sqrt(2) * 2.0 / (4 * omega2))

    def test_populations_sum_to_one(self):
        for _ in range(50):
            cfg = JCConfig.from_detuning(self.rng.uniform(-5, 5), g=self.rng.uniform(0.1, 2),
                                         gamma=self.rng.uniform(0, 1))
            coeffs = case1_coefficients(int(self.rng.integers(0, 5)), self.rng.uniform(0, 10), cfg)
            assert coeffs.E + coeffs.F == pytest.approx(1.0, abs=1e-12)

    def test_closed_negativity_matches_spectrum(self):
        for _ in range(100):
            n = int(self.rng.integers(0, 4))
            t = self.rng.uniform(0, 8)
            cfg = JCConfig.from_detuning(self.rng.uniform(-5, 5), gamma=self.rng.uniform(0, 1))
            assert case1_negativity_closed(n, t, cfg) == pytest.approx(negativity(case1_state(n, t, cfg)), abs=1e-9)

    def test_state_layout(self):
        cfg = JCConfig.from_detuning(1.0, gamma=0.3)
        rho = case1_state(1, 0.7, cfg, fock_cut=4)
        coeffs = case1_coefficients(1, 0.7, cfg)
        assert rho.dims == (2, 4)
        assert rho.entries[1, 1] == pytest.approx(coeffs.E)
        assert rho.entries[4 + 2, 4 + 2] == pytest.approx(coeffs.F)
        assert rho.entries[1, 6] == pytest.approx(coeffs.G)

    def test_negative_time(self):
        with pytest.raises(ValueError):
            case1_coefficients(1, -0.1, JCConfig())


class TestCase2:
    """Test cases for the mixed-atom unitary evolution"""

    def setup_method(self):
        self.rng = np.random.default_rng(37)

    def test_requires_photon(self):
        with pytest.raises(ValueError):
            case2_coefficients(0, 1.0, JCConfig())
        with pytest.raises(ValueError):
            case2_initial_state(0, JCConfig())

    def test_branches_normalized(self):
        for _ in range(50):
            cfg = JCConfig.from_detuning(self.rng.uniform(-5, 5), g=self.rng.uniform(0.1, 2))
            coeffs = case2_coefficients(int(self.rng.integers(1, 5)), self.rng.uniform(0, 10), cfg)
            assert abs(coeffs.A) ** 2 + abs(coeffs.B) ** 2 == pytest.approx(1.0, abs=1e-12)
            assert abs(coeffs.C) ** 2 + abs(coeffs.D) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_resonant_magnitudes(self):
        cfg = JCConfig.from_detuning(0.0)
        t = 0.8
        coeffs = case2_coefficients(2, t, cfg)
        assert abs(coeffs.A) == pytest.approx(abs(math.sin(math.sqrt(2) * t)))
        assert abs(coeffs.B) == pytest.approx(abs(math.cos(math.sqrt(2) * t)))
        assert abs(coeffs.C) == pytest.approx(abs(math.cos(math.sqrt(3) * t)))
        assert abs(coeffs.D) == pytest.approx(abs(math.sin(math.sqrt(3) * t)))

    def test_initial_state(self):
        cfg = JCConfig.from_detuning(5.0, lam=0.2)
        np.testing.assert_allclose(case2_state(1, 0.0, cfg).entries, case2_initial_state(1, cfg).entries, atol=1e-12)

    def test_purity(self):
        for lam in (0.0, 0.2, 0.5, 0.9):
            rho = case2_state(1, 1.3, JCConfig.from_detuning(5.0, lam=lam))
            assert rho.purity() == pytest.approx(lam ** 2 + (1 - lam) ** 2, abs=1e-12)

    def test_pure_atom_negativity(self):
        cfg = JCConfig.from_detuning(5.0)
        for t in (0.3, 1.1, 4.0):
            coeffs = case2_coefficients(1, t, cfg)
            assert case2_negativity_closed(1, t, cfg) == pytest.approx(abs(coeffs.C) * abs(coeffs.D), abs=1e-12)

    def test_closed_negativity_matches_spectrum(self):
        for _ in range(100):
            n = int(self.rng.integers(1, 4))
            t = self.rng.uniform(0, 8)
            cfg = JCConfig.from_detuning(self.rng.uniform(-5, 5), lam=self.rng.uniform(0, 1))
            assert case2_negativity_closed(n, t, cfg) == pytest.approx(negativity(case2_state(n, t, cfg)), abs=1e-9)

    def test_negativity_convex_in_lambda(self):
        for t in np.linspace(0.05, 6, 40):
            ends = [case2_negativity_closed(1, t, JCConfig.from_detuning(5.0, lam=lam)) for lam in (0.0, 1.0)]
            for lam in (0.1, 0.2, 0.5, 0.8):
                value = case2_negativity_closed(1, t, JCConfig.from_detuning(5.0, lam=lam))
                assert value <= lam * ends[1] + (1 - lam) * ends[0] + 1e-12


class TestMasterEquationSeries:
    """Test cases for the truncated-series oracle"""

    def test_hamiltonian_structure(self):
        cfg = JCConfig.from_detuning(1.0, g=0.5)
        h = jc_hamiltonian(cfg, 4)
        np.testing.assert_allclose(h, h.conj().T)
        assert h[1, 4 + 2] == pytest.approx(0.5 * math.sqrt(2))
        assert h[0, 0] == pytest.approx(cfg.omega_a / 2)
        assert h[4 + 3, 4 + 3] == pytest.approx(-cfg.omega_a / 2 + 3 * cfg.omega_f)

    @pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("gamma", [0.0, 0.1, 0.3])
    @pytest.mark.parametrize("delta", [0.0, 1.0, 3.0])
    def test_matches_case1_closed_form(self, t, gamma, delta):
        cfg = JCConfig.from_detuning(delta=delta, gamma=gamma, n=1)
        series = master_equation_series(1, t, cfg, fock_cut=4)
        closed = case1_state(1, t, cfg, fock_cut=4)
        assert np.max(np.abs(series.entries - closed.entries)) < 1e-8

    def test_vacuum_field(self):
        cfg = JCConfig.from_detuning(2.0, gamma=0.2)
        series = master_equation_series(0, 1.5, cfg)
        assert series.dims == (2, 2)
        np.testing.assert_allclose(series.entries, case1_state(0, 1.5, cfg, fock_cut=2).entries, atol=1e-8)

    def test_excitation_number_conserved(self):
        cfg = JCConfig.from_detuning(1.0, gamma=0.3)
        rho = master_equation_series(1, 2.0, cfg, fock_cut=5)
        support = [1, 5 + 2]
        outside = np.delete(np.delete(rho.entries, support, axis=0), support, axis=1)
        assert np.max(np.abs(outside)) < 1e-12

    def test_unitary_case2_agrees(self):
        for lam in (0.0, 0.2, 0.7):
            cfg = JCConfig.from_detuning(5.0, lam=lam)
            initial = case2_initial_state(1, cfg, fock_cut=4)
            series = master_equation_series(1, 1.7, cfg, fock_cut=4, initial=initial)
            closed = case2_state(1, 1.7, cfg, fock_cut=4)
            assert np.max(np.abs(series.entries - closed.entries)) < 1e-10

    def test_time_zero_is_initial_state(self):
        cfg = JCConfig.from_detuning(1.0, gamma=0.3)
        rho = master_equation_series(1, 0.0, cfg, fock_cut=3)
        expected = np.zeros((6, 6))
        expected[1, 1] = 1.0
        np.testing.assert_allclose(rho.entries, expected, atol=1e-12)

    def test_truncated_series_raises(self):
        cfg = JCConfig.from_detuning(1.0, gamma=0.3)
        with pytest.raises(SeriesConvergenceError):
            master_equation_series(1, 2.0, cfg, k_max=2)

    def test_invalid_arguments(self):
        cfg = JCConfig()
        with pytest.raises(ValueError):
            master_equation_series(2, 1.0, cfg, fock_cut=3)
        with pytest.raises(ValueError):
            master_equation_series(1, 1.0, cfg, fock_cut=3, initial=case2_initial_state(1, cfg, fock_cut=4))
        with pytest.raises(ValueError):
            embed_block(case1_state(2, 0.5, cfg), (2, 3), 3)
