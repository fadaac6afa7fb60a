import math

import numpy as np
import pytest
from scipy.constants import hbar, k as k_B

from duocool import (InconsistentQ, NonPositiveRate, SystemParams,
                     ValidationError, compute_eta, thermal_occupation,
                     validate_params)

TWO_PI = 2.0 * math.pi


class TestValidateParams:
    def test_reference_point_accepted_resolved_sideband(self):
        p = validate_params(SystemParams(
            omega_m=TWO_PI * 1e8, gamma_1=TWO_PI * 1e6, gamma_2=TWO_PI * 1e6,
            eta=1e-4, Omega_c=TWO_PI * 1e7, quality_factor=2000))
        assert p.resolved_sideband
        assert p.gamma_m == pytest.approx(TWO_PI * 1e8 / 2000, rel=1e-12)

    def test_zero_gamma_1_rejected(self):
        with pytest.raises(NonPositiveRate):
            validate_params(SystemParams(
                omega_m=TWO_PI * 1e8, gamma_1=0.0, gamma_2=TWO_PI * 1e6,
                eta=1e-4, Omega_c=1.0, quality_factor=2000))

    @pytest.mark.parametrize("eta", [0.0, 1.0, -1e-4, 1.5])
    def test_eta_outside_open_interval_rejected(self, eta):
        with pytest.raises(ValidationError):
            validate_params(SystemParams(
                omega_m=TWO_PI * 1e8, gamma_1=TWO_PI * 1e6, gamma_2=TWO_PI * 1e6,
                eta=eta, Omega_c=1.0, quality_factor=2000))

    def test_gamma_m_derived_from_q(self):
        # omega_m = 2pi*62 MHz, Q = 2000 -> gamma_m = omega_m/Q ~ 1.948e5
        p = validate_params(SystemParams(
            omega_m=TWO_PI * 62e6, gamma_1=TWO_PI * 1e6, gamma_2=TWO_PI * 1e6,
            eta=1e-4, Omega_c=1.0, quality_factor=2000))
        assert p.gamma_m == pytest.approx(194778.74452256717, rel=1e-12)
        assert p.gamma_m == pytest.approx(1.948e5, rel=1e-3)

    def test_q_derived_from_gamma_m(self):
        p = validate_params(SystemParams(
            omega_m=TWO_PI * 62e6, gamma_1=TWO_PI * 1e6, gamma_2=TWO_PI * 1e6,
            eta=1e-4, Omega_c=1.0, gamma_m=194778.74452256717))
        assert p.quality_factor == pytest.approx(2000.0, rel=1e-12)

    def test_consistent_pair_accepted_inconsistent_rejected(self):
        kwargs = dict(omega_m=TWO_PI * 62e6, gamma_1=TWO_PI * 1e6,
                      gamma_2=TWO_PI * 1e6, eta=1e-4, Omega_c=1.0)
        validate_params(SystemParams(quality_factor=2000,
                                     gamma_m=TWO_PI * 62e6 / 2000, **kwargs))
        with pytest.raises(InconsistentQ):
            validate_params(SystemParams(quality_factor=2000,
                                         gamma_m=1.01 * TWO_PI * 62e6 / 2000,
                                         **kwargs))

    def test_missing_both_gamma_m_and_q_rejected(self):
        with pytest.raises(ValidationError):
            validate_params(SystemParams(
                omega_m=TWO_PI * 1e8, gamma_1=TWO_PI * 1e6, gamma_2=TWO_PI * 1e6,
                eta=1e-4, Omega_c=1.0))


class TestComputeEta:
    def test_typical_magnitude(self):
        # fiber-scale cavity numbers give a coupling of order 1e-4
        eta = compute_eta(TWO_PI * 2.82e14, TWO_PI * 1e8, 1e-15, 1e-4)
        assert 1e-4 <= eta < 1e-3

    def test_two_step_hand_oracle(self):
        # oracle: evaluate the zero-point motion first, then compose
        mass, radius = 1e-15, 1e-4
        omega_m, omega_1 = TWO_PI * 1e8, TWO_PI * 2.82e14
        x_zp = math.sqrt(hbar / (mass * omega_m))
        assert x_zp == pytest.approx(1.2955320050997993e-14, rel=1e-12)
        expected = (omega_1 / omega_m) * (x_zp / radius)
        assert compute_eta(omega_1, omega_m, mass, radius) == pytest.approx(
            expected, rel=1e-14)
        assert expected == pytest.approx(0.00036534002543814337, rel=1e-12)

    def test_radius_scaling_vanishes_in_limit(self):
        base = compute_eta(TWO_PI * 2.82e14, TWO_PI * 1e8, 1e-15, 1e-4)
        assert compute_eta(TWO_PI * 2.82e14, TWO_PI * 1e8, 1e-15, 1e2) == \
            pytest.approx(base * 1e-6, rel=1e-12)

    def test_mass_scaling_exact(self):
        base = compute_eta(TWO_PI * 2.82e14, TWO_PI * 1e8, 1e-15, 1e-4)
        doubled = compute_eta(TWO_PI * 2.82e14, TWO_PI * 1e8, 2e-15, 1e-4)
        assert doubled == pytest.approx(base / math.sqrt(2.0), rel=1e-14)

    def test_rejects_nonpositive(self):
        with pytest.raises(NonPositiveRate):
            compute_eta(TWO_PI * 2.82e14, TWO_PI * 1e8, -1e-15, 1e-4)


class TestThermalOccupation:
    def test_zero_temperature(self):
        assert thermal_occupation(0.0, TWO_PI * 62e6) == 0.0

    def test_ln2_identity(self):
        # hbar*omega/(k_B*T) = ln 2 makes the occupation exactly 1
        omega = TWO_PI * 1e8
        t = hbar * omega / (k_B * math.log(2.0))
        assert thermal_occupation(t, omega) == pytest.approx(1.0, abs=1e-12)

    def test_cryostat_point(self):
        # oracle: direct Bose-Einstein evaluation at 40-digit precision
        n = thermal_occupation(1.65, TWO_PI * 62e6)
        assert n == pytest.approx(554.023078561, rel=1e-9)
        # the scheme-level takeaway: n/Q lands at ~0.28 for Q = 2000
        assert n / 2000 == pytest.approx(0.28, abs=0.005)

    def test_monotone_in_temperature_and_frequency(self):
        temps = np.linspace(0.1, 5.0, 12)
        occs = [thermal_occupation(t, TWO_PI * 62e6) for t in temps]
        assert np.all(np.diff(occs) > 0)
        freqs = np.linspace(TWO_PI * 1e7, TWO_PI * 1e9, 12)
        occs_f = [thermal_occupation(1.65, w) for w in freqs]
        assert np.all(np.diff(occs_f) < 0)

    @pytest.mark.parametrize("ratio", [51.0, 75.0, 100.0, 500.0, 5000.0])
    def test_classical_limit_within_one_percent(self, ratio):
        omega = TWO_PI * 62e6
        t = ratio * hbar * omega / k_B  # k_B*T/(hbar*omega) = ratio > 50
        classical = k_B * t / (hbar * omega)
        assert thermal_occupation(t, omega) == pytest.approx(classical, rel=0.01)

    def test_deep_quantum_regime_underflows_to_zero(self):
        assert thermal_occupation(1e-12, TWO_PI * 1e9) == 0.0
