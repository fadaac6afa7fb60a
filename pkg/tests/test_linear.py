import dataclasses
import math

import numpy as np
import pytest

from duocool import (FiniteCorrelationNoise, IllConditioned, MeasurementParams,
                     Sideband, SystemParams, Unstable, WhiteNoise,
                     build_cooling_model, build_measurement_model, drive_image,
                     physicality_min_eig, solve_lyapunov, stability_eigen,
                     strip_phase_drive, thermal_occupation, validate_params)
from duocool.linear import LinearModel
from duocool.steady_state import SteadyState
from duocool.trajectories import ensemble_phonon

from oracles import hand_cooling_drift, hand_rwa_blue_drift

TWO_PI = 2.0 * math.pi


def assert_valid_covariance(model, cov):
    """Shared invariants for every accepted Lyapunov solve."""
    a, d, sigma = model.A, model.D, cov.Sigma
    residual = np.max(np.abs(a @ sigma + sigma @ a.T + d))
    assert residual < 1e-9 * np.max(np.abs(d))
    assert physicality_min_eig(model, sigma) > -1e-9
    assert all(n > -1e-9 for n in cov.n_per_mode)


def _single_mode_model(omega, gamma, occupation):
    a = np.array([[-gamma / 2, omega], [-omega, -gamma / 2]])
    d = gamma * (occupation + 0.5) * np.eye(2)
    return LinearModel(labels=("am",), A=a, D=d, bath_occupations=(occupation,),
                       phase_drive=np.zeros(1, dtype=complex))


class TestCoolingModelBuild:
    def test_decoupled_when_coupling_and_noise_vanish(self, reference_params):
        p = dataclasses.replace(reference_params, temperature=1.65)
        ss = SteadyState(0j, 0j, 0j, 0.0, 0.0)  # eta*alpha_1 = 0
        model = build_cooling_model(p, ss, WhiteNoise(0.0))
        # block-diagonal: no cross entries between the two modes
        assert not np.any(model.A[:2, 2:]) and not np.any(model.A[2:, :2])
        gm = p.gamma_m
        expected_m = np.array([[-gm / 2, p.omega_m], [-p.omega_m, -gm / 2]])
        assert np.allclose(model.A[2:, 2:], expected_m)
        n_mi = thermal_occupation(p.temperature, p.omega_m)
        assert np.allclose(model.D[2:, 2:], gm * (n_mi + 0.5) * np.eye(2))
        assert np.allclose(model.D[:2, :2], p.gamma_2 / 2 * np.eye(2))

    def test_matches_hand_written_matrix(self, reference_params):
        ss = SteadyState(alpha_1=10j, alpha_2=0.05 + 0j, beta=-0.01 + 0j,
                         Delta_L=0.0, residual=0.0)
        model = build_cooling_model(reference_params, ss, None)
        g = reference_params.eta * reference_params.omega_m * ss.alpha_1
        hand = hand_cooling_drift(reference_params.omega_m,
                                  reference_params.gamma_2,
                                  reference_params.gamma_m, g)
        assert np.allclose(model.A, hand, rtol=1e-12, atol=0.0)
        # coupling-block magnitude is twice the coherent coupling rate
        assert np.max(np.abs(model.A[:2, 2:])) == pytest.approx(2 * abs(g), rel=1e-12)

    @pytest.mark.parametrize("phase_deg", [0, 37, 90, 215])
    def test_hand_matrix_any_drive_phase(self, reference_params, phase_deg):
        alpha_1 = 10.0 * np.exp(1j * math.radians(phase_deg))
        ss = SteadyState(alpha_1=alpha_1, alpha_2=0.05 + 0j, beta=-0.01 + 0j,
                         Delta_L=0.0, residual=0.0)
        model = build_cooling_model(reference_params, ss, None)
        g = reference_params.eta * reference_params.omega_m * alpha_1
        hand = hand_cooling_drift(reference_params.omega_m,
                                  reference_params.gamma_2,
                                  reference_params.gamma_m, g)
        assert np.allclose(model.A, hand, rtol=1e-12, atol=1e-3)

    def test_white_noise_diffusion_term_against_trajectory_growth(
            self, reference_params, synthetic_state):
        # with the drift zeroed, Var grows as D*t; Monte-Carlo slope should
        # reproduce the folded phase-noise diffusion entries
        noise = WhiteNoise(Gamma_l=1e3)
        model = build_cooling_model(reference_params, synthetic_state, noise)
        base = strip_phase_drive(model)
        added = model.D - base.D
        u = drive_image(model.phase_drive)
        assert np.allclose(added, 2.0 * noise.Gamma_l * np.outer(u, u))
        assert np.linalg.matrix_rank(added, tol=1e-6) <= 2
        # total added weight is 2*Gamma_l per quadrature pair: trace
        # 4*Gamma_l*|alpha_2|^2 on the a2 quadratures
        assert np.trace(added) == pytest.approx(
            4.0 * noise.Gamma_l * abs(synthetic_state.alpha_2) ** 2, rel=1e-12)
        free = dataclasses.replace(model, A=np.zeros_like(model.A))
        rng = np.random.default_rng(5)
        dt, steps, n_traj = 1e-9, 400, 4000
        b = np.linalg.cholesky(model.D + 1e-30 * np.eye(4))
        x = np.zeros((n_traj, 4))
        for _ in range(steps):
            x = x + math.sqrt(dt) * rng.standard_normal((n_traj, 4)) @ b.T
        var = np.var(x, axis=0)
        expected = np.diag(free.D) * steps * dt
        stderr = expected * math.sqrt(2.0 / n_traj)
        assert np.all(np.abs(var - expected) < 4.0 * stderr + 1e-12)

    def test_ou_augmentation_structure(self, reference_params, synthetic_state):
        noise = FiniteCorrelationNoise(Gamma_l=1e3, gamma_c=TWO_PI * 1e6)
        model = build_cooling_model(reference_params, synthetic_state, noise)
        assert model.has_aux and model.dim == 5
        assert model.labels[-1] == "ou"
        assert model.A[4, 4] == -noise.gamma_c
        assert not np.any(model.A[4, :4])
        u = drive_image(model.phase_drive)
        assert np.allclose(model.A[:4, 4], u)
        assert model.D[4, 4] == pytest.approx(2 * noise.Gamma_l * noise.gamma_c ** 2)
        # Lyapunov gives the auxiliary its stationary variance Gamma_l*gamma_c
        cov = solve_lyapunov(model)
        assert cov.Sigma[4, 4] == pytest.approx(noise.Gamma_l * noise.gamma_c,
                                                rel=1e-9)
        assert_valid_covariance(model, cov)

    def test_three_mode_probe_build(self, reference_params):
        ss = SteadyState(alpha_1=10j, alpha_2=0.05 + 0j, beta=-0.01 + 0j,
                         Delta_L=-1256.6, residual=0.0)
        noise = WhiteNoise(Gamma_l=1e3)
        m3 = build_cooling_model(reference_params, ss, noise, include_a1=True)
        assert m3.labels[:3] == ("a1", "a2", "am")
        assert m3.dim == 6
        verdict = stability_eigen(m3)
        assert verdict.stable
        cov = solve_lyapunov(m3)
        assert_valid_covariance(m3, cov)
        # probe comparison is reported, never asserted: the two-mode and
        # three-mode mechanical occupations should simply both be finite
        m2 = build_cooling_model(reference_params, ss, noise)
        n2 = solve_lyapunov(m2).n_per_mode[-1]
        n3 = cov.n_per_mode[-1]
        print(f"three-mode probe: n_m(two-mode) = {n2:.6g}, "
              f"n_m(three-mode) = {n3:.6g}, ratio = {n3 / n2:.4f}")
        assert math.isfinite(n3)


class TestLyapunov:
    def test_single_mode_detailed_balance(self):
        model = _single_mode_model(TWO_PI * 62e6, 1.9e5, 556.0)
        cov = solve_lyapunov(model)
        assert cov.n_per_mode[0] == pytest.approx(556.0, abs=1e-6)
        assert_valid_covariance(model, cov)

    def test_cooling_rate_equation(self, reference_params):
        # thermal bath n_mi = 556 against optomechanical damping
        t_for = 556.0
        # pick T so the Bose-Einstein occupation is ~556 at omega_m
        from scipy.constants import hbar, k as k_B
        temp = hbar * reference_params.omega_m / (k_B * math.log(1 + 1 / t_for))
        p = dataclasses.replace(reference_params, temperature=temp)
        ss = SteadyState(alpha_1=10j, alpha_2=0.05 + 0j, beta=0j, Delta_L=0.0,
                         residual=0.0)
        model = build_cooling_model(p, ss, WhiteNoise(0.0))
        cov = solve_lyapunov(model)
        g = p.eta * p.omega_m * 10.0
        gamma_tilde = 4 * g * g / p.gamma_2
        expected = p.gamma_m * t_for / (p.gamma_m + gamma_tilde)
        assert cov.n_per_mode[-1] == pytest.approx(expected, rel=0.10)
        assert_valid_covariance(model, cov)

    def test_white_noise_cavity_heating_balance(self, reference_params,
                                                synthetic_state):
        # with the mechanics decoupled (eta*alpha_1 -> 0) the driven mode
        # settles at 2*Gamma_l*|alpha_2|^2/gamma_2
        noise = WhiteNoise(Gamma_l=1e3)
        ss = dataclasses.replace(synthetic_state, alpha_1=0j)
        model = build_cooling_model(reference_params, ss, noise)
        cov = solve_lyapunov(model)
        expected = 2 * noise.Gamma_l * abs(ss.alpha_2) ** 2 / reference_params.gamma_2
        assert cov.n_per_mode[0] == pytest.approx(expected, rel=1e-6)

    def test_unstable_model_refused(self):
        a = np.array([[0.1, 0.0], [0.0, -1.0]])
        model = LinearModel(labels=("am",), A=a, D=np.eye(2),
                            bath_occupations=(0.0,),
                            phase_drive=np.zeros(1, dtype=complex))
        with pytest.raises(Unstable):
            solve_lyapunov(model)

    def test_monotonicity_in_linewidth_and_frequency(self, lowloss_params,
                                                     synthetic_state):
        # finite-correlation phase heating grows with Gamma_l, falls with omega_m
        gamma_c = TWO_PI * 1e6
        ns = []
        for gl in (1e2, 1e3, 1e4, 1e5):
            model = build_cooling_model(
                lowloss_params, synthetic_state,
                FiniteCorrelationNoise(Gamma_l=gl, gamma_c=gamma_c))
            ns.append(solve_lyapunov(model).n_per_mode[-1])
        assert all(a < b for a, b in zip(ns, ns[1:]))
        ns_w = []
        for scale in (1.0, 2.0, 4.0):
            p = dataclasses.replace(lowloss_params,
                                    omega_m=lowloss_params.omega_m * scale,
                                    gamma_m=lowloss_params.omega_m * scale / 1e8)
            model = build_cooling_model(
                p, synthetic_state,
                FiniteCorrelationNoise(Gamma_l=1e4, gamma_c=gamma_c))
            base = strip_phase_drive(model)
            ns_w.append(solve_lyapunov(model).n_per_mode[-1]
                        - solve_lyapunov(base).n_per_mode[-1])
        assert all(a > b for a, b in zip(ns_w, ns_w[1:]))


class TestStability:
    def test_decoupled_rates(self, reference_params):
        ss = SteadyState(0j, 0j, 0j, 0.0, 0.0)
        model = build_cooling_model(reference_params, ss, None)
        verdict = stability_eigen(model)
        assert verdict.stable
        expected = -min(reference_params.gamma_2, reference_params.gamma_m) / 2
        assert verdict.max_re == pytest.approx(expected, rel=1e-9)

    def _blue_rwa(self, params, g3):
        alpha_3 = g3 / (params.eta * params.omega_m)
        mp = MeasurementParams(gamma_3p=TWO_PI * 1e6, Omega_d=1.0,
                               sideband=Sideband.BLUE, gamma_mp=TWO_PI * 1e4,
                               n_mf=0.28)
        return build_measurement_model(params, mp, alpha_3, rwa=True), mp

    def test_blue_rwa_matches_hand_matrix_and_eigenvalues(self, reference_params):
        g3 = 1e4
        model, mp = self._blue_rwa(reference_params, g3)
        assert np.allclose(model.A, hand_rwa_blue_drift(mp.gamma_3p, mp.gamma_mp, g3),
                           rtol=1e-12, atol=1e-9)
        eigs = np.sort_complex(np.linalg.eigvals(model.A))
        lam = (-(mp.gamma_3p + mp.gamma_mp) / 4
               + math.sqrt(((mp.gamma_3p - mp.gamma_mp) / 4) ** 2 + g3 ** 2))
        assert np.max(eigs.real) == pytest.approx(lam, rel=1e-12)

    def test_blue_rwa_threshold_flip(self, reference_params):
        mp_gammas = (TWO_PI * 1e6, TWO_PI * 1e4)
        threshold = math.sqrt(mp_gammas[0] * mp_gammas[1]) / 2
        below, _ = self._blue_rwa(reference_params, 0.99 * threshold)
        above, _ = self._blue_rwa(reference_params, 1.01 * threshold)
        assert stability_eigen(below).stable
        assert not stability_eigen(above).stable
