"""Linearized drift/diffusion models and their steady covariances.

Quadrature convention: x = (a + a^dag)/sqrt(2), p = -i(a - a^dag)/sqrt(2),
so the vacuum has <x^2> = <p^2> = 1/2 and the mean excitation of a mode is
n = (<x^2> + <p^2> - 1)/2.  All drift and diffusion matrices are real; the
steady covariance solves the Lyapunov equation A*Sigma + Sigma*A^T + D = 0.

Three model families are built here:

* the cooling configuration: anti-Stokes mode a2 coupled to the mechanics
  through the drive-enhanced coupling g = eta*omega_m*alpha_1, with both
  beam-splitter and counter-rotating terms retained, laser phase noise
  entering as a classical drive i*alpha_2*phidot on a2 (optionally
  i*alpha_1*phidot on a1 in the three-mode probe build);
* the one-mode adiabatic reduction of the same system, where the cavity is
  eliminated into an extra mechanical damping gamma_tilde = 4g^2/gamma_2
  and the phase drive arrives with coefficient -sqrt(gamma_tilde)
  * alpha_2/sqrt(gamma_2);
* the detection configuration for sideband thermometry, full or under the
  rotating-wave approximation (blue probe: two-mode-squeezing coupling to
  the mechanics; red probe: beam-splitter coupling).

White phase noise is folded directly into the diffusion matrix as
2*Gamma_l * u u^T, where u is the quadrature image of the complex drive
coefficients.  Finite-correlation noise augments the state with one
Ornstein-Uhlenbeck auxiliary variable driving the same coefficients, which
keeps the Lyapunov machinery exact at every correlation time.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .errors import IllConditioned, Unstable
from .params import (FiniteCorrelationNoise, MeasurementParams, NoiseModel,
                     Sideband, SystemParams, WhiteNoise, thermal_occupation)
from .steady_state import SteadyState

_LYAPUNOV_RESIDUAL_RTOL = 1e-9


@dataclass(frozen=True)
class LinearModel:
    """Real drift matrix A and diffusion matrix D over mode quadratures.

    State ordering is (x_1, p_1, ..., x_N, p_N) for the modes in ``labels``,
    followed by one auxiliary Ornstein-Uhlenbeck variable when ``has_aux``.
    ``phase_drive`` holds the complex coefficients c_j of the classical
    phase-noise drive c_j*phidot in each mode's amplitude equation
    (c_j = i*alpha_j for a driven cavity mode).
    """

    labels: tuple[str, ...]
    A: np.ndarray
    D: np.ndarray
    bath_occupations: tuple[float, ...]
    phase_drive: np.ndarray
    noise: NoiseModel | None = None
    has_aux: bool = False

    @property
    def n_modes(self) -> int:
        return len(self.bath_occupations)

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    def mode_slice(self, j: int) -> slice:
        j = range(self.n_modes)[j]  # normalize negative indices
        return slice(2 * j, 2 * j + 2)


class StabilityVerdict(NamedTuple):
    stable: bool
    max_re: float


@dataclass(frozen=True)
class CovarianceResult:
    """Steady covariance with per-mode occupations and the solve residual."""

    Sigma: np.ndarray
    n_per_mode: tuple[float, ...]
    lyapunov_residual: float


def drive_image(phase_drive: np.ndarray) -> np.ndarray:
    """Quadrature image of complex amplitude-equation drive coefficients.

    A term c*phidot in da/dt contributes sqrt(2)*Re(c)*phidot to dx/dt and
    sqrt(2)*Im(c)*phidot to dp/dt.
    """
    coeffs = np.asarray(phase_drive, dtype=complex)
    u = np.empty(2 * len(coeffs))
    u[0::2] = np.sqrt(2.0) * coeffs.real
    u[1::2] = np.sqrt(2.0) * coeffs.imag
    return u


def _drift_from_quadratic(g_matrix: np.ndarray, gammas: tuple[float, ...]) -> np.ndarray:
    """A = Omega_sympl @ G - diag(gamma_j/2) for H = (1/2) xi^T G xi."""
    n = len(gammas)
    omega_sympl = np.zeros((2 * n, 2 * n))
    for j in range(n):
        omega_sympl[2 * j, 2 * j + 1] = 1.0
        omega_sympl[2 * j + 1, 2 * j] = -1.0
    a = omega_sympl @ g_matrix
    a -= np.diag(np.repeat(np.asarray(gammas) / 2.0, 2))
    return a


def _bath_diffusion(gammas: tuple[float, ...], occupations: tuple[float, ...]) -> np.ndarray:
    """Diagonal diffusion gamma_j*(n_j + 1/2) per quadrature."""
    per_quad = np.repeat([g * (n + 0.5) for g, n in zip(gammas, occupations)], 2)
    return np.diag(per_quad)


def _apply_phase_noise(labels, a, d, gammas, occupations, phase_drive, noise):
    """Fold white noise into D or append one OU auxiliary state."""
    u = drive_image(phase_drive)
    if noise is None or not np.any(u) or noise.Gamma_l == 0.0:
        return LinearModel(labels=tuple(labels), A=a, D=d,
                           bath_occupations=tuple(occupations),
                           phase_drive=np.asarray(phase_drive, dtype=complex),
                           noise=noise, has_aux=False)
    if isinstance(noise, WhiteNoise):
        d = d + 2.0 * noise.Gamma_l * np.outer(u, u)
        return LinearModel(labels=tuple(labels), A=a, D=d,
                           bath_occupations=tuple(occupations),
                           phase_drive=np.asarray(phase_drive, dtype=complex),
                           noise=noise, has_aux=False)
    if isinstance(noise, FiniteCorrelationNoise):
        dim = a.shape[0]
        a_aug = np.zeros((dim + 1, dim + 1))
        a_aug[:dim, :dim] = a
        a_aug[:dim, dim] = u
        a_aug[dim, dim] = -noise.gamma_c
        d_aug = np.zeros((dim + 1, dim + 1))
        d_aug[:dim, :dim] = d
        # Stationary variance of the auxiliary variable is Gamma_l*gamma_c.
        d_aug[dim, dim] = 2.0 * noise.Gamma_l * noise.gamma_c ** 2
        return LinearModel(labels=tuple(labels) + ("ou",), A=a_aug, D=d_aug,
                           bath_occupations=tuple(occupations),
                           phase_drive=np.asarray(phase_drive, dtype=complex),
                           noise=noise, has_aux=True)
    raise TypeError(f"unknown noise model {noise!r}")


def build_cooling_model(params: SystemParams, ss: SteadyState, noise: NoiseModel | None,
                        include_a1: bool = False) -> LinearModel:
    """Linearized cooling dynamics around the classical steady state.

    Two-mode build (default): fluctuations of (a2, a_m) with

        da2/dt = -(i*omega_m + gamma_2/2) a2 - i*g (a_m + a_m^dag)
                 + i*alpha_2*phidot + sqrt(gamma_2) a2_in
        da_m/dt = -(i*omega_m + gamma_m/2) a_m - i(g a2^dag + g* a2)
                 + sqrt(gamma_m) a_m_in

    with g = eta*omega_m*alpha_1.  Counter-rotating terms are retained, so
    the quantum back-action limit appears without further modelling.  The
    mechanical input channel carries the thermal occupation of the
    environment at ``params.temperature``.

    ``include_a1`` keeps the driven mode as a third member: it couples to
    the mechanics with the full coefficient eta*omega_m*(alpha_1+alpha_2),
    cross-couples to a2 through the static shift Delta_L, and receives its
    own phase drive i*alpha_1*phidot.  This build exists to probe

    numerically whether residual a1 noise matters; nothing downstream
    depends on it.
    """
    n_mi = thermal_occupation(params.temperature, params.omega_m)
    g = params.eta * params.omega_m * ss.alpha_1
    if include_a1:
        labels = ("a1", "a2", "am")
        gammas = (params.gamma_1, params.gamma_2, params.gamma_m)
        occupations = (0.0, 0.0, n_mi)
        c = params.eta * params.omega_m * (ss.alpha_1 + ss.alpha_2)
        gq = np.zeros((6, 6))
        # free rotations: a1 sits at the drive frequency, a2 and a_m at omega_m
        gq[2, 2] = gq[3, 3] = params.omega_m
        gq[4, 4] = gq[5, 5] = params.omega_m
        for k in (0, 2):  # x-quadratures of a1 and a2
            gq[k, 4] = gq[4, k] = 2.0 * c.real
            gq[k + 1, 4] = gq[4, k + 1] = 2.0 * c.imag
        gq[0, 2] = gq[2, 0] = ss.Delta_L
        gq[1, 3] = gq[3, 1] = ss.Delta_L
        phase_drive = np.array([1j * ss.alpha_1, 1j * ss.alpha_2, 0j])
    else:
        labels = ("a2", "am")
        gammas = (params.gamma_2, params.gamma_m)
        occupations = (0.0, n_mi)
        gq = np.zeros((4, 4))
        gq[0, 0] = gq[1, 1] = params.omega_m
        gq[2, 2] = gq[3, 3] = params.omega_m
        gq[0, 2] = gq[2, 0] = 2.0 * g.real
        gq[1, 2] = gq[2, 1] = 2.0 * g.imag
        phase_drive = np.array([1j * ss.alpha_2, 0j])
    a = _drift_from_quadratic(gq, gammas)
    d = _bath_diffusion(gammas, occupations)
    return _apply_phase_noise(labels, a, d, gammas, occupations, phase_drive, noise)


def build_adiabatic_model(params: SystemParams, ss: SteadyState,
                          noise: NoiseModel | None) -> LinearModel:
    """One-mode reduction with the cavity eliminated into gamma_tilde.

    The mechanics keeps its free rotation at omega_m, damps at
    gamma_m + gamma_tilde, and couples to a single effective bath of
    occupation gamma_m*n_mi/(gamma_m + gamma_tilde).  The phase noise
    arrives with coefficient -sqrt(gamma_tilde)*alpha_2/sqrt(gamma_2),
    exactly the drive the eliminated cavity hands down.

    Keeping the omega_m rotation matters: with the static drive coefficient,
    a finite-correlation noise whose power lives below omega_m excites the
    rotating mode off-resonantly, which is precisely the spectral-reduction
    effect of the two-mode scheme.
    """
    from .cooling import gamma_tilde  # local import to avoid a cycle

    gt = gamma_tilde(params, ss)
    n_mi = thermal_occupation(params.temperature, params.omega_m)
    gamma_eff = params.gamma_m + gt
    n_eff = params.gamma_m * n_mi / gamma_eff if gamma_eff > 0 else 0.0
    gq = np.array([[params.omega_m, 0.0], [0.0, params.omega_m]])
    a = _drift_from_quadratic(gq, (gamma_eff,))
    d = _bath_diffusion((gamma_eff,), (n_eff,))
    coeff = -np.sqrt(gt) * ss.alpha_2 / np.sqrt(params.gamma_2)
    return _apply_phase_noise(("am",), a, d, (gamma_eff,), (n_eff,),
                              np.array([coeff]), noise)


def build_measurement_model(params: SystemParams, mp: MeasurementParams,
                            alpha_3: complex, rwa: bool = False) -> LinearModel:
    """Linearized detection dynamics over (a3, a_m).

    Full build: position coupling g3*(a3 + a3^dag)(a_m + a_m^dag) with
    g3 = eta*omega_m*alpha_3; the probe mode counter-rotates against the
    mechanics for the blue sideband (so the resonant process is two-mode
    squeezing and the output scales as n_mf + 1) and co-rotates for the red
    sideband (resonant beam splitter, output scales as n_mf).

    RWA build: the resonant process alone, in the frame rotating with the
    sideband (no free rotations).  For the blue probe the drift then splits
    into two 2x2 blocks coupling a3 to a_m^dag, with eigenvalues
    -(gamma_3p+gamma_mp)/4 +- sqrt(((gamma_3p-gamma_mp)/4)^2 + |g3|^2) and
    an instability threshold at |g3|^2 = gamma_3p*gamma_mp/4.

    The mechanical channel carries occupation ``mp.n_mf`` at rate
    ``mp.gamma_mp``, standing in for the continuously running cooling.
    """
    g3 = params.eta * params.omega_m * alpha_3
    gammas = (mp.gamma_3p, mp.gamma_mp)
    occupations = (0.0, mp.n_mf)
    labels = ("a3", "am")
    gq = np.zeros((4, 4))
    if rwa:
        if mp.sideband is Sideband.BLUE:
            # H = g3 a3^dag a_m^dag + h.c.
            gq[0, 2] = gq[2, 0] = g3.real
            gq[1, 3] = gq[3, 1] = -g3.real
            gq[0, 3] = gq[3, 0] = g3.imag
            gq[1, 2] = gq[2, 1] = g3.imag
        else:
            # H = g3 a3^dag a_m + h.c.
            gq[0, 2] = gq[2, 0] = g3.real
            gq[1, 3] = gq[3, 1] = g3.real
            gq[0, 3] = gq[3, 0] = -g3.imag
            gq[1, 2] = gq[2, 1] = g3.imag
    else:
        sign_3 = -1.0 if mp.sideband is Sideband.BLUE else 1.0
        gq[0, 0] = gq[1, 1] = sign_3 * params.omega_m
        gq[2, 2] = gq[3, 3] = params.omega_m
        gq[0, 2] = gq[2, 0] = 2.0 * g3.real
        gq[1, 2] = gq[2, 1] = 2.0 * g3.imag
    a = _drift_from_quadratic(gq, gammas)
    d = _bath_diffusion(gammas, occupations)
    return LinearModel(labels=labels, A=a, D=d, bath_occupations=occupations,
                       phase_drive=np.zeros(2, dtype=complex), noise=None)


def stability_eigen(model: LinearModel) -> StabilityVerdict:
    """Spectral-abscissa stability test of the drift matrix."""
    eigs = np.linalg.eigvals(model.A)
    max_re = float(np.max(eigs.real))
    return StabilityVerdict(stable=max_re < 0.0, max_re=max_re)


def solve_lyapunov(model: LinearModel) -> CovarianceResult:
    """Steady covariance from A*Sigma + Sigma*A^T + D = 0.

    Direct vectorized solve of the kron-structured linear system; the model
    is small (at most 7 states) so nothing iterative is needed.  The result
    is symmetrized and its residual checked against
    1e-9 * max|D|.

    Raises
    ------
    Unstable
        Drift matrix has an eigenvalue with non-negative real part.
    IllConditioned
        The residual check fails.
    """
    verdict = stability_eigen(model)
    if not verdict.stable:
        raise Unstable(
            f"drift matrix has max eigenvalue real part {verdict.max_re:.3e} >= 0; "
            "no steady covariance exists")
    a, d = model.A, model.D
    dim = a.shape[0]
    eye = np.eye(dim)
    coeff = np.kron(a, eye) + np.kron(eye, a)
    try:
        sigma = np.linalg.solve(coeff, -d.reshape(-1)).reshape(dim, dim)
    except np.linalg.LinAlgError as exc:
        raise IllConditioned(f"Lyapunov solve failed: {exc}") from exc
    sigma = 0.5 * (sigma + sigma.T)
    residual = float(np.max(np.abs(a @ sigma + sigma @ a.T + d)))
    tol = _LYAPUNOV_RESIDUAL_RTOL * float(np.max(np.abs(d)))
    if residual > tol:
        raise IllConditioned(
            f"Lyapunov residual {residual:.3e} exceeds {tol:.3e}")
    n_per_mode = tuple(
        0.5 * (sigma[2 * j, 2 * j] + sigma[2 * j + 1, 2 * j + 1] - 1.0)
        for j in range(model.n_modes))
    return CovarianceResult(Sigma=sigma, n_per_mode=n_per_mode,
                            lyapunov_residual=residual)


def physicality_min_eig(model: LinearModel, sigma: np.ndarray) -> float:
    """Smallest eigenvalue of Sigma + (i/2)*Omega_sympl over the mode block.

    Non-negative (to numerical tolerance) for every physical Gaussian
    state; the auxiliary noise variable, being classical, is excluded.
    """
    n = model.n_modes
    block = sigma[:2 * n, :2 * n].astype(complex)
    omega_sympl = np.zeros((2 * n, 2 * n))
    for j in range(n):
        omega_sympl[2 * j, 2 * j + 1] = 1.0
        omega_sympl[2 * j + 1, 2 * j] = -1.0
    return float(np.min(np.linalg.eigvalsh(block + 0.5j * omega_sympl)))


def strip_phase_drive(model: LinearModel) -> LinearModel:
    """The same model with its phase-noise contribution removed.

    Used to isolate the phase-noise phonon piece by differencing Lyapunov
    solutions, exploiting linearity of the steady covariance in D.
    """
    if model.has_aux:
        dim = model.dim - 1
        return replace(model, labels=model.labels[:-1], A=model.A[:dim, :dim].copy(),
                       D=model.D[:dim, :dim].copy(), noise=None, has_aux=False)
    u = drive_image(model.phase_drive)
    if model.noise is None or not np.any(u) or model.noise.Gamma_l == 0.0:
        return replace(model, noise=None)
    d = model.D - 2.0 * model.noise.Gamma_l * np.outer(u, u)
    return replace(model, D=d, noise=None)
