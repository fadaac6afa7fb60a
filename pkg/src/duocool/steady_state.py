"""Classical steady state of the driven two-mode optomechanical system.

In the frame rotating at the drive, the classical amplitudes (alpha_1 for the
driven mode, alpha_2 for the anti-Stokes mode, beta for the mechanics) obey

    i*Delta_L*alpha_1 - i*eta*omega_m*(alpha_1+alpha_2)*(beta+beta*)
        - (gamma_1/2)*alpha_1 + i*Omega_c/2 = 0
    -i*(omega_m-Delta_L)*alpha_2 - i*eta*omega_m*(alpha_1+alpha_2)*(beta+beta*)
        - (gamma_2/2)*alpha_2 + i*Omega_c/2 = 0

subject to the self-consistency constraints

    beta    = -eta*|alpha_1+alpha_2|^2
    Delta_L = eta*omega_m*(beta+beta*)

The drive phase is fixed so that the empty-cavity solution is
alpha_1 = i*Omega_c/gamma_1 (phase +pi/2 for real positive Omega_c); the
overall drive phase is a gauge choice with no observable consequence.

In the resolved-sideband regime (omega_m >> gamma_1) the closed-form
approximants are alpha_1 ~ i*Omega_c/gamma_1, beta ~ -eta*|alpha_1|^2,
alpha_2 = (Omega_c + 2*eta^2*omega_m*alpha_1*|alpha_1|^2)/(2i*omega_m+gamma_2),
and the amplitudes are strongly hierarchical: |alpha_2/alpha_1| is close to
gamma_1/(2*omega_m).  (The exact solver and the test suite assert this
|alpha_2| << |alpha_1| orientation of the ratio.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import MultipleRoots, NoConvergence
from .params import MeasurementParams, Sideband, SystemParams

_NEWTON_TOL = 1e-12
_NEWTON_MAX_ITER = 200
# Multiplicative (scale, phase) perturbations applied to the initial guess by
# the bistability probe.
_PROBE_PERTURBATIONS = (
    (0.2, 0.0),
    (5.0, 0.0),
    (1.0, math.pi / 3),
    (1.0, -math.pi / 3),
    (1.0, 2 * math.pi / 3),
    (1.0, -2 * math.pi / 3),
    (0.2, math.pi),
    (5.0, math.pi),
)
_ROOT_DISTINCT_RTOL = 1e-6


@dataclass(frozen=True)
class SteadyState:
    """Converged classical amplitudes with the self-consistent detuning.

    ``residual`` is the largest scaled residual of the steady-state
    equations at the returned point (cavity equations scaled by Omega_c,
    mechanical constraint unscaled).
    """

    alpha_1: complex
    alpha_2: complex
    beta: complex
    Delta_L: float
    residual: float

    def to_dict(self) -> dict:
        return {
            "alpha_1_re": self.alpha_1.real,
            "alpha_1_im": self.alpha_1.imag,
            "alpha_1_abs": abs(self.alpha_1),
            "alpha_2_re": self.alpha_2.real,
            "alpha_2_im": self.alpha_2.imag,
            "alpha_2_abs": abs(self.alpha_2),
            "beta_re": self.beta.real,
            "beta_im": self.beta.imag,
            "delta_l_rad_s": self.Delta_L,
            "residual": self.residual,
        }


class MeasurementSteadyState(NamedTuple):
    """Detection-mode classical amplitude under the sideband constraint."""

    alpha_3: complex
    beta_p: complex
    Delta_Lp: float
    residual: float


def steady_state_equations(params: SystemParams, alpha_1: complex, alpha_2: complex,
                           beta: complex) -> tuple[complex, complex, complex]:
    """Raw residuals (F1, F2, F3) of the steady-state system.

    F1, F2 are the two cavity equations (rad/s); F3 = beta +
    eta*|alpha_1+alpha_2|^2 is the mechanical constraint (dimensionless).
    Delta_L is eliminated via Delta_L = eta*omega_m*(beta+beta*).
    """
    delta_l = params.eta * params.omega_m * 2.0 * beta.real
    drive = 1j * params.Omega_c / 2.0
    shift = 1j * params.eta * params.omega_m * (alpha_1 + alpha_2) * 2.0 * beta.real
    f1 = 1j * delta_l * alpha_1 - shift - 0.5 * params.gamma_1 * alpha_1 + drive
    f2 = (-1j * (params.omega_m - delta_l) * alpha_2 - shift
          - 0.5 * params.gamma_2 * alpha_2 + drive)
    f3 = beta + params.eta * abs(alpha_1 + alpha_2) ** 2
    return f1, f2, f3


def _scaled_residual_vector(params: SystemParams, u: np.ndarray) -> np.ndarray:
    """Real 6-vector of residuals, cavity equations scaled by Omega_c."""
    a1 = complex(u[0], u[1])
    a2 = complex(u[2], u[3])
    b = complex(u[4], u[5])
    f1, f2, f3 = steady_state_equations(params, a1, a2, b)
    scale = params.Omega_c if params.Omega_c > 0 else 1.0
    return np.array([f1.real / scale, f1.imag / scale,
                     f2.real / scale, f2.imag / scale,
                     f3.real, f3.imag])


def _pack(a1: complex, a2: complex, b: complex) -> np.ndarray:
    return np.array([a1.real, a1.imag, a2.real, a2.imag, b.real, b.imag])


def _unpack(u: np.ndarray) -> tuple[complex, complex, complex]:
    return complex(u[0], u[1]), complex(u[2], u[3]), complex(u[4], u[5])


def _newton(params: SystemParams, u0: np.ndarray, tol: float,
            max_iter: int) -> tuple[np.ndarray, float]:
    """Damped Newton iteration on the 6 real unknowns.

    Finite-difference Jacobian; backtracking line search on the residual
    norm.  Raises NoConvergence if the iteration cap is hit or the line
    search stalls.
    """
    a_scale = max(params.Omega_c / params.gamma_1, 1.0)
    b_scale = max(params.eta * a_scale ** 2, 1e-12)
    scales = np.array([a_scale, a_scale, a_scale, a_scale, b_scale, b_scale])

    u = u0.astype(float).copy()
    f = _scaled_residual_vector(params, u)
    for _ in range(max_iter):
        norm = np.max(np.abs(f))
        if norm < tol:
            return u, norm
        jac = np.empty((6, 6))
        for j in range(6):
            h = 1e-8 * max(abs(u[j]), scales[j])
            up = u.copy()
            up[j] += h
            jac[:, j] = (_scaled_residual_vector(params, up) - f) / h
        try:
            step = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError as exc:
            raise NoConvergence(f"singular Jacobian in steady-state Newton: {exc}") from exc
        lam = 1.0
        while lam > 2.0 ** -20:
            u_new = u + lam * step
            f_new = _scaled_residual_vector(params, u_new)
            if np.max(np.abs(f_new)) < (1.0 - 1e-4 * lam) * norm:
                u, f = u_new, f_new
                break
            lam *= 0.5
        else:
            raise NoConvergence("steady-state Newton line search stalled")
    raise NoConvergence(f"steady-state Newton did not reach {tol:g} in {max_iter} iterations")


def approximate_steady_state(params: SystemParams) -> SteadyState:
    """Closed-form resolved-sideband approximants.

    alpha_1 = i*Omega_c/gamma_1, beta = -eta*|alpha_1|^2, and the
    anti-Stokes amplitude by linear response one mechanical frequency off
    resonance,

        alpha_2 = i*(Omega_c + 4*eta^2*omega_m*alpha_1*|alpha_1|^2)
                  / (2i*omega_m + gamma_2),

    so |alpha_2/alpha_1| is approximately gamma_1/(2*omega_m).  The
    ``residual`` field reports the true scaled equation residual of these
    approximants, not a convergence figure.
    """
    if params.Omega_c == 0.0:
        return SteadyState(0j, 0j, 0j, 0.0, 0.0)
    alpha_1 = 1j * params.Omega_c / params.gamma_1
    beta = complex(-params.eta * abs(alpha_1) ** 2)
    alpha_2 = (1j * (params.Omega_c + 4 * params.eta ** 2 * params.omega_m
                     * alpha_1 * abs(alpha_1) ** 2)
               / (2j * params.omega_m + params.gamma_2))
    delta_l = params.eta * params.omega_m * 2.0 * beta.real
    residual = float(np.max(np.abs(_scaled_residual_vector(
        params, _pack(alpha_1, alpha_2, beta)))))
    return SteadyState(alpha_1, alpha_2, beta, delta_l, residual)


def _roots_distinct(u_a: np.ndarray, u_b: np.ndarray, scale: float) -> bool:
    return float(np.linalg.norm(u_a - u_b)) > _ROOT_DISTINCT_RTOL * max(scale, 1e-300)


def solve_classical_steady_state(params: SystemParams, *, tol: float = _NEWTON_TOL,
                                 max_iter: int = _NEWTON_MAX_ITER,
                                 probe_bistability: bool = True) -> SteadyState:
    """Exact numerical steady state by damped Newton iteration.

    Initialized from :func:`approximate_steady_state`.  With
    ``probe_bistability`` the solve is repeated from 8 perturbed starting
    points; any distinct converged fixed point raises MultipleRoots instead
    of silently picking one.

    Raises
    ------
    NoConvergence
        Iteration cap hit from the primary start.
    MultipleRoots
        Bistability detected by the perturbed-start probe.
    """
    if params.Omega_c == 0.0:
        return SteadyState(0j, 0j, 0j, 0.0, 0.0)

    approx = approximate_steady_state(params)
    u0 = _pack(approx.alpha_1, approx.alpha_2, approx.beta)
    u_root, res = _newton(params, u0, tol, max_iter)
    a1, a2, b = _unpack(u_root)

    if probe_bistability:
        for scale, phase in _PROBE_PERTURBATIONS:
            factor = scale * complex(math.cos(phase), math.sin(phase))
            p1 = approx.alpha_1 * factor
            p2 = approx.alpha_2 * factor
            pb = complex(-params.eta * abs(p1 + p2) ** 2)
            try:
                u_other, _ = _newton(params, _pack(p1, p2, pb), tol, max_iter)
            except NoConvergence:
                continue  # a failed perturbed start is not evidence of bistability
            if _roots_distinct(u_other, u_root, abs(a1)):
                raise MultipleRoots(
                    "steady-state probe converged to two distinct fixed points; "
                    "the system is bistable at these parameters")

    delta_l = params.eta * params.omega_m * 2.0 * b.real
    return SteadyState(a1, a2, b, delta_l, res)


def measurement_steady_state(params: SystemParams, mp: MeasurementParams) -> MeasurementSteadyState:
    """Detection-mode steady state under the sideband constraint.

    The probe detuning is locked so that the shifted detuning
    Delta_Lp + 2*eta^2*omega_m*|alpha_3|^2 equals -omega_m (blue) or
    +omega_m (red).  With the shift pinned, the amplitude equation

        i*Delta_eff*alpha_3 - (gamma_3p/2)*alpha_3 + i*Omega_d/2 = 0

    is linear in alpha_3 and solved in closed form; beta_p = -eta*|alpha_3|^2.
    The ``residual`` field reports the scaled residual of both equations
    after substitution.
    """
    if mp.Omega_d == 0.0:
        delta_eff = -params.omega_m if mp.sideband is Sideband.BLUE else params.omega_m
        return MeasurementSteadyState(0j, 0j, delta_eff, 0.0)
    delta_eff = -params.omega_m if mp.sideband is Sideband.BLUE else params.omega_m
    alpha_3 = 1j * mp.Omega_d / (mp.gamma_3p - 2j * delta_eff)
    beta_p = complex(-params.eta * abs(alpha_3) ** 2)
    delta_lp = delta_eff - 2.0 * params.eta ** 2 * params.omega_m * abs(alpha_3) ** 2

    # Substitute back into the displayed equations: the amplitude equation
    # (scaled by Omega_d) and the detuning constraint (scaled by omega_m).
    shift = 1j * params.eta * params.omega_m * alpha_3 * 2.0 * beta_p.real
    eq1 = (1j * delta_lp * alpha_3 - shift - 0.5 * mp.gamma_3p * alpha_3
           + 1j * mp.Omega_d / 2.0)
    eq2 = delta_lp + 2.0 * params.eta ** 2 * params.omega_m * abs(alpha_3) ** 2 - delta_eff
    residual = max(abs(eq1) / mp.Omega_d, abs(eq2) / params.omega_m)
    return MeasurementSteadyState(alpha_3, beta_p, delta_lp, residual)
