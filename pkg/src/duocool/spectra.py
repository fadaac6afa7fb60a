"""Detection-sideband output spectra and phonon-number inference.

In the frame rotating with the addressed sideband, the rotating-wave
detection dynamics solves in closed form in the frequency domain.  For the
blue probe (two-mode-squeezing coupling) the output photon-flux density of
the probe cavity is

    S_b(w) = g3^2 * gamma_mp * gamma_3p * (n_mf + 1) / |Delta(w)|^2,
    Delta(w) = (gamma_mp/2 - i w)(gamma_3p/2 - i w) - g3^2,

and for the red probe (beam-splitter coupling, derived the same way)

    S_r(w) = g3^2 * gamma_mp * gamma_3p * n_mf / |Delta'(w)|^2,
    Delta'(w) = (gamma_mp/2 - i w)(gamma_3p/2 - i w) + g3^2,

with g3 = eta*omega_m*|alpha_3|.  At w = 0 the denominators are real, so
the peak strengths I_b, I_r use the plain squares Delta(0)^2, Delta'(0)^2.
The central-peak ratio I_r/I_b = n_mf/(n_mf+1) * (Delta(0)/Delta'(0))^2
approaches n_mf/(n_mf+1) once 8*g3^2 is small against gamma_mp*gamma_3p,
which is what makes the ratio a thermometer that needs neither the bath
temperature nor a displacement-noise calibration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import RatioOutOfRange, Unstable
from .params import MeasurementParams, Sideband, SystemParams
from .steady_state import SteadyState

_DEFAULT_GRID_POINTS = 1001
_DEFAULT_GRID_SPAN = 10.0  # in units of max(gamma_3p, gamma_mp)
_RATIO_EPS = 1e-9
_WEAK_MEASUREMENT_FRACTION = 0.1
_AMPLITUDE_HIERARCHY_FRACTION = 0.1


@dataclass(frozen=True)
class SpectrumResult:
    """One sideband's output spectrum on a grid of offsets from its center."""

    omega_grid: np.ndarray
    psd: np.ndarray
    peak_intensity: float
    sideband: Sideband


class PhononEstimate(NamedTuple):
    n: float
    uncertainty: float | None


class BackactionFlags(NamedTuple):
    """Sanity flags for a detection drive riding on top of the cooling run."""

    weak_measurement: bool      # 8*g3^2 < 0.1*gamma_mp*gamma_3p
    amplitude_hierarchy: bool   # |alpha_3| < 0.1*|alpha_1|
    stable: bool                # below the blue-probe parametric threshold
    stability_margin: float     # 1 - g3^2/(gamma_mp*gamma_3p/4)


def transfer_denominators(g3: float, gamma_3p: float, gamma_mp: float,
                          omega) -> tuple[np.ndarray, np.ndarray]:
    """Both response denominators Delta(w), Delta'(w) at offset ``omega``.

    Asymptotically -w^2 for |w| far above every rate; equal to
    gamma_mp*gamma_3p/4 -+ g3^2 at w = 0.
    """
    omega = np.asarray(omega, dtype=float)
    base = (gamma_mp / 2.0 - 1j * omega) * (gamma_3p / 2.0 - 1j * omega)
    return base - g3 ** 2, base + g3 ** 2


def default_omega_grid(mp: MeasurementParams, points: int = _DEFAULT_GRID_POINTS,
                       span: float = _DEFAULT_GRID_SPAN) -> np.ndarray:
    width = span * max(mp.gamma_3p, mp.gamma_mp)
    return np.linspace(-width, width, points)


def output_spectrum(params: SystemParams, mp: MeasurementParams, alpha_3: complex,
                    omega_grid: np.ndarray | None = None) -> SpectrumResult:
    """Output photon-flux spectral density of the probe cavity.

    ``peak_intensity`` is the density at the grid point nearest zero offset.

    Raises
    ------
    Unstable
        Blue probe at or above the parametric threshold
        g3^2 = gamma_mp*gamma_3p/4.
    """
    if omega_grid is None:
        omega_grid = default_omega_grid(mp)
    omega_grid = np.asarray(omega_grid, dtype=float)
    g3 = params.eta * params.omega_m * abs(alpha_3)
    delta, delta_prime = transfer_denominators(g3, mp.gamma_3p, mp.gamma_mp, omega_grid)
    prefactor = g3 ** 2 * mp.gamma_mp * mp.gamma_3p
    if mp.sideband is Sideband.BLUE:
        if g3 ** 2 >= mp.gamma_mp * mp.gamma_3p / 4.0:
            raise Unstable(
                f"blue probe above parametric threshold: g3^2 = {g3 ** 2:.3e} "
                f">= gamma_mp*gamma_3p/4 = {mp.gamma_mp * mp.gamma_3p / 4.0:.3e}")
        psd = prefactor * (mp.n_mf + 1.0) / np.abs(delta) ** 2
    else:
        psd = prefactor * mp.n_mf / np.abs(delta_prime) ** 2
    peak = float(psd[np.argmin(np.abs(omega_grid))])
    return SpectrumResult(omega_grid=omega_grid, psd=psd, peak_intensity=peak,
                          sideband=mp.sideband)


def sideband_ratio(n_mf: float) -> float:
    """Ideal red-to-blue central-peak ratio n_mf/(n_mf + 1)."""
    if n_mf < 0:
        raise ValueError(f"n_mf must be non-negative, got {n_mf!r}")
    return n_mf / (n_mf + 1.0)


def infer_phonon(i_r: float, i_b: float, i_r_err: float | None = None,
                 i_b_err: float | None = None) -> PhononEstimate:
    """Invert the peak ratio: n = r/(1-r) with r = I_r/I_b.

    First-order uncertainty is propagated when peak uncertainties are given.

    Raises
    ------
    RatioOutOfRange
        r >= 1 - 1e-9 (non-physical input or probe at threshold).
    """
    if i_b <= 0:
        raise ValueError(f"blue peak intensity must be positive, got {i_b!r}")
    if i_r < 0:
        raise ValueError(f"red peak intensity must be non-negative, got {i_r!r}")
    r = i_r / i_b
    if r >= 1.0 - _RATIO_EPS:
        raise RatioOutOfRange(
            f"I_r/I_b = {r:.12g} at or above 1; phonon inference undefined")
    n = r / (1.0 - r)
    if i_r_err is None and i_b_err is None:
        return PhononEstimate(n=n, uncertainty=None)
    var_r = 0.0
    if i_r_err is not None:
        var_r += (i_r_err / i_b) ** 2
    if i_b_err is not None:
        var_r += (i_r * i_b_err / i_b ** 2) ** 2
    # dn/dr = 1/(1-r)^2
    return PhononEstimate(n=n, uncertainty=float(np.sqrt(var_r)) / (1.0 - r) ** 2)


def backaction_check(params: SystemParams, mp: MeasurementParams, alpha_3: complex,
                     ss_cooling: SteadyState | None = None) -> BackactionFlags:
    """Flags confirming the probe leaves the cooling run undisturbed."""
    g3sq = (params.eta * params.omega_m * abs(alpha_3)) ** 2
    threshold = mp.gamma_mp * mp.gamma_3p / 4.0
    weak = 8.0 * g3sq < _WEAK_MEASUREMENT_FRACTION * mp.gamma_mp * mp.gamma_3p
    if ss_cooling is None or abs(ss_cooling.alpha_1) == 0.0:
        hierarchy = abs(alpha_3) == 0.0
    else:
        hierarchy = abs(alpha_3) < _AMPLITUDE_HIERARCHY_FRACTION * abs(ss_cooling.alpha_1)
    return BackactionFlags(
        weak_measurement=bool(weak),
        amplitude_hierarchy=bool(hierarchy),
        stable=bool(g3sq < threshold),
        stability_margin=float(1.0 - g3sq / threshold),
    )
