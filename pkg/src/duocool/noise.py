"""Laser phase-derivative noise: spectra, sample paths, suppression factor.

Two correlators are supported.  The white model has
<phidot(t) phidot(s)> = 2*Gamma_l*delta(t-s); the finite-correlation model
has <phidot(t) phidot(s)> = Gamma_l*gamma_c*exp(-gamma_c|t-s|), i.e. an
Ornstein-Uhlenbeck process with stationary variance Gamma_l*gamma_c.  Both
carry the same integrated lag weight 2*Gamma_l, so they agree at DC and
differ only in how much power survives at the mechanical sideband.

Sample paths are reproducible across platforms: generation uses numpy's
PCG64 generator seeded through ``numpy.random.SeedSequence(seed)``, and the
seed is recorded in the returned path (and in every CSV export).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .errors import StepTooCoarse
from .params import FiniteCorrelationNoise, NoiseModel, WhiteNoise

# For the OU recursion we require dt*gamma_c < 0.1 so exported paths visibly
# resolve the correlation decay (the update itself is exact at any step).
_OU_MAX_STEP_FRACTION = 0.1


@dataclass(frozen=True)
class NoisePath:
    """A sampled phase-derivative path phidot(t_k), t_k = k*dt."""

    dt: float
    samples: np.ndarray
    seed: int

    def times(self) -> np.ndarray:
        return self.dt * np.arange(len(self.samples))

    def to_csv(self, path: str) -> None:
        """Write ``t,phidot`` rows (17 significant digits) for debugging."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "phidot"])
            for t, v in zip(self.times(), self.samples):
                writer.writerow([f"{t:.17g}", f"{v:.17g}"])


def psd_phase_derivative(model: NoiseModel, omega) -> np.ndarray | float:
    """Spectral density of phidot at angular frequency offset ``omega``.

    Defined as the Fourier transform of the correlator over all lags:
    the white model is flat at 2*Gamma_l, the finite-correlation model is
    the Lorentzian 2*Gamma_l*gamma_c^2/(gamma_c^2 + omega^2).  At omega =
    omega_m the two differ by the reduction factor
    gamma_c^2/(gamma_c^2 + omega_m^2).
    """
    omega = np.asarray(omega, dtype=float)
    if isinstance(model, WhiteNoise):
        out = np.full_like(omega, 2.0 * model.Gamma_l)
    elif isinstance(model, FiniteCorrelationNoise):
        gc2 = model.gamma_c ** 2
        out = 2.0 * model.Gamma_l * gc2 / (gc2 + omega ** 2)
    else:
        raise TypeError(f"unknown noise model {model!r}")
    return out if out.ndim else float(out)


def sample_path(model: NoiseModel, dt: float, n: int, seed: int) -> NoisePath:
    """Draw a phase-derivative path of ``n`` samples at step ``dt``.

    White: i.i.d. Gaussians of variance 2*Gamma_l/dt, so that the phase
    increments phidot*dt have variance 2*Gamma_l*dt.  Finite correlation:
    the exact discrete Ornstein-Uhlenbeck update

        x[k+1] = x[k]*exp(-gamma_c*dt) + sigma*sqrt(1-exp(-2*gamma_c*dt))*xi[k]

    with sigma^2 = Gamma_l*gamma_c, started from the stationary
    distribution.  The exact update keeps the stationary statistics free of
    step-size bias.

    Raises
    ------
    StepTooCoarse
        Finite-correlation model with dt >= 0.1/gamma_c.
    """
    if dt <= 0:
        raise StepTooCoarse(f"dt must be positive, got {dt!r}")
    if n <= 0:
        raise ValueError(f"sample count must be positive, got {n!r}")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    if isinstance(model, WhiteNoise):
        if model.Gamma_l == 0.0:
            samples = np.zeros(n)
        else:
            samples = rng.normal(0.0, np.sqrt(2.0 * model.Gamma_l / dt), size=n)
    elif isinstance(model, FiniteCorrelationNoise):
        if dt >= _OU_MAX_STEP_FRACTION / model.gamma_c:
            raise StepTooCoarse(
                f"dt = {dt:g} too coarse for gamma_c = {model.gamma_c:g}; "
                f"need dt < {_OU_MAX_STEP_FRACTION / model.gamma_c:g}")
        if model.Gamma_l == 0.0:
            samples = np.zeros(n)
        else:
            sigma = np.sqrt(model.Gamma_l * model.gamma_c)
            a = np.exp(-model.gamma_c * dt)
            s = sigma * np.sqrt(1.0 - a * a)
            xi = rng.standard_normal(n)
            samples = np.empty(n)
            samples[0] = sigma * xi[0]
            if n > 1:
                # lfilter runs x[k] = a*x[k-1] + s*xi[k] in C.
                driven, _ = lfilter([s], [1.0, -a], xi[1:], zi=np.array([a * samples[0]]))
                samples[1:] = driven
    else:
        raise TypeError(f"unknown noise model {model!r}")
    return NoisePath(dt=dt, samples=samples, seed=seed)


def suppression_factor_two_mode(omega_m: float, gamma_1: float) -> float:
    """Phase-noise suppression of the two-mode scheme, (2*omega_m/gamma_1)^2.

    Relative to driving the cooled mode directly, routing the drive through
    the lower mode shrinks the noisy intracavity amplitude by
    gamma_1/(2*omega_m), so the heating (quadratic in the amplitude) drops
    by this factor.
    """
    if omega_m <= 0 or gamma_1 <= 0:
        raise ValueError("omega_m and gamma_1 must be strictly positive")
    return (2.0 * omega_m / gamma_1) ** 2
