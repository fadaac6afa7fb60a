"""Physical parameter records, unit conventions, and derived quantities.

Unit convention
---------------
Every frequency and rate held by these records is *angular* (rad/s).  The
config layer accepts ``*_hz`` keys (multiplied by 2*pi on ingest) and
``*_rad_s`` keys (taken verbatim); see :mod:`duocool.config`.

One deliberate exception: the laser linewidth ``Gamma_l`` is a plain inverse
time (s^-1), never multiplied by 2*pi.  A quoted linewidth of 1e3 Hz is
ingested as 1e3 s^-1.  Only this reading keeps the white-noise phonon bound
2*Gamma_l*|alpha_2|^2/gamma_2 below one for intracavity photon numbers
|alpha_2|^2 < 1e3 at a cavity linewidth of 2*pi*1e6 rad/s, which is the
operating point the package is built to reproduce.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Union

import numpy as np
from scipy.constants import hbar, k as k_B

from .errors import NonPositiveRate, InconsistentQ, ValidationError

# Relative tolerance for the Q * gamma_m = omega_m consistency check.
_Q_CONSISTENCY_RTOL = 1e-6


@dataclass(frozen=True)
class SystemParams:
    """All rates, frequencies, and environment parameters of the cooled system.

    Parameters
    ----------
    omega_m : float
        Mechanical angular frequency (rad/s).
    gamma_1, gamma_2 : float
        Energy decay rates of the driven (lower) and anti-Stokes (upper)
        cavity modes (rad/s).
    eta : float
        Dimensionless optomechanical coupling, (omega_1/omega_m)*(x_zp/R).
    Omega_c : float
        Cooling-drive strength (rad/s).  Zero is allowed (undriven system).
    temperature : float
        Environment temperature (K).
    gamma_m : float, optional
        Mechanical energy decay rate (rad/s).  Derived from
        ``quality_factor`` when omitted.
    quality_factor : float, optional
        Mechanical Q = omega_m / gamma_m.  Derived from ``gamma_m`` when
        omitted.  If both are given they must agree to 1e-6 relative.
    omega_1 : float, optional
        Optical angular frequency of the driven cavity mode (rad/s); only
        used to derive ``eta`` for exploration.
    mass : float, optional
        Effective oscillator mass (kg); only used to derive ``eta``.
    radius : float, optional
        Cavity radius (m); only used to derive ``eta``.
    """

    omega_m: float
    gamma_1: float
    gamma_2: float
    eta: float
    Omega_c: float
    temperature: float = 0.0
    gamma_m: float | None = None
    quality_factor: float | None = None
    omega_1: float | None = None
    mass: float | None = None
    radius: float | None = None

    @property
    def resolved_sideband(self) -> bool:
        """True when both cavity linewidths fall below the mechanical frequency."""
        return self.gamma_1 < self.omega_m and self.gamma_2 < self.omega_m

    def to_dict(self) -> dict:
        return {
            "omega_m_rad_s": self.omega_m,
            "gamma_1_rad_s": self.gamma_1,
            "gamma_2_rad_s": self.gamma_2,
            "eta": self.eta,
            "omega_c_rad_s": self.Omega_c,
            "temperature_k": self.temperature,
            "gamma_m_rad_s": self.gamma_m,
            "quality_factor": self.quality_factor,
            "omega_1_rad_s": self.omega_1,
            "mass_kg": self.mass,
            "radius_m": self.radius,
        }


class Sideband(Enum):
    """Which detection sideband the probe laser addresses."""

    BLUE = "blue"
    RED = "red"


@dataclass(frozen=True)
class MeasurementParams:
    """Detection-mode parameters for sideband thermometry.

    ``gamma_mp`` is the effective mechanical coupling rate of the
    continuously cooled oscillator (bare gamma_m plus the optomechanical
    damping), and ``n_mf`` the effective bath phonon number it relaxes to.
    """

    gamma_3p: float
    Omega_d: float
    sideband: Sideband
    gamma_mp: float
    n_mf: float
    omega_3: float | None = None

    def __post_init__(self):
        if not (self.gamma_3p > 0 and self.gamma_mp > 0):
            raise NonPositiveRate("gamma_3p and gamma_mp must be strictly positive")
        if self.Omega_d < 0:
            raise NonPositiveRate("Omega_d must be non-negative")
        if self.n_mf < 0:
            raise ValidationError("n_mf must be non-negative")
        if self.omega_3 is not None and self.omega_3 <= 0:
            raise NonPositiveRate("omega_3 must be strictly positive when given")

    def to_dict(self) -> dict:
        return {
            "gamma_3p_rad_s": self.gamma_3p,
            "omega_d_rad_s": self.Omega_d,
            "sideband": self.sideband.value,
            "gamma_mp_rad_s": self.gamma_mp,
            "n_mf": self.n_mf,
            "omega_3_rad_s": self.omega_3,
        }


@dataclass(frozen=True)
class WhiteNoise:
    """Delta-correlated laser phase-derivative noise.

    Correlation <phidot(t) phidot(s)> = 2*Gamma_l*delta(t-s), with Gamma_l
    the laser linewidth in s^-1 (no 2*pi; see module docstring).
    """

    Gamma_l: float

    def __post_init__(self):
        if self.Gamma_l < 0:
            raise ValidationError("Gamma_l must be non-negative")

    def to_dict(self) -> dict:
        return {"model": "white", "gamma_l_s": self.Gamma_l}


@dataclass(frozen=True)
class FiniteCorrelationNoise:
    """Gaussian phase-derivative noise with exponential memory.

    Correlation <phidot(t) phidot(s)> = Gamma_l*gamma_c*exp(-gamma_c|t-s|);
    an Ornstein-Uhlenbeck process with stationary variance Gamma_l*gamma_c
    and decay rate gamma_c.  Integrated over all lags it carries the same
    weight 2*Gamma_l as the white model.
    """

    Gamma_l: float
    gamma_c: float

    def __post_init__(self):
        if self.Gamma_l < 0:
            raise ValidationError("Gamma_l must be non-negative")
        if self.gamma_c <= 0:
            raise NonPositiveRate("gamma_c must be strictly positive")

    def to_dict(self) -> dict:
        return {
            "model": "finite_correlation",
            "gamma_l_s": self.Gamma_l,
            "gamma_c_rad_s": self.gamma_c,
        }


NoiseModel = Union[WhiteNoise, FiniteCorrelationNoise]


def validate_params(raw: SystemParams) -> SystemParams:
    """Validate a parameter record and fill in derived fields.

    Fills ``gamma_m`` from ``quality_factor`` or vice versa.  Rejects
    non-positive rates, ``eta`` outside (0, 1), and inconsistent
    (``quality_factor``, ``gamma_m``) pairs.

    Returns
    -------
    SystemParams
        A new record with both ``gamma_m`` and ``quality_factor`` set.
    """
    for name in ("omega_m", "gamma_1", "gamma_2"):
        value = getattr(raw, name)
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise NonPositiveRate(f"{name} must be a strictly positive rate, got {value!r}")
    if not (0.0 < raw.eta < 1.0):
        raise ValidationError(f"eta must lie in (0, 1), got {raw.eta!r}")
    if not (math.isfinite(raw.Omega_c) and raw.Omega_c >= 0):
        raise NonPositiveRate(f"Omega_c must be non-negative, got {raw.Omega_c!r}")
    if not (math.isfinite(raw.temperature) and raw.temperature >= 0):
        raise ValidationError(f"temperature must be non-negative, got {raw.temperature!r}")
    for name in ("omega_1", "mass", "radius"):
        value = getattr(raw, name)
        if value is not None and not (math.isfinite(value) and value > 0):
            raise NonPositiveRate(f"{name} must be strictly positive when given, got {value!r}")

    gamma_m, quality = raw.gamma_m, raw.quality_factor
    if gamma_m is None and quality is None:
        raise ValidationError("one of gamma_m or quality_factor is required")
    if gamma_m is not None and not (math.isfinite(gamma_m) and gamma_m > 0):
        raise NonPositiveRate(f"gamma_m must be strictly positive, got {gamma_m!r}")
    if quality is not None and not (math.isfinite(quality) and quality > 0):
        raise NonPositiveRate(f"quality_factor must be strictly positive, got {quality!r}")
    if gamma_m is None:
        gamma_m = raw.omega_m / quality
    elif quality is None:
        quality = raw.omega_m / gamma_m
    else:
        if abs(quality * gamma_m / raw.omega_m - 1.0) >= _Q_CONSISTENCY_RTOL:
            raise InconsistentQ(
                f"quality_factor*gamma_m = {quality * gamma_m:.6e} disagrees with "
                f"omega_m = {raw.omega_m:.6e} beyond {_Q_CONSISTENCY_RTOL:.0e} relative"
            )
    return replace(raw, gamma_m=gamma_m, quality_factor=quality)


def compute_eta(omega_1: float, omega_m: float, mass: float, radius: float) -> float:
    """Dimensionless optomechanical coupling (omega_1/omega_m)*(x_zp/R).

    ``x_zp = sqrt(hbar/(mass*omega_m))`` is the zero-point motion of the
    mechanical mode.  Typical cavity-optomechanics numbers land around 1e-4.
    Scales as mass^(-1/2) and radius^(-1).
    """
    for name, value in (("omega_1", omega_1), ("omega_m", omega_m),
                        ("mass", mass), ("radius", radius)):
        if not (math.isfinite(value) and value > 0):
            raise NonPositiveRate(f"{name} must be strictly positive, got {value!r}")
    x_zp = math.sqrt(hbar / (mass * omega_m))
    return (omega_1 / omega_m) * (x_zp / radius)


def thermal_occupation(temperature: float, omega_m: float) -> float:
    """Bose-Einstein occupation 1/(exp(hbar*omega_m/(k_B*T)) - 1).

    Returns 0 at T = 0.  Agrees with the classical k_B*T/(hbar*omega_m) to
    better than 1% once that ratio exceeds ~50.
    """
    if omega_m <= 0:
        raise NonPositiveRate(f"omega_m must be strictly positive, got {omega_m!r}")
    if temperature < 0:
        raise ValidationError(f"temperature must be non-negative, got {temperature!r}")
    if temperature == 0.0:
        return 0.0
    x = hbar * omega_m / (k_B * temperature)
    if x > 700.0:  # exp would overflow; occupation is indistinguishable from 0
        return 0.0
    return 1.0 / np.expm1(x)
