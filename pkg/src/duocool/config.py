"""Declarative run configuration: INI sections [system], [noise],
[measurement], [run].

Frequencies and rates accept two spellings: ``<name>_hz`` (multiplied by
2*pi on ingest) or ``<name>_rad_s`` (taken verbatim); supply exactly one.
The laser linewidth is the single deliberate exception: ``gamma_l_s`` is a
plain inverse time in s^-1 and is never multiplied by 2*pi (a quoted
linewidth of 1e3 Hz enters as 1e3 s^-1; see :mod:`duocool.params`).

Unknown keys and unknown sections are errors, so a typo cannot silently
fall back to a default.

Recognized keys
---------------
[system]
    omega_m_hz|omega_m_rad_s, gamma_1_*, gamma_2_*, omega_c_* (drive
    strength), eta, temperature_k, gamma_m_* and/or quality_factor (at
    least one), omega_1_* (optional), mass_kg (optional), radius_m
    (optional)
[noise]
    model = white | finite_correlation, gamma_l_s,
    gamma_c_hz|gamma_c_rad_s (finite_correlation only)
[measurement]  (optional section)
    gamma_3p_*, omega_d_*, sideband = blue|red (optional),
    gamma_mp_* (optional; default gamma_m + gamma_tilde),
    n_mf (optional; default: mechanical occupation of the cooling model),
    omega_3_* (optional)
[run]
    seed, trajectories, dt_s, t_final_s, spectrum_points, spectrum_span,
    sweep_axis, sweep_start, sweep_stop, sweep_points, sweep_scale
"""

from __future__ import annotations

import configparser
import math
import os
from dataclasses import dataclass, field

from .errors import ConfigError, ValidationError
from .params import (FiniteCorrelationNoise, MeasurementParams, NoiseModel,
                     Sideband, SystemParams, WhiteNoise, validate_params)

_TWO_PI = 2.0 * math.pi

_ANGULAR_SYSTEM_KEYS = ("omega_m", "gamma_1", "gamma_2", "gamma_m", "omega_c", "omega_1")
_PLAIN_SYSTEM_KEYS = ("eta", "temperature_k", "quality_factor", "mass_kg", "radius_m")
_ANGULAR_MEASUREMENT_KEYS = ("gamma_3p", "omega_d", "gamma_mp", "omega_3")
_PLAIN_MEASUREMENT_KEYS = ("n_mf", "sideband")
_NOISE_KEYS = ("model", "gamma_l_s")
_ANGULAR_NOISE_KEYS = ("gamma_c",)
_RUN_KEYS = ("seed", "trajectories", "dt_s", "t_final_s", "spectrum_points",
             "spectrum_span", "sweep_axis", "sweep_start", "sweep_stop",
             "sweep_points", "sweep_scale")


@dataclass(frozen=True)
class RunOptions:
    """Execution knobs from the [run] section (flags may override)."""

    seed: int | None = None
    trajectories: int = 0
    dt: float | None = None
    t_final: float | None = None
    spectrum_points: int = 1001
    spectrum_span: float = 10.0
    sweep_axis: str | None = None
    sweep_start: float | None = None
    sweep_stop: float | None = None
    sweep_points: int | None = None
    sweep_scale: str = "log"

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "trajectories": self.trajectories,
            "dt_s": self.dt,
            "t_final_s": self.t_final,
            "spectrum_points": self.spectrum_points,
            "spectrum_span": self.spectrum_span,
        }


@dataclass(frozen=True)
class RawMeasurementConfig:
    """[measurement] as written; gamma_mp/n_mf may be left for derivation."""

    gamma_3p: float
    Omega_d: float
    sideband: Sideband = Sideband.BLUE
    gamma_mp: float | None = None
    n_mf: float | None = None
    omega_3: float | None = None

    def to_dict(self) -> dict:
        return {
            "gamma_3p_rad_s": self.gamma_3p,
            "omega_d_rad_s": self.Omega_d,
            "sideband": self.sideband.value,
            "gamma_mp_rad_s": self.gamma_mp,
            "n_mf": self.n_mf,
            "omega_3_rad_s": self.omega_3,
        }

    def resolve(self, gamma_mp: float, n_mf: float, sideband: Sideband | None = None
                ) -> MeasurementParams:
        """Fill derivable fields and produce a validated record."""
        return MeasurementParams(
            gamma_3p=self.gamma_3p,
            Omega_d=self.Omega_d,
            sideband=self.sideband if sideband is None else sideband,
            gamma_mp=self.gamma_mp if self.gamma_mp is not None else gamma_mp,
            n_mf=self.n_mf if self.n_mf is not None else n_mf,
            omega_3=self.omega_3,
        )


@dataclass(frozen=True)
class RunConfig:
    """Parsed and validated configuration for one CLI invocation."""

    system: SystemParams
    noise: NoiseModel
    measurement: RawMeasurementConfig | None = None
    run: RunOptions = field(default_factory=RunOptions)

    def to_dict(self) -> dict:
        out = {
            "system": self.system.to_dict(),
            "noise": self.noise.to_dict(),
            "run": self.run.to_dict(),
        }
        if self.measurement is not None:
            out["measurement"] = self.measurement.to_dict()
        return out


def _parse_float(section: str, key: str, text: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key} = {text!r} is not a number") from exc
    if not math.isfinite(value):
        raise ConfigError(f"[{section}] {key} = {text!r} is not finite")
    return value


def _parse_int(section: str, key: str, text: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key} = {text!r} is not an integer") from exc


def _take_angular(section: str, items: dict, base: str) -> float | None:
    """Pop ``<base>_hz`` or ``<base>_rad_s``; error if both are present."""
    hz_key, rad_key = f"{base}_hz", f"{base}_rad_s"
    has_hz, has_rad = hz_key in items, rad_key in items
    if has_hz and has_rad:
        raise ConfigError(f"[{section}] supply only one of {hz_key} / {rad_key}")
    if has_hz:
        return _TWO_PI * _parse_float(section, hz_key, items.pop(hz_key))
    if has_rad:
        return _parse_float(section, rad_key, items.pop(rad_key))
    return None


def _reject_unknown(section: str, items: dict) -> None:
    if items:
        raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(sorted(items))}")


def _parse_system(items: dict) -> SystemParams:
    values = {}
    for base in _ANGULAR_SYSTEM_KEYS:
        values[base] = _take_angular("system", items, base)
    eta = items.pop("eta", None)
    temperature = items.pop("temperature_k", None)
    quality = items.pop("quality_factor", None)
    mass = items.pop("mass_kg", None)
    radius = items.pop("radius_m", None)
    _reject_unknown("system", items)

    for base in ("omega_m", "gamma_1", "gamma_2", "omega_c"):
        if values[base] is None:
            raise ConfigError(f"[system] missing required key {base}_hz or {base}_rad_s")
    if eta is None:
        raise ConfigError("[system] missing required key eta")
    raw = SystemParams(
        omega_m=values["omega_m"],
        gamma_1=values["gamma_1"],
        gamma_2=values["gamma_2"],
        eta=_parse_float("system", "eta", eta),
        Omega_c=values["omega_c"],
        temperature=(_parse_float("system", "temperature_k", temperature)
                     if temperature is not None else 0.0),
        gamma_m=values["gamma_m"],
        quality_factor=(_parse_float("system", "quality_factor", quality)
                        if quality is not None else None),
        omega_1=values["omega_1"],
        mass=_parse_float("system", "mass_kg", mass) if mass is not None else None,
        radius=_parse_float("system", "radius_m", radius) if radius is not None else None,
    )
    try:
        return validate_params(raw)
    except ValidationError as exc:
        raise ConfigError(f"[system] {exc}") from exc


def _parse_noise(items: dict) -> NoiseModel:
    model = items.pop("model", None)
    gamma_l = items.pop("gamma_l_s", None)
    gamma_c = _take_angular("noise", items, "gamma_c")
    _reject_unknown("noise", items)
    if model is None:
        raise ConfigError("[noise] missing required key model")
    if gamma_l is None:
        raise ConfigError("[noise] missing required key gamma_l_s")
    gamma_l = _parse_float("noise", "gamma_l_s", gamma_l)
    model = model.strip().lower()
    try:
        if model == "white":
            if gamma_c is not None:
                raise ConfigError("[noise] gamma_c only applies to model = finite_correlation")
            return WhiteNoise(Gamma_l=gamma_l)
        if model == "finite_correlation":
            if gamma_c is None:
                raise ConfigError("[noise] finite_correlation requires gamma_c_hz or gamma_c_rad_s")
            return FiniteCorrelationNoise(Gamma_l=gamma_l, gamma_c=gamma_c)
    except ValidationError as exc:
        raise ConfigError(f"[noise] {exc}") from exc
    raise ConfigError(f"[noise] unknown model {model!r}; use white or finite_correlation")


def _parse_measurement(items: dict) -> RawMeasurementConfig:
    values = {}
    for base in _ANGULAR_MEASUREMENT_KEYS:
        values[base] = _take_angular("measurement", items, base)
    n_mf = items.pop("n_mf", None)
    sideband = items.pop("sideband", None)
    _reject_unknown("measurement", items)
    if values["gamma_3p"] is None:
        raise ConfigError("[measurement] missing required key gamma_3p_hz or gamma_3p_rad_s")
    if values["omega_d"] is None:
        raise ConfigError("[measurement] missing required key omega_d_hz or omega_d_rad_s")
    if sideband is not None:
        sideband = sideband.strip().lower()
        if sideband not in ("blue", "red"):
            raise ConfigError(f"[measurement] sideband must be blue or red, got {sideband!r}")
        sideband = Sideband(sideband)
    return RawMeasurementConfig(
        gamma_3p=values["gamma_3p"],
        Omega_d=values["omega_d"],
        sideband=sideband if sideband is not None else Sideband.BLUE,
        gamma_mp=values["gamma_mp"],
        n_mf=_parse_float("measurement", "n_mf", n_mf) if n_mf is not None else None,
        omega_3=values["omega_3"],
    )


def _parse_run(items: dict) -> RunOptions:
    known = {k: items.pop(k) for k in list(items) if k in _RUN_KEYS}
    _reject_unknown("run", items)
    scale = known.get("sweep_scale", "log").strip().lower()
    if scale not in ("log", "linear"):
        raise ConfigError(f"[run] sweep_scale must be log or linear, got {scale!r}")
    return RunOptions(
        seed=_parse_int("run", "seed", known["seed"]) if "seed" in known else None,
        trajectories=(_parse_int("run", "trajectories", known["trajectories"])
                      if "trajectories" in known else 0),
        dt=_parse_float("run", "dt_s", known["dt_s"]) if "dt_s" in known else None,
        t_final=(_parse_float("run", "t_final_s", known["t_final_s"])
                 if "t_final_s" in known else None),
        spectrum_points=(_parse_int("run", "spectrum_points", known["spectrum_points"])
                         if "spectrum_points" in known else 1001),
        spectrum_span=(_parse_float("run", "spectrum_span", known["spectrum_span"])
                       if "spectrum_span" in known else 10.0),
        sweep_axis=known.get("sweep_axis"),
        sweep_start=(_parse_float("run", "sweep_start", known["sweep_start"])
                     if "sweep_start" in known else None),
        sweep_stop=(_parse_float("run", "sweep_stop", known["sweep_stop"])
                    if "sweep_stop" in known else None),
        sweep_points=(_parse_int("run", "sweep_points", known["sweep_points"])
                      if "sweep_points" in known else None),
        sweep_scale=scale,
    )


def load_config(path: str) -> RunConfig:
    """Parse and validate an INI config file.

    Raises ConfigError for missing files, unknown sections or keys, and any
    value that fails physical validation.
    """
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc

    sections = set(parser.sections())
    unknown = sections - {"system", "noise", "measurement", "run"}
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")
    for required in ("system", "noise"):
        if required not in sections:
            raise ConfigError(f"missing required section [{required}]")

    system = _parse_system(dict(parser["system"]))
    noise = _parse_noise(dict(parser["noise"]))
    measurement = (_parse_measurement(dict(parser["measurement"]))
                   if "measurement" in sections else None)
    run = _parse_run(dict(parser["run"])) if "run" in sections else RunOptions()
    return RunConfig(system=system, noise=noise, measurement=measurement, run=run)
