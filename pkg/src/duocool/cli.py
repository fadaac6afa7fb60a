"""Command-line front end.

Subcommands:

* ``steady-state``  exact and approximate classical amplitudes
* ``cool``          full cooling pipeline -> phonon-number budget
* ``sweep``         one-parameter sweep of the cooling report -> CSV
* ``thermometry``   both sideband spectra, peak ratio, inferred phonon number
* ``noise-psd``     phase-noise spectral density grid (optionally a sample path)
* ``plot``          render figures from previously written CSV/JSON outputs

Exit codes: 0 success, 2 configuration error, 3 unstable system,
4 numerical non-convergence.

Every analysis subcommand writes machine-readable files into ``--out`` and
prints a human summary whose every number also appears in the files.  With a
fixed seed and ``--no-timestamp`` the outputs are byte-identical across
runs.  The resolved seed comes from ``--seed`` > [run] seed > 42.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import os
import sys

import numpy as np

from . import report
from .config import RunConfig, load_config
from .cooling import cooling_report, gamma_tilde, phase_noise_phonons
from .errors import (ConfigError, DuocoolError, IllConditioned, MultipleRoots,
                     NoConvergence, Overflow, StepTooCoarse, Unstable,
                     ValidationError)
from .linear import build_cooling_model, solve_lyapunov, stability_eigen
from .noise import psd_phase_derivative, sample_path
from .params import FiniteCorrelationNoise, Sideband, SystemParams, WhiteNoise
from .spectra import (backaction_check, default_omega_grid, infer_phonon,
                      output_spectrum, sideband_ratio)
from .steady_state import (approximate_steady_state, measurement_steady_state,
                           solve_classical_steady_state)
from .trajectories import ensemble_phonon

_DEFAULT_SEED = 42

_SWEEP_AXES = ("gamma_l", "gamma_c", "omega_c", "eta", "gamma_1", "gamma_2",
               "omega_m", "temperature", "quality_factor")

_SWEEP_COLUMNS = [
    "axis_value", "n_phase", "n_q", "n_q_limit", "n_total_estimate",
    "n_lyapunov", "gamma_tilde_rad_s", "suppression_factor", "stable",
    "max_re_rad_s", "alpha_1_abs", "alpha_2_abs", "n_mi", "n_cavity",
]


def _resolve_seed(args, config: RunConfig) -> int:
    if args.seed is not None:
        return args.seed
    if config.run.seed is not None:
        return config.run.seed
    return _DEFAULT_SEED


def _apply_axis(config: RunConfig, axis: str, value: float) -> RunConfig:
    """A copy of the config with one named parameter replaced.

    Sweeping omega_m or quality_factor re-derives gamma_m from Q so the two
    stay consistent along the axis.
    """
    system, noise = config.system, config.noise
    if axis == "gamma_l":
        noise = dataclasses.replace(noise, Gamma_l=value)
    elif axis == "gamma_c":
        if not isinstance(noise, FiniteCorrelationNoise):
            raise ConfigError("axis gamma_c requires [noise] model = finite_correlation")
        noise = dataclasses.replace(noise, gamma_c=value)
    elif axis == "omega_c":
        system = dataclasses.replace(system, Omega_c=value)
    elif axis == "eta":
        system = dataclasses.replace(system, eta=value)
    elif axis == "gamma_1":
        system = dataclasses.replace(system, gamma_1=value)
    elif axis == "gamma_2":
        system = dataclasses.replace(system, gamma_2=value)
    elif axis == "omega_m":
        system = dataclasses.replace(system, omega_m=value,
                                     gamma_m=value / system.quality_factor)
    elif axis == "temperature":
        system = dataclasses.replace(system, temperature=value)
    elif axis == "quality_factor":
        system = dataclasses.replace(system, quality_factor=value,
                                     gamma_m=system.omega_m / value)
    else:
        raise ConfigError(f"unknown sweep axis {axis!r}; choose from {', '.join(_SWEEP_AXES)}")
    return dataclasses.replace(config, system=system, noise=noise)


def _provenance(config: RunConfig, seed: int) -> dict:
    return {"config": config.to_dict(), "seed": seed}


def _out_path(args, name: str) -> str:
    os.makedirs(args.out, exist_ok=True)
    return os.path.join(args.out, name)


def _flat_csv_from_dict(payload: dict, prefix: str = "") -> tuple[list[str], list]:
    header, row = [], []
    for key, value in payload.items():
        if isinstance(value, dict):
            sub_h, sub_r = _flat_csv_from_dict(value, prefix=f"{prefix}{key}.")
            header.extend(sub_h)
            row.extend(sub_r)
        else:
            header.append(f"{prefix}{key}")
            row.append(value)
    return header, row


def cmd_steady_state(args, config: RunConfig) -> int:
    seed = _resolve_seed(args, config)
    exact = solve_classical_steady_state(config.system)
    approx = approximate_steady_state(config.system)
    ratio = abs(exact.alpha_2) / abs(exact.alpha_1) if abs(exact.alpha_1) > 0 else 0.0
    payload = {
        "exact": exact.to_dict(),
        "approximate": approx.to_dict(),
        "ratio_alpha2_alpha1": ratio,
        **_provenance(config, seed),
    }
    if args.format == "csv":
        header, row = _flat_csv_from_dict(
            {k: payload[k] for k in ("exact", "approximate", "ratio_alpha2_alpha1")})
        report.write_csv(_out_path(args, "steady_state.csv"), header, [row],
                         meta=_provenance(config, seed),
                         with_timestamp=not args.no_timestamp)
        out_name = "steady_state.csv"
    else:
        report.write_json(_out_path(args, "steady_state.json"), payload,
                          with_timestamp=not args.no_timestamp)
        out_name = "steady_state.json"
    print("classical steady state (exact | closed-form approximation)")
    print(f"  |alpha_1|      {abs(exact.alpha_1):.6g} | {abs(approx.alpha_1):.6g}")
    print(f"  |alpha_2|      {abs(exact.alpha_2):.6g} | {abs(approx.alpha_2):.6g}")
    print(f"  beta           {exact.beta.real:.6g} | {approx.beta.real:.6g}")
    print(f"  Delta_L rad/s  {exact.Delta_L:.6g} | {approx.Delta_L:.6g}")
    print(f"  |alpha_2/alpha_1| = {ratio:.6g}")
    print(f"  residuals: exact {exact.residual:.3g}, approximation {approx.residual:.3g}")
    print(f"wrote {os.path.join(args.out, out_name)}")
    return 0


def cmd_cool(args, config: RunConfig) -> int:
    seed = _resolve_seed(args, config)
    rep = cooling_report(config.system, config.noise, include_a1=args.include_a1)
    payload = {**rep.to_dict(), **_provenance(config, seed)}

    n_traj = args.trajectories if args.trajectories is not None else config.run.trajectories
    if n_traj:
        model = build_cooling_model(config.system, rep.steady_state, config.noise)
        ens = ensemble_phonon(model, n_traj, dt=config.run.dt,
                              t_final=config.run.t_final, seed=seed)
        payload["monte_carlo"] = ens.to_dict()

    if args.format == "csv":
        flat = {k: v for k, v in payload.items() if k not in ("config", "seed")}
        header, row = _flat_csv_from_dict(flat)
        report.write_csv(_out_path(args, "cooling_report.csv"), header, [row],
                         meta=_provenance(config, seed),
                         with_timestamp=not args.no_timestamp)
        out_name = "cooling_report.csv"
    else:
        report.write_json(_out_path(args, "cooling_report.json"), payload,
                          with_timestamp=not args.no_timestamp)
        out_name = "cooling_report.json"

    print("cooling report")
    print(f"  gamma_tilde        {rep.gamma_tilde:.6g} rad/s")
    print(f"  n_phase            {rep.n_phase:.6g}")
    print(f"  n_q (capped)       {rep.n_q:.6g}   [floor {rep.n_q_limit:.6g}]")
    print(f"  n_total_estimate   {rep.n_total_estimate:.6g}")
    print(f"  n_lyapunov         {rep.n_lyapunov:.6g}")
    print(f"  n_cavity           {rep.n_cavity:.6g}")
    print(f"  n_mi               {rep.n_mi:.6g}")
    print(f"  suppression        {rep.suppression_factor:.6g}")
    print(f"  stable             {rep.stable} (max Re eig {rep.max_re:.6g} rad/s)")
    if rep.n_lyapunov_three_mode is not None:
        print(f"  n_lyapunov 3-mode  {rep.n_lyapunov_three_mode:.6g}")
    if n_traj:
        mc = payload["monte_carlo"]
        print(f"  monte carlo        {mc['n_mean']:.6g} +- {mc['n_stderr']:.3g} "
              f"({mc['n_traj']} trajectories)")
    print(f"wrote {os.path.join(args.out, out_name)}")
    return 0


def cmd_sweep(args, config: RunConfig) -> int:
    seed = _resolve_seed(args, config)
    axis = args.axis or config.run.sweep_axis
    if axis is None:
        raise ConfigError("sweep needs --axis (or [run] sweep_axis)")
    axis = axis.strip().lower()
    if axis not in _SWEEP_AXES:
        raise ConfigError(f"unknown sweep axis {axis!r}; choose from {', '.join(_SWEEP_AXES)}")
    start = args.start if args.start is not None else config.run.sweep_start
    stop = args.stop if args.stop is not None else config.run.sweep_stop
    points = args.points if args.points is not None else config.run.sweep_points
    scale = args.scale or config.run.sweep_scale
    if start is None or stop is None or points is None:
        raise ConfigError("sweep needs --start, --stop, and --points")
    if points < 1:
        raise ConfigError("sweep needs at least one point")
    if scale == "log":
        if start <= 0 or stop <= 0:
            raise ConfigError("log-scale sweep needs positive bounds")
        grid = np.geomspace(start, stop, points)
    else:
        grid = np.linspace(start, stop, points)

    rows = []
    for value in grid:
        point = _apply_axis(config, axis, float(value))
        rep = cooling_report(point.system, point.noise)
        rows.append([
            float(value), rep.n_phase, rep.n_q, rep.n_q_limit,
            rep.n_total_estimate, rep.n_lyapunov, rep.gamma_tilde,
            rep.suppression_factor, rep.stable, rep.max_re,
            abs(rep.steady_state.alpha_1), abs(rep.steady_state.alpha_2),
            rep.n_mi, rep.n_cavity,
        ])
    header = [axis if i == 0 else name for i, name in enumerate(_SWEEP_COLUMNS)]
    path = _out_path(args, "sweep.csv")
    report.write_csv(path, header, rows,
                     meta={**_provenance(config, seed),
                           "axis": axis, "scale": scale,
                           "start": float(start), "stop": float(stop),
                           "points": int(points)},
                     with_timestamp=not args.no_timestamp)
    print(f"swept {axis} over [{start:g}, {stop:g}] ({points} points, {scale})")
    print(f"  n_lyapunov range: {min(r[5] for r in rows):.6g} .. {max(r[5] for r in rows):.6g}")
    print(f"wrote {path}")
    return 0


def cmd_thermometry(args, config: RunConfig) -> int:
    seed = _resolve_seed(args, config)
    if config.measurement is None:
        raise ConfigError("thermometry needs a [measurement] section")

    ss = solve_classical_steady_state(config.system)
    gt = gamma_tilde(config.system, ss)
    gamma_mp_default = config.system.gamma_m + gt
    if config.measurement.n_mf is None:
        model = build_cooling_model(config.system, ss, config.noise)
        n_mf_default = solve_lyapunov(model).n_per_mode[-1]
    else:
        n_mf_default = config.measurement.n_mf

    results = {}
    peaks = {}
    for sideband in (Sideband.BLUE, Sideband.RED):
        mp = config.measurement.resolve(gamma_mp_default, n_mf_default, sideband)
        mss = measurement_steady_state(config.system, mp)
        grid = default_omega_grid(mp, config.run.spectrum_points, config.run.spectrum_span)
        spectrum = output_spectrum(config.system, mp, mss.alpha_3, grid)
        results[sideband] = (mp, mss, spectrum)
        peaks[sideband] = spectrum.peak_intensity

    mp_blue, mss_blue, spec_blue = results[Sideband.BLUE]
    _, _, spec_red = results[Sideband.RED]
    estimate = infer_phonon(peaks[Sideband.RED], peaks[Sideband.BLUE])
    flags = backaction_check(config.system, mp_blue, mss_blue.alpha_3, ss)

    csv_path = _out_path(args, "spectra.csv")
    report.write_csv(
        csv_path, ["omega_rad_s", "psd_blue", "psd_red"],
        zip(spec_blue.omega_grid, spec_blue.psd, spec_red.psd),
        meta=_provenance(config, seed), with_timestamp=not args.no_timestamp)

    payload = {
        "n_mf_input": mp_blue.n_mf,
        "gamma_mp_rad_s": mp_blue.gamma_mp,
        "alpha_3_abs": abs(mss_blue.alpha_3),
        "peak_blue": peaks[Sideband.BLUE],
        "peak_red": peaks[Sideband.RED],
        "ratio_red_blue": peaks[Sideband.RED] / peaks[Sideband.BLUE],
        "ratio_ideal": sideband_ratio(mp_blue.n_mf),
        "n_inferred": estimate.n,
        "backaction": {
            "weak_measurement": flags.weak_measurement,
            "amplitude_hierarchy": flags.amplitude_hierarchy,
            "stable": flags.stable,
            "stability_margin": flags.stability_margin,
        },
        **_provenance(config, seed),
    }
    json_path = _out_path(args, "thermometry.json")
    report.write_json(json_path, payload, with_timestamp=not args.no_timestamp)

    print("sideband thermometry")
    print(f"  n_mf (input)       {mp_blue.n_mf:.6g}")
    print(f"  |alpha_3|          {abs(mss_blue.alpha_3):.6g}")
    print(f"  I_blue peak        {peaks[Sideband.BLUE]:.6g}")
    print(f"  I_red peak         {peaks[Sideband.RED]:.6g}")
    print(f"  I_r/I_b            {payload['ratio_red_blue']:.6g} "
          f"(ideal n/(n+1) = {payload['ratio_ideal']:.6g})")
    print(f"  n inferred         {estimate.n:.6g}")
    print(f"  backaction flags   weak={flags.weak_measurement} "
          f"hierarchy={flags.amplitude_hierarchy} stable={flags.stable} "
          f"margin={flags.stability_margin:.6g}")
    print(f"wrote {csv_path} and {json_path}")
    return 0


def cmd_noise_psd(args, config: RunConfig) -> int:
    seed = _resolve_seed(args, config)
    omega_max = args.omega_max if args.omega_max is not None else 10.0 * config.system.omega_m
    omega_min = args.omega_min
    if omega_min is None:
        omega_min = (config.noise.gamma_c / 100.0
                     if isinstance(config.noise, FiniteCorrelationNoise) else 1e2)
    grid = np.geomspace(omega_min, omega_max, args.points)
    psd = psd_phase_derivative(config.noise, grid)
    path = _out_path(args, "noise_psd.csv")
    report.write_csv(path, ["omega_rad_s", "psd"], zip(grid, psd),
                     meta=_provenance(config, seed),
                     with_timestamp=not args.no_timestamp)
    printed = [f"wrote {path}"]
    if args.sample_path:
        if isinstance(config.noise, FiniteCorrelationNoise):
            dt = 0.05 / config.noise.gamma_c
        else:
            dt = 0.1 / config.system.omega_m
        path2 = _out_path(args, "noise_path.csv")
        sample_path(config.noise, dt, args.sample_path, seed).to_csv(path2)
        printed.append(f"wrote {path2}")
    print(f"noise psd on [{omega_min:.6g}, {omega_max:.6g}] rad/s "
          f"({args.points} points); psd(0-end): {psd[0]:.6g} .. {psd[-1]:.6g}")
    for line in printed:
        print(line)
    return 0


def cmd_plot(args, _config=None) -> int:
    from . import plots

    out_dir = args.out if args.out != "." or not os.path.dirname(args.input) \
        else os.path.dirname(args.input)
    os.makedirs(out_dir, exist_ok=True)
    stem = os.path.splitext(os.path.basename(args.input))[0]
    target = os.path.join(out_dir, stem + ".png")
    if args.kind == "sweep":
        plots.plot_sweep(args.input, target)
    elif args.kind == "spectra":
        plots.plot_spectra(args.input, target)
    elif args.kind == "noise-psd":
        plots.plot_noise_psd(args.input, target)
    else:  # pragma: no cover - argparse restricts choices
        raise ConfigError(f"unknown plot kind {args.kind!r}")
    print(f"wrote {target}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="duocool",
        description="Two-cavity-mode sideband cooling under laser phase noise: "
                    "steady states, phonon budgets, sweeps, and sideband thermometry.")
    parser.add_argument("--config", help="path to the INI run configuration")
    parser.add_argument("--out", default=".", help="output directory (default: .)")
    parser.add_argument("--seed", type=int, default=None,
                        help="RNG seed (overrides [run] seed; default 42)")
    parser.add_argument("--format", choices=("json", "csv"), default="json",
                        help="primary report format for steady-state/cool")
    parser.add_argument("--no-timestamp", action="store_true",
                        help="omit timestamps for byte-reproducible outputs")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("steady-state", help="solve the classical steady state")

    p_cool = sub.add_parser("cool", help="full cooling pipeline and phonon budget")
    p_cool.add_argument("--trajectories", type=int, default=None,
                        help="add a Monte-Carlo cross-check with N trajectories")
    p_cool.add_argument("--include-a1", action="store_true",
                        help="also solve the three-mode probe model")

    p_sweep = sub.add_parser("sweep", help="sweep one parameter, one report row per point")
    p_sweep.add_argument("--axis", choices=_SWEEP_AXES)
    p_sweep.add_argument("--start", type=float)
    p_sweep.add_argument("--stop", type=float)
    p_sweep.add_argument("--points", type=int)
    p_sweep.add_argument("--scale", choices=("log", "linear"), default=None)

    sub.add_parser("thermometry", help="sideband spectra, peak ratio, inferred n")

    p_psd = sub.add_parser("noise-psd", help="phase-noise spectral density grid")
    p_psd.add_argument("--points", type=int, default=241)
    p_psd.add_argument("--omega-min", type=float, default=None)
    p_psd.add_argument("--omega-max", type=float, default=None)
    p_psd.add_argument("--sample-path", type=int, default=0, metavar="N",
                       help="also export an N-sample phase-derivative path")

    p_plot = sub.add_parser("plot", help="render a figure from an output file")
    p_plot.add_argument("input", help="CSV produced by sweep/thermometry/noise-psd")
    p_plot.add_argument("--kind", choices=("sweep", "spectra", "noise-psd"), required=True)

    return parser


_COMMANDS = {
    "steady-state": cmd_steady_state,
    "cool": cmd_cool,
    "sweep": cmd_sweep,
    "thermometry": cmd_thermometry,
    "noise-psd": cmd_noise_psd,
    "plot": cmd_plot,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "plot":
            return cmd_plot(args)
        if args.config is None:
            raise ConfigError(f"{args.command} needs --config")
        config = load_config(args.config)
        return _COMMANDS[args.command](args, config)
    except (ConfigError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (Unstable, Overflow) as exc:
        print(f"error: unstable system: {exc}", file=sys.stderr)
        return 3
    except (NoConvergence, MultipleRoots, IllConditioned, StepTooCoarse) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return 4
    except DuocoolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:  # pragma: no cover - thin wrapper
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    console_main()
