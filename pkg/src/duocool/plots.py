"""Figure rendering for previously written result files.

Analysis subcommands emit data only; these helpers are the downstream
plotting step, reading the delimited outputs back and writing PNG files
next to them.  The Agg backend keeps everything headless.
"""

from __future__ import annotations

import csv

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402


def _read_csv_columns(path: str) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [row for row in reader if row]
    columns = {}
    for i, name in enumerate(header):
        raw = [row[i] for row in rows]
        try:
            columns[name] = np.array([float(v) for v in raw])
        except ValueError:
            columns[name] = np.array(raw)
    return columns


def plot_sweep(csv_path: str, out_png: str) -> None:
    """Phonon-budget pieces against the swept parameter."""
    cols = _read_csv_columns(csv_path)
    axis_name = next(iter(cols))
    x = cols[axis_name]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for key, style in (("n_lyapunov", "-o"), ("n_phase", "--"),
                       ("n_total_estimate", ":"), ("n_q", "-.")):
        if key in cols:
            ax.plot(x, np.asarray(cols[key], dtype=float), style, label=key, ms=3)
    positive_x = np.all(x > 0) and x.max() / max(x.min(), 1e-300) > 30
    if positive_x:
        ax.set_xscale("log")
    finite = np.asarray(cols.get("n_lyapunov", x), dtype=float)
    if np.all(finite > 0):
        ax.set_yscale("log")
    ax.set_xlabel(axis_name)
    ax.set_ylabel("phonon number")
    ax.legend(fontsize=8)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_png, dpi=150)
    plt.close(fig)


def plot_spectra(csv_path: str, out_png: str) -> None:
    """Blue and red sideband output spectra on a shared offset grid."""
    cols = _read_csv_columns(csv_path)
    omega = cols["omega_rad_s"]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(omega, cols["psd_blue"], label="blue sideband", color="tab:blue")
    ax.plot(omega, cols["psd_red"], label="red sideband", color="tab:red")
    ax.set_xlabel("offset from sideband center (rad/s)")
    ax.set_ylabel("output flux spectral density")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_png, dpi=150)
    plt.close(fig)


def plot_noise_psd(csv_path: str, out_png: str) -> None:
    """Phase-derivative spectral density, log-log."""
    cols = _read_csv_columns(csv_path)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.loglog(cols["omega_rad_s"], cols["psd"])
    ax.set_xlabel("omega (rad/s)")
    ax.set_ylabel("S_phidot (rad^2/s)")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_png, dpi=150)
    plt.close(fig)
