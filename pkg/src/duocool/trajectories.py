"""Monte-Carlo trajectory integration of any LinearModel.

Provides an independent cross-check of the Lyapunov covariances.  Because
the models are linear with Gaussian inputs, sampling the inputs as classical
Gaussian increments with covariance matched to the diffusion matrix D makes
the ensemble second moments unbiased estimators of the symmetrized quantum
covariance; the symmetric-ordering offset (vacuum 1/2 per quadrature) is
removed analytically in the phonon estimator n = (<x^2>+<p^2>-1)/2 rather
than sampled.

Two one-step schemes are available:

``"exact"`` (default)
    X[k+1] = F X[k] + w,  F = expm(A*dt),  w ~ N(0, Q) with
    Q = int_0^dt expm(A s) D expm(A^T s) ds evaluated by the Van Loan
    block-exponential.  The chain then has exactly the finite-time marginals
    of the continuous model at any step size, which is what an oracle should
    do: at the operating points of interest the mechanical frequency exceeds
    the slowest decay by ~10^3, so any scheme whose stability ties the step
    to omega_m^2*dt < gamma cannot finish.

``"euler"``
    Plain Euler-Maruyama, X[k+1] = X[k] + A X[k] dt + B sqrt(dt) xi with
    B B^T = D, subject to the usual step restriction
    dt < 0.05*min(2*pi/omega_max, 1/rate_max).  When the model carries an
    Ornstein-Uhlenbeck auxiliary variable, that variable is advanced by its
    exact update while the mode quadratures take the Euler step.

Per-trajectory randomness is a pure function of (base seed, trajectory
index) via numpy's SeedSequence spawn keys, so ensemble results do not
depend on chunking or execution order, and trajectory 0 of an ensemble of
any size is bitwise identical to a single-trajectory run.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import Overflow, StepTooCoarse, Unstable
from .linear import LinearModel
from .params import FiniteCorrelationNoise

_EULER_STEP_FRACTION = 0.05
_DEFAULT_EULER_STEP_FRACTION = 0.01  # spec'd default: 1/100 of the fastest scale
_OVERFLOW_LIMIT = 1e12
_OVERFLOW_CHECK_EVERY = 200
_HORIZON_DECAY_FACTOR = 20.0
_EXACT_DEFAULT_STEPS = 4000


@dataclass(frozen=True)
class TrajectorySeries:
    """Per-step squared quadratures of one mode along a single trajectory."""

    t: np.ndarray
    x2: np.ndarray
    p2: np.ndarray
    n: np.ndarray
    seed: int

    def to_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "x2", "p2", "n"])
            for row in zip(self.t, self.x2, self.p2, self.n):
                writer.writerow([f"{v:.17g}" for v in row])


@dataclass(frozen=True)
class EnsembleResult:
    """Ensemble phonon estimate with its standard error."""

    n_mean: float
    n_stderr: float
    n_traj: int
    dt: float
    t_final: float
    seed: int
    n_per_traj: np.ndarray

    def to_dict(self) -> dict:
        return {
            "n_mean": self.n_mean,
            "n_stderr": self.n_stderr,
            "n_traj": self.n_traj,
            "dt_s": self.dt,
            "t_final_s": self.t_final,
            "seed": self.seed,
        }


def _decay_and_oscillation_rates(model: LinearModel) -> tuple[float, float]:
    eigs = np.linalg.eigvals(model.A)
    if np.max(eigs.real) >= 0:
        raise Unstable("model is not stable; trajectories would diverge")
    rate_min = float(np.min(-eigs.real))
    rate_max = float(np.max(-eigs.real))
    omega_max = float(np.max(np.abs(eigs.imag)))
    return rate_min, max(rate_max, omega_max)


def _euler_step_limit(model: LinearModel) -> float:
    eigs = np.linalg.eigvals(model.A)
    rate_max = float(np.max(-eigs.real))
    omega_max = float(np.max(np.abs(eigs.imag)))
    scales = [1.0 / rate_max]
    if omega_max > 0:
        scales.append(2.0 * np.pi / omega_max)
    return min(scales)


def default_horizon(model: LinearModel) -> float:
    """20 divided by the slowest decay rate of the drift matrix."""
    rate_min, _ = _decay_and_oscillation_rates(model)
    return _HORIZON_DECAY_FACTOR / rate_min


def default_step(model: LinearModel, scheme: str = "exact",
                 t_final: float | None = None) -> float:
    """Default integration step for the given scheme."""
    if scheme == "euler":
        return _DEFAULT_EULER_STEP_FRACTION * _euler_step_limit(model)
    if t_final is None:
        t_final = default_horizon(model)
    return t_final / _EXACT_DEFAULT_STEPS


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(0.5 * (matrix + matrix.T))
    vals = np.clip(vals, 0.0, None)
    return vecs * np.sqrt(vals)


def _exact_propagators(model: LinearModel, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """One-step transition matrix and noise square root (Van Loan)."""
    a, d = model.A, model.D
    dim = a.shape[0]
    block = np.zeros((2 * dim, 2 * dim))
    block[:dim, :dim] = -a
    block[:dim, dim:] = d
    block[dim:, dim:] = a.T
    eblock = expm(block * dt)
    f = eblock[dim:, dim:].T            # expm(A*dt)
    q = f @ eblock[:dim, dim:]          # int_0^dt expm(As) D expm(A^T s) ds
    return f, _psd_sqrt(0.5 * (q + q.T))


def _euler_propagators(model: LinearModel, dt: float):
    """Euler drift map plus noise root; exact update for the OU auxiliary."""
    a = model.A.copy()
    d = model.D.copy()
    dim = a.shape[0]
    ou_exact = None
    if model.has_aux and isinstance(model.noise, FiniteCorrelationNoise):
        gc = model.noise.gamma_c
        sigma2 = model.noise.Gamma_l * gc
        decay = np.exp(-gc * dt)
        kick = np.sqrt(sigma2 * (1.0 - decay * decay))
        ou_exact = (decay, kick)
        a[dim - 1, dim - 1] = 0.0       # aux handled outside the Euler map
        d[dim - 1, dim - 1] = 0.0
    f = np.eye(dim) + a * dt
    b = _psd_sqrt(d) * np.sqrt(dt)
    return f, b, ou_exact


def _check_overflow(states: np.ndarray) -> None:
    if not np.all(np.isfinite(states)) or np.max(np.abs(states)) > _OVERFLOW_LIMIT:
        raise Overflow("trajectory magnitude diverged; model unstable at this step")


def _trajectory_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def _validate_step(model: LinearModel, dt: float, scheme: str) -> None:
    if dt <= 0:
        raise StepTooCoarse(f"dt must be positive, got {dt!r}")
    if scheme == "euler":
        limit = _EULER_STEP_FRACTION * _euler_step_limit(model)
        if dt >= limit:
            raise StepTooCoarse(
                f"dt = {dt:g} too coarse for Euler-Maruyama on this model; "
                f"need dt < {limit:g}")
    elif scheme != "exact":
        raise ValueError(f"unknown scheme {scheme!r}")


def integrate_trajectory(model: LinearModel, dt: float, steps: int, seed: int,
                         scheme: str = "exact", mode: int = -1) -> TrajectorySeries:
    """Integrate one trajectory from the zero state.

    Returns the per-step squared quadratures of the selected mode together
    with the instantaneous occupation estimate (x^2+p^2-1)/2, whose
    ensemble average converges to the quantum occupation.

    Raises
    ------
    StepTooCoarse
        Euler scheme with dt above the stability fraction of the fastest
        timescale.
    Overflow
        Divergence detected mid-run (unstable model).
    """
    _validate_step(model, dt, scheme)
    sl = model.mode_slice(mode)
    rng = _trajectory_rng(seed, 0)
    dim = model.dim
    if scheme == "exact":
        f, s = _exact_propagators(model, dt)
        ou_exact = None
    else:
        f, s, ou_exact = _euler_propagators(model, dt)

    x = np.zeros(dim)
    x2 = np.empty(steps)
    p2 = np.empty(steps)
    for k in range(steps):
        xi = rng.standard_normal(dim)
        if ou_exact is not None:
            z = x[-1]
            x = f @ x + s @ xi
            decay, kick = ou_exact
            x[-1] = decay * z + kick * xi[-1]
        else:
            x = f @ x + s @ xi
        x2[k] = x[sl][0] ** 2
        p2[k] = x[sl][1] ** 2
        if k % _OVERFLOW_CHECK_EVERY == 0:
            _check_overflow(x)
    _check_overflow(x)
    t = dt * (1.0 + np.arange(steps))
    return TrajectorySeries(t=t, x2=x2, p2=p2, n=0.5 * (x2 + p2 - 1.0), seed=seed)


def ensemble_phonon(model: LinearModel, n_traj: int, dt: float | None = None,
                    t_final: float | None = None, seed: int = 42,
                    scheme: str = "exact", mode: int = -1,
                    chunk: int = 256) -> EnsembleResult:
    """Steady-window phonon estimate averaged over independent trajectories.

    Each trajectory starts from the zero state, runs to ``t_final``
    (default 20 over the slowest decay rate), and contributes the time
    average of (x^2+p^2-1)/2 over the last half of the horizon.  The
    ensemble mean and standard error over trajectories are returned; the
    per-trajectory values are kept for diagnostics.

    Trajectories are integrated in vectorized chunks, but each one consumes
    only its own seeded stream, so results are independent of ``chunk``.
    """
    if n_traj < 1:
        raise ValueError("n_traj must be at least 1")
    if t_final is None:
        t_final = default_horizon(model)
    if dt is None:
        dt = default_step(model, scheme, t_final)
    _validate_step(model, dt, scheme)
    steps = max(int(round(t_final / dt)), 4)
    window_start = steps // 2

    dim = model.dim
    sl = model.mode_slice(mode)
    if scheme == "exact":
        f, s = _exact_propagators(model, dt)
        ou_exact = None
    else:
        f, s, ou_exact = _euler_propagators(model, dt)
    ft, st = f.T, s.T

    estimates = np.empty(n_traj)
    for start in range(0, n_traj, chunk):
        stop = min(start + chunk, n_traj)
        m = stop - start
        noise = np.empty((m, steps, dim))
        for i in range(m):
            noise[i] = _trajectory_rng(seed, start + i).standard_normal((steps, dim))
        x = np.zeros((m, dim))
        acc = np.zeros(m)
        for k in range(steps):
            if ou_exact is not None:
                z = x[:, -1].copy()
                x = x @ ft + noise[:, k, :] @ st
                decay, kick = ou_exact
                x[:, -1] = decay * z + kick * noise[:, k, -1]
            else:
                x = x @ ft + noise[:, k, :] @ st
            if k >= window_start:
                acc += x[:, sl.start] ** 2 + x[:, sl.start + 1] ** 2
            if k % _OVERFLOW_CHECK_EVERY == 0:
                _check_overflow(x)
        _check_overflow(x)
        estimates[start:stop] = 0.5 * (acc / (steps - window_start) - 1.0)

    mean = float(np.mean(estimates))
    stderr = (float(np.std(estimates, ddof=1) / np.sqrt(n_traj))
              if n_traj > 1 else float("nan"))
    return EnsembleResult(n_mean=mean, n_stderr=stderr, n_traj=n_traj, dt=dt,
                          t_final=steps * dt, seed=seed, n_per_traj=estimates)
