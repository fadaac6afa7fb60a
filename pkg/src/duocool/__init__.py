"""Two-cavity-mode optomechanical sideband cooling under laser phase noise.

A simulator and analysis library for a cooling scheme in which the drive
enters a lower cavity mode and anti-Stokes scattering moves mechanical
quanta into an upper mode one mechanical frequency away.  The package
solves the classical steady states, builds the linearized drift/diffusion
models (with white or finite-correlation laser phase noise), computes exact
steady covariances and phonon budgets, cross-checks them by Monte-Carlo
trajectories, and models red/blue sideband thermometry of the cooled
oscillator.
"""

from .config import RawMeasurementConfig, RunConfig, RunOptions, load_config
from .cooling import (CoolingReport, RouthHurwitzVerdict, cooling_report,
                      gamma_tilde, phase_noise_phonons, q_limit,
                      routh_hurwitz_measurement)
from .errors import (AdiabaticRegimeWarning, ConfigError, DuocoolError,
                     IllConditioned, InconsistentQ, MultipleRoots,
                     NoConvergence, NonPositiveRate, Overflow,
                     RatioOutOfRange, StepTooCoarse, Unstable,
                     ValidationError)
from .linear import (CovarianceResult, LinearModel, StabilityVerdict,
                     build_adiabatic_model, build_cooling_model,
                     build_measurement_model, drive_image,
                     physicality_min_eig, solve_lyapunov, stability_eigen,
                     strip_phase_drive)
from .noise import (NoisePath, psd_phase_derivative, sample_path,
                    suppression_factor_two_mode)
from .params import (FiniteCorrelationNoise, MeasurementParams, NoiseModel,
                     Sideband, SystemParams, WhiteNoise, compute_eta,
                     thermal_occupation, validate_params)
from .spectra import (BackactionFlags, PhononEstimate, SpectrumResult,
                      backaction_check, default_omega_grid, infer_phonon,
                      output_spectrum, sideband_ratio, transfer_denominators)
from .steady_state import (MeasurementSteadyState, SteadyState,
                           approximate_steady_state, measurement_steady_state,
                           solve_classical_steady_state,
                           steady_state_equations)
from .trajectories import (EnsembleResult, TrajectorySeries, ensemble_phonon,
                           integrate_trajectory)

__version__ = "0.1.0"
