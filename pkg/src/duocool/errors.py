"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration and validation problems
exit with 2, unstable dynamics with 3, and numerical non-convergence with 4.
"""


class DuocoolError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(DuocoolError):
    """Malformed or inconsistent run configuration (unknown key, bad value)."""


class ValidationError(DuocoolError):
    """Physically inadmissible parameter set."""


class NonPositiveRate(ValidationError):
    """A rate or frequency that must be strictly positive is not."""


class InconsistentQ(ValidationError):
    """quality_factor and gamma_m were both given but disagree with omega_m."""


class NoConvergence(DuocoolError):
    """Iterative solver hit its iteration cap without meeting tolerance."""


class MultipleRoots(DuocoolError):
    """Steady-state probe found more than one fixed point (bistability)."""


class StepTooCoarse(DuocoolError):
    """Integration or sampling step too large for the requested dynamics."""


class Unstable(DuocoolError):
    """Drift matrix has an eigenvalue with non-negative real part."""


class IllConditioned(DuocoolError):
    """Linear solve produced a residual above the accepted tolerance."""


class RatioOutOfRange(DuocoolError):
    """Sideband intensity ratio at or above 1; phonon inference undefined."""


class Overflow(DuocoolError):
    """Trajectory magnitude diverged mid-run (unstable model detected)."""


class AdiabaticRegimeWarning(UserWarning):
    """Requested closed form used outside its adiabatic validity regime."""
