import math

import numpy as np
import pytest

from duocool import SystemParams, validate_params
from duocool.steady_state import SteadyState

TWO_PI = 2.0 * math.pi


@pytest.fixture(scope="session")
def reference_params():
    """Resolved-sideband operating point: omega_m/2pi = 100 MHz,
    gamma/2pi = 1 MHz, eta = 1e-4, |alpha_1| ~ 10, Q = 2000."""
    return validate_params(SystemParams(
        omega_m=TWO_PI * 1e8, gamma_1=TWO_PI * 1e6, gamma_2=TWO_PI * 1e6,
        eta=1e-4, Omega_c=10 * TWO_PI * 1e6, temperature=0.0,
        quality_factor=2000))


@pytest.fixture(scope="session")
def lowloss_params():
    """Same point with a nearly lossless mechanical mode (Q = 1e8), the
    regime in which the analytic phase-noise forms are derived."""
    return validate_params(SystemParams(
        omega_m=TWO_PI * 1e8, gamma_1=TWO_PI * 1e6, gamma_2=TWO_PI * 1e6,
        eta=1e-4, Omega_c=10 * TWO_PI * 1e6, temperature=0.0,
        quality_factor=1e8))


@pytest.fixture(scope="session")
def synthetic_state():
    """Hand-set amplitudes for direct model construction: modest coupling
    (|alpha_1| = 5 -> g/gamma_2 = 0.05) and |alpha_2|^2 = 1e3."""
    return SteadyState(alpha_1=5j, alpha_2=complex(np.sqrt(1000.0)),
                       beta=0j, Delta_L=0.0, residual=0.0)
