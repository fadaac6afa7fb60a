"""Independent reference computations used by the test suite.

Everything here deliberately avoids the code paths under test: the steady
state is checked by brute-force time integration of the nonlinear classical
equations, the drift matrices against hand-written ones, and the detection
spectra against a frequency-domain solve of the full (no rotating-wave
approximation) linear model in the doubled complex basis.
"""

import numpy as np
from scipy.integrate import solve_ivp


def classical_ode_final_state(params, delta_l, t_final, rtol=1e-10):
    """Integrate the full classical equations from rest until transients die.

    The laser detuning is held at ``delta_l``; returns (alpha_1, alpha_2,
    beta) at ``t_final``.
    """

    def rhs(_t, y):
        a1 = y[0] + 1j * y[1]
        a2 = y[2] + 1j * y[3]
        b = y[4] + 1j * y[5]
        shift = 1j * params.eta * params.omega_m * (a1 + a2) * 2.0 * b.real
        drive = 1j * params.Omega_c / 2.0
        d1 = 1j * delta_l * a1 - shift - 0.5 * params.gamma_1 * a1 + drive
        d2 = (-1j * (params.omega_m - delta_l) * a2 - shift
              - 0.5 * params.gamma_2 * a2 + drive)
        db = (-1j * params.omega_m * b
              - 1j * params.eta * params.omega_m * abs(a1 + a2) ** 2
              - 0.5 * params.gamma_m * b)
        return [d1.real, d1.imag, d2.real, d2.imag, db.real, db.imag]

    sol = solve_ivp(rhs, (0.0, t_final), np.zeros(6), method="DOP853",
                    rtol=rtol, atol=1e-12,
                    first_step=0.01 * 2.0 * np.pi / params.omega_m)
    assert sol.success
    y = sol.y[:, -1]
    return y[0] + 1j * y[1], y[2] + 1j * y[3], y[4] + 1j * y[5]


def hand_cooling_drift(omega_m, gamma_2, gamma_m, g_complex):
    """Drift matrix of the two-mode cooling model, written out by hand.

    Ordering (x2, p2, xm, pm).  From
    da2/dt = -(i w + g2/2) a2 - i g (am + am^dag),
    dam/dt = -(i w + gm/2) am - i (g a2^dag + g* a2):
    the position coupling carries both rotating and counter-rotating parts,
    so the quadrature entries are 2*Re(g), 2*Im(g).
    """
    gr, gi = g_complex.real, g_complex.imag
    return np.array([
        [-gamma_2 / 2, omega_m, 2 * gi, 0.0],
        [-omega_m, -gamma_2 / 2, -2 * gr, 0.0],
        [0.0, 0.0, -gamma_m / 2, omega_m],
        [-2 * gr, -2 * gi, -omega_m, -gamma_m / 2],
    ])


def hand_rwa_blue_drift(gamma_3p, gamma_mp, g3_real):
    """Drift of the rotating-wave blue-probe model, real g3, by hand.

    Ordering (x3, p3, xm, pm); H = g3*(x3*xm - p3*pm)."""
    return np.array([
        [-gamma_3p / 2, 0.0, 0.0, -g3_real],
        [0.0, -gamma_3p / 2, -g3_real, 0.0],
        [0.0, -g3_real, -gamma_mp / 2, 0.0],
        [-g3_real, 0.0, 0.0, -gamma_mp / 2],
    ])


def full_measurement_spectrum(gamma_3p, gamma_mp, g3, omega_m, n_mf, omega,
                              blue=True):
    """Output photon-flux spectral density of the full detection model.

    Frequency-domain solve over the doubled basis (a3, a3^dag, am, am^dag)
    with the position coupling and free rotations retained; no rotating-wave
    approximation.  For the blue probe the output peak sits at
    omega = -omega_m in this frame, for the red probe at +omega_m.
    """
    s3 = 1.0 if blue else -1.0
    m = np.array([
        [1j * s3 * omega_m - gamma_3p / 2, 0, -1j * g3, -1j * g3],
        [0, -1j * s3 * omega_m - gamma_3p / 2, 1j * g3, 1j * g3],
        [-1j * g3, -1j * g3, -1j * omega_m - gamma_mp / 2, 0],
        [1j * g3, 1j * g3, 0, 1j * omega_m - gamma_mp / 2]], dtype=complex)
    couplings = np.diag([np.sqrt(gamma_3p)] * 2 + [np.sqrt(gamma_mp)] * 2)
    # <V_i(t) V_j(t')> = C_ij delta(t-t') over (a3, a3^dag, am, am^dag)
    corr = np.zeros((4, 4))
    corr[0, 1] = 1.0
    corr[2, 3] = n_mf + 1.0
    corr[3, 2] = n_mf
    conj_idx = (1, 0, 3, 2)
    eye = np.eye(4)
    out = np.empty(len(np.atleast_1d(omega)))
    for i, w in enumerate(np.atleast_1d(omega)):
        transfer = np.linalg.solve(-1j * w * eye - m, couplings)
        g_row = np.sqrt(gamma_3p) * transfer[0, :] - eye[0]
        s = sum(np.conj(g_row[j]) * g_row[k] * corr[conj_idx[j], k]
                for j in range(4) for k in range(4))
        out[i] = s.real
    return out


def ou_autocorrelation(samples, lag_steps):
    """Plain lagged-product estimator of the autocorrelation."""
    if lag_steps == 0:
        return float(np.mean(samples * samples))
    return float(np.mean(samples[:-lag_steps] * samples[lag_steps:]))
