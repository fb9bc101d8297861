"""One Robin-Robin sweep carried out directly on Fourier amplitudes.

Used as an independent check of the closed-form reduction factor: the
interface relations for a single mode ``exp(i k x)`` are solved as a
small complex linear system instead of being simplified by hand.

With ``s = sqrt(kappa11 kappa22)`` the unknowns after sweep ``m`` are

* ``A``, ``P``: normal-velocity and pressure amplitudes of the Stokes mode,
* ``B``: tangential-velocity amplitude,
* ``Phi``: Darcy pressure amplitude at the interface,

tied together by

    (alpha_ff + |k|) A + P/2 = (1 - alpha_ff s |k|) Phi_prev
    P = C1 A - C2 Phi_prev
    (1 + alpha_pm s |k|) Phi = (-alpha_pm + |k|) A + P/2
"""

from dataclasses import dataclass
import math

import numpy as np

from .symbol import rho


@dataclass(frozen=True)
class FourierState:
    k: float
    Phi: complex
    P: complex = 0j
    A: complex = 0j
    B: complex = 0j
    C1: float = 0.0
    C2: float = 0.0


def coefficients(k, params):
    ak = abs(k)
    t = params.epsilon * params.n1bl * ak
    c1 = 2.0 * ak * (1.0 + t) / (1.0 + 2.0 * t)
    c2 = params.m11bl * 2.0 * params.epsilon**2 * k**2 / (1.0 + 2.0 * t)
    return c1, c2


def iterate_fourier(state_prev, params, robin):
    """Advance the amplitudes of one mode by one Robin-Robin sweep."""
    k = float(state_prev.k)
    if k == 0:
        raise ValueError("mode k = 0 is excluded")
    ak = abs(k)
    s = params.kappa_geo
    c1, c2 = coefficients(k, params)
    phi = complex(state_prev.Phi)
    # unknowns (A, P)
    lhs = np.array([[robin.alpha_ff + ak, 0.5], [-c1, 1.0]], dtype=complex)
    rhs = np.array([(1.0 - robin.alpha_ff * s * ak) * phi, -c2 * phi], dtype=complex)
    det = lhs[0, 0] * lhs[1, 1] - lhs[0, 1] * lhs[1, 0]
    if abs(det) <= 1e-300 or abs(det) <= 1e-14 * np.abs(lhs).max() ** 2:
        raise np.linalg.LinAlgError(f"singular amplitude system at k={k}")
    A, P = np.linalg.solve(lhs, rhs)
    B = -1j * ak / k * A + 1j / (2.0 * k) * P
    phi_new = ((-robin.alpha_pm + ak) * A + 0.5 * P) / (1.0 + robin.alpha_pm * s * ak)
    return FourierState(k, complex(phi_new), complex(P), complex(A), complex(B), c1, c2)


def measured_reduction(k, params, robin, m_steps=1, phi0=1.0):
    """Geometric-mean modulus ratio ``|Phi_m / Phi_{m-1}|`` over ``m_steps``
    sweeps.

    The product of ratios is accumulated in log form. If an amplitude
    underflows to zero the average is taken over the steps completed so
    far; ``steps`` in the returned info says how many.
    """
    if m_steps < 1:
        raise ValueError("m_steps must be at least 1")
    if phi0 == 0:
        raise ValueError("initial amplitude must be nonzero")
    state = FourierState(float(k), complex(phi0))
    log_sum = 0.0
    done = 0
    for _ in range(m_steps):
        new = iterate_fourier(state, params, robin)
        if new.Phi == 0 or not np.isfinite(abs(new.Phi)) or abs(new.Phi) < 1e-300:
            if done == 0:
                return 0.0 if new.Phi == 0 else abs(new.Phi) / abs(state.Phi)
            break
        log_sum += math.log(abs(new.Phi)) - math.log(abs(state.Phi))
        # renormalise so long runs never underflow; the ratio is unaffected
        state = FourierState(new.k, new.Phi / abs(new.Phi))
        done += 1
    return math.exp(log_sum / done)


def oracle_gap(k, params, robin, m_steps=1):
    """Relative difference between the measured and closed-form factors."""
    measured = measured_reduction(k, params, robin, m_steps)
    closed = float(rho(params, robin, k))
    scale = max(closed, np.finfo(float).tiny)
    return abs(measured - closed) / scale
