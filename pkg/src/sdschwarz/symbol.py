"""Fourier error reduction factors of the Robin-Robin iteration and the
optimal Robin weights.

For an interface error mode of frequency ``k`` one sweep multiplies the
Darcy amplitude by ``rho = |rho1 - rho2|``. Dropping ``rho2`` (which
carries ``eps**2``) and replacing the rational factor

    q(k) = (2 + 3 eps N1 |k|) / (1 + 2 eps N1 |k|)    in [3/2, 2]

by 2 gives ``rho_tilde``, which is minimised over a frequency band along
the curve ``alpha_ff * alpha_pm = 2 / sqrt(kappa11 kappa22)``.
"""

from dataclasses import dataclass
import math

import numpy as np

from .params import FrequencyBand


def _abs_k(k):
    ak = np.abs(np.asarray(k, dtype=float))
    if np.any(ak == 0):
        raise ValueError("the reduction factor is undefined at k = 0")
    return ak


def rational_factor(params, k):
    t = params.epsilon * params.n1bl * _abs_k(k)
    return (2.0 + 3.0 * t) / (1.0 + 2.0 * t)


def _denominator(params, robin, ak):
    s = params.kappa_geo
    return (1.0 + robin.alpha_pm * s * ak) * (robin.alpha_ff + ak * rational_factor(params, ak))


def rho1(params, robin, k):
    """Principal part of the reduction factor (signed)."""
    ak = _abs_k(k)
    s = params.kappa_geo
    num = (1.0 - robin.alpha_ff * s * ak) * (-robin.alpha_pm + ak * rational_factor(params, ak))
    return num / _denominator(params, robin, ak)


def rho2(params, robin, k):
    """Tangential-coupling correction; proportional to ``m11bl * eps**2``."""
    ak = _abs_k(k)
    eps = params.epsilon
    num = params.m11bl * eps**2 * ak**2 / (1.0 + 2.0 * eps * params.n1bl * ak)
    return (robin.alpha_ff + robin.alpha_pm) * num / _denominator(params, robin, ak)


def rho(params, robin, k):
    """Error reduction factor ``|rho1 - rho2|``; even in ``k``."""
    return np.abs(rho1(params, robin, k) - rho2(params, robin, k))


def rho_simplified(params, robin, k):
    """Simplified factor with ``q(k) -> 2`` and ``rho2`` dropped (signed)."""
    ak = _abs_k(k)
    s = params.kappa_geo
    a, b = robin.alpha_ff, robin.alpha_pm
    return ((1.0 - a * s * ak) * (-b + 2.0 * ak)) / ((1.0 + b * s * ak) * (a + 2.0 * ak))


def rho_on_search_curve(kappa_geo, alpha_ff, k):
    """``rho_simplified`` restricted to ``alpha_ff * alpha_pm = 2/kappa_geo``."""
    k = np.asarray(k, dtype=float)
    return (2.0 / kappa_geo) * ((1.0 - alpha_ff * kappa_geo * k) / (alpha_ff + 2.0 * k)) ** 2


@dataclass(frozen=True)
class OptimalAlphas:
    alpha_ff_star: float
    alpha_pm_star: float
    band: FrequencyBand
    geometric_mean_permeability: float

    @property
    def robin(self):
        from .params import RobinParams

        return RobinParams(self.alpha_ff_star, self.alpha_pm_star)

    @property
    def max_rho_tilde(self):
        return float(
            rho_on_search_curve(self.geometric_mean_permeability, self.alpha_ff_star, self.band.k_min)
        )


def half_sum_coefficient(kappa_geo, band):
    """``b`` in ``alpha**2 + 2 b alpha - 2/kappa_geo = 0``."""
    kmin, kmax = band.k_min, band.k_max
    return (2.0 * kappa_geo * kmin * kmax - 1.0) / (kappa_geo * (kmin + kmax))


def optimal_alphas(params, band):
    """Equioscillating Robin weights on the search curve.

    ``alpha_ff`` is the positive root of ``alpha**2 + 2 b alpha - c = 0``
    with ``c = 2/sqrt(kappa11 kappa22)`` and ``alpha_pm = c / alpha_ff``.
    The root that does not suffer cancellation is computed first and the
    other one from the product, which matters when ``b`` dominates.
    """
    s = params.kappa_geo
    b = half_sum_coefficient(s, band)
    c = 2.0 / s
    r = math.hypot(b, math.sqrt(c))
    if b > 0:
        a_pm = b + r
        a_ff = c / a_pm
    else:
        a_ff = -b + r
        a_pm = c / a_ff
    return OptimalAlphas(a_ff, a_pm, band, s)


def sweep_reduction_factor(params, robin, band, n_samples=1000, log=False):
    """Tabulate the reduction factors over the band.

    Returns a dict of arrays ``k, rho, rho_tilde, rho1, rho2`` where
    ``rho_tilde`` is the modulus of the simplified factor.
    """
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    if log:
        k = np.geomspace(band.k_min, band.k_max, n_samples)
    else:
        k = np.linspace(band.k_min, band.k_max, n_samples)
    r1 = rho1(params, robin, k)
    r2 = rho2(params, robin, k)
    return {
        "k": k,
        "rho": np.abs(r1 - r2),
        "rho_tilde": np.abs(rho_simplified(params, robin, k)),
        "rho1": r1,
        "rho2": r2,
    }


def write_sweep_csv(path, table):
    cols = ("k", "rho", "rho_tilde", "rho1", "rho2")
    data = np.column_stack([table[c] for c in cols])
    np.savetxt(path, data, delimiter=",", header=",".join(cols), comments="", fmt="%.16e")
