"""Physical and algorithmic parameter containers."""

from dataclasses import dataclass
import math


@dataclass(frozen=True)
class PhysicalParams:
    """Permeability, scale separation and boundary-layer constants.

    Only diagonal permeability tensors ``diag(kappa11, kappa22)`` and a
    horizontal interface are supported, so the only boundary-layer
    constants that enter are ``n1bl`` and ``m11bl``. ``nsbl`` is kept for
    completeness and must be zero.
    """

    kappa11: float
    kappa22: float
    epsilon: float
    n1bl: float
    m11bl: float
    nsbl: float = 0.0

    def __post_init__(self):
        for name in ("kappa11", "kappa22", "epsilon", "n1bl"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)!r}")
        # m11bl = 0 switches the tangential coupling off; handy for tests
        if self.m11bl < 0:
            raise ValueError(f"m11bl must be non-negative, got {self.m11bl!r}")
        if self.nsbl != 0:
            raise ValueError("generalized momentum term not supported (nsbl must be 0)")

    @classmethod
    def isotropic(cls, kappa, epsilon, n1bl, m11bl):
        return cls(kappa, kappa, epsilon, n1bl, m11bl)

    @property
    def kappa_geo(self):
        """Geometric mean permeability sqrt(kappa11*kappa22)."""
        return math.sqrt(self.kappa11 * self.kappa22)

    @property
    def slip_coefficient(self):
        """Coefficient 1/(eps*N1) of the tangential velocity on the interface."""
        return 1.0 / (self.epsilon * self.n1bl)

    @property
    def tangential_gradient_coefficient(self):
        """Coefficient eps*M11/N1 multiplying d(p_pm)/dx in the slip condition."""
        return self.epsilon * self.m11bl / self.n1bl


@dataclass(frozen=True)
class RobinParams:
    alpha_ff: float
    alpha_pm: float

    def __post_init__(self):
        if not (self.alpha_ff > 0 and self.alpha_pm > 0):
            raise ValueError(
                f"Robin weights must be positive, got ({self.alpha_ff!r}, {self.alpha_pm!r})"
            )


@dataclass(frozen=True)
class FrequencyBand:
    k_min: float
    k_max: float

    def __post_init__(self):
        if not (0 < self.k_min < self.k_max):
            raise ValueError(f"need 0 < k_min < k_max, got [{self.k_min}, {self.k_max}]")


BAND_CONVENTIONS = {"half_h": 2.0, "quarter_h": 4.0}


def frequency_band(interface_length, h, convention="half_h"):
    """Resolved frequency range for an interface of given length and mesh size.

    ``k_min = pi / interface_length``; ``k_max = pi / (h/2)`` for the
    ``half_h`` convention (quadratic elements halve the node spacing) and
    ``pi / (h/4)`` for ``quarter_h``.
    """
    if not (h > 0 and interface_length > 0):
        raise ValueError("h and interface_length must be positive")
    try:
        divisor = BAND_CONVENTIONS[convention]
    except KeyError:
        raise ValueError(
            f"unknown band convention {convention!r}; expected one of {sorted(BAND_CONVENTIONS)}"
        ) from None
    return FrequencyBand(math.pi / interface_length, math.pi / (h / divisor))
