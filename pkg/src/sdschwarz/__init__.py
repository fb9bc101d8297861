"""Robin-Robin optimized Schwarz solver for Stokes-Darcy flow with
generalized interface conditions."""

from .params import FrequencyBand, PhysicalParams, RobinParams, frequency_band
from .mesh import DofMap, StructuredMesh, build_dofmap, build_mesh
from .symbol import (
    OptimalAlphas,
    optimal_alphas,
    rho,
    rho1,
    rho2,
    rho_simplified,
    sweep_reduction_factor,
)

__all__ = [
    "DofMap",
    "FrequencyBand",
    "OptimalAlphas",
    "PhysicalParams",
    "RobinParams",
    "StructuredMesh",
    "build_dofmap",
    "build_mesh",
    "frequency_band",
    "optimal_alphas",
    "rho",
    "rho1",
    "rho2",
    "rho_simplified",
    "sweep_reduction_factor",
]

__version__ = "0.1.0"
