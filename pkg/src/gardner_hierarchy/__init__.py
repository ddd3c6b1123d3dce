"""Gardner and mKdV hierarchies: symbolic flows, exact solutions and numerical checks."""

from .closedform import (
    Breather,
    BreatherParams,
    MKdVBreather,
    PeriodicBreather,
    PeriodicBreatherParams,
    Soliton,
    SolitonParams,
    commensurability_solve,
    periodic_velocities,
)
from .diffpoly import DiffPoly, formal_integral, total_derivative
from .elliptic import elliptic_K, jacobi
from .evolve import EvolveConfig, conservation_drift, evolve
from .functionals import SpectralCoefficients, conserved_quantities, pde_residual
from .hierarchy import HierarchyEquation, gardner_rhs, lenard, mkdv_rhs, velocity_pair
from .illposed import IllposedConfig, run_experiment
from .numerics import Grid, GridFunction, sample

__all__ = [
    "Breather",
    "BreatherParams",
    "DiffPoly",
    "EvolveConfig",
    "Grid",
    "GridFunction",
    "HierarchyEquation",
    "IllposedConfig",
    "MKdVBreather",
    "PeriodicBreather",
    "PeriodicBreatherParams",
    "Soliton",
    "SolitonParams",
    "SpectralCoefficients",
    "commensurability_solve",
    "conservation_drift",
    "conserved_quantities",
    "elliptic_K",
    "evolve",
    "formal_integral",
    "gardner_rhs",
    "jacobi",
    "lenard",
    "mkdv_rhs",
    "pde_residual",
    "periodic_velocities",
    "run_experiment",
    "sample",
    "total_derivative",
    "velocity_pair",
]
