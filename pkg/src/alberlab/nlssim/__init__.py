"""Periodic 1-D cubic NLS: relaxation solver, linear MI analysis, inhomogeneity extraction."""

from .cyclic import LinearSolveError, solve_cyclic_tridiagonal
from .inhomogeneity import extract_inhomogeneity_general, extract_inhomogeneity_planewave
from .linear import LinearMIReport, critical_length, linear_mi_analysis, water_wave_Lc
from .solver import (NumericalAbort, SimConfig, WaveField, energy, grid_points, laplacian, mass,
                     periodic_grid, relaxation_energy, solve)

__all__ = [
    "LinearMIReport", "LinearSolveError", "NumericalAbort", "SimConfig", "WaveField",
    "critical_length", "energy", "extract_inhomogeneity_general",
    "extract_inhomogeneity_planewave", "grid_points", "laplacian", "linear_mi_analysis", "mass",
    "periodic_grid", "relaxation_energy", "solve", "solve_cyclic_tridiagonal", "water_wave_Lc",
]
