"""kwcflow: solvers and steady-state analysis for a coupled order/orientation
grain-boundary model with weighted total-variation coupling."""

from . import bessel
from ._kernels import IMPLEMENTATION as kernel_implementation
from .energy import EnergyReport, relaxed_energy, sharp_energy
from .grid import Grid, ScalarField, harmonic_extension, make_grid
from .model import Domain1D, DomainRadial, MaterialLaws, admissible_initial_data
from .regnorm import RegularizedNorm
from .steady1d import JumpSet1D, build_steady_state, solve_d, verify_euler_lagrange
from .steadyradial import (
    RadialConfig,
    RadialSteadyState,
    condition_interior_jump,
    condition_outer_jump,
    find_gamma_threshold,
    find_r_star,
    solve_bands,
    two_jump_system,
)
from .stepper import (
    H_STAR,
    SchemeError,
    SolverError,
    StepConfig,
    run_to_omega_limit,
    stationarity_residuals,
    step,
)

__version__ = "1.0.0"

__all__ = [
    "Domain1D",
    "DomainRadial",
    "EnergyReport",
    "Grid",
    "H_STAR",
    "JumpSet1D",
    "MaterialLaws",
    "RadialConfig",
    "RadialSteadyState",
    "RegularizedNorm",
    "ScalarField",
    "SchemeError",
    "SolverError",
    "StepConfig",
    "admissible_initial_data",
    "bessel",
    "build_steady_state",
    "condition_interior_jump",
    "condition_outer_jump",
    "find_gamma_threshold",
    "find_r_star",
    "harmonic_extension",
    "kernel_implementation",
    "make_grid",
    "relaxed_energy",
    "run_to_omega_limit",
    "sharp_energy",
    "solve_bands",
    "solve_d",
    "stationarity_residuals",
    "step",
    "two_jump_system",
    "verify_euler_lagrange",
]
