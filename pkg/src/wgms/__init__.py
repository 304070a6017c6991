"""Implicit pseudospectral time stepping for weakly nonlinear wave equations.

The method integrates ``u_t = L(D) u + M(D) G(u)`` on a periodic interval by
applying the trapezoidal rule in time and solving the resulting implicit
equation with a fixed-point iteration carried out in Fourier space.
"""

from wgms.spectral import (
    SpectralGrid,
    apply_multiplier,
    band_limit_project,
    derivative_multiplier,
    dft_forward,
    dft_inverse,
    make_grid,
    sobolev_norm,
)
from wgms.equations import (
    EquationSystem,
    InitialCondition,
    SymbolPolynomial,
    SystemValidationError,
    eval_nonlinearity,
    initial_condition,
    is_formally_skew_adjoint,
    kdv_system,
    nls_envelope_soliton,
    nls_system,
    rescale_nls_params,
    sge_reconstruct,
    sge_system,
    validate_system,
)
from wgms.stepper import (
    ConvergenceError,
    DivergenceError,
    IterationStats,
    Multipliers,
    SolverSession,
    StepConfig,
    apply_H,
    build_multipliers,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DivergenceError",
    "EquationSystem",
    "InitialCondition",
    "IterationStats",
    "Multipliers",
    "SolverSession",
    "SpectralGrid",
    "StepConfig",
    "SymbolPolynomial",
    "SystemValidationError",
    "apply_H",
    "apply_multiplier",
    "band_limit_project",
    "build_multipliers",
    "derivative_multiplier",
    "dft_forward",
    "dft_inverse",
    "eval_nonlinearity",
    "initial_condition",
    "is_formally_skew_adjoint",
    "kdv_system",
    "make_grid",
    "nls_envelope_soliton",
    "nls_system",
    "rescale_nls_params",
    "sge_reconstruct",
    "sge_system",
    "sobolev_norm",
    "validate_system",
]
