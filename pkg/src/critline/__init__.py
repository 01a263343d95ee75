"""Numerical evaluators and audits for zeta, Dirichlet L- and Epstein zeta functions."""

from .errors import (
    BoundaryTooCoarseError,
    ConvergenceRegionError,
    CritlineError,
    DenominatorZeroError,
    InsufficientZerosError,
    NoSignChangeError,
    NotPrimitiveError,
    PoleError,
    PreconditionError,
    ScanExhaustedError,
)
from .numerics import EMParams, EvalResult, bernoulli_numbers, complex_gamma, log_gamma
from .zeta import ZeroList, big_f, functional_equation_residual, hadamard_zeta, phi, zeta

__version__ = "0.1.0"

__all__ = [
    "BoundaryTooCoarseError",
    "ConvergenceRegionError",
    "CritlineError",
    "DenominatorZeroError",
    "EMParams",
    "EvalResult",
    "InsufficientZerosError",
    "NoSignChangeError",
    "NotPrimitiveError",
    "PoleError",
    "PreconditionError",
    "ScanExhaustedError",
    "ZeroList",
    "bernoulli_numbers",
    "big_f",
    "complex_gamma",
    "functional_equation_residual",
    "hadamard_zeta",
    "log_gamma",
    "phi",
    "zeta",
]
