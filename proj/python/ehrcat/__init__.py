"""Ehrenfest chain with catastrophes and its OU jump-diffusion approximation."""

from ._core import (
    ConvergenceError,
    DomainError,
    Error,
    SingularMatrixError,
    __version__,
    chain,
    diffusion,
    figure,
    figure_ids,
    mc,
    run,
    specfun,
    to_csv,
    validate,
)

__all__ = [
    "ConvergenceError",
    "DomainError",
    "Error",
    "SingularMatrixError",
    "__version__",
    "chain",
    "diffusion",
    "figure",
    "figure_ids",
    "mc",
    "run",
    "specfun",
    "to_csv",
    "validate",
]
