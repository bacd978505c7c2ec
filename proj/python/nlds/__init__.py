"""Nonlocal dispersal operators: principal spectrum points, evolution, competition."""
from ._nlds import (
    ConfigError,
    Grid,
    Kernel,
    NumericalError,
    alpha_star,
    bar_lambda3,
    dispersal_matrix,
    evolve,
    existence_test,
    kernel_matrix,
    principal_point,
    run_config,
    sine,
    steady_state,
    verify,
)

__all__ = [
    "ConfigError",
    "Grid",
    "Kernel",
    "NumericalError",
    "alpha_star",
    "bar_lambda3",
    "dispersal_matrix",
    "evolve",
    "existence_test",
    "kernel_matrix",
    "principal_point",
    "run_config",
    "sine",
    "steady_state",
    "verify",
]
