"""Least-squares engine and model adapters."""

from ybfaraday.fitting.adapters import (
    fit_absorption_spectrum,
    fit_damped_sinusoid,
    fit_exponential,
    initial_damped_sinusoid,
    isotope_columns,
)
from ybfaraday.fitting.engine import FittingError, least_squares, numerical_jacobian

__all__ = [
    "FittingError",
    "fit_absorption_spectrum",
    "fit_damped_sinusoid",
    "fit_exponential",
    "initial_damped_sinusoid",
    "isotope_columns",
    "least_squares",
    "numerical_jacobian",
]
