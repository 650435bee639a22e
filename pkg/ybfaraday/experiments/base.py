"""Shared helpers for the experiment compositions."""

from __future__ import annotations

import logging
from typing import Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike

from ybfaraday.models.atom import IsotopeSpec, TransitionConstants
from ybfaraday.physics.atomdata import isotope_by_mass, read_isotope_table, transition_constants

logger = logging.getLogger(__name__)


class ExperimentError(ValueError):
    """Raised when a scenario or grid cannot be evaluated."""

    pass


def resolve_constants(constants: Optional[TransitionConstants]) -> TransitionConstants:
    return constants if constants is not None else transition_constants()


def resolve_isotope(
    mass_number: int, table: Optional[Sequence[IsotopeSpec]] = None
) -> IsotopeSpec:
    """Isotope record from ``table`` or the configured isotope table."""
    return isotope_by_mass(table if table is not None else read_isotope_table(), mass_number)


def as_grid(values: ArrayLike, name: str, non_negative: bool = False) -> np.ndarray:
    """1-D float array of a frequency or time grid.

    Raises:
        ExperimentError: If the grid is empty or (optionally) has negative entries.
    """
    grid = np.atleast_1d(np.asarray(values, dtype=float))
    if grid.ndim != 1 or grid.size == 0:
        raise ExperimentError(f"{name} grid must be a non-empty 1-D sequence")
    if non_negative and np.any(grid < 0):
        raise ExperimentError(f"{name} grid must be non-negative")
    return grid


def synthetic_noise(
    values: ArrayLike, fraction: float, rng: np.random.Generator
) -> np.ndarray:
    """Add Gaussian noise with sigma = fraction * max|values|.

    Args:
        values: Noise-free series.
        fraction: Noise level relative to the series peak.
        rng: Generator owned by the caller (seeded for reproducibility).
    """
    if fraction < 0:
        raise ExperimentError(f"noise fraction must be non-negative, got {fraction}")
    clean = np.asarray(values, dtype=float)
    if fraction == 0 or clean.size == 0:
        return clean.copy()
    sigma = fraction * float(np.max(np.abs(clean)))
    return clean + rng.normal(0.0, sigma, size=clean.shape)
