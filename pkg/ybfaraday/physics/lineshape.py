"""Scalar frequency-domain building blocks.

All functions accept scalars or numpy arrays and work elementwise; scalar
inputs give a float back. Frequencies are angular (rad/s).
"""

from __future__ import annotations

import logging
from typing import Optional, Union

import numpy as np
from numpy.typing import ArrayLike

from ybfaraday.models.atom import TransitionConstants

logger = logging.getLogger(__name__)

Number = Union[float, np.ndarray]


class LineshapeError(ValueError):
    """Raised when lineshape inputs are outside their physical domain."""

    pass


def _out(values: np.ndarray) -> Number:
    return values.item() if values.ndim == 0 else values


def _check_width(width: ArrayLike) -> np.ndarray:
    w = np.asarray(width, dtype=float)
    if np.any(w <= 0):
        raise LineshapeError(f"width must be positive, got {width}")
    return w


def dispersive(center: ArrayLike, omega: ArrayLike, width: ArrayLike) -> Number:
    """Dispersive function g = (center-omega)/((center-omega)^2 + (width/2)^2) (s/rad)."""
    w = _check_width(width)
    delta = np.asarray(center, dtype=float) - np.asarray(omega, dtype=float)
    return _out(delta / (delta**2 + (w / 2.0) ** 2))


def lorentzian_absorption(center: ArrayLike, omega: ArrayLike, width: ArrayLike) -> Number:
    """Peak-normalized Lorentzian (width/2)^2/((center-omega)^2 + (width/2)^2)."""
    w = _check_width(width)
    delta = np.asarray(center, dtype=float) - np.asarray(omega, dtype=float)
    half_sq = (w / 2.0) ** 2
    return _out(half_sq / (delta**2 + half_sq))


def saturation_parameter(intensity: ArrayLike, constants: TransitionConstants) -> Number:
    """I / I_s."""
    return _out(np.asarray(intensity, dtype=float) / constants.i_sat)


def rabi_squared(intensity: ArrayLike, constants: TransitionConstants) -> Number:
    """Squared Rabi frequency Omega^2 = Gamma^2 * I / (2 I_s) ((rad/s)^2).

    Raises:
        LineshapeError: If the intensity is negative.
    """
    inten = np.asarray(intensity, dtype=float)
    if np.any(inten < 0):
        raise LineshapeError(f"intensity must be non-negative, got {intensity}")
    return _out(constants.gamma**2 * inten / (2.0 * constants.i_sat))


def weak_field_ok(
    intensity: float, detuning: float, constants: TransitionConstants, factor: float = 0.1
) -> bool:
    """True when Omega^2 < factor * (detuning^2 + (Gamma/2)^2)."""
    omega_sq = rabi_squared(intensity, constants)
    return bool(omega_sq < factor * (detuning**2 + (constants.gamma / 2.0) ** 2))


def scattering_rate(
    intensity: ArrayLike, detuning: ArrayLike, constants: TransitionConstants
) -> Number:
    """Two-level photon scattering rate (1/s).

    r = (Gamma/4) * Omega^2 / (detuning^2 + (Gamma/2)^2 + (Omega/2)^2), always
    evaluated with the natural linewidth.
    On resonance this is Gamma * Omega^2 / (Gamma^2 + Omega^2), which saturates at Gamma.

    Args:
        intensity: Probe intensity (W/m^2).
        detuning: omega0 - omega (rad/s); only its magnitude matters.
        constants: Transition constants.
    """
    omega_sq = np.asarray(rabi_squared(intensity, constants), dtype=float)
    delta = np.asarray(detuning, dtype=float)
    gamma = constants.gamma
    return _out(
        (gamma / 4.0) * omega_sq / (delta**2 + (gamma / 2.0) ** 2 + omega_sq / 4.0)
    )


def effective_linewidth(natural: float, doppler: Optional[float] = None) -> float:
    """Width used in the lineshapes: Gamma* when a Doppler width is configured, else Gamma.

    The inhomogeneous broadening is folded into a Lorentzian width (T2* -> T2).
    """
    if natural <= 0:
        raise LineshapeError(f"natural linewidth must be positive, got {natural}")
    if doppler is None:
        return float(natural)
    if doppler <= 0:
        raise LineshapeError(f"Doppler linewidth must be positive, got {doppler}")
    return float(doppler)
