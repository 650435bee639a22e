"""Unit conversions between human-facing units and SI / angular frequency.

This is the only place where MHz, mW/mm^2, mm, um, ms, us and uT are
translated; everything below the CLI works in SI units with angular
frequencies in rad/s.
"""

from __future__ import annotations

import math
from typing import Union

import numpy as np
from numpy.typing import ArrayLike

Number = Union[float, np.ndarray]

TWO_PI = 2.0 * math.pi


def _out(values: np.ndarray) -> Number:
    return values.item() if values.ndim == 0 else values


def mhz_to_rad(value: ArrayLike) -> Number:
    """Frequency in MHz (cycles) to angular frequency in rad/s."""
    return _out(np.asarray(value, dtype=float) * TWO_PI * 1e6)


def rad_to_mhz(value: ArrayLike) -> Number:
    """Angular frequency in rad/s to MHz (cycles)."""
    return _out(np.asarray(value, dtype=float) / (TWO_PI * 1e6))


def khz_to_rad(value: ArrayLike) -> Number:
    return _out(np.asarray(value, dtype=float) * TWO_PI * 1e3)


def rad_to_khz(value: ArrayLike) -> Number:
    return _out(np.asarray(value, dtype=float) / (TWO_PI * 1e3))


def mw_per_mm2_to_si(value: float) -> float:
    """Intensity in mW/mm^2 to W/m^2 (1 mW/mm^2 = 1000 W/m^2)."""
    return float(value) * 1e3


def si_to_mw_per_mm2(value: float) -> float:
    return float(value) / 1e3


def uw_per_mm2_to_si(value: float) -> float:
    """Intensity in uW/mm^2 to W/m^2."""
    return float(value)


def mm_to_m(value: float) -> float:
    return float(value) * 1e-3


def um_to_m(value: float) -> float:
    return float(value) * 1e-6


def ms_to_s(value: ArrayLike) -> Number:
    return _out(np.asarray(value, dtype=float) * 1e-3)


def us_to_s(value: ArrayLike) -> Number:
    return _out(np.asarray(value, dtype=float) * 1e-6)


def ut_to_tesla(value: float) -> float:
    return float(value) * 1e-6
