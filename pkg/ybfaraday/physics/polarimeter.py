"""Balanced polarimeter and optical-depth observables.

Absorption and rotation act independently: the sample attenuates the probe
by exp(-OD) and rotates its polarization by phi; the polarizing beam splitter
sits at 45 degrees so that P_+ - P_- = P_out * sin(2*phi).
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Optional, Union

import numpy as np

from ybfaraday.models.polarimeter import PolarimeterReading

logger = logging.getLogger(__name__)


class PolarimeterError(ValueError):
    """Raised for unphysical polarimeter inputs (gain, negative powers)."""

    pass


def read(
    p_in: float,
    absorption_od: float,
    phi: float,
    noise_std: float = 0.0,
    rng: Optional[np.random.Generator] = None,
) -> PolarimeterReading:
    """Simulate one polarimeter reading.

    Args:
        p_in: Probe power entering the sample (W).
        absorption_od: Optical depth of the sample.
        phi: Rotation angle (rad).
        noise_std: Standard deviation of additive Gaussian noise on each port (W).
        rng: Generator used for the noise; required when ``noise_std > 0``.

    Returns:
        PolarimeterReading. With noise, each port is clipped at zero, P_out is the
        sum of the noisy ports and the rotation is recovered from them. The
        optical depth is then a measured value and may be slightly negative when
        noise pushes P_out above P_in on a thin sample.

    Raises:
        PolarimeterError: If a power or depth is negative, or noise is
            requested without a generator.
    """
    if p_in < 0:
        raise PolarimeterError(f"p_in must be non-negative, got {p_in}")
    if absorption_od < 0:
        raise PolarimeterError(f"absorption_od must be non-negative, got {absorption_od}")
    if noise_std < 0:
        raise PolarimeterError(f"noise_std must be non-negative, got {noise_std}")

    p_out = p_in * math.exp(-absorption_od)
    s = math.sin(2.0 * phi)
    p_plus = p_out * (1.0 + s) / 2.0
    p_minus = p_out * (1.0 - s) / 2.0

    if noise_std > 0:
        if rng is None:
            raise PolarimeterError("a numpy Generator is required when noise_std > 0")
        # detector powers stay non-negative
        p_plus = max(0.0, p_plus + float(rng.normal(0.0, noise_std)))
        p_minus = max(0.0, p_minus + float(rng.normal(0.0, noise_std)))
        p_out = p_plus + p_minus
        rotation = _rotation_from_ports(p_plus, p_minus)
    else:
        p_out = p_plus + p_minus
        rotation = phi

    if p_in > 0 and p_out > 0:
        depth = -math.log(p_out / p_in)
    elif p_in > 0:
        depth = math.inf
    else:
        depth = absorption_od
    return PolarimeterReading(
        p_in=p_in,
        p_out=p_out,
        p_plus=p_plus,
        p_minus=p_minus,
        rotation=rotation,
        optical_depth=depth,
    )


def _rotation_from_ports(p_plus: float, p_minus: float) -> float:
    total = p_plus + p_minus
    if total <= 0:
        return 0.0
    ratio = min(1.0, max(-1.0, (p_plus - p_minus) / total))
    return 0.5 * math.asin(ratio)


def recovered_rotation(reading: PolarimeterReading) -> float:
    """Rotation inferred from the two ports, 0.5*asin((P_+ - P_-)/P_out)."""
    return _rotation_from_ports(reading.p_plus, reading.p_minus)


def optical_depth(p_in: float, p_out: float) -> float:
    """Optical depth -ln(P_out/P_in).

    Raises:
        PolarimeterError: If p_in <= 0, p_out <= 0 or p_out > p_in.
    """
    if p_in <= 0:
        raise PolarimeterError(f"p_in must be positive, got {p_in}")
    if p_out <= 0:
        raise PolarimeterError(f"p_out must be positive, got {p_out}")
    if p_out > p_in:
        raise PolarimeterError(f"p_out={p_out} exceeds p_in={p_in}: gain is unphysical")
    return -math.log(p_out / p_in)


def column_from_depth(od: float, line_factor: Union[Fraction, float]) -> float:
    """Column N*sigma0*L from an optical depth measured on a line of relative strength ``line_factor``.

    Example:
        >>> column_from_depth(0.05, Fraction(2, 3))
        0.075
    """
    factor = float(line_factor)
    if not 0 < factor <= 1:
        raise PolarimeterError(f"line factor must lie in (0, 1], got {line_factor}")
    return od / factor
