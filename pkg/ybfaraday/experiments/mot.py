"""Release of a spin-polarized 171Yb cloud from the MOT."""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike

from ybfaraday.experiments.base import (
    ExperimentError,
    as_grid,
    resolve_constants,
    resolve_isotope,
)
from ybfaraday.models.atom import IsotopeSpec, TransitionConstants
from ybfaraday.models.scenario import MotReleaseScenario, MotReleaseTrace
from ybfaraday.physics.faraday import rotation_spin_half
from ybfaraday.physics.polarimeter import column_from_depth

logger = logging.getLogger(__name__)


def expansion_velocity(probe_waist: float, decay_time: float) -> float:
    """Cloud expansion velocity v ~ w/tau (m/s)."""
    if decay_time <= 0:
        raise ExperimentError(f"decay time must be positive, got {decay_time}")
    return probe_waist / decay_time


def probed_atom_number(nsigma: float, probe_waist: float, sigma0: float) -> float:
    """Probed atom number 2S = (N*sigma0*L/sigma0)*pi*w^2."""
    if nsigma < 0 or probe_waist < 0 or sigma0 <= 0:
        raise ExperimentError(
            f"need nsigma >= 0, w >= 0 and sigma0 > 0, got {nsigma}, {probe_waist}, {sigma0}"
        )
    return nsigma / sigma0 * math.pi * probe_waist**2


def mot_release_trace(
    scn: MotReleaseScenario,
    times: ArrayLike,
    isotopes: Optional[Sequence[IsotopeSpec]] = None,
    constants: Optional[TransitionConstants] = None,
) -> MotReleaseTrace:
    """Optical depth, column and rotation after release.

    OD(t) = d*exp(-t/tau), N*sigma0*L(t) = OD(t)/line_factor and
    phi(t) = rotation_spin_half(p, N*sigma0*L(t)) at the probe detuning from
    the F'=3/2 line, evaluated with the natural linewidth.
    Signs follow phi > 0 for n_+ > n_-: a p=+1 cloud probed above the F'=3/2
    line rotates by a negative angle.

    Raises:
        ExperimentError: If a time is negative.
    """
    consts = resolve_constants(constants)
    grid = as_grid(times, "time", non_negative=True)
    isotope = resolve_isotope(171, isotopes)
    omega = isotope.line_center(Fraction(3, 2)) + scn.probe_detuning

    od = scn.initial_od * np.exp(-grid / scn.decay_time)
    nsigma = column_from_depth(1.0, scn.line_factor) * od
    per_column = rotation_spin_half(scn.polarization, 1.0, omega, isotope, consts.gamma, consts)
    phi = per_column * nsigma
    velocity = expansion_velocity(scn.probe_waist, scn.decay_time)
    logger.debug(
        f"MOT release: d={scn.initial_od}, tau={scn.decay_time:.3g} s, "
        f"phi(0)={float(phi[0]):.3e} rad, v={velocity:.3g} m/s"
    )
    return MotReleaseTrace(
        times=grid.tolist(),
        od=od.tolist(),
        nsigma=nsigma.tolist(),
        phi=phi.tolist(),
        expansion_velocity=velocity,
    )
