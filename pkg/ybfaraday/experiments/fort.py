"""Larmor precession and photon-pressure estimates for the FORT sample."""

from __future__ import annotations

import logging
import math
from typing import Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike
from scipy import constants as const

from ybfaraday.experiments.base import (
    ExperimentError,
    as_grid,
    resolve_constants,
    resolve_isotope,
)
from ybfaraday.models.atom import IsotopeSpec, TransitionConstants
from ybfaraday.models.scenario import FortScenario, PhotonPressureEstimates, PrecessionTrace
from ybfaraday.physics.atomdata import atomic_mass
from ybfaraday.physics.faraday import rotation_spin_half
from ybfaraday.physics.lineshape import scattering_rate
from ybfaraday.utils.units import TWO_PI

logger = logging.getLogger(__name__)


def fort_column(atoms: float, probe_waist: float, sigma0: float) -> float:
    """Effective N*sigma0*L = 2S*sigma0/(pi*w^2) of a trap narrower than the probe."""
    if atoms < 0 or probe_waist <= 0 or sigma0 <= 0:
        raise ExperimentError(
            f"need atoms >= 0, w > 0 and sigma0 > 0, got {atoms}, {probe_waist}, {sigma0}"
        )
    return atoms * sigma0 / (math.pi * probe_waist**2)


def larmor_frequency(field: float, gyromagnetic: float) -> float:
    """omega_B = 2*pi*gamma*B (rad/s)."""
    return TWO_PI * gyromagnetic * field


def perfect_polarization_amplitude(
    scn: FortScenario,
    nsigma: Optional[float] = None,
    isotopes: Optional[Sequence[IsotopeSpec]] = None,
    constants: Optional[TransitionConstants] = None,
) -> float:
    """Rotation amplitude for p=1 at the probe detuning.

    ``nsigma`` defaults to ``fort_column`` of the scenario.
    """
    consts = resolve_constants(constants)
    isotope = resolve_isotope(scn.mass_number, isotopes)
    column = fort_column(scn.atom_count, scn.probe_waist, consts.sigma0) if nsigma is None else nsigma
    omega = isotope.line_center(isotope.f_primes[-1]) + scn.probe_detuning
    return float(rotation_spin_half(1.0, column, omega, isotope, consts.gamma, consts))


def fort_precession_trace(
    scn: FortScenario,
    amplitude: float,
    decay_time: float,
    phase: float,
    times: ArrayLike,
) -> PrecessionTrace:
    """phi(T) = Phi*exp(-T/tau)*sin(omega_B*T + theta).

    Raises:
        ExperimentError: If ``decay_time`` is not positive or a time is negative.
    """
    if decay_time <= 0:
        raise ExperimentError(f"decay time must be positive, got {decay_time}")
    grid = as_grid(times, "time", non_negative=True)
    omega_b = larmor_frequency(scn.field, scn.gyromagnetic)
    phi = amplitude * np.exp(-grid / decay_time) * np.sin(omega_b * grid + phase)
    return PrecessionTrace(
        times=grid.tolist(),
        phi=phi.tolist(),
        amplitude=amplitude,
        decay_time=decay_time,
        phase=phase,
        larmor=omega_b,
    )


def photon_pressure_estimates(
    scn: FortScenario, constants: Optional[TransitionConstants] = None
) -> PhotonPressureEstimates:
    """Scattering rate, radiation-pressure acceleration and hold time.

    a = hbar*omega*r/(M*c) with M the trapped isotope's mass and
    hold_time = sqrt(2L/a).
    """
    consts = resolve_constants(constants)
    rate = float(scattering_rate(scn.probe_intensity, scn.probe_detuning, consts))
    omega = consts.omega0 + scn.probe_detuning
    accel = const.hbar * omega * rate / (atomic_mass(scn.mass_number) * const.c)
    hold = math.sqrt(2.0 * scn.trap_length / accel) if accel > 0 else math.inf
    logger.debug(f"FORT photon pressure: r={rate:.3g} 1/s, a={accel:.3g} m/s^2, hold={hold:.3g} s")
    return PhotonPressureEstimates(scattering_rate=rate, acceleration=accel, hold_time=hold)
