"""Atomic-beam absorption and rotation spectra.

Every isotope of the mix contributes Lorentzian absorption lines at Gamma*
weighted by the population-averaged pi-line strengths. Only the pumped
isotope is polarized; other spin-nonzero isotopes are unpolarized and spin-0
isotopes rotate only through the configured excited-state Zeeman split.
"""

from __future__ import annotations

import logging
from typing import Dict, List, Optional

import numpy as np
from numpy.typing import ArrayLike

from ybfaraday.experiments.base import (
    ExperimentError,
    as_grid,
    resolve_constants,
    resolve_isotope,
)
from ybfaraday.models.atom import IsotopeSpec, TransitionConstants
from ybfaraday.models.ensemble import EnsembleGeometry, GroundPopulations
from ybfaraday.models.scenario import BeamEstimates, BeamScenario, BeamSpectra
from ybfaraday.physics.angular import pi_line_strengths
from ybfaraday.physics.atomdata import read_isotope_table
from ybfaraday.physics.faraday import rotation_general
from ybfaraday.physics.lineshape import lorentzian_absorption, scattering_rate
from ybfaraday.physics.pumping import probe_depolarization, pumped_populations

logger = logging.getLogger(__name__)


def beam_isotopes(scn: BeamScenario) -> List[IsotopeSpec]:
    return list(scn.isotopes) if scn.isotopes is not None else read_isotope_table()


def probe_offset(scn: BeamScenario, isotopes: Optional[List[IsotopeSpec]] = None) -> float:
    """Absolute probe offset from the 174Yb line (rad/s)."""
    reference = resolve_isotope(scn.probe_isotope, isotopes or beam_isotopes(scn))
    return reference.line_center(reference.f_primes[-1]) + scn.effective_probe_detuning


def isotope_columns(scn: BeamScenario) -> Dict[int, float]:
    """N*sigma0*L per mass number."""
    return {iso.mass_number: scn.column(iso) for iso in beam_isotopes(scn)}


def absorption_spectrum(
    isotopes: List[IsotopeSpec],
    columns: Dict[int, float],
    omega: ArrayLike,
    width: float,
) -> np.ndarray:
    """OD(omega) = sum_i column_i * sum_F' pi_strength(F') * lorentzian(omega; omega_i(F'), width)."""
    w = np.asarray(omega, dtype=float)
    total = np.zeros_like(w)
    for iso in isotopes:
        column = columns.get(iso.mass_number, 0.0)
        if column == 0.0:
            continue
        for fp, strength in pi_line_strengths(iso.nuclear_spin).items():
            total = total + column * float(strength) * np.asarray(
                lorentzian_absorption(iso.line_center(fp), w, width)
            )
    return total


def beam_populations(
    scn: BeamScenario,
    isotope: IsotopeSpec,
    constants: Optional[TransitionConstants] = None,
) -> GroundPopulations:
    """Ground populations of one isotope of the beam at the probe."""
    consts = resolve_constants(constants)
    pump = scn.pump
    if pump is not None and pump.mass_number == isotope.mass_number:
        if isotope.nuclear_spin == 0:
            raise ExperimentError(f"pump target {isotope.mass_number} has I=0")
        pops = pumped_populations(
            isotope, pump.polarization, consts, f_prime=pump.f_prime
        )
        if scn.depolarization_correction:
            detuning = probe_offset(scn) - isotope.line_center(isotope.f_primes[-1])
            estimates = beam_estimates(scn, consts)
            pops = probe_depolarization(
                pops,
                scn.probe_intensity,
                detuning,
                estimates.transit_time,
                isotope,
                consts,
                f_prime=isotope.f_primes[-1],
            ).populations
        return pops
    if isotope.nuclear_spin == 0:
        return GroundPopulations.diamagnetic(scn.zeeman_split)
    return GroundPopulations.unpolarized(isotope.nuclear_spin)


def beam_spectra(
    scn: BeamScenario,
    omega_grid: ArrayLike,
    constants: Optional[TransitionConstants] = None,
) -> BeamSpectra:
    """Absorption and rotation spectra of the beam.

    Args:
        scn: Beam scenario.
        omega_grid: Probe offsets from the 174Yb line (rad/s).
        constants: Transition constants (defaults to the Yb values).

    Returns:
        BeamSpectra with OD and phi per grid point.

    Raises:
        ExperimentError: If the grid is empty or the pump target is not in the mix.
    """
    consts = resolve_constants(constants)
    grid = as_grid(omega_grid, "frequency")
    isotopes = beam_isotopes(scn)
    if scn.pump is not None and scn.pump.mass_number not in {i.mass_number for i in isotopes}:
        raise ExperimentError(f"pump target {scn.pump.mass_number} is not in the isotope mix")
    columns = {iso.mass_number: scn.column(iso) for iso in isotopes}

    od = absorption_spectrum(isotopes, columns, grid, scn.doppler_width)
    phi = np.zeros_like(grid)
    for iso in isotopes:
        column = columns[iso.mass_number]
        if column == 0.0:
            continue
        pops = beam_populations(scn, iso, consts)
        geometry = EnsembleGeometry(
            column_density_times_sigma=column,
            length=scn.beam_length,
            probe_waist=scn.probe_waist,
        )
        phi = phi + np.asarray(
            rotation_general(pops, geometry, grid, iso, scn.doppler_width, consts)
        )
    logger.info(
        f"Computed beam spectra on {grid.size} points for {len(isotopes)} isotopes "
        f"(pump={scn.pump.mass_number if scn.pump else None})"
    )
    return BeamSpectra(detuning=grid.tolist(), od=od.tolist(), phi=phi.tolist())


def beam_estimates(
    scn: BeamScenario, constants: Optional[TransitionConstants] = None
) -> BeamEstimates:
    """Transit time T = 2w/v and scattering count r*T at the probe detuning."""
    consts = resolve_constants(constants)
    transit = 2.0 * scn.probe_waist / scn.velocity
    rate = float(scattering_rate(scn.probe_intensity, scn.effective_probe_detuning, consts))
    return BeamEstimates(
        transit_time=transit, scattering_rate=rate, scattering_count=rate * transit
    )
