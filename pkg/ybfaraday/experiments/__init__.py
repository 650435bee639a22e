"""Compositions of the physics modules into the beam, MOT and FORT measurements."""

from ybfaraday.experiments.base import ExperimentError, synthetic_noise
from ybfaraday.experiments.beam import beam_estimates, beam_spectra
from ybfaraday.experiments.fort import (
    fort_column,
    fort_precession_trace,
    larmor_frequency,
    perfect_polarization_amplitude,
    photon_pressure_estimates,
)
from ybfaraday.experiments.mot import expansion_velocity, mot_release_trace, probed_atom_number

__all__ = [
    "ExperimentError",
    "beam_estimates",
    "beam_spectra",
    "expansion_velocity",
    "fort_column",
    "fort_precession_trace",
    "larmor_frequency",
    "mot_release_trace",
    "perfect_polarization_amplitude",
    "photon_pressure_estimates",
    "probed_atom_number",
    "synthetic_noise",
]
