"""Experiment scenarios and their spectra, traces and estimates.

Scenario fields are SI with angular frequencies in rad/s; defaults are the
values quoted for the atomic-beam, MOT-release and FORT measurements.
Records producing plot data expose ``to_frame()`` with fixed column headers.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    field_serializer,
    field_validator,
    model_validator,
)

from ybfaraday.models.angular import Polarization
from ybfaraday.models.atom import IsotopeSpec
from ybfaraday.utils.quantum import half_integer
from ybfaraday.utils.units import TWO_PI, rad_to_mhz

BEAM_DOPPLER_WIDTH = TWO_PI * 57e6
# N*sigma0*L per unit abundance; puts 171Yb at ~0.18
BEAM_COLUMN_SCALE = 0.18 / 0.143


class PumpTarget(BaseModel):
    """Isotope-selective pump: which isotope, which F' line and which handedness."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    mass_number: int = Field(default=171, description="Pumped isotope")
    f_prime: Optional[Fraction] = Field(
        default=None, description="Pumped F' line (defaults to F'=I)"
    )
    polarization: Polarization = Field(default=Polarization.SIGMA_PLUS)

    @field_validator("f_prime", mode="before")
    @classmethod
    def coerce_f_prime(cls, v: Any) -> Optional[Fraction]:
        return None if v is None else half_integer(v)

    @field_validator("polarization")
    @classmethod
    def circular_only(cls, v: Polarization) -> Polarization:
        if v == Polarization.PI:
            raise ValueError("pump light must be sigma+ or sigma-")
        return v

    @field_serializer("f_prime")
    def serialize_f_prime(self, v: Optional[Fraction]) -> Optional[str]:
        return None if v is None else str(v)


class BeamScenario(BaseModel):
    """Transversely probed atomic beam.

    Isotope columns are ``column_scale * abundance`` unless overridden per
    mass number. The probe detuning is omega_probe - omega(F'=I+1) of
    ``probe_isotope``; None selects Gamma*/2.
    """

    model_config = ConfigDict(frozen=True)

    isotopes: Optional[List[IsotopeSpec]] = Field(
        default=None, description="Isotope mix (None loads the configured table)"
    )
    column_scale: float = Field(
        default=BEAM_COLUMN_SCALE, ge=0.0, description="N*sigma0*L per unit abundance"
    )
    column_overrides: Dict[int, float] = Field(
        default_factory=dict, description="Mass number -> N*sigma0*L"
    )
    doppler_width: float = Field(
        default=BEAM_DOPPLER_WIDTH, gt=0.0, description="Gamma* (rad/s)"
    )
    probe_intensity: float = Field(default=550.0, ge=0.0, description="W/m^2")
    probe_waist: float = Field(default=0.14e-3, gt=0.0, description="Probe waist w (m)")
    velocity: float = Field(default=300.0, gt=0.0, description="Longitudinal velocity v (m/s)")
    beam_length: float = Field(default=5e-3, gt=0.0, description="Beam diameter L (m)")
    probe_isotope: int = Field(default=171, description="Isotope the probe detuning refers to")
    probe_detuning: Optional[float] = Field(
        default=None, description="omega_probe - omega(F'=I+1) (rad/s)"
    )
    pump: Optional[PumpTarget] = Field(default=None, description="Optional pump target")
    zeeman_split: float = Field(default=0.0, description="Excited-state Zeeman split (rad/s)")
    depolarization_correction: bool = Field(
        default=False, description="Depolarize pumped populations over the transit time"
    )

    @field_validator("column_overrides")
    @classmethod
    def non_negative_columns(cls, v: Dict[int, float]) -> Dict[int, float]:
        for mass, column in v.items():
            if column < 0:
                raise ValueError(f"column for isotope {mass} must be non-negative, got {column}")
        return v

    @property
    def effective_probe_detuning(self) -> float:
        if self.probe_detuning is None:
            return self.doppler_width / 2.0
        return self.probe_detuning

    def column(self, isotope: IsotopeSpec) -> float:
        """N*sigma0*L of one isotope."""
        if isotope.mass_number in self.column_overrides:
            return self.column_overrides[isotope.mass_number]
        return self.column_scale * isotope.abundance


class MotReleaseScenario(BaseModel):
    """Cold 171Yb cloud released from the MOT and probed near the F'=3/2 line."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    initial_od: float = Field(default=0.05, ge=0.0, description="Optical depth d at release")
    decay_time: float = Field(default=2.2e-3, gt=0.0, description="Decay time tau (s)")
    probe_waist: float = Field(default=0.5e-3, gt=0.0, description="Probe waist w (m)")
    probe_detuning: float = Field(
        default=TWO_PI * 160e6, description="omega_probe - omega(F'=3/2) (rad/s)"
    )
    probe_intensity: float = Field(default=0.3, ge=0.0, description="W/m^2")
    polarization: float = Field(default=1.0, ge=-1.0, le=1.0, description="Spin polarization p")
    line_factor: Fraction = Field(
        default=Fraction(2, 3), description="Relative strength of the probed line"
    )

    @field_validator("line_factor", mode="before")
    @classmethod
    def coerce_factor(cls, v: Any) -> Fraction:
        factor = Fraction(str(v)) if isinstance(v, str) else Fraction(v)
        if not 0 < factor <= 1:
            raise ValueError(f"line_factor must lie in (0, 1], got {factor}")
        return factor

    @field_serializer("line_factor")
    def serialize_factor(self, v: Fraction) -> str:
        return str(v)


class FortScenario(BaseModel):
    """Pencil-shaped far-off-resonant trap probed along its long axis."""

    model_config = ConfigDict(frozen=True)

    atom_count: float = Field(default=8e6, gt=0.0, description="Atom number 2S")
    trap_length: float = Field(default=1e-3, gt=0.0, description="Trap length L (m)")
    probe_waist: float = Field(default=30e-6, gt=0.0, description="Probe waist w (m)")
    probe_detuning: float = Field(
        default=TWO_PI * 1.6e9, description="omega_probe - omega(F'=3/2) (rad/s)"
    )
    probe_intensity: float = Field(default=700.0, gt=0.0, description="W/m^2")
    field: float = Field(default=3.5e-4, gt=0.0, description="Magnetic field B (T)")
    gyromagnetic: float = Field(default=7.50e6, gt=0.0, description="Gyromagnetic ratio (Hz/T)")
    mass_number: int = Field(default=171, gt=0, description="Trapped isotope")


class BeamSpectra(BaseModel):
    """Absorption and rotation spectra on a detuning grid."""

    detuning: List[float] = Field(..., description="Probe offset from the 174Yb line (rad/s)")
    od: List[float] = Field(..., description="Optical depth")
    phi: List[float] = Field(..., description="Rotation angle (rad)")

    @model_validator(mode="after")
    def check_lengths(self) -> "BeamSpectra":
        if not (len(self.detuning) == len(self.od) == len(self.phi)):
            raise ValueError("spectrum columns must have equal length")
        return self

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "detuning_MHz": rad_to_mhz(np.asarray(self.detuning)),
                "od": self.od,
                "phi_rad": self.phi,
            }
        )


class BeamEstimates(BaseModel):
    """Transit time and photons scattered during one probe transit."""

    transit_time: float = Field(..., ge=0.0, description="T = 2w/v (s)")
    scattering_rate: float = Field(..., ge=0.0, description="r (1/s)")
    scattering_count: float = Field(..., ge=0.0, description="r*T")


class MotReleaseTrace(BaseModel):
    """Optical depth, column and rotation of the expanding cloud."""

    times: List[float] = Field(..., description="Time after release (s)")
    od: List[float] = Field(..., description="Optical depth")
    nsigma: List[float] = Field(..., description="N*sigma0*L")
    phi: List[float] = Field(..., description="Rotation angle (rad)")
    expansion_velocity: float = Field(..., ge=0.0, description="v = w/tau (m/s)")

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"time_s": self.times, "od": self.od, "phi_rad": self.phi})


class PrecessionTrace(BaseModel):
    """Damped Larmor precession of the rotation signal."""

    times: List[float] = Field(..., description="Hold time T (s)")
    phi: List[float] = Field(..., description="Rotation angle (rad)")
    amplitude: float = Field(..., description="Phi (rad)")
    decay_time: float = Field(..., gt=0.0, description="tau (s)")
    phase: float = Field(..., description="theta (rad)")
    larmor: float = Field(..., description="omega_B (rad/s)")

    @property
    def zero_crossing_spacing(self) -> float:
        return math.pi / self.larmor

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"time_s": self.times, "phi_rad": self.phi})


class PhotonPressureEstimates(BaseModel):
    """Probe-induced scattering, recoil acceleration and hold-time limit."""

    scattering_rate: float = Field(..., ge=0.0, description="r (1/s)")
    acceleration: float = Field(..., ge=0.0, description="a = hbar*omega*r/(M c) (m/s^2)")
    hold_time: float = Field(..., ge=0.0, description="sqrt(2L/a) (s)")
