"""Request models in human units (MHz, mW/mm^2, mm, um, ms, us, uT).

Scenario files are JSON documents with a ``kind`` discriminator, e.g.:
{
  "kind": "beam",
  "column_overrides": {"171": 0.18, "173": 0.21},
  "pump": {"mass_number": 171, "polarization": "sigma+"}
}
Each request converts itself to the SI scenario record via ``utils.units``.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Annotated, Dict, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, model_validator

from ybfaraday.models.angular import Polarization
from ybfaraday.models.pumping import PumpConfig
from ybfaraday.models.scenario import (
    BEAM_COLUMN_SCALE,
    BeamScenario,
    FortScenario,
    MotReleaseScenario,
    PumpTarget,
)
from ybfaraday.utils.series import SeriesIOError, read_json
from ybfaraday.utils.units import (
    mhz_to_rad,
    mm_to_m,
    ms_to_s,
    mw_per_mm2_to_si,
    um_to_m,
    us_to_s,
    ut_to_tesla,
    uw_per_mm2_to_si,
)


class BeamRequest(BaseModel):
    """Atomic-beam scenario in human units."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["beam"] = "beam"
    doppler_width_mhz: float = Field(default=57.0, gt=0.0, description="Gamma*/2pi")
    column_scale: float = Field(default=BEAM_COLUMN_SCALE, ge=0.0)
    column_overrides: Dict[int, float] = Field(default_factory=dict)
    probe_intensity_mw_mm2: float = Field(default=0.55, ge=0.0)
    probe_waist_mm: float = Field(default=0.14, gt=0.0)
    velocity_m_s: float = Field(default=300.0, gt=0.0)
    beam_length_mm: float = Field(default=5.0, gt=0.0)
    probe_isotope: int = Field(default=171)
    probe_detuning_mhz: Optional[float] = Field(
        default=None, description="From the F'=I+1 line of probe_isotope; None is Gamma*/2"
    )
    pump: Optional[PumpTarget] = None
    zeeman_split_mhz: float = Field(default=0.0)
    depolarization_correction: bool = False

    def to_scenario(self) -> BeamScenario:
        return BeamScenario(
            doppler_width=mhz_to_rad(self.doppler_width_mhz),
            column_scale=self.column_scale,
            column_overrides=self.column_overrides,
            probe_intensity=mw_per_mm2_to_si(self.probe_intensity_mw_mm2),
            probe_waist=mm_to_m(self.probe_waist_mm),
            velocity=self.velocity_m_s,
            beam_length=mm_to_m(self.beam_length_mm),
            probe_isotope=self.probe_isotope,
            probe_detuning=(
                None if self.probe_detuning_mhz is None else mhz_to_rad(self.probe_detuning_mhz)
            ),
            pump=self.pump,
            zeeman_split=mhz_to_rad(self.zeeman_split_mhz),
            depolarization_correction=self.depolarization_correction,
        )


class MotRequest(BaseModel):
    """MOT-release scenario in human units."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["mot"] = "mot"
    initial_od: float = Field(default=0.05, ge=0.0)
    decay_time_ms: float = Field(default=2.2, gt=0.0)
    probe_waist_mm: float = Field(default=0.5, gt=0.0)
    probe_detuning_mhz: float = Field(default=160.0, description="From the F'=3/2 line")
    probe_intensity_uw_mm2: float = Field(default=0.3, ge=0.0)
    polarization: float = Field(default=1.0, ge=-1.0, le=1.0)
    line_factor: str = Field(default="2/3", description="Relative strength of the probed line")

    def to_scenario(self) -> MotReleaseScenario:
        return MotReleaseScenario(
            initial_od=self.initial_od,
            decay_time=ms_to_s(self.decay_time_ms),
            probe_waist=mm_to_m(self.probe_waist_mm),
            probe_detuning=mhz_to_rad(self.probe_detuning_mhz),
            probe_intensity=uw_per_mm2_to_si(self.probe_intensity_uw_mm2),
            polarization=self.polarization,
            line_factor=self.line_factor,
        )


class FortRequest(BaseModel):
    """FORT scenario in human units."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["fort"] = "fort"
    atom_count: float = Field(default=8e6, gt=0.0, description="2S")
    trap_length_mm: float = Field(default=1.0, gt=0.0)
    probe_waist_um: float = Field(default=30.0, gt=0.0)
    probe_detuning_mhz: float = Field(default=1600.0, description="From the F'=3/2 line")
    probe_intensity_mw_mm2: float = Field(default=0.70, gt=0.0)
    field_ut: float = Field(default=350.0, gt=0.0)
    gyromagnetic_hz_per_t: float = Field(default=7.50e6, gt=0.0)
    mass_number: int = Field(default=171)

    def to_scenario(self) -> FortScenario:
        return FortScenario(
            atom_count=self.atom_count,
            trap_length=mm_to_m(self.trap_length_mm),
            probe_waist=um_to_m(self.probe_waist_um),
            probe_detuning=mhz_to_rad(self.probe_detuning_mhz),
            probe_intensity=mw_per_mm2_to_si(self.probe_intensity_mw_mm2),
            field=ut_to_tesla(self.field_ut),
            gyromagnetic=self.gyromagnetic_hz_per_t,
            mass_number=self.mass_number,
        )


ScenarioRequest = Annotated[
    Union[BeamRequest, MotRequest, FortRequest], Field(discriminator="kind")
]

_scenario_adapter: TypeAdapter = TypeAdapter(ScenarioRequest)

DEFAULT_REQUESTS = {"beam": BeamRequest, "mot": MotRequest, "fort": FortRequest}


def load_scenario(path: Optional[Union[str, Path]], kind: Optional[str] = None):
    """Read a scenario request from JSON, or build the default one for ``kind``.

    A file without ``kind`` takes the one given on the command line.

    Raises:
        SeriesIOError: If the file cannot be read.
        pydantic.ValidationError: If the document does not match the request model.
        ValueError: If the file kind differs from the requested one.
    """
    if path is None:
        return DEFAULT_REQUESTS[kind or "beam"]()
    payload = read_json(path)
    if not isinstance(payload, dict):
        raise SeriesIOError(f"scenario file {path} must hold a JSON object")
    if kind is not None:
        payload.setdefault("kind", kind)
        if payload["kind"] != kind:
            raise ValueError(f"scenario file {path} describes '{payload['kind']}', expected '{kind}'")
    return _scenario_adapter.validate_python(payload)


class PumpRequest(BaseModel):
    """Optical pumping run in human units."""

    model_config = ConfigDict(extra="forbid")

    polarization: Polarization = Polarization.SIGMA_PLUS
    intensity_mw_mm2: float = Field(default=0.01, ge=0.0)
    detuning_mhz: float = Field(default=0.0, description="From the F'=I line")
    duration_us: float = Field(default=20.0, ge=0.0)
    time_step_us: Optional[float] = Field(default=None, gt=0.0)

    def to_config(self) -> PumpConfig:
        return PumpConfig(
            polarization=self.polarization,
            intensity=mw_per_mm2_to_si(self.intensity_mw_mm2),
            detuning_from_f_eq_i=mhz_to_rad(self.detuning_mhz),
            duration=us_to_s(self.duration_us),
            time_step=None if self.time_step_us is None else us_to_s(self.time_step_us),
        )


class RotationRequest(BaseModel):
    """Rotation spectrum of one isotope in human units."""

    model_config = ConfigDict(extra="forbid")

    mass_number: int = 171
    polarization: float = Field(default=1.0, ge=-1.0, le=1.0)
    nsigma: float = Field(default=1.0, ge=0.0)
    start_mhz: float = -1000.0
    stop_mhz: float = 2000.0
    step_mhz: float = Field(default=1.0, gt=0.0)
    width_mhz: Optional[float] = Field(default=None, gt=0.0, description="None is the natural width")
    zeeman_split_mhz: float = 0.0

    @model_validator(mode="after")
    def check_range(self) -> "RotationRequest":
        if self.stop_mhz < self.start_mhz:
            raise ValueError(f"--to {self.stop_mhz} lies below --from {self.start_mhz}")
        return self

    def grid(self) -> np.ndarray:
        """Probe offsets from the 174Yb line (rad/s)."""
        return np.asarray(mhz_to_rad(inclusive_grid(self.start_mhz, self.stop_mhz, self.step_mhz)))


def inclusive_grid(start: float, stop: float, step: float) -> np.ndarray:
    """Evenly spaced values from ``start`` to ``stop`` inclusive."""
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    if stop < start:
        raise ValueError(f"grid end {stop} lies below its start {start}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)
