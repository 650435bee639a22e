"""Optical pumping configuration and result records."""

from __future__ import annotations

from fractions import Fraction
from typing import Any, List, Optional

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
from ybfaraday.models.ensemble import GroundPopulations
from ybfaraday.utils.quantum import format_half_integer, half_integer


class PumpConfig(BaseModel):
    """Circularly polarized pump light driving the F=I -> F'=I line.

    ``time_step`` left as None selects ``pump_step_fraction / max(R_m)``.
    """

    model_config = ConfigDict(frozen=True)

    polarization: Polarization = Field(
        default=Polarization.SIGMA_PLUS, description="sigma+ or sigma- pump light"
    )
    intensity: float = Field(..., ge=0.0, description="Pump intensity (W/m^2)")
    detuning_from_f_eq_i: float = Field(
        default=0.0, description="omega_pump - omega(F'=I) (rad/s)"
    )
    duration: float = Field(..., ge=0.0, description="Pumping time (s)")
    time_step: Optional[float] = Field(default=None, gt=0.0, description="Integrator step (s)")

    @field_validator("polarization")
    @classmethod
    def circular_only(cls, v: Polarization) -> Polarization:
        if v == Polarization.PI:
            raise ValueError("pump light must be sigma+ or sigma-")
        return v

    @model_validator(mode="after")
    def check_step(self) -> "PumpConfig":
        if self.time_step is not None and self.duration > 0 and self.time_step > self.duration:
            raise ValueError(
                f"time_step={self.time_step} exceeds duration={self.duration}"
            )
        return self


class PumpingTrajectory(BaseModel):
    """Populations sampled at every integrator step, starting at t=0."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    nuclear_spin: Fraction = Field(..., description="Nuclear spin I")
    times: List[float] = Field(..., description="Sample times (s)")
    states: List[GroundPopulations] = Field(..., description="Populations at each time")
    time_step: Optional[float] = Field(
        default=None,
        gt=0.0,
        description="Step used by the integrator (s); None when no step was taken",
    )
    clamped_steps: int = Field(
        default=0, ge=0, description="Steps where negative fractions were clamped"
    )

    @field_validator("nuclear_spin", mode="before")
    @classmethod
    def coerce_spin(cls, v: Any) -> Fraction:
        return half_integer(v)

    @field_serializer("nuclear_spin")
    def serialize_spin(self, v: Fraction) -> str:
        return str(v)

    @model_validator(mode="after")
    def check_lengths(self) -> "PumpingTrajectory":
        if len(self.times) != len(self.states) or not self.times:
            raise ValueError(
                f"trajectory needs one state per time, got {len(self.times)} times "
                f"and {len(self.states)} states"
            )
        return self

    @property
    def final(self) -> GroundPopulations:
        return self.states[-1]

    @property
    def polarizations(self) -> np.ndarray:
        return np.array([s.polarization for s in self.states])

    def matrix(self) -> np.ndarray:
        """Populations as a (steps, 2I+1) array."""
        return np.array([s.fractions for s in self.states])

    def to_frame(self) -> pd.DataFrame:
        """Columns ``time_s``, ``m=<m>`` per sublevel (ascending) and ``p``."""
        data = {"time_s": np.asarray(self.times)}
        values = self.matrix()
        for k, m in enumerate(self.states[0].m_values):
            data[f"m={format_half_integer(m)}"] = values[:, k]
        data["p"] = self.polarizations
        return pd.DataFrame(data)


class DepolarizationResult(BaseModel):
    """Populations after probe exposure plus the number of scattered photons."""

    model_config = ConfigDict(frozen=True)

    populations: GroundPopulations = Field(..., description="Final populations")
    scattering_count: float = Field(
        ..., ge=0.0, description="Photons scattered per atom, r*T"
    )
    steps: int = Field(..., ge=0, description="Integrator steps taken")

    @property
    def polarization(self) -> float:
        return self.populations.polarization
