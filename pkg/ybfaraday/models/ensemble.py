"""Ground-state population and ensemble geometry models."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any, List, Optional

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    field_serializer,
    field_validator,
    model_validator,
)

from ybfaraday.utils.quantum import AngularMomentumError, half_integer, projections


class GroundPopulations(BaseModel):
    """Fractional populations of the ground sublevels m_I = -I..+I.

    ``fractions[k]`` belongs to ``m_values[k]`` (ascending m). Spin-0 samples
    carry a single fraction and use ``zeeman_split`` (rad/s) to shift the
    excited sublevels m_J' = +-1; the split is accepted for any spin.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    nuclear_spin: Fraction = Field(..., description="Nuclear spin I")
    fractions: List[float] = Field(..., description="Population per m, ascending m")
    zeeman_split: float = Field(
        default=0.0, description="Excited-state Zeeman splitting per unit m_J' (rad/s)"
    )

    @field_validator("nuclear_spin", mode="before")
    @classmethod
    def coerce_spin(cls, v: Any) -> Fraction:
        return half_integer(v)

    @field_serializer("nuclear_spin")
    def serialize_spin(self, v: Fraction) -> str:
        return str(v)

    @model_validator(mode="after")
    def check_fractions(self) -> "GroundPopulations":
        expected = int(2 * self.nuclear_spin) + 1
        if len(self.fractions) != expected:
            raise ValueError(
                f"I={self.nuclear_spin} needs {expected} fractions, got {len(self.fractions)}"
            )
        if any(f < -1e-12 for f in self.fractions):
            raise ValueError(f"fractions must be non-negative: {self.fractions}")
        total = math.fsum(self.fractions)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"fractions sum to {total!r}, expected 1 within 1e-12")
        return self

    @property
    def m_values(self) -> List[Fraction]:
        return projections(self.nuclear_spin)

    @property
    def vector(self) -> np.ndarray:
        return np.asarray(self.fractions, dtype=float)

    def fraction(self, m: Any) -> float:
        """Population of sublevel m (0 for m outside -I..I)."""
        mm = half_integer(m)
        if abs(mm) > self.nuclear_spin:
            return 0.0
        return self.fractions[int(mm + self.nuclear_spin)]

    @property
    def polarization(self) -> float:
        """Orientation <m>/I; equals N(+1/2) - N(-1/2) for I = 1/2 and 0 for I = 0."""
        if self.nuclear_spin == 0:
            return 0.0
        mean_m = sum(float(m) * f for m, f in zip(self.m_values, self.fractions))
        return mean_m / float(self.nuclear_spin)

    def mirrored(self) -> "GroundPopulations":
        """Populations with m -> -m (and the Zeeman split reversed)."""
        return GroundPopulations(
            nuclear_spin=self.nuclear_spin,
            fractions=list(reversed(self.fractions)),
            zeeman_split=-self.zeeman_split,
        )

    @classmethod
    def from_vector(
        cls, nuclear_spin: Any, values: np.ndarray, zeeman_split: float = 0.0
    ) -> "GroundPopulations":
        """Build from a numeric vector, absorbing rounding in the normalization."""
        arr = np.clip(np.asarray(values, dtype=float), 0.0, None)
        total = arr.sum()
        if total <= 0:
            raise ValueError("population vector has no weight")
        return cls(
            nuclear_spin=nuclear_spin,
            fractions=[float(x) for x in arr / total],
            zeeman_split=zeeman_split,
        )

    @classmethod
    def unpolarized(cls, nuclear_spin: Any) -> "GroundPopulations":
        n = int(2 * half_integer(nuclear_spin)) + 1
        return cls.from_vector(nuclear_spin, np.full(n, 1.0 / n))

    @classmethod
    def stretched(cls, nuclear_spin: Any, sign: int = 1) -> "GroundPopulations":
        """All population in m = +I (sign=+1) or m = -I (sign=-1)."""
        spin = half_integer(nuclear_spin)
        n = int(2 * spin) + 1
        vec = np.zeros(n)
        vec[-1 if sign > 0 else 0] = 1.0
        return cls(nuclear_spin=spin, fractions=[float(x) for x in vec])

    @classmethod
    def from_polarization(cls, p: float) -> "GroundPopulations":
        """Spin-1/2 populations with N(+1/2) - N(-1/2) = p."""
        if not -1.0 <= p <= 1.0:
            raise AngularMomentumError(f"polarization must lie in [-1, 1], got {p}")
        return cls(
            nuclear_spin=Fraction(1, 2), fractions=[(1.0 - p) / 2.0, (1.0 + p) / 2.0]
        )

    @classmethod
    def diamagnetic(cls, zeeman_split: float) -> "GroundPopulations":
        """Spin-0 sample whose excited m_J' = +-1 levels sit at +-zeeman_split."""
        return cls(nuclear_spin=0, fractions=[1.0], zeeman_split=zeeman_split)


class EnsembleGeometry(BaseModel):
    """Column quantities of the probed atomic sample."""

    model_config = ConfigDict(frozen=True)

    column_density_times_sigma: float = Field(
        ..., ge=0.0, description="Dimensionless N*sigma0*L"
    )
    length: float = Field(..., ge=0.0, description="Sample length along the probe (m)")
    probe_waist: float = Field(..., ge=0.0, description="Probe beam waist w (m)")
    number_density: Optional[float] = Field(
        default=None, ge=0.0, description="Number density N (1/m^3)"
    )
    sigma0: Optional[float] = Field(
        default=None, gt=0.0, description="Cross section used to relate N and N*sigma0*L (m^2)"
    )

    @model_validator(mode="after")
    def check_column(self) -> "EnsembleGeometry":
        if self.number_density is not None and self.sigma0 is not None and self.length > 0:
            expected = self.number_density * self.sigma0 * self.length
            scale = max(abs(expected), abs(self.column_density_times_sigma), 1e-300)
            if abs(expected - self.column_density_times_sigma) > 1e-9 * scale:
                raise ValueError(
                    f"N*sigma0*L={self.column_density_times_sigma} inconsistent with "
                    f"N*sigma0*L={expected} from number_density and length"
                )
        return self

    @classmethod
    def from_density(
        cls, number_density: float, length: float, probe_waist: float, sigma0: float
    ) -> "EnsembleGeometry":
        return cls(
            column_density_times_sigma=number_density * sigma0 * length,
            length=length,
            probe_waist=probe_waist,
            number_density=number_density,
            sigma0=sigma0,
        )

    def density(self, sigma0: float) -> float:
        """Number density N implied by N*sigma0*L (1/m^3)."""
        if self.number_density is not None:
            return self.number_density
        if self.length <= 0:
            raise ValueError("length must be positive to derive a number density")
        return self.column_density_times_sigma / (sigma0 * self.length)

    def probed_atoms(self, sigma0: float) -> float:
        """Probed atom number 2S = N*pi*w^2*L."""
        return self.column_density_times_sigma / sigma0 * math.pi * self.probe_waist**2
