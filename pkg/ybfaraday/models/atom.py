"""Atomic data models for the Yb 1S0 -> 1P1 line.

Example isotope record (bundled ``data/isotopes.json``):
{
  "mass_number": 171,
  "abundance": 0.143,
  "nuclear_spin": "1/2",
  "shift_MHz": 939.1,
  "hyperfine_offsets_MHz": {"1": 213.3, "3": -106.7}
}
Offsets are keyed by 2F' so the JSON keys stay integers.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any, Dict, List, Tuple

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    field_serializer,
    field_validator,
    model_validator,
)
from scipy import constants as const

from ybfaraday.utils.quantum import coupled_values, half_integer
from ybfaraday.utils.units import TWO_PI


class TransitionConstants(BaseModel):
    """Constants of the 1S0 -> 1P1 transition, all in SI / rad/s."""

    model_config = ConfigDict(frozen=True)

    omega0: float = Field(..., gt=0.0, description="Resonance angular frequency (rad/s)")
    gamma: float = Field(..., gt=0.0, description="Natural full linewidth (rad/s)")
    sigma0: float = Field(..., gt=0.0, description="Photon-absorption cross section (m^2)")
    i_sat: float = Field(..., gt=0.0, description="Saturation intensity (W/m^2)")

    @model_validator(mode="after")
    def check_derived(self) -> "TransitionConstants":
        sigma_expected = 6.0 * math.pi * (const.c / self.omega0) ** 2
        if abs(self.sigma0 - sigma_expected) > 1e-6 * sigma_expected:
            raise ValueError(
                f"sigma0={self.sigma0:.6e} inconsistent with 6*pi*(c/omega0)^2={sigma_expected:.6e}"
            )
        isat_expected = const.hbar * self.omega0 * self.gamma / (2.0 * self.sigma0)
        if abs(self.i_sat - isat_expected) > 1e-6 * isat_expected:
            raise ValueError(
                f"i_sat={self.i_sat:.6e} inconsistent with hbar*omega0*gamma/(2*sigma0)={isat_expected:.6e}"
            )
        return self

    @property
    def wavelength(self) -> float:
        """Vacuum wavelength (m)."""
        return TWO_PI * const.c / self.omega0


class IsotopeSpec(BaseModel):
    """Spectroscopic record of one stable isotope.

    Frequencies are stored as MHz (cycles) relative to the 174Yb line and
    converted to rad/s by the accessor properties.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True, arbitrary_types_allowed=True)

    mass_number: int = Field(..., gt=0, description="Mass number M")
    abundance: float = Field(..., ge=0.0, le=1.0, description="Natural abundance fraction")
    nuclear_spin: Fraction = Field(..., description="Nuclear spin I (half-integer)")
    shift_mhz: float = Field(
        ..., alias="shift_MHz", description="Line centroid offset from 174Yb (MHz)"
    )
    hyperfine_mhz: Dict[int, float] = Field(
        ...,
        alias="hyperfine_offsets_MHz",
        description="Excited hyperfine offsets from the centroid keyed by 2F' (MHz)",
    )

    @field_validator("nuclear_spin", mode="before")
    @classmethod
    def coerce_spin(cls, v: Any) -> Fraction:
        spin = half_integer(v)
        if spin < 0:
            raise ValueError(f"nuclear_spin must be non-negative, got {spin}")
        return spin

    @field_serializer("nuclear_spin")
    def serialize_spin(self, v: Fraction) -> str:
        return str(v)

    @model_validator(mode="after")
    def check_hyperfine_levels(self) -> "IsotopeSpec":
        expected = {int(2 * f) for f in coupled_values(1, self.nuclear_spin)}
        if set(self.hyperfine_mhz) != expected:
            wanted = sorted(str(Fraction(k, 2)) for k in expected)
            got = sorted(str(Fraction(k, 2)) for k in self.hyperfine_mhz)
            raise ValueError(
                f"isotope {self.mass_number} with I={self.nuclear_spin} needs F' levels "
                f"{wanted}, got {got}"
            )
        return self

    @property
    def f_primes(self) -> Tuple[Fraction, ...]:
        """Excited hyperfine levels F' in ascending order."""
        return tuple(Fraction(k, 2) for k in sorted(self.hyperfine_mhz))

    @property
    def isotope_shift(self) -> float:
        """Centroid offset from the 174Yb line (rad/s)."""
        return TWO_PI * 1e6 * self.shift_mhz

    @property
    def hyperfine_offsets(self) -> Dict[Fraction, float]:
        """Map F' -> offset of omega^(F') from the centroid (rad/s)."""
        return {Fraction(k, 2): TWO_PI * 1e6 * v for k, v in sorted(self.hyperfine_mhz.items())}

    def line_center(self, f_prime: Any) -> float:
        """Offset of the F' line from the 174Yb line (rad/s)."""
        key = int(2 * half_integer(f_prime))
        if key not in self.hyperfine_mhz:
            raise ValueError(
                f"isotope {self.mass_number} has no F'={half_integer(f_prime)} level"
            )
        return TWO_PI * 1e6 * (self.shift_mhz + self.hyperfine_mhz[key])

    def line_center_mhz(self, f_prime: Any) -> float:
        """Offset of the F' line from the 174Yb line (MHz)."""
        key = int(2 * half_integer(f_prime))
        return self.shift_mhz + self.hyperfine_mhz[key]


class IsotopeTable(BaseModel):
    """The bundled per-isotope table plus provenance."""

    model_config = ConfigDict(frozen=True)

    reference_isotope: int = Field(default=174, description="Isotope defining zero detuning")
    source: str = Field(default="", description="Provenance of the numbers")
    isotopes: List[IsotopeSpec] = Field(..., min_length=1, description="Isotope records")

    @model_validator(mode="after")
    def check_table(self) -> "IsotopeTable":
        masses = [iso.mass_number for iso in self.isotopes]
        if len(set(masses)) != len(masses):
            raise ValueError(f"duplicate mass numbers in isotope table: {masses}")
        total = sum(iso.abundance for iso in self.isotopes)
        if abs(total - 1.0) > 0.01:
            raise ValueError(f"abundances sum to {total:.4f}, expected 1 within 0.01")
        return self


class LineshapeParams(BaseModel):
    """Center and full width of one resonance, both in rad/s."""

    model_config = ConfigDict(frozen=True)

    center: float = Field(..., description="Line center offset (rad/s)")
    width: float = Field(..., gt=0.0, description="Full linewidth Gamma or Gamma* (rad/s)")
