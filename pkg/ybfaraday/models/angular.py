"""Transition-strength table models."""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import Dict, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator


class Polarization(str, Enum):
    """Light polarization relative to the quantization (probe) axis."""

    SIGMA_PLUS = "sigma+"
    SIGMA_MINUS = "sigma-"
    PI = "pi"

    @property
    def q(self) -> int:
        """Photon angular-momentum projection."""
        return {"sigma+": 1, "sigma-": -1, "pi": 0}[self.value]

    @classmethod
    def from_q(cls, q: int) -> "Polarization":
        return {1: cls.SIGMA_PLUS, -1: cls.SIGMA_MINUS, 0: cls.PI}[q]


class StrengthTable(BaseModel):
    """Squared transition amplitudes from |F=I, m> to |F', m+q>.

    ``entries`` holds every (m, F') pair, including zeros for targets that do
    not exist in the F' manifold.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    nuclear_spin: Fraction = Field(..., description="Nuclear spin I")
    polarization: Polarization = Field(..., description="Driving polarization")
    entries: Dict[Tuple[Fraction, Fraction], Fraction] = Field(
        ..., description="(m ground, F') -> squared amplitude"
    )

    @model_validator(mode="after")
    def check_entries(self) -> "StrengthTable":
        for key, value in self.entries.items():
            if not (0 <= value <= 1):
                raise ValueError(f"strength {value} for {key} outside [0, 1]")
        return self

    @property
    def m_values(self) -> Tuple[Fraction, ...]:
        return tuple(sorted({m for m, _ in self.entries}))

    @property
    def f_primes(self) -> Tuple[Fraction, ...]:
        return tuple(sorted({f for _, f in self.entries}))

    def entry(self, m: Fraction, f_prime: Fraction) -> Fraction:
        """Strength for ground m into F' (0 when the target does not exist)."""
        return self.entries.get((Fraction(m), Fraction(f_prime)), Fraction(0))

    def row_sum(self, m: Fraction) -> Fraction:
        """Sum over F' of the strengths out of ground sublevel m."""
        return sum((v for (mm, _), v in self.entries.items() if mm == m), Fraction(0))
