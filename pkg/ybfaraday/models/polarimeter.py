"""Balanced polarimeter reading."""

from __future__ import annotations

import math

from pydantic import BaseModel, ConfigDict, Field, model_validator


class PolarimeterReading(BaseModel):
    """Powers at each port of the polarimeter plus derived observables.

    P_in enters the sample, P_out leaves it and is split by the polarizing
    beam splitter into P_+ and P_-.
    """

    model_config = ConfigDict(frozen=True)

    p_in: float = Field(..., ge=0.0, description="Power before the sample (W)")
    p_out: float = Field(..., ge=0.0, description="Power after the sample (W)")
    p_plus: float = Field(..., ge=0.0, description="Power at the + port (W)")
    p_minus: float = Field(..., ge=0.0, description="Power at the - port (W)")
    rotation: float = Field(..., description="Polarization rotation angle (rad)")
    optical_depth: float = Field(..., description="-ln(P_out/P_in)")

    @model_validator(mode="after")
    def check_identities(self) -> "PolarimeterReading":
        total = self.p_plus + self.p_minus
        if abs(total - self.p_out) > 1e-12 * max(abs(self.p_out), 1e-300):
            raise ValueError(f"p_plus + p_minus = {total!r} differs from p_out = {self.p_out!r}")
        if self.p_in > 0 and self.p_out > 0:
            expected = -math.log(self.p_out / self.p_in)
            if abs(expected - self.optical_depth) > 1e-12:
                raise ValueError(
                    f"optical_depth={self.optical_depth!r} differs from -ln(P_out/P_in)={expected!r}"
                )
        return self

    @property
    def difference(self) -> float:
        """Balanced difference signal P_+ - P_-."""
        return self.p_plus - self.p_minus
