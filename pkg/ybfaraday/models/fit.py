"""Least-squares fit result record."""

from __future__ import annotations

import math
from typing import Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator


class FitResult(BaseModel):
    """Outcome of one least-squares fit.

    ``residual_history`` holds the residual norm after every accepted step,
    starting with the initial guess.
    """

    parameters: List[float] = Field(..., description="Best-fit parameter vector")
    parameter_names: List[str] = Field(default_factory=list, description="Parameter labels")
    residual_norm: float = Field(..., ge=0.0, description="Euclidean norm of the residuals")
    iterations: int = Field(..., ge=0, description="Accepted iterations")
    converged: bool = Field(..., description="True when the relative step fell below xtol")
    covariance: Optional[List[List[float]]] = Field(
        default=None, description="s^2 (J^T J)^-1 at the solution"
    )
    residual_history: List[float] = Field(default_factory=list)
    message: str = Field(default="", description="Why the fit stopped")

    @model_validator(mode="after")
    def check_consistency(self) -> "FitResult":
        if self.parameter_names and len(self.parameter_names) != len(self.parameters):
            raise ValueError(
                f"{len(self.parameter_names)} names for {len(self.parameters)} parameters"
            )
        history = self.residual_history
        for before, after in zip(history, history[1:]):
            if after > before * (1.0 + 1e-12) + 1e-300:
                raise ValueError("residual norm increased over accepted iterations")
        return self

    def standard_errors(self) -> np.ndarray:
        """Square roots of the covariance diagonal (nan when unavailable)."""
        if self.covariance is None:
            return np.full(len(self.parameters), math.nan)
        diag = np.diag(np.asarray(self.covariance, dtype=float))
        return np.sqrt(np.clip(diag, 0.0, None))

    def named(self) -> Dict[str, float]:
        """Parameters keyed by name (``p0``, ``p1``, ... when unnamed)."""
        names = self.parameter_names or [f"p{k}" for k in range(len(self.parameters))]
        return dict(zip(names, self.parameters))

    def summary(self) -> str:
        errors = self.standard_errors()
        lines = [
            f"converged={self.converged} iterations={self.iterations} "
            f"residual_norm={self.residual_norm:.6e} ({self.message})"
        ]
        for (name, value), err in zip(self.named().items(), errors):
            lines.append(f"  {name:<16} {value:+.8e} +/- {err:.2e}")
        return "\n".join(lines)
