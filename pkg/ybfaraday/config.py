"""Application configuration management using Pydantic settings.

Every variable is read with the ``YBFARADAY_`` prefix, e.g.:
- YBFARADAY_LOG_LEVEL
- YBFARADAY_ISOTOPE_TABLE_PATH (replaces the bundled isotope data file)
- YBFARADAY_FIT_MAX_ITERATIONS
"""

from functools import lru_cache
from pathlib import Path
from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings loaded from environment variables."""

    # Application Settings
    log_level: str = Field(default="INFO", description="Logging level")

    # Atomic data
    isotope_table_path: Optional[Path] = Field(
        default=None,
        description="Isotope table JSON file used instead of the bundled one",
    )

    # Fitting engine
    fit_max_iterations: int = Field(
        default=100, gt=0, description="Maximum Levenberg-Marquardt iterations"
    )
    fit_xtol: float = Field(
        default=1e-8, gt=0.0, description="Relative step size that ends a fit"
    )
    fit_fd_step: float = Field(
        default=1e-6,
        gt=0.0,
        description="Relative central finite-difference step for Jacobians",
    )

    # Optical pumping
    pump_step_fraction: float = Field(
        default=0.01,
        gt=0.0,
        le=0.5,
        description="Default time step as a fraction of 1/max(R_m)",
    )

    # Output
    default_seed: Optional[int] = Field(
        default=None, description="Seed used for synthetic noise when none is given"
    )
    csv_float_format: str = Field(
        default="%.10e", description="printf-style float format for CSV output"
    )

    model_config = SettingsConfigDict(
        env_prefix="YBFARADAY_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level is one of the standard levels."""
        valid_levels = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
        v_upper = v.upper()
        if v_upper not in valid_levels:
            raise ValueError(f"log_level must be one of {valid_levels}")
        return v_upper


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance.

    Returns:
        Settings instance loaded from environment.
    """
    return Settings()
