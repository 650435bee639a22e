"""Typed records shared across the toolkit."""

from ybfaraday.models.angular import Polarization, StrengthTable
from ybfaraday.models.atom import IsotopeSpec, IsotopeTable, LineshapeParams, TransitionConstants
from ybfaraday.models.ensemble import EnsembleGeometry, GroundPopulations
from ybfaraday.models.fit import FitResult
from ybfaraday.models.polarimeter import PolarimeterReading
from ybfaraday.models.pumping import DepolarizationResult, PumpConfig, PumpingTrajectory
from ybfaraday.models.scenario import (
    BeamEstimates,
    BeamScenario,
    BeamSpectra,
    FortScenario,
    MotReleaseScenario,
    MotReleaseTrace,
    PhotonPressureEstimates,
    PrecessionTrace,
    PumpTarget,
)

__all__ = [
    "BeamEstimates",
    "BeamScenario",
    "BeamSpectra",
    "DepolarizationResult",
    "EnsembleGeometry",
    "FitResult",
    "FortScenario",
    "GroundPopulations",
    "IsotopeSpec",
    "IsotopeTable",
    "LineshapeParams",
    "MotReleaseScenario",
    "MotReleaseTrace",
    "PhotonPressureEstimates",
    "PolarimeterReading",
    "Polarization",
    "PrecessionTrace",
    "PumpConfig",
    "PumpTarget",
    "PumpingTrajectory",
    "StrengthTable",
    "TransitionConstants",
]
