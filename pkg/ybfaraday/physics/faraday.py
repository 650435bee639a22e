"""Refractive-index differences and Faraday rotation angles.

Conventions:
- ``omega`` is the probe angular-frequency offset from the 174Yb line (rad/s);
  only ``rotation_angle`` takes the absolute probe angular frequency.
- phi > 0 means n+ > n- (the sigma+ component is delayed).
- ``width`` replaces Gamma inside the dispersive functions (Gamma* for
  Doppler-broadened samples) while the Gamma/8 prefactor keeps the natural
  linewidth from the transition constants.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Dict, Optional, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike
from pydantic import BaseModel, ConfigDict, Field
from scipy import constants as const

from ybfaraday.models.angular import StrengthTable
from ybfaraday.models.atom import IsotopeSpec, TransitionConstants
from ybfaraday.models.ensemble import EnsembleGeometry, GroundPopulations
from ybfaraday.physics.angular import (
    excited_g_ratio,
    sigma_strength_table,
    stretched_coefficients,
    stretched_denominator,
)
from ybfaraday.physics.atomdata import index_prefactor, transition_constants
from ybfaraday.physics.lineshape import dispersive

logger = logging.getLogger(__name__)

Number = Union[float, np.ndarray]


class FaradayError(ValueError):
    """Raised when rotation inputs are inconsistent (spin mismatch, bad geometry)."""

    pass


def _out(values: np.ndarray) -> Number:
    return values.item() if values.ndim == 0 else values


def _natural(constants: Optional[TransitionConstants]) -> TransitionConstants:
    return constants if constants is not None else transition_constants()


def _check_spin(pops: GroundPopulations, isotope: IsotopeSpec) -> None:
    if pops.nuclear_spin != isotope.nuclear_spin:
        raise FaradayError(
            f"populations for I={pops.nuclear_spin} do not match isotope "
            f"{isotope.mass_number} with I={isotope.nuclear_spin}"
        )


def sublevel_center(
    isotope: IsotopeSpec, f_prime: Fraction, m_prime: Fraction, zeeman_split: float
) -> float:
    """Resonance offset of the excited sublevel |F', m'> (rad/s)."""
    shift = float(m_prime * excited_g_ratio(isotope.nuclear_spin, f_prime)) * zeeman_split
    return isotope.line_center(f_prime) + shift


def _weighted_dispersion(
    pops: GroundPopulations,
    table: StrengthTable,
    q: int,
    omega: np.ndarray,
    isotope: IsotopeSpec,
    width: float,
) -> np.ndarray:
    """sum_{m,F'} S_q(m, F') * g(center of |F', m+q>) * fraction(m)."""
    total = np.zeros_like(omega, dtype=float)
    for m, frac in zip(pops.m_values, pops.fractions):
        if frac == 0.0:
            continue
        for fp in isotope.f_primes:
            strength = table.entry(m, fp)
            if strength == 0:
                continue
            center = sublevel_center(isotope, fp, m + q, pops.zeeman_split)
            total = total + float(strength) * frac * dispersive(center, omega, width)
    return total


def refractive_indices(
    pops: GroundPopulations,
    table_plus: StrengthTable,
    table_minus: StrengthTable,
    omega: ArrayLike,
    isotope: IsotopeSpec,
    constants: TransitionConstants,
    width: float,
    number_density: float,
) -> Tuple[Number, Number]:
    """Refractive indices n+ and n- of the sample.

    n_+- = 1 + (c*sigma0*Gamma/(4*omega0)) * sum_{m,F'} S_+-(m, F') g^(F') N_m
    with N_m = number_density * fraction(m).

    Raises:
        FaradayError: If the tables or the isotope disagree with the population spin.
    """
    _check_spin(pops, isotope)
    for table, q in ((table_plus, 1), (table_minus, -1)):
        if table.nuclear_spin != pops.nuclear_spin:
            raise FaradayError(
                f"strength table for I={table.nuclear_spin} used with I={pops.nuclear_spin}"
            )
        if table.polarization.q != q:
            raise FaradayError(f"expected a q={q:+d} table, got {table.polarization.value}")
    if number_density < 0:
        raise FaradayError(f"number density must be non-negative, got {number_density}")

    w = np.asarray(omega, dtype=float)
    scale = index_prefactor(constants) * number_density
    n_plus = 1.0 + scale * _weighted_dispersion(pops, table_plus, 1, w, isotope, width)
    n_minus = 1.0 + scale * _weighted_dispersion(pops, table_minus, -1, w, isotope, width)
    return _out(np.asarray(n_plus)), _out(np.asarray(n_minus))


def rotation_angle(
    n_plus: ArrayLike, n_minus: ArrayLike, length: float, omega: ArrayLike
) -> Number:
    """Rotation phi = (omega*L/(2c)) * (n+ - n-) for absolute probe angular frequency omega."""
    if length < 0:
        raise FaradayError(f"length must be non-negative, got {length}")
    diff = np.asarray(n_plus, dtype=float) - np.asarray(n_minus, dtype=float)
    return _out(np.asarray(omega, dtype=float) * length / (2.0 * const.c) * diff)


def rotation_general(
    pops: GroundPopulations,
    geometry: EnsembleGeometry,
    omega: ArrayLike,
    isotope: IsotopeSpec,
    width: float,
    constants: Optional[TransitionConstants] = None,
) -> Number:
    """Population-weighted rotation angle (rad).

    phi = (Gamma*N*sigma0*L/8) * sum_{m,F'} [S+(m,F') g(|F', m+1>) - S-(m,F') g(|F', m-1>)] * fraction(m)

    Raises:
        FaradayError: If the populations do not belong to ``isotope``.
    """
    _check_spin(pops, isotope)
    consts = _natural(constants)
    w = np.asarray(omega, dtype=float)
    plus = sigma_strength_table(pops.nuclear_spin, 1)
    minus = sigma_strength_table(pops.nuclear_spin, -1)
    diff = _weighted_dispersion(pops, plus, 1, w, isotope, width) - _weighted_dispersion(
        pops, minus, -1, w, isotope, width
    )
    return _out(np.asarray(consts.gamma / 8.0 * geometry.column_density_times_sigma * diff))


def rotation_spin_zero(
    nsigma: float,
    omega: ArrayLike,
    zeeman_split: float,
    width: float,
    constants: Optional[TransitionConstants] = None,
    line_center: float = 0.0,
) -> Number:
    """Diamagnetic rotation of a spin-0 isotope, (Gamma/8)(g_+1 - g_-1) N*sigma0*L.

    Args:
        nsigma: N*sigma0*L of the isotope.
        omega: Probe offset (rad/s).
        zeeman_split: Shift of the m_J'=+1 sublevel (m_J'=-1 moves the other way).
        width: Lineshape width (rad/s).
        constants: Transition constants supplying the natural Gamma.
        line_center: Offset of the isotope's line from 174Yb (rad/s).
    """
    if nsigma < 0:
        raise FaradayError(f"N*sigma0*L must be non-negative, got {nsigma}")
    consts = _natural(constants)
    g_plus = np.asarray(dispersive(line_center + zeeman_split, omega, width))
    g_minus = np.asarray(dispersive(line_center - zeeman_split, omega, width))
    return _out(consts.gamma / 8.0 * (g_plus - g_minus) * nsigma)


def rotation_spin_half(
    p: float,
    nsigma: float,
    omega: ArrayLike,
    isotope: IsotopeSpec,
    width: float,
    constants: Optional[TransitionConstants] = None,
) -> Number:
    """Spin-1/2 rotation (Gamma/12)(g^(3/2) - g^(1/2)) p N*sigma0*L."""
    if abs(p) > 1:
        raise FaradayError(f"polarization must lie in [-1, 1], got {p}")
    if nsigma < 0:
        raise FaradayError(f"N*sigma0*L must be non-negative, got {nsigma}")
    if isotope.nuclear_spin != Fraction(1, 2):
        raise FaradayError(f"isotope {isotope.mass_number} is not spin-1/2")
    consts = _natural(constants)
    g32 = np.asarray(dispersive(isotope.line_center(Fraction(3, 2)), omega, width))
    g12 = np.asarray(dispersive(isotope.line_center(Fraction(1, 2)), omega, width))
    return _out(consts.gamma / 12.0 * (g32 - g12) * p * nsigma)


def rotation_spin_52_stretched(
    nsigma: float,
    omega: ArrayLike,
    isotope: IsotopeSpec,
    width: float,
    coefficient_source: str = "derived",
    constants: Optional[TransitionConstants] = None,
) -> Number:
    """Rotation of spin-5/2 atoms all in m_I=+5/2.

    With ``coefficient_source="derived"`` the coefficients come from the
    Clebsch-Gordan tables, (Gamma/84)(10 g^(7/2) - 7 g^(3/2) - 3 g^(5/2));
    ``"printed"`` swaps in the printed -6 g^(5/2) for comparison only.
    """
    if nsigma < 0:
        raise FaradayError(f"N*sigma0*L must be non-negative, got {nsigma}")
    if isotope.nuclear_spin != Fraction(5, 2):
        raise FaradayError(f"isotope {isotope.mass_number} is not spin-5/2")
    consts = _natural(constants)
    coefficients = stretched_coefficients(isotope.nuclear_spin, coefficient_source)
    denominator = stretched_denominator(isotope.nuclear_spin)
    w = np.asarray(omega, dtype=float)
    total = np.zeros_like(w)
    for fp, coefficient in coefficients.items():
        total = total + float(coefficient) * np.asarray(
            dispersive(isotope.line_center(fp), w, width)
        )
    return _out(consts.gamma / denominator * total * nsigma)


def spin_coupling(
    omega: ArrayLike,
    geometry: EnsembleGeometry,
    isotope: IsotopeSpec,
    width: float,
    constants: Optional[TransitionConstants] = None,
) -> Number:
    """Rotation per unit spin phi/S_z (the product alpha*t1/2) for spin-1/2 atoms.

    Uses S_z = p*N*pi*w^2*L/2, so phi/S_z = phi(p=1, N*sigma0*L=1) * 2*sigma0/(pi*w^2).

    Raises:
        FaradayError: If the isotope is not spin-1/2 or the probe waist is zero.
    """
    if geometry.probe_waist <= 0:
        raise FaradayError("probe waist must be positive for the spin coupling")
    consts = _natural(constants)
    per_column = np.asarray(rotation_spin_half(1.0, 1.0, omega, isotope, width, consts))
    return _out(per_column * 2.0 * consts.sigma0 / (math.pi * geometry.probe_waist**2))


class CoefficientReport(BaseModel):
    """Side-by-side stretched-state coefficients (derived vs printed) for I=5/2."""

    model_config = ConfigDict(frozen=True)

    denominator: int = Field(..., description="Common denominator D (prefactor Gamma/D)")
    derived: Dict[str, int] = Field(..., description="F' -> coefficient from the CG tables")
    printed: Dict[str, int] = Field(..., description="F' -> printed coefficient")
    derived_sum: int = Field(..., description="Sum of derived coefficients")
    printed_sum: int = Field(..., description="Sum of printed coefficients")
    degenerate_derived: float = Field(
        ..., description="phi/(Gamma*g*N*sigma0*L) with all F' lines degenerate (derived)"
    )
    degenerate_printed: float = Field(
        ..., description="phi/(Gamma*g*N*sigma0*L) with all F' lines degenerate (printed)"
    )
    consistent: bool = Field(..., description="True when both sets agree")

    def summary(self) -> str:
        lines = [
            f"stretched-state rotation coefficients for I=5/2 (prefactor Gamma/{self.denominator})",
            "  F'    derived  printed",
        ]
        for fp in sorted(self.derived, key=Fraction):
            lines.append(f"  {fp:<5} {self.derived[fp]:>7}  {self.printed.get(fp, 0):>7}")
        lines.append(f"  sum   {self.derived_sum:>7}  {self.printed_sum:>7}")
        lines.append(
            f"  degenerate limit: derived {self.degenerate_derived:+.6f}, "
            f"printed {self.degenerate_printed:+.6f} (x Gamma g N sigma0 L)"
        )
        if not self.consistent:
            lines.append("  printed F'=5/2 coefficient breaks the sum rule; derived set is used")
        return "\n".join(lines)


def stretched_coefficient_report() -> CoefficientReport:
    """Compare the derived I=5/2 stretched coefficients with the printed ones."""
    spin = Fraction(5, 2)
    denominator = stretched_denominator(spin)
    derived = stretched_coefficients(spin, "derived")
    printed = stretched_coefficients(spin, "printed")
    derived_sum = int(sum(derived.values()))
    printed_sum = int(sum(printed.values()))
    report = CoefficientReport(
        denominator=denominator,
        derived={str(k): int(v) for k, v in derived.items()},
        printed={str(k): int(v) for k, v in printed.items()},
        derived_sum=derived_sum,
        printed_sum=printed_sum,
        degenerate_derived=derived_sum / denominator,
        degenerate_printed=printed_sum / denominator,
        consistent=derived == printed,
    )
    if not report.consistent:
        logger.info(
            f"Stretched coefficients differ: derived {report.derived}, printed {report.printed}"
        )
    return report
