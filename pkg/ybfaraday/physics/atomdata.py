"""Physical constants of the Yb 1S0 -> 1P1 line and the isotope table.

The isotope table is loaded from an editable JSON file; the bundled copy
lives in ``ybfaraday/data/isotopes.json`` and may be replaced through
``Settings.isotope_table_path``.
"""

from __future__ import annotations

import json
import logging
import math
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from pydantic import ValidationError
from scipy import constants as const

from ybfaraday.config import get_settings
from ybfaraday.models.atom import IsotopeSpec, IsotopeTable, TransitionConstants
from ybfaraday.utils.units import TWO_PI

logger = logging.getLogger(__name__)

BUNDLED_TABLE = Path(__file__).resolve().parent.parent / "data" / "isotopes.json"

OMEGA0 = TWO_PI * 751.5e12
GAMMA = TWO_PI * 29e6

# mu_B/h, about 14.0 GHz/T
BOHR_HZ_PER_TESLA = const.physical_constants["Bohr magneton in Hz/T"][0]


class AtomDataError(ValueError):
    """Raised when atomic constants are requested with invalid inputs."""

    pass


class IsotopeTableError(ValueError):
    """Raised when an isotope table document cannot be parsed or validated."""

    pass


def transition_constants(omega0: float = OMEGA0, gamma: float = GAMMA) -> TransitionConstants:
    """Return the 1S0 -> 1P1 constants with sigma0 and I_s derived.

    Args:
        omega0: Resonance angular frequency (rad/s), default 2*pi*751.5 THz.
        gamma: Natural full linewidth (rad/s), default 2*pi*29 MHz.

    Returns:
        TransitionConstants with sigma0 = 6*pi*(c/omega0)^2 and
        I_s = hbar*omega0*gamma/(2*sigma0).
    """
    if omega0 <= 0 or gamma <= 0:
        raise AtomDataError(f"omega0 and gamma must be positive, got {omega0}, {gamma}")
    sigma0 = 6.0 * math.pi * (const.c / omega0) ** 2
    i_sat = const.hbar * omega0 * gamma / (2.0 * sigma0)
    return TransitionConstants(omega0=omega0, gamma=gamma, sigma0=sigma0, i_sat=i_sat)


def electric_dipole_sq(constants: TransitionConstants) -> float:
    """Squared electric dipole moment mu_e^2 = e^2*sigma0*Gamma/(8*pi*alpha_f*omega0) (C^2 m^2)."""
    return (
        const.e**2
        * constants.sigma0
        * constants.gamma
        / (8.0 * math.pi * const.fine_structure * constants.omega0)
    )


def index_prefactor(constants: TransitionConstants) -> float:
    """Refractive-index prefactor 2*pi*alpha_f*c*mu_e^2/e^2 (m^3/s).

    Algebraically equal to c*sigma0*Gamma/(4*omega0).
    """
    return 2.0 * math.pi * const.fine_structure * const.c * electric_dipole_sq(constants) / const.e**2


def zeeman_split_from_field(field_tesla: float) -> float:
    """Zeeman shift of the 1P1 m_J'=+1 sublevel for a one-Bohr-magneton moment (rad/s)."""
    return TWO_PI * BOHR_HZ_PER_TESLA * field_tesla


def atomic_mass(mass_number: int) -> float:
    """Mass of the isotope approximated as mass_number atomic mass units (kg)."""
    return mass_number * const.atomic_mass


def load_isotope_table(source: str) -> List[IsotopeSpec]:
    """Parse an isotope table JSON document.

    Args:
        source: JSON text with an ``isotopes`` list (see data/isotopes.json).

    Returns:
        Isotope records in file order.

    Raises:
        IsotopeTableError: If the document is malformed (the message names the
            offending record) or the abundances do not sum to 1 within 0.01.
    """
    return parse_isotope_table(source).isotopes


def parse_isotope_table(source: str) -> IsotopeTable:
    """Parse an isotope table document keeping its provenance block."""
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as e:
        raise IsotopeTableError(f"isotope table is not valid JSON: {e}") from e
    if not isinstance(doc, dict) or not isinstance(doc.get("isotopes"), list):
        raise IsotopeTableError("isotope table must be an object with an 'isotopes' list")

    records: List[IsotopeSpec] = []
    for index, raw in enumerate(doc["isotopes"]):
        label = raw.get("mass_number", "?") if isinstance(raw, dict) else "?"
        try:
            records.append(IsotopeSpec.model_validate(raw))
        except ValidationError as e:
            raise IsotopeTableError(
                f"isotope record #{index} (mass {label}) is invalid: {e}"
            ) from e

    try:
        table = IsotopeTable(
            reference_isotope=doc.get("reference_isotope", 174),
            source=doc.get("source", ""),
            isotopes=records,
        )
    except ValidationError as e:
        raise IsotopeTableError(f"isotope table failed validation: {e}") from e
    logger.debug(f"Parsed isotope table with {len(records)} records")
    return table


def dump_isotope_table(
    isotopes: Sequence[IsotopeSpec], reference_isotope: int = 174, source: str = ""
) -> str:
    """Serialize isotope records to the JSON document format."""
    doc: Dict[str, Any] = {
        "reference_isotope": reference_isotope,
        "source": source,
        "isotopes": [iso.model_dump(mode="json", by_alias=True) for iso in isotopes],
    }
    return json.dumps(doc, indent=2)


@lru_cache(maxsize=8)
def _read_cached(path: str) -> tuple:
    text = Path(path).read_text(encoding="utf-8")
    table = load_isotope_table(text)
    logger.info(f"Loaded {len(table)} isotopes from {path}")
    return tuple(table)


def read_isotope_table(path: Optional[Union[str, Path]] = None) -> List[IsotopeSpec]:
    """Read the isotope table from ``path``, the configured override or the bundled file."""
    if path is None:
        path = get_settings().isotope_table_path or BUNDLED_TABLE
    try:
        return list(_read_cached(str(Path(path).resolve())))
    except OSError as e:
        raise IsotopeTableError(f"cannot read isotope table {path}: {e}") from e


def isotope_by_mass(table: Sequence[IsotopeSpec], mass_number: int) -> IsotopeSpec:
    """Look up an isotope by mass number."""
    for iso in table:
        if iso.mass_number == mass_number:
            return iso
    raise IsotopeTableError(
        f"isotope {mass_number} not in table {[iso.mass_number for iso in table]}"
    )
