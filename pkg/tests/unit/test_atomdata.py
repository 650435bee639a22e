import json
import math
from fractions import Fraction

import pytest
from pydantic import ValidationError
from scipy import constants as const

from ybfaraday.config import get_settings
from ybfaraday.models.atom import TransitionConstants
from ybfaraday.physics.atomdata import (
    AtomDataError,
    IsotopeTableError,
    atomic_mass,
    dump_isotope_table,
    index_prefactor,
    isotope_by_mass,
    load_isotope_table,
    read_isotope_table,
    transition_constants,
    zeeman_split_from_field,
)
from ybfaraday.utils.units import TWO_PI, si_to_mw_per_mm2


def test_cross_section_and_saturation_intensity(constants):
    assert constants.sigma0 == pytest.approx(7.598e-14, rel=1e-3)
    assert si_to_mw_per_mm2(constants.i_sat) == pytest.approx(0.60, rel=0.02)
    assert constants.wavelength == pytest.approx(398.9e-9, rel=1e-3)


def test_index_prefactor_matches_closed_form(constants):
    expected = const.c * constants.sigma0 * constants.gamma / (4.0 * constants.omega0)
    assert index_prefactor(constants) == pytest.approx(expected, rel=1e-12)


def test_inconsistent_constants_rejected(constants):
    with pytest.raises(ValidationError):
        TransitionConstants(
            omega0=constants.omega0,
            gamma=constants.gamma,
            sigma0=constants.sigma0 * 1.01,
            i_sat=constants.i_sat,
        )


def test_non_positive_linewidth_rejected():
    with pytest.raises(AtomDataError):
        transition_constants(gamma=-1.0)


def test_bundled_table(table):
    assert [iso.mass_number for iso in table] == [168, 170, 171, 172, 173, 174, 176]
    assert math.fsum(iso.abundance for iso in table) == pytest.approx(1.0, abs=0.01)
    spin_zero = math.fsum(iso.abundance for iso in table if iso.nuclear_spin == 0)
    assert spin_zero == pytest.approx(0.695, abs=1e-9)


def test_hyperfine_splittings(yb171, yb173):
    assert yb171.line_center_mhz("1/2") - yb171.line_center_mhz("3/2") == pytest.approx(320.0)
    assert yb173.line_center_mhz("3/2") - yb173.line_center_mhz("7/2") == pytest.approx(-73.0)
    assert yb173.line_center_mhz("5/2") - yb173.line_center_mhz("7/2") == pytest.approx(-844.0)
    assert yb171.line_center("3/2") == pytest.approx(TWO_PI * 832.4e6)
    assert yb171.f_primes == (Fraction(1, 2), Fraction(3, 2))


def test_reference_isotope_at_zero(yb174):
    assert yb174.line_center(1) == 0.0


def test_dump_and_load_preserve_records(table):
    assert load_isotope_table(dump_isotope_table(table)) == table


def test_missing_hyperfine_level_names_record():
    doc = {
        "isotopes": [
            {
                "mass_number": 171,
                "abundance": 1.0,
                "nuclear_spin": "1/2",
                "shift_MHz": 939.1,
                "hyperfine_offsets_MHz": {"3": -106.7},
            }
        ]
    }
    with pytest.raises(IsotopeTableError, match="mass 171"):
        load_isotope_table(json.dumps(doc))


def test_abundances_must_sum_to_one(table):
    records = [iso.model_dump(mode="json", by_alias=True) for iso in table[:2]]
    with pytest.raises(IsotopeTableError, match="abundances"):
        load_isotope_table(json.dumps({"isotopes": records}))


def test_malformed_json_rejected():
    with pytest.raises(IsotopeTableError):
        load_isotope_table("{not json")


def test_unknown_isotope(table):
    with pytest.raises(IsotopeTableError):
        isotope_by_mass(table, 175)


def test_table_path_from_settings(tmp_path, monkeypatch, table):
    custom = [iso.model_copy(update={"shift_mhz": iso.shift_mhz + 1.0}) for iso in table]
    path = tmp_path / "isotopes.json"
    path.write_text(dump_isotope_table(custom), encoding="utf-8")
    monkeypatch.setenv("YBFARADAY_ISOTOPE_TABLE_PATH", str(path))
    get_settings.cache_clear()

    loaded = read_isotope_table()
    assert isotope_by_mass(loaded, 174).shift_mhz == pytest.approx(1.0)


def test_missing_table_file(tmp_path):
    with pytest.raises(IsotopeTableError):
        read_isotope_table(tmp_path / "absent.json")


def test_zeeman_split_and_mass():
    assert zeeman_split_from_field(1.0) / TWO_PI == pytest.approx(14.0e9, rel=0.01)
    assert atomic_mass(171) == pytest.approx(171 * 1.66054e-27, rel=1e-5)
