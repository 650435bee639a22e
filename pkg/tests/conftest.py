import pytest

from ybfaraday.config import get_settings
from ybfaraday.physics.atomdata import isotope_by_mass, read_isotope_table, transition_constants


@pytest.fixture(autouse=True)
def _fresh_settings():
    # settings are cached per process; tests that set env vars need a clean read
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def constants():
    return transition_constants()


@pytest.fixture
def table():
    return read_isotope_table()


@pytest.fixture
def yb171(table):
    return isotope_by_mass(table, 171)


@pytest.fixture
def yb173(table):
    return isotope_by_mass(table, 173)


@pytest.fixture
def yb174(table):
    return isotope_by_mass(table, 174)
