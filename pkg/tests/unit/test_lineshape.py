import numpy as np
import pytest

from ybfaraday.physics.lineshape import (
    LineshapeError,
    dispersive,
    effective_linewidth,
    lorentzian_absorption,
    rabi_squared,
    saturation_parameter,
    scattering_rate,
    weak_field_ok,
)
from ybfaraday.utils.units import TWO_PI, mw_per_mm2_to_si


def test_dispersive_shape():
    width = 2.0
    assert dispersive(0.0, 0.0, width) == 0.0
    # extrema of +-1/width at one half-width from the center
    assert dispersive(0.0, -1.0, width) == pytest.approx(1.0 / width)
    assert dispersive(0.0, 1.0, width) == pytest.approx(-1.0 / width)
    assert dispersive(5.0, 3.0, width) == pytest.approx(-dispersive(5.0, 7.0, width))


def test_lorentzian_is_peak_normalized():
    assert lorentzian_absorption(3.0, 3.0, 4.0) == 1.0
    assert lorentzian_absorption(3.0, 5.0, 4.0) == pytest.approx(0.5)


def test_far_wing_asymptotes():
    width = 3.0
    delta = 100.0 * width
    assert dispersive(delta, 0.0, width) == pytest.approx(1.0 / delta, rel=1e-4)
    assert dispersive(-delta, 0.0, width) == pytest.approx(-1.0 / delta, rel=1e-4)
    assert lorentzian_absorption(delta, 0.0, width) == pytest.approx(
        (width / 2.0) ** 2 / delta**2, rel=1e-4
    )


def test_array_inputs_broadcast():
    omega = np.linspace(-10.0, 10.0, 21)
    values = dispersive(0.0, omega, 1.0)
    assert isinstance(values, np.ndarray)
    assert values.shape == omega.shape
    assert isinstance(dispersive(0.0, 1.0, 1.0), float)


def test_width_must_be_positive():
    with pytest.raises(LineshapeError):
        dispersive(0.0, 1.0, 0.0)
    with pytest.raises(LineshapeError):
        lorentzian_absorption(0.0, 1.0, -1.0)


def test_saturation_and_rabi(constants):
    assert saturation_parameter(constants.i_sat, constants) == pytest.approx(1.0)
    assert rabi_squared(constants.i_sat, constants) == pytest.approx(constants.gamma**2 / 2.0)
    with pytest.raises(LineshapeError):
        rabi_squared(-1.0, constants)


def test_scattering_rate_limits(constants):
    gamma = constants.gamma
    assert scattering_rate(0.0, 0.0, constants) == 0.0
    # on resonance r = Gamma * Omega^2 / (Gamma^2 + Omega^2), saturating at Gamma
    for intensity in (0.1 * constants.i_sat, constants.i_sat, 1e6 * constants.i_sat):
        omega_sq = rabi_squared(intensity, constants)
        assert scattering_rate(intensity, 0.0, constants) == pytest.approx(
            gamma * omega_sq / (gamma**2 + omega_sq), rel=1e-12
        )
    assert scattering_rate(1e6 * constants.i_sat, 0.0, constants) == pytest.approx(gamma, rel=1e-5)
    assert scattering_rate(1e6 * constants.i_sat, 0.0, constants) < gamma
    assert scattering_rate(10.0, 1e8, constants) == scattering_rate(10.0, -1e8, constants)
    assert scattering_rate(10.0, 1e8, constants) < scattering_rate(10.0, 0.0, constants)


def test_fort_probe_scattering_rate(constants):
    rate = scattering_rate(mw_per_mm2_to_si(0.70), TWO_PI * 1.6e9, constants)
    assert rate == pytest.approx(8.7e3, rel=0.05)


def test_weak_field_check(constants):
    assert weak_field_ok(1.0, 0.0, constants)
    assert not weak_field_ok(100.0 * constants.i_sat, 0.0, constants)


def test_effective_linewidth():
    assert effective_linewidth(2.0) == 2.0
    assert effective_linewidth(2.0, 5.0) == 5.0
    with pytest.raises(LineshapeError):
        effective_linewidth(2.0, 0.0)
