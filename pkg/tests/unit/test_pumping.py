from fractions import Fraction

import numpy as np
import pytest
from pydantic import ValidationError

from ybfaraday.models.angular import Polarization
from ybfaraday.models.ensemble import GroundPopulations
from ybfaraday.models.pumping import PumpConfig
from ybfaraday.physics.lineshape import scattering_rate
from ybfaraday.physics.pumping import (
    PumpingError,
    probe_depolarization,
    probe_rate_matrix,
    propagator,
    pump_rate_matrix,
    pumped_populations,
    simulate_pumping,
    steady_state,
)
from ybfaraday.utils.units import TWO_PI, mw_per_mm2_to_si


def test_rate_matrix_columns_sum_to_zero(yb171, yb173, constants):
    config = PumpConfig(intensity=5.0, duration=1e-5, detuning_from_f_eq_i=TWO_PI * 20e6)
    for isotope in (yb171, yb173):
        for matrix in (
            pump_rate_matrix(config, isotope, constants),
            probe_rate_matrix(isotope, 500.0, TWO_PI * 160e6, constants),
        ):
            np.testing.assert_allclose(matrix.sum(axis=0), 0.0, atol=1e-9 * np.abs(matrix).max())
            off_diagonal = matrix - np.diag(np.diag(matrix))
            assert np.all(off_diagonal >= 0.0)


def test_propagator_conserves_population(yb173, constants):
    config = PumpConfig(intensity=5.0, duration=1e-5)
    matrix = pump_rate_matrix(config, yb173, constants)
    step_map = propagator(matrix, 0.01 / np.max(-np.diag(matrix)))
    np.testing.assert_allclose(np.ones(6) @ step_map, np.ones(6), rtol=1e-12)


def test_sigma_plus_pumping_reaches_stretched_state(yb171, constants):
    config = PumpConfig(intensity=10.0, duration=1e-4)
    trajectory = simulate_pumping(
        GroundPopulations.unpolarized("1/2"), config, yb171, constants
    )
    assert trajectory.final.polarization > 0.99
    assert trajectory.times[0] == 0.0
    assert trajectory.times[-1] == pytest.approx(1e-4)
    assert trajectory.clamped_steps == 0
    for state in trajectory.states:
        assert min(state.fractions) >= 0.0
        assert sum(state.fractions) == pytest.approx(1.0, abs=1e-12)


def test_sigma_minus_pumping_mirrors_sigma_plus(yb173, constants):
    plus = PumpConfig(intensity=10.0, duration=2e-5, time_step=1e-8)
    minus = plus.model_copy(update={"polarization": Polarization.SIGMA_MINUS})
    start = GroundPopulations.unpolarized("5/2")
    up = simulate_pumping(start, plus, yb173, constants).final
    down = simulate_pumping(start, minus, yb173, constants).final
    np.testing.assert_allclose(down.fractions, list(reversed(up.fractions)), atol=1e-12)
    assert down.polarization == pytest.approx(-up.polarization, abs=1e-12)


@pytest.mark.parametrize("mass", [171, 173])
def test_steady_state_is_stretched(table, constants, mass):
    isotope = next(iso for iso in table if iso.mass_number == mass)
    pops = pumped_populations(isotope, Polarization.SIGMA_PLUS, constants)
    stretched = GroundPopulations.stretched(isotope.nuclear_spin)
    np.testing.assert_allclose(pops.fractions, stretched.fractions, atol=1e-9)

    mirrored = pumped_populations(isotope, Polarization.SIGMA_MINUS, constants)
    assert mirrored.polarization == pytest.approx(-1.0, abs=1e-9)


def test_steady_state_needs_unique_null_vector():
    with pytest.raises(PumpingError):
        steady_state(np.zeros((2, 2)), "1/2")


def test_spin_zero_cannot_be_pumped(yb174, constants):
    config = PumpConfig(intensity=10.0, duration=1e-5)
    with pytest.raises(PumpingError):
        simulate_pumping(GroundPopulations.diamagnetic(0.0), config, yb174, constants)
    with pytest.raises(PumpingError):
        pumped_populations(yb174, Polarization.SIGMA_PLUS, constants)


def test_pumping_input_errors(yb171, yb173, constants):
    with pytest.raises(PumpingError):
        pumped_populations(yb171, Polarization.PI, constants)
    with pytest.raises(PumpingError):
        simulate_pumping(
            GroundPopulations.unpolarized("5/2"),
            PumpConfig(intensity=1.0, duration=1e-6),
            yb171,
            constants,
        )
    with pytest.raises(ValidationError):
        PumpConfig(polarization=Polarization.PI, intensity=1.0, duration=1e-6)
    with pytest.raises(ValidationError):
        PumpConfig(intensity=1.0, duration=1e-6, time_step=1e-5)
    with pytest.raises(ValidationError):
        PumpConfig(intensity=1.0, duration=1e-6, time_step=0.0)
    with pytest.raises(ValidationError):
        PumpConfig(intensity=1.0, duration=1e-6, time_step=-1e-8)


def test_zero_duration_returns_initial_state(yb171, constants):
    start = GroundPopulations.from_polarization(0.2)
    trajectory = simulate_pumping(start, PumpConfig(intensity=10.0, duration=0.0), yb171, constants)
    assert trajectory.times == [0.0]
    assert trajectory.final.fractions == pytest.approx(start.fractions)
    assert trajectory.time_step is None


def test_trajectory_frame_columns(yb171, constants):
    config = PumpConfig(intensity=10.0, duration=1e-6, time_step=1e-7)
    frame = simulate_pumping(
        GroundPopulations.unpolarized("1/2"), config, yb171, constants
    ).to_frame()
    assert list(frame.columns) == ["time_s", "m=-1/2", "m=1/2", "p"]
    assert len(frame) == 11
    assert frame["p"].iloc[0] == pytest.approx(0.0, abs=1e-12)
    assert frame["p"].iloc[-1] > 0.0


def test_probe_depolarizes_spin_half(yb171, constants):
    intensity = mw_per_mm2_to_si(0.55)
    exposure = 1e-6
    result = probe_depolarization(
        GroundPopulations.stretched("1/2"), intensity, 0.0, exposure, yb171, constants
    )
    assert -1.0 < result.polarization < 1.0
    assert result.steps > 0
    assert result.scattering_count == pytest.approx(
        scattering_rate(intensity, 0.0, constants) * exposure
    )

    far = probe_depolarization(
        GroundPopulations.stretched("1/2"), intensity, TWO_PI * 1.6e9, exposure, yb171, constants
    )
    assert far.polarization > result.polarization


def test_probe_leaves_spin_zero_untouched(yb174, constants):
    start = GroundPopulations.diamagnetic(TWO_PI * 1e6)
    result = probe_depolarization(start, 500.0, 0.0, 1e-6, yb174, constants)
    assert result.populations == start
    assert result.steps == 0
    assert result.scattering_count > 0.0


def test_probe_depolarization_errors(yb171, constants):
    start = GroundPopulations.stretched("1/2")
    with pytest.raises(PumpingError):
        probe_depolarization(start, 500.0, 0.0, -1.0, yb171, constants)
    with pytest.raises(PumpingError):
        probe_depolarization(start, 500.0, 0.0, 1e-6, yb171, constants, time_step=0.0)


def test_halving_the_time_step_does_not_change_the_result(yb173, constants):
    coarse = PumpConfig(intensity=5.0, duration=2e-5, time_step=2e-8)
    fine = coarse.model_copy(update={"time_step": 1e-8})
    start = GroundPopulations.unpolarized("5/2")
    a = simulate_pumping(start, coarse, yb173, constants).final
    b = simulate_pumping(start, fine, yb173, constants).final
    np.testing.assert_allclose(a.fractions, b.fractions, atol=1e-6)


def test_stretched_population_grows_monotonically(yb173, constants):
    config = PumpConfig(intensity=10.0, duration=2e-4, time_step=1e-8)
    trajectory = simulate_pumping(GroundPopulations.unpolarized("5/2"), config, yb173, constants)
    top = trajectory.matrix()[:, -1]
    assert np.all(np.diff(top) >= -1e-12)
    assert top[-1] > 0.999


def test_beam_probe_depolarizes_during_transit(yb171, constants):
    result = probe_depolarization(
        GroundPopulations.stretched("1/2"),
        mw_per_mm2_to_si(0.55),
        TWO_PI * 57e6 / 2.0,
        0.9e-6,
        yb171,
        constants,
        f_prime=Fraction(3, 2),
    )
    assert 4.0 <= result.scattering_count <= 400.0
    assert abs(result.polarization) < 0.5


def test_far_detuned_probe_barely_depolarizes(yb171, constants):
    result = probe_depolarization(
        GroundPopulations.stretched("1/2"), 0.3, TWO_PI * 1.6e9, 5e-3, yb171, constants
    )
    assert result.scattering_count == pytest.approx(0.0188, rel=0.02)
    assert result.polarization > 0.99


def test_probe_reference_line_must_exist(yb171, constants):
    with pytest.raises(PumpingError):
        probe_depolarization(
            GroundPopulations.stretched("1/2"),
            1.0,
            0.0,
            1e-6,
            yb171,
            constants,
            f_prime=Fraction(5, 2),
        )
