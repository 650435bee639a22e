import math

import numpy as np
import pytest

from ybfaraday.experiments import fort_precession_trace, larmor_frequency, synthetic_noise
from ybfaraday.experiments.beam import absorption_spectrum, isotope_columns as beam_columns
from ybfaraday.fitting import (
    FittingError,
    fit_absorption_spectrum,
    fit_damped_sinusoid,
    fit_exponential,
    initial_damped_sinusoid,
    isotope_columns,
    least_squares,
    numerical_jacobian,
)
from ybfaraday.fitting.adapters import damped_sinusoid, exponential
from ybfaraday.models.scenario import BEAM_COLUMN_SCALE, BeamScenario, FortScenario
from ybfaraday.utils.units import TWO_PI

TRUTH = {
    "gamma_star_mhz": 57.0,
    "column_scale": BEAM_COLUMN_SCALE,
    "offset_mhz": 0.0,
    "column_171": 0.18,
    "column_173": 0.21,
}


@pytest.fixture
def absorption_truth(table):
    detuning_mhz = np.arange(-1500.0, 2501.0, 2.0)
    scn = BeamScenario(isotopes=table, column_overrides={171: 0.18, 173: 0.21})
    od = absorption_spectrum(
        table, beam_columns(scn), TWO_PI * 1e6 * detuning_mhz, TWO_PI * 57e6
    )
    return TWO_PI * 1e6 * detuning_mhz, od


# -------------------------
# Engine
# -------------------------


def test_linear_model_recovered():
    x = np.linspace(0.0, 1.0, 50)
    result = least_squares(lambda p: p[0] + p[1] * x, [1.0, 1.0], 3.0 - 2.0 * x)
    assert result.converged
    assert result.parameters == pytest.approx([3.0, -2.0], rel=1e-6)
    assert result.residual_norm < 1e-8
    assert result.named() == {"p0": result.parameters[0], "p1": result.parameters[1]}


def test_residual_history_is_monotone():
    t = np.linspace(0.0, 5.0, 100)
    result = least_squares(
        lambda p: exponential(t, p[0], p[1]),
        [0.5, 3.0],
        exponential(t, 2.0, 0.7),
        parameter_names=["amplitude", "decay_time"],
    )
    history = result.residual_history
    assert history[0] > history[-1]
    assert all(after <= before for before, after in zip(history, history[1:]))
    assert len(history) == result.iterations + 1
    assert result.named()["decay_time"] == pytest.approx(0.7, rel=1e-6)


def test_bounds_are_respected():
    x = np.linspace(1.0, 2.0, 20)
    result = least_squares(lambda p: p[0] * x, [1.0], 2.0 * x, bounds=([0.0], [1.5]))
    assert result.parameters[0] == pytest.approx(1.5)
    assert result.parameters[0] <= 1.5


def test_iteration_limit_reported_not_raised():
    t = np.linspace(0.0, 5.0, 100)
    result = least_squares(
        lambda p: exponential(t, p[0], p[1]), [0.1, 10.0], exponential(t, 2.0, 0.7), max_iterations=1
    )
    assert not result.converged
    assert result.iterations == 1
    assert "iteration" in result.message


def test_covariance_needs_more_points_than_parameters():
    result = least_squares(lambda p: p[0] + p[1] * np.array([0.0, 1.0]), [1.0, 1.0], [1.0, 2.0])
    assert result.covariance is None
    assert np.all(np.isnan(result.standard_errors()))
    assert "+/-" in result.summary()


def test_engine_input_errors():
    model = lambda p: p[0] * np.ones(3)  # noqa: E731
    with pytest.raises(FittingError):
        least_squares(model, [1.0], [1.0, 2.0])
    with pytest.raises(FittingError):
        least_squares(lambda p: p[0] + p[1], [1.0, 1.0], [1.0])
    with pytest.raises(FittingError):
        least_squares(model, [2.0], [1.0, 1.0, 1.0], bounds=([0.0], [1.0]))
    with pytest.raises(FittingError):
        least_squares(model, [0.5], [1.0, 1.0, 1.0], bounds=([1.0], [0.0]))
    with pytest.raises(FittingError):
        least_squares(model, [1.0], [1.0, 1.0, 1.0], parameter_names=["a", "b"])


def test_numerical_jacobian():
    x = np.linspace(0.0, 1.0, 5)
    jac = numerical_jacobian(lambda p: p[0] * x**2 + p[1], [3.0, 0.0])
    np.testing.assert_allclose(jac[:, 0], x**2, atol=1e-8)
    np.testing.assert_allclose(jac[:, 1], 1.0, atol=1e-8)


# -------------------------
# Absorption spectrum
# -------------------------


def test_absorption_noiseless_round_trip(table, absorption_truth):
    omega, od = absorption_truth
    result = fit_absorption_spectrum(omega, od, table)
    assert result.converged
    assert result.residual_norm < 1e-8
    for name, value in TRUTH.items():
        assert result.named()[name] == pytest.approx(value, rel=1e-6, abs=1e-6)
    columns = isotope_columns(result, table)
    assert columns[171] == pytest.approx(0.18, rel=1e-6)
    assert columns[174] == pytest.approx(BEAM_COLUMN_SCALE * 0.318, rel=1e-6)


def test_absorption_recovery_with_noise(table, absorption_truth):
    omega, clean = absorption_truth
    gammas, col171, col173 = [], [], []
    within_errors = 0
    for seed in range(100):
        od = synthetic_noise(clean, 0.01, np.random.default_rng(seed))
        result = fit_absorption_spectrum(omega, od, table)
        fitted = result.named()
        errors = dict(zip(result.parameter_names, result.standard_errors()))
        gammas.append(fitted["gamma_star_mhz"])
        col171.append(fitted["column_171"])
        col173.append(fitted["column_173"])
        if all(abs(fitted[k] - v) <= 3.0 * errors[k] for k, v in TRUTH.items()):
            within_errors += 1

    assert within_errors >= 95
    assert np.median(gammas) == pytest.approx(57.0, rel=0.01)
    assert np.median(col171) == pytest.approx(0.18, rel=0.02)
    assert np.median(col173) == pytest.approx(0.21, rel=0.02)


def test_absorption_fit_ignores_row_order(table, absorption_truth):
    omega, clean = absorption_truth
    od = synthetic_noise(clean, 0.01, np.random.default_rng(11))
    order = np.random.default_rng(12).permutation(omega.size)
    a = fit_absorption_spectrum(omega, od, table)
    b = fit_absorption_spectrum(omega[order], od[order], table)
    assert b.parameters == pytest.approx(a.parameters, rel=1e-12)


def test_absorption_fit_errors(table):
    with pytest.raises(FittingError):
        fit_absorption_spectrum(np.zeros(100), np.zeros(100), table, free_columns=[175])
    with pytest.raises(FittingError):
        fit_absorption_spectrum(np.zeros(5), np.zeros(5), table)
    with pytest.raises(FittingError):
        fit_absorption_spectrum(np.zeros(100), np.zeros(99), table)


# -------------------------
# Exponential decay
# -------------------------


def test_exponential_recovery():
    t = np.arange(0.0, 10e-3, 0.05e-3)
    clean = exponential(t, 0.05, 2.2e-3)
    result = fit_exponential(t, synthetic_noise(clean, 0.01, np.random.default_rng(1)))
    assert result.converged
    assert result.named()["decay_time"] == pytest.approx(2.2e-3, rel=0.05)
    assert result.named()["amplitude"] == pytest.approx(0.05, rel=0.05)


def test_exponential_ignores_row_order():
    t = np.arange(0.0, 10e-3, 0.05e-3)
    y = synthetic_noise(exponential(t, 0.05, 2.2e-3), 0.01, np.random.default_rng(2))
    order = np.random.default_rng(3).permutation(t.size)
    a = fit_exponential(t, y)
    b = fit_exponential(t[order], y[order])
    assert b.parameters == pytest.approx(a.parameters, rel=1e-12)


def test_constant_data_pin_decay_time_to_bound():
    t = np.linspace(0.0, 1.0, 20)
    result = fit_exponential(t, np.ones_like(t))
    assert result.named()["decay_time"] == pytest.approx(100.0, rel=1e-6)


def test_exponential_errors():
    with pytest.raises(FittingError):
        fit_exponential([0.0, 1.0, 2.0], [1.0, 0.5, 0.25])
    with pytest.raises(FittingError):
        fit_exponential(np.zeros(10), np.ones(10))
    with pytest.raises(FittingError):
        fit_exponential(np.arange(10.0), np.r_[np.ones(9), np.nan])


# -------------------------
# Damped sinusoid
# -------------------------


def _precession(noise, seed, decay_time=6e-3):
    scn = FortScenario()
    times = np.linspace(0.0, 8e-3, 800)
    trace = fort_precession_trace(scn, 0.08, decay_time, 0.3, times)
    phi = synthetic_noise(trace.phi, noise, np.random.default_rng(seed))
    return times, phi, larmor_frequency(scn.field, scn.gyromagnetic)


def test_damped_sinusoid_recovery():
    times, phi, omega_b = _precession(0.02, 4)
    result = fit_damped_sinusoid(times, phi)
    fitted = result.named()
    assert result.converged
    assert fitted["omega"] == pytest.approx(omega_b, rel=0.01)
    assert fitted["omega"] == pytest.approx(TWO_PI * 2625.0, rel=0.01)
    assert fitted["decay_time"] == pytest.approx(6e-3, rel=0.15)


def test_damped_sinusoid_initial_guess():
    times, phi, omega_b = _precession(0.0, 0, decay_time=3e-3)
    guess = initial_damped_sinusoid(times, phi)
    assert guess["omega"] == pytest.approx(omega_b, rel=0.02)
    assert guess["amplitude"] > 0.0


def test_damped_sinusoid_fixed_frequency():
    times, phi, omega_b = _precession(0.01, 5)
    result = fit_damped_sinusoid(times, phi, initial={"omega": omega_b}, free_frequency=False)
    assert result.parameter_names == ["amplitude", "decay_time", "phase"]
    assert result.named()["amplitude"] == pytest.approx(0.08, rel=0.05)


def test_damped_sinusoid_ignores_row_order():
    times, phi, _ = _precession(0.02, 6)
    order = np.random.default_rng(7).permutation(times.size)
    a = fit_damped_sinusoid(times, phi)
    b = fit_damped_sinusoid(times[order], phi[order])
    assert b.parameters == pytest.approx(a.parameters, rel=1e-12)


def test_damped_sinusoid_needs_two_periods():
    t = np.linspace(0.0, 0.5e-3, 50)
    with pytest.raises(FittingError):
        fit_damped_sinusoid(t, np.sin(TWO_PI * 2625.0 * t + 0.3))


def test_exponential_errors_cover_truth_across_seeds():
    t = np.arange(0.0, 10e-3, 0.05e-3)
    clean = exponential(t, 0.05, 2.2e-3)
    truth = {"amplitude": 0.05, "decay_time": 2.2e-3}
    passed = 0
    for seed in range(100):
        result = fit_exponential(t, synthetic_noise(clean, 0.01, np.random.default_rng(seed)))
        errors = dict(zip(result.parameter_names, result.standard_errors()))
        fitted = result.named()
        if all(abs(fitted[k] - v) <= 3.0 * errors[k] for k, v in truth.items()):
            passed += 1
    assert passed >= 95


def test_damped_sinusoid_errors_cover_truth_across_seeds():
    passed = 0
    for seed in range(100):
        times, phi, omega_b = _precession(0.02, 100 + seed)
        result = fit_damped_sinusoid(times, phi)
        fitted = result.named()
        errors = dict(zip(result.parameter_names, result.standard_errors()))
        misses = {
            "amplitude": fitted["amplitude"] - 0.08,
            "decay_time": fitted["decay_time"] - 6e-3,
            "phase": math.remainder(fitted["phase"] - 0.3, TWO_PI),
            "omega": fitted["omega"] - omega_b,
        }
        if all(abs(miss) <= 3.0 * errors[k] for k, miss in misses.items()):
            passed += 1
    assert passed >= 95


def test_damped_sinusoid_noiseless_round_trip():
    times, phi, omega_b = _precession(0.0, 0)
    result = fit_damped_sinusoid(times, phi)
    fitted = result.named()
    assert result.converged
    assert fitted["amplitude"] == pytest.approx(0.08, rel=1e-6)
    assert fitted["decay_time"] == pytest.approx(6e-3, rel=1e-6)
    assert fitted["omega"] == pytest.approx(omega_b, rel=1e-6)
    assert math.remainder(fitted["phase"] - 0.3, TWO_PI) == pytest.approx(0.0, abs=1e-6)


def test_numerical_jacobian_matches_analytic_models():
    t = np.linspace(0.0, 8e-3, 200)
    amplitude, decay = 0.05, 2.2e-3
    envelope = np.exp(-t / decay)
    jac = numerical_jacobian(lambda p: exponential(t, p[0], p[1]), [amplitude, decay])
    np.testing.assert_allclose(jac[:, 0], envelope, rtol=1e-6, atol=1e-9)
    np.testing.assert_allclose(
        jac[:, 1], amplitude * t / decay**2 * envelope, rtol=1e-6, atol=1e-9 * amplitude / decay
    )

    amplitude, decay, phase, omega = 0.08, 6e-3, 0.3, TWO_PI * 2625.0
    envelope = np.exp(-t / decay)
    arg = omega * t + phase
    jac = numerical_jacobian(
        lambda p: damped_sinusoid(t, p[0], p[1], p[2], p[3]), [amplitude, decay, phase, omega]
    )
    expected = np.column_stack(
        [
            envelope * np.sin(arg),
            amplitude * t / decay**2 * envelope * np.sin(arg),
            amplitude * envelope * np.cos(arg),
            amplitude * t * envelope * np.cos(arg),
        ]
    )
    for k in range(4):
        scale = np.max(np.abs(expected[:, k]))
        np.testing.assert_allclose(jac[:, k], expected[:, k], rtol=1e-6, atol=1e-7 * scale)
