import math
from fractions import Fraction

import numpy as np
import pytest
from pydantic import ValidationError

from ybfaraday.models.polarimeter import PolarimeterReading
from ybfaraday.physics.polarimeter import (
    PolarimeterError,
    column_from_depth,
    optical_depth,
    read,
    recovered_rotation,
)


@pytest.mark.parametrize("phi", [-0.3, -1e-3, 0.0, 2e-2, 0.5])
def test_noiseless_reading_identities(phi):
    reading = read(1e-3, 0.2, phi)
    assert reading.p_plus + reading.p_minus == pytest.approx(reading.p_out, rel=1e-12)
    assert reading.p_out == pytest.approx(1e-3 * math.exp(-0.2), rel=1e-12)
    assert reading.optical_depth == pytest.approx(0.2, abs=1e-12)
    assert reading.difference == pytest.approx(reading.p_out * math.sin(2.0 * phi), abs=1e-18)
    assert reading.rotation == phi
    assert recovered_rotation(reading) == pytest.approx(phi, abs=1e-12)


def test_opaque_sample_reading():
    reading = read(1e-3, 800.0, 0.1)
    assert reading.p_out == 0.0
    assert math.isinf(reading.optical_depth)
    assert recovered_rotation(reading) == 0.0


def test_noisy_readings_recover_rotation():
    rng = np.random.default_rng(2024)
    phi = 1e-2
    rotations = [read(1e-3, 0.1, phi, noise_std=1e-7, rng=rng).rotation for _ in range(2000)]
    assert abs(rotations[0] - phi) < 1e-3
    assert np.mean(rotations) == pytest.approx(phi, abs=2e-5)
    assert np.std(rotations) > 0.0


def test_same_seed_same_reading():
    first = read(1e-3, 0.1, 0.02, noise_std=1e-6, rng=np.random.default_rng(5))
    second = read(1e-3, 0.1, 0.02, noise_std=1e-6, rng=np.random.default_rng(5))
    assert first == second


def test_reading_errors():
    with pytest.raises(PolarimeterError):
        read(1e-3, 0.1, 0.0, noise_std=1e-6)
    with pytest.raises(PolarimeterError):
        read(-1.0, 0.1, 0.0)
    with pytest.raises(PolarimeterError):
        read(1.0, -0.1, 0.0)
    with pytest.raises(PolarimeterError):
        read(1.0, 0.1, 0.0, noise_std=-1.0)


def test_reading_model_checks_identities():
    with pytest.raises(ValidationError):
        PolarimeterReading(
            p_in=1.0, p_out=0.5, p_plus=0.3, p_minus=0.3, rotation=0.0, optical_depth=math.log(2)
        )
    with pytest.raises(ValidationError):
        PolarimeterReading(
            p_in=1.0, p_out=0.5, p_plus=0.25, p_minus=0.25, rotation=0.0, optical_depth=0.1
        )


def test_optical_depth():
    assert optical_depth(1.0, math.exp(-0.05)) == pytest.approx(0.05)
    assert optical_depth(2.0, 2.0) == 0.0
    with pytest.raises(PolarimeterError, match="gain"):
        optical_depth(1.0, 1.5)
    with pytest.raises(PolarimeterError):
        optical_depth(0.0, 0.5)
    with pytest.raises(PolarimeterError):
        optical_depth(1.0, 0.0)


def test_column_from_depth():
    assert column_from_depth(0.05, Fraction(2, 3)) == pytest.approx(0.075)
    assert column_from_depth(0.05, 1.0) == 0.05
    with pytest.raises(PolarimeterError):
        column_from_depth(0.05, 0.0)
    with pytest.raises(PolarimeterError):
        column_from_depth(0.05, 1.5)


def test_readings_are_monotonic():
    phis = np.linspace(-0.7, 0.7, 141)
    differences = [read(1e-3, 0.2, phi).difference for phi in phis]
    assert np.all(np.diff(differences) > 0.0)
    rotations = [recovered_rotation(read(1e-3, 0.2, phi)) for phi in phis]
    assert np.all(np.diff(rotations) > 0.0)

    depths = np.linspace(0.0, 5.0, 51)
    powers = [read(1e-3, od, 0.1).p_out for od in depths]
    assert np.all(np.diff(powers) < 0.0)


def test_noisy_ports_never_go_negative():
    rng = np.random.default_rng(9)
    dim = [read(1e-6, 0.0, 0.0, noise_std=1e-5, rng=rng) for _ in range(200)]
    assert all(r.p_plus >= 0.0 and r.p_minus >= 0.0 and r.p_out >= 0.0 for r in dim)
    assert any(r.p_plus == 0.0 for r in dim)

    # a thin sample can read slightly negative depth under noise
    thin = [read(1e-3, 0.0, 0.0, noise_std=1e-6, rng=rng).optical_depth for _ in range(100)]
    assert min(thin) < 0.0
    assert max(abs(d) for d in thin) < 1e-2
