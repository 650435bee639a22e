"""Optical pumping and probe depolarization as ground-state rate equations.

The excited 1P1 sublevels are adiabatically eliminated. A sublevel m driven
with photon projection q is excited into every |F', m+q> at the rate

    R(m, F') = S_q(m, F') * scattering_rate(I_q, omega(F') - omega_light)

and the excited sublevel decays back into the ground sublevels with the
branching ratios of ``decay_branching``. The rate matrix A therefore has
columns summing to zero and dN/dt = A N conserves the total population.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import null_space

from ybfaraday.config import get_settings
from ybfaraday.models.angular import Polarization
from ybfaraday.models.atom import IsotopeSpec, TransitionConstants
from ybfaraday.models.ensemble import GroundPopulations
from ybfaraday.models.pumping import DepolarizationResult, PumpConfig, PumpingTrajectory
from ybfaraday.physics.angular import decay_branching, sigma_strength_table
from ybfaraday.physics.lineshape import scattering_rate, weak_field_ok
from ybfaraday.utils.quantum import projections

logger = logging.getLogger(__name__)

# Drive = (photon projection q, intensity in W/m^2)
Drive = Tuple[int, float]

NEGATIVE_TOLERANCE = 1e-12


class PumpingError(ValueError):
    """Raised when a pumping simulation is requested with invalid inputs."""

    pass


def drive_rates(
    isotope: IsotopeSpec,
    q: int,
    intensity: float,
    light_detuning: float,
    reference_f_prime: Fraction,
    constants: TransitionConstants,
) -> np.ndarray:
    """Excitation rates R(m, F') (1/s) as a (2I+1, n_F') array.

    Args:
        isotope: Driven isotope.
        q: Photon projection (+1, -1 or 0).
        intensity: Intensity of this polarization component (W/m^2).
        light_detuning: omega_light - omega(reference_f_prime) (rad/s).
        reference_f_prime: Excited level the detuning is quoted against.
        constants: Transition constants.
    """
    table = sigma_strength_table(isotope.nuclear_spin, q)
    reference = isotope.line_center(reference_f_prime)
    rates = np.zeros((len(table.m_values), len(isotope.f_primes)))
    for j, fp in enumerate(isotope.f_primes):
        delta = isotope.line_center(fp) - reference - light_detuning
        r = scattering_rate(intensity, delta, constants)
        for i, m in enumerate(table.m_values):
            rates[i, j] = float(table.entry(m, fp)) * r
    return rates


def rate_matrix(
    isotope: IsotopeSpec,
    drives: Sequence[Drive],
    light_detuning: float,
    reference_f_prime: Fraction,
    constants: TransitionConstants,
) -> np.ndarray:
    """Rate matrix A with dN/dt = A N over ground sublevels in ascending m."""
    spin = isotope.nuclear_spin
    m_values = projections(spin)
    index = {m: k for k, m in enumerate(m_values)}
    matrix = np.zeros((len(m_values), len(m_values)))
    for q, intensity in drives:
        rates = drive_rates(isotope, q, intensity, light_detuning, reference_f_prime, constants)
        for i, m in enumerate(m_values):
            for j, fp in enumerate(isotope.f_primes):
                r = rates[i, j]
                if r == 0.0:
                    continue
                matrix[i, i] -= r
                for m_final, ratio in decay_branching(spin, fp, m + q).items():
                    matrix[index[m_final], i] += r * float(ratio)
    return matrix


def pump_rate_matrix(
    config: PumpConfig, isotope: IsotopeSpec, constants: TransitionConstants
) -> np.ndarray:
    """Rate matrix for a circularly polarized pump tuned near the F'=I line."""
    return rate_matrix(
        isotope,
        [(config.polarization.q, config.intensity)],
        config.detuning_from_f_eq_i,
        isotope.nuclear_spin,
        constants,
    )


def probe_rate_matrix(
    isotope: IsotopeSpec,
    probe_intensity: float,
    probe_detuning: float,
    constants: TransitionConstants,
    f_prime: Optional[Fraction] = None,
) -> np.ndarray:
    """Rate matrix of a linearly polarized probe (equal incoherent sigma+/sigma- drive).

    ``probe_detuning`` is omega_probe - omega(f_prime), F'=I by default as for the pump.
    """
    half = probe_intensity / 2.0
    return rate_matrix(
        isotope,
        [(1, half), (-1, half)],
        probe_detuning,
        _reference_line(isotope, f_prime),
        constants,
    )


def _reference_line(isotope: IsotopeSpec, f_prime: Optional[Fraction]) -> Fraction:
    reference = isotope.nuclear_spin if f_prime is None else Fraction(f_prime)
    if reference not in isotope.f_primes:
        raise PumpingError(f"isotope {isotope.mass_number} has no F'={reference} line")
    return reference


def steady_state(matrix: np.ndarray, nuclear_spin: Fraction) -> GroundPopulations:
    """Normalized null vector of the rate matrix.

    Raises:
        PumpingError: If the null space is not one-dimensional.
    """
    basis = null_space(matrix)
    if basis.shape[1] != 1:
        raise PumpingError(
            f"rate matrix has a {basis.shape[1]}-dimensional null space; steady state not unique"
        )
    vec = basis[:, 0]
    vec = vec / vec.sum()
    return GroundPopulations.from_vector(nuclear_spin, vec)


def propagator(matrix: np.ndarray, step: float) -> np.ndarray:
    """One classical RK4 step for the linear system, as a matrix polynomial."""
    ha = step * matrix
    identity = np.eye(matrix.shape[0])
    result = identity.copy()
    term = identity
    for k in range(1, 5):
        term = term @ ha / k
        result = result + term
    return result


def _default_step(matrix: np.ndarray, duration: float) -> float:
    max_rate = float(np.max(-np.diag(matrix))) if matrix.size else 0.0
    if max_rate <= 0:
        return duration
    return get_settings().pump_step_fraction / max_rate


def _integrate(
    initial: np.ndarray, matrix: np.ndarray, duration: float, time_step: float
) -> Tuple[np.ndarray, np.ndarray, int]:
    """Fixed-step integration; returns times, states (steps+1, n) and clamp count."""
    if duration == 0:
        return np.zeros(1), initial[np.newaxis, :].copy(), 0
    steps = max(1, math.ceil(duration / time_step - 1e-9))
    h = duration / steps
    step_map = propagator(matrix, h)

    states = np.empty((steps + 1, initial.size))
    states[0] = initial
    clamped = 0
    current = initial.copy()
    for k in range(1, steps + 1):
        current = step_map @ current
        if np.any(current < -NEGATIVE_TOLERANCE):
            clamped += 1
        if np.any(current < 0):
            current = np.clip(current, 0.0, None)
        current = current / current.sum()
        states[k] = current
    if clamped:
        logger.warning(f"Clamped negative populations in {clamped} of {steps} steps")
    return np.linspace(0.0, duration, steps + 1), states, clamped


def simulate_pumping(
    initial: GroundPopulations,
    config: PumpConfig,
    isotope: IsotopeSpec,
    constants: TransitionConstants,
) -> PumpingTrajectory:
    """Evolve ground populations under a circularly polarized pump.

    Args:
        initial: Populations at t=0.
        config: Pump polarization, intensity, detuning from the F'=I line,
            duration and optional time step.
        isotope: Pumped isotope (I > 0).
        constants: Transition constants.

    Returns:
        PumpingTrajectory sampled at every integrator step.

    Raises:
        PumpingError: For a spin-0 isotope or a population/isotope spin mismatch.

    Example:
        >>> cfg = PumpConfig(intensity=10.0, duration=1e-4)
        >>> traj = simulate_pumping(GroundPopulations.unpolarized("1/2"), cfg, yb171, consts)
        >>> traj.final.polarization > 0.99
        True
    """
    if isotope.nuclear_spin == 0:
        raise PumpingError(f"isotope {isotope.mass_number} has I=0: nothing to pump")
    if initial.nuclear_spin != isotope.nuclear_spin:
        raise PumpingError(
            f"populations for I={initial.nuclear_spin} do not match isotope "
            f"{isotope.mass_number} (I={isotope.nuclear_spin})"
        )
    if not weak_field_ok(config.intensity, config.detuning_from_f_eq_i, constants):
        logger.warning(
            f"Pump intensity {config.intensity:.3g} W/m^2 violates the weak-field condition"
        )

    matrix = pump_rate_matrix(config, isotope, constants)
    time_step = (
        config.time_step if config.time_step is not None else _default_step(matrix, config.duration)
    )
    times, states, clamped = _integrate(initial.vector, matrix, config.duration, time_step)
    logger.debug(
        f"Pumped {isotope.mass_number} with {config.polarization.value} for "
        f"{config.duration:.3g} s in {len(times) - 1} steps"
    )
    return PumpingTrajectory(
        nuclear_spin=isotope.nuclear_spin,
        times=times.tolist(),
        states=[GroundPopulations.from_vector(isotope.nuclear_spin, row) for row in states],
        time_step=float(times[1] - times[0]) if len(times) > 1 else None,
        clamped_steps=clamped,
    )


def pumped_populations(
    isotope: IsotopeSpec,
    polarization: Polarization,
    constants: TransitionConstants,
    intensity: float = 1.0,
    detuning: float = 0.0,
    f_prime: Optional[Fraction] = None,
) -> GroundPopulations:
    """Steady state of a pump tuned ``detuning`` from the ``f_prime`` line (F'=I by default)."""
    if isotope.nuclear_spin == 0:
        raise PumpingError(f"isotope {isotope.mass_number} has I=0: nothing to pump")
    if polarization == Polarization.PI:
        raise PumpingError("pump light must be sigma+ or sigma-")
    reference = _reference_line(isotope, f_prime)
    matrix = rate_matrix(isotope, [(polarization.q, intensity)], detuning, reference, constants)
    return steady_state(matrix, isotope.nuclear_spin)


def probe_depolarization(
    initial: GroundPopulations,
    probe_intensity: float,
    probe_detuning: float,
    exposure: float,
    isotope: IsotopeSpec,
    constants: TransitionConstants,
    time_step: Optional[float] = None,
    f_prime: Optional[Fraction] = None,
) -> DepolarizationResult:
    """Populations after exposure to a linearly polarized probe.

    Args:
        initial: Populations before the probe.
        probe_intensity: Probe intensity (W/m^2).
        probe_detuning: omega_probe - omega(f_prime) (rad/s).
        exposure: Exposure time T (s).
        isotope: Probed isotope.
        constants: Transition constants.
        time_step: Integrator step; defaults to ``pump_step_fraction / max(R_m)``.
        f_prime: Excited line the detuning is quoted against; F'=I by default.

    Returns:
        DepolarizationResult with the final populations and the scattering
        count r*T of the full probe intensity at ``probe_detuning``.
    """
    if exposure < 0:
        raise PumpingError(f"exposure must be non-negative, got {exposure}")
    if time_step is not None and time_step <= 0:
        raise PumpingError(f"time_step must be positive, got {time_step}")
    if initial.nuclear_spin != isotope.nuclear_spin:
        raise PumpingError(
            f"populations for I={initial.nuclear_spin} do not match isotope {isotope.mass_number}"
        )
    count = float(scattering_rate(probe_intensity, probe_detuning, constants)) * exposure
    if isotope.nuclear_spin == 0 or exposure == 0:
        return DepolarizationResult(populations=initial, scattering_count=count, steps=0)

    matrix = probe_rate_matrix(isotope, probe_intensity, probe_detuning, constants, f_prime)
    step = time_step if time_step is not None else _default_step(matrix, exposure)
    times, states, _ = _integrate(initial.vector, matrix, exposure, step)
    final = GroundPopulations.from_vector(
        isotope.nuclear_spin, states[-1], zeeman_split=initial.zeeman_split
    )
    logger.debug(
        f"Probe exposure {exposure:.3g} s: r*T={count:.3g}, "
        f"p {initial.polarization:+.4f} -> {final.polarization:+.4f}"
    )
    return DepolarizationResult(populations=final, scattering_count=count, steps=len(times) - 1)
