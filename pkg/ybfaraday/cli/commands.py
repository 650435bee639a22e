"""Subcommand handlers. Each takes the parsed namespace and returns an exit status."""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from ybfaraday.cli.inputs import (
    FortRequest,
    PumpRequest,
    RotationRequest,
    inclusive_grid,
    load_scenario,
)
from ybfaraday.config import get_settings
from ybfaraday.experiments import (
    beam_estimates,
    beam_spectra,
    expansion_velocity,
    fort_column,
    fort_precession_trace,
    larmor_frequency,
    mot_release_trace,
    perfect_polarization_amplitude,
    photon_pressure_estimates,
    probed_atom_number,
    synthetic_noise,
)
from ybfaraday.fitting import (
    fit_absorption_spectrum,
    fit_damped_sinusoid,
    fit_exponential,
    isotope_columns,
)
from ybfaraday.models.angular import Polarization
from ybfaraday.models.ensemble import EnsembleGeometry, GroundPopulations
from ybfaraday.models.fit import FitResult
from ybfaraday.physics.angular import format_table, pi_line_strengths, sigma_strength_table
from ybfaraday.physics.atomdata import isotope_by_mass, read_isotope_table, transition_constants
from ybfaraday.physics.faraday import (
    rotation_general,
    spin_coupling,
    stretched_coefficient_report,
)
from ybfaraday.physics.pumping import simulate_pumping
from ybfaraday.reporting import write_report
from ybfaraday.utils.quantum import half_integer
from ybfaraday.utils.series import frame_to_text, read_series, write_frame, write_json
from ybfaraday.utils.units import (
    TWO_PI,
    mhz_to_rad,
    ms_to_s,
    rad_to_mhz,
    si_to_mw_per_mm2,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_NOT_CONVERGED = 3


def _emit(frame: pd.DataFrame, out: Optional[str], metadata: Dict[str, Any]) -> None:
    """Write ``frame`` to ``out`` with sidecar metadata, or to stdout."""
    if out:
        write_frame(frame, out, metadata)
    else:
        sys.stdout.write(frame_to_text(frame))


def _rng(seed: Optional[int]) -> np.random.Generator:
    return np.random.default_rng(seed if seed is not None else get_settings().default_seed)


def _noisy(values, fraction: float, rng: np.random.Generator) -> np.ndarray:
    return synthetic_noise(values, fraction, rng) if fraction > 0 else np.asarray(values, dtype=float)


# -------------------------
# Atomic data and angular algebra
# -------------------------


def cmd_constants(args: argparse.Namespace) -> int:
    consts = transition_constants()
    lines = [
        f"omega0 {consts.omega0:.6e} rad/s",
        f"gamma {consts.gamma:.6e} rad/s ({consts.gamma / TWO_PI / 1e6:.4g} MHz)",
        f"wavelength {consts.wavelength * 1e9:.4f} nm",
        f"sigma0 {consts.sigma0:.4g} m^2",
        f"i_sat {consts.i_sat:.4g} W/m^2 ({si_to_mw_per_mm2(consts.i_sat):.4g} mW/mm^2)",
        "",
        f"{'M':>4} {'abundance':>10} {'I':>4}  lines (MHz from 174Yb)",
    ]
    for iso in read_isotope_table():
        positions = ", ".join(
            f"F'={fp}: {rad_to_mhz(iso.line_center(fp)):+.1f}" for fp in iso.f_primes
        )
        lines.append(f"{iso.mass_number:>4} {iso.abundance:>10.3f} {str(iso.nuclear_spin):>4}  {positions}")
    print("\n".join(lines))
    return EXIT_OK


def cmd_strengths(args: argparse.Namespace) -> int:
    if args.coefficients:
        print(stretched_coefficient_report().summary())
        return EXIT_OK
    spin = half_integer(args.spin)
    pol = Polarization(args.pol)
    if pol == Polarization.PI:
        lines = [f"I={spin} polarization=pi (averaged over m)"]
        for fp, strength in pi_line_strengths(spin).items():
            lines.append(f"  F'={fp}  {strength}")
        print("\n".join(lines))
    else:
        print(format_table(sigma_strength_table(spin, pol.q)))
    return EXIT_OK


# -------------------------
# Spectra and traces
# -------------------------


def cmd_spectrum(args: argparse.Namespace) -> int:
    request = load_scenario(args.scenario, "beam")
    scenario = request.to_scenario()
    grid_mhz = inclusive_grid(args.start, args.stop, args.step)
    spectra = beam_spectra(scenario, mhz_to_rad(grid_mhz))
    frame = spectra.to_frame()
    if args.noise > 0:
        rng = _rng(args.seed)
        frame["od"] = _noisy(frame["od"], args.noise, rng)
        frame["phi_rad"] = _noisy(frame["phi_rad"], args.noise, rng)
    metadata = {
        "command": "spectrum",
        "scenario": request.model_dump(mode="json"),
        "grid_mhz": {"from": args.start, "to": args.stop, "step": args.step},
        "noise": args.noise,
        "seed": args.seed,
    }
    _emit(frame, args.out, metadata)
    return EXIT_OK


def _rotation_populations(request: RotationRequest, spin: Fraction) -> GroundPopulations:
    """Mixture |p| of the stretched state with the unpolarized state; spin 0 is diamagnetic."""
    if spin == 0:
        return GroundPopulations.diamagnetic(mhz_to_rad(request.zeeman_split_mhz))
    p = request.polarization
    sign = 1 if p >= 0 else -1
    mixed = abs(p) * GroundPopulations.stretched(spin, sign).vector + (
        1.0 - abs(p)
    ) * GroundPopulations.unpolarized(spin).vector
    return GroundPopulations.from_vector(spin, mixed)


def cmd_rotation(args: argparse.Namespace) -> int:
    request = RotationRequest(
        mass_number=args.isotope,
        polarization=args.p,
        nsigma=args.nsigma,
        start_mhz=args.start,
        stop_mhz=args.stop,
        step_mhz=args.step,
        width_mhz=args.width,
        zeeman_split_mhz=args.split,
    )
    consts = transition_constants()
    isotope = isotope_by_mass(read_isotope_table(), request.mass_number)
    width = consts.gamma if request.width_mhz is None else mhz_to_rad(request.width_mhz)
    pops = _rotation_populations(request, isotope.nuclear_spin)
    geometry = EnsembleGeometry(column_density_times_sigma=request.nsigma, length=1.0, probe_waist=0.0)
    grid = request.grid()
    phi = np.asarray(rotation_general(pops, geometry, grid, isotope, width, consts), dtype=float)
    frame = pd.DataFrame({"detuning_MHz": rad_to_mhz(grid), "phi_rad": phi})
    _emit(frame, args.out, {"command": "rotation", "request": request.model_dump(mode="json")})
    return EXIT_OK


def cmd_pump(args: argparse.Namespace) -> int:
    request = PumpRequest(
        polarization=args.pol,
        intensity_mw_mm2=args.intensity,
        detuning_mhz=args.detuning,
        duration_us=args.duration,
        time_step_us=args.step,
    )
    table = read_isotope_table()
    if args.isotope is not None:
        isotope = isotope_by_mass(table, args.isotope)
    else:
        spin = half_integer(args.spin)
        matches = [iso for iso in table if iso.nuclear_spin == spin]
        if not matches:
            raise ValueError(f"no isotope in the table has I={spin}")
        isotope = matches[0]
    trajectory = simulate_pumping(
        GroundPopulations.unpolarized(isotope.nuclear_spin),
        request.to_config(),
        isotope,
        transition_constants(),
    )
    logger.info(
        f"Pumped {isotope.mass_number}Yb to p={trajectory.final.polarization:+.6f} "
        f"in {len(trajectory.times) - 1} steps ({trajectory.clamped_steps} clamped)"
    )
    metadata = {
        "command": "pump",
        "isotope": isotope.mass_number,
        "request": request.model_dump(mode="json"),
    }
    _emit(trajectory.to_frame(), args.out, metadata)
    return EXIT_OK


def cmd_release(args: argparse.Namespace) -> int:
    request = load_scenario(args.scenario, "mot")
    times = ms_to_s(inclusive_grid(args.start, args.stop, args.step))
    trace = mot_release_trace(request.to_scenario(), times)
    frame = trace.to_frame()
    if args.noise > 0:
        rng = _rng(args.seed)
        frame["od"] = _noisy(frame["od"], args.noise, rng)
        frame["phi_rad"] = _noisy(frame["phi_rad"], args.noise, rng)
    metadata = {
        "command": "release",
        "scenario": request.model_dump(mode="json"),
        "times_ms": {"from": args.start, "to": args.stop, "step": args.step},
        "noise": args.noise,
        "seed": args.seed,
    }
    _emit(frame, args.out, metadata)
    return EXIT_OK


def cmd_precess(args: argparse.Namespace) -> int:
    request: FortRequest = load_scenario(args.scenario, "fort")
    if args.B is not None:
        request = request.model_copy(update={"field_ut": args.B})
    scenario = request.to_scenario()
    amplitude = (
        args.amplitude
        if args.amplitude is not None
        else args.p * perfect_polarization_amplitude(scenario)
    )
    times = np.linspace(0.0, ms_to_s(args.stop), args.points)
    trace = fort_precession_trace(scenario, amplitude, ms_to_s(args.decay), args.phase, times)
    frame = trace.to_frame()
    if args.noise > 0:
        frame["phi_rad"] = _noisy(frame["phi_rad"], args.noise, _rng(args.seed))
    metadata = {
        "command": "precess",
        "scenario": request.model_dump(mode="json"),
        "amplitude_rad": amplitude,
        "decay_ms": args.decay,
        "phase_rad": args.phase,
        "larmor_khz": trace.larmor / TWO_PI / 1e3,
        "noise": args.noise,
        "seed": args.seed,
    }
    _emit(frame, args.out, metadata)
    return EXIT_OK


# -------------------------
# Scalar estimates and report
# -------------------------


def _estimates(request) -> Dict[str, float]:
    consts = transition_constants()
    scenario = request.to_scenario()
    if request.kind == "beam":
        est = beam_estimates(scenario, consts)
        return {
            "transit_time_s": est.transit_time,
            "scattering_rate_per_s": est.scattering_rate,
            "scattering_count": est.scattering_count,
        }
    if request.kind == "mot":
        nsigma = float(scenario.initial_od / scenario.line_factor)
        return {
            "nsigma": nsigma,
            "probed_atoms": probed_atom_number(nsigma, scenario.probe_waist, consts.sigma0),
            "expansion_velocity_m_s": expansion_velocity(scenario.probe_waist, scenario.decay_time),
        }
    pressure = photon_pressure_estimates(scenario, consts)
    isotope = isotope_by_mass(read_isotope_table(), scenario.mass_number)
    column = fort_column(scenario.atom_count, scenario.probe_waist, consts.sigma0)
    geometry = EnsembleGeometry(
        column_density_times_sigma=column,
        length=scenario.trap_length,
        probe_waist=scenario.probe_waist,
    )
    omega = isotope.line_center(isotope.f_primes[-1]) + scenario.probe_detuning
    return {
        "nsigma": column,
        "coupling_rad_per_spin": spin_coupling(omega, geometry, isotope, consts.gamma, consts),
        "perfect_polarization_phi_rad": perfect_polarization_amplitude(scenario, constants=consts),
        "larmor_khz": larmor_frequency(scenario.field, scenario.gyromagnetic) / TWO_PI / 1e3,
        "scattering_rate_per_s": pressure.scattering_rate,
        "acceleration_m_s2": pressure.acceleration,
        "hold_time_s": pressure.hold_time,
    }


def cmd_estimates(args: argparse.Namespace) -> int:
    request = load_scenario(args.scenario, args.kind)
    values = _estimates(request)
    print("\n".join(f"{name} {value:.6g}" for name, value in values.items()))
    if args.out:
        write_json(args.out, {"kind": request.kind, "scenario": request.model_dump(mode="json"), "estimates": values})
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    target = write_report(args.out)
    print(f"Wrote report to {target}")
    return EXIT_OK


# -------------------------
# Fitting
# -------------------------

FIT_COLUMNS = {
    "absorption": ("detuning_MHz", "od"),
    "exp": ("time_s", "od"),
    "sinusoid": ("time_s", "phi_rad"),
}


def _finish_fit(result: FitResult, args: argparse.Namespace, extra: Dict[str, Any]) -> int:
    print(result.summary())
    payload = result.model_dump(mode="json")
    payload["named"] = result.named()
    payload["standard_errors"] = [float(e) for e in result.standard_errors()]
    payload.update(extra)
    if args.out:
        write_json(args.out, payload)
    if not result.converged:
        logger.warning(f"Fit of {args.data} did not converge: {result.message}")
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_fit(args: argparse.Namespace) -> int:
    x_default, y_default = FIT_COLUMNS[args.model]
    x, y = read_series(args.data, args.x or x_default, args.y or y_default)
    extra: Dict[str, Any] = {"model": args.model, "data": str(args.data)}

    if args.model == "absorption":
        table = read_isotope_table()
        free = tuple(args.free)
        result = fit_absorption_spectrum(mhz_to_rad(x), y, table, free_columns=free)
        columns = isotope_columns(result, table, free)
        extra["isotope_columns"] = {str(m): c for m, c in sorted(columns.items())}
    elif args.model == "exp":
        result = fit_exponential(x, y)
    else:
        result = fit_damped_sinusoid(x, y, free_frequency=not args.fixed_frequency)
        omega = result.named().get("omega")
        if omega is not None:
            extra["larmor_khz"] = omega / TWO_PI / 1e3
    return _finish_fit(result, args, extra)

