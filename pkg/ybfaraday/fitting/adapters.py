"""Model adapters: multi-line absorption, exponential decay, damped sinusoid.

Each adapter sorts its data by abscissa before fitting, so the result does
not depend on the order of the input rows.
"""

from __future__ import annotations

import logging
import math
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike
from scipy.signal import savgol_filter

from ybfaraday.experiments.beam import absorption_spectrum
from ybfaraday.fitting.engine import FittingError, least_squares
from ybfaraday.models.atom import IsotopeSpec
from ybfaraday.models.fit import FitResult
from ybfaraday.utils.units import mhz_to_rad, rad_to_mhz

logger = logging.getLogger(__name__)

DEFAULT_FREE_COLUMNS = (171, 173)


def sorted_series(x: ArrayLike, y: ArrayLike, min_points: int = 1) -> Tuple[np.ndarray, np.ndarray]:
    """Validate a (x, y) series and return it sorted by x."""
    xs = np.asarray(x, dtype=float).ravel()
    ys = np.asarray(y, dtype=float).ravel()
    if xs.size != ys.size:
        raise FittingError(f"abscissa has {xs.size} points but data has {ys.size}")
    if xs.size < min_points:
        raise FittingError(f"need at least {min_points} points, got {xs.size}")
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
        raise FittingError("series contains non-finite values")
    order = np.argsort(xs, kind="stable")
    return xs[order], ys[order]


# -------------------------
# Absorption spectrum
# -------------------------


def absorption_parameter_names(free_columns: Sequence[int]) -> List[str]:
    return ["gamma_star_mhz", "column_scale", "offset_mhz"] + [
        f"column_{mass}" for mass in free_columns
    ]


def _columns_from(
    params: np.ndarray, isotopes: Sequence[IsotopeSpec], free_columns: Sequence[int]
) -> Dict[int, float]:
    columns = {iso.mass_number: params[1] * iso.abundance for iso in isotopes}
    for k, mass in enumerate(free_columns):
        columns[mass] = params[3 + k]
    return columns


def absorption_model(
    detuning_mhz: np.ndarray,
    isotopes: Sequence[IsotopeSpec],
    free_columns: Sequence[int] = DEFAULT_FREE_COLUMNS,
):
    """Model function for ``least_squares`` over the absorption parameters."""
    omega = np.asarray(detuning_mhz, dtype=float)

    def model(params: np.ndarray) -> np.ndarray:
        columns = _columns_from(params, isotopes, free_columns)
        return absorption_spectrum(
            list(isotopes),
            columns,
            mhz_to_rad(omega - params[2]),
            mhz_to_rad(params[0]),
        )

    return model


def fit_absorption_spectrum(
    omega: ArrayLike,
    od: ArrayLike,
    isotopes: Sequence[IsotopeSpec],
    initial: Optional[Mapping[str, float]] = None,
    free_columns: Sequence[int] = DEFAULT_FREE_COLUMNS,
) -> FitResult:
    """Fit the beam absorption model with abundance-weighted lines.

    Args:
        omega: Probe offsets from the 174Yb line (rad/s).
        od: Measured optical depth.
        isotopes: Isotope table giving line positions and abundances.
        initial: Optional starting values for ``gamma_star_mhz`` (default 40),
            ``column_scale`` (default 1), ``offset_mhz`` (default 0) and
            ``column_<mass>`` (default ``column_scale * abundance``).
        free_columns: Isotopes whose columns are fitted independently of the
            abundance scale.

    Returns:
        FitResult with parameters named by ``absorption_parameter_names``.

    Raises:
        FittingError: With fewer than 3 points per free parameter or a freed
            isotope missing from the table.
    """
    masses = {iso.mass_number for iso in isotopes}
    missing = [m for m in free_columns if m not in masses]
    if missing:
        raise FittingError(f"freed isotopes {missing} are not in the isotope table")
    names = absorption_parameter_names(free_columns)
    x, y = sorted_series(rad_to_mhz(np.asarray(omega, dtype=float)), od, 3 * len(names))

    start = dict(initial or {})
    scale = float(start.get("column_scale", 1.0))
    abundance = {iso.mass_number: iso.abundance for iso in isotopes}
    guess = [
        float(start.get("gamma_star_mhz", 40.0)),
        scale,
        float(start.get("offset_mhz", 0.0)),
    ] + [float(start.get(f"column_{m}", scale * abundance[m])) for m in free_columns]

    lower = [1e-3, 0.0, -np.inf] + [0.0] * len(free_columns)
    upper = [np.inf] * len(names)
    result = least_squares(
        absorption_model(x, isotopes, free_columns),
        guess,
        y,
        bounds=(lower, upper),
        parameter_names=names,
    )
    logger.info(f"Absorption fit: {result.named()}")
    return result


def isotope_columns(
    result: FitResult,
    isotopes: Sequence[IsotopeSpec],
    free_columns: Sequence[int] = DEFAULT_FREE_COLUMNS,
) -> Dict[int, float]:
    """N*sigma0*L per isotope implied by an absorption fit."""
    return _columns_from(np.asarray(result.parameters), isotopes, free_columns)


# -------------------------
# Exponential decay
# -------------------------


def exponential(t: ArrayLike, amplitude: float, decay_time: float) -> np.ndarray:
    return amplitude * np.exp(-np.asarray(t, dtype=float) / decay_time)


def initial_exponential(t: np.ndarray, y: np.ndarray) -> Dict[str, float]:
    """Starting values from a log-linear regression on samples above 10% of the peak."""
    span = float(t[-1] - t[0]) or 1.0
    peak = float(np.max(y))
    positive = y > 0.1 * peak if peak > 0 else np.zeros(y.shape, dtype=bool)
    if np.count_nonzero(positive) >= 2:
        slope, intercept = np.polyfit(t[positive], np.log(y[positive]), 1)
        decay = -1.0 / slope if slope < 0 else 100.0 * span
        return {"amplitude": float(np.exp(intercept)), "decay_time": float(decay)}
    return {"amplitude": float(y[np.argmax(np.abs(y))]), "decay_time": span}


def fit_exponential(
    t: ArrayLike, y: ArrayLike, initial: Optional[Mapping[str, float]] = None
) -> FitResult:
    """Fit y = d*exp(-t/tau); tau is bounded to [1e-3, 100] times the time span.

    Constant data drive tau onto its upper bound; that is reported through
    the result rather than raised.
    """
    ts, ys = sorted_series(t, y, 4)
    span = float(ts[-1] - ts[0])
    if span <= 0:
        raise FittingError("time series must span a positive interval")
    start = initial_exponential(ts, ys)
    if initial:
        start.update({k: float(v) for k, v in initial.items()})
    lo_tau, hi_tau = 1e-3 * span, 100.0 * span
    guess = [start["amplitude"], min(max(start["decay_time"], lo_tau), hi_tau)]

    result = least_squares(
        lambda p: exponential(ts, p[0], p[1]),
        guess,
        ys,
        bounds=([-np.inf, lo_tau], [np.inf, hi_tau]),
        parameter_names=["amplitude", "decay_time"],
    )
    if math.isclose(result.parameters[1], hi_tau, rel_tol=1e-6):
        logger.warning(f"Decay time reached its upper bound {hi_tau:.3g} s")
    return result


# -------------------------
# Damped sinusoid
# -------------------------


def damped_sinusoid(
    t: ArrayLike, amplitude: float, decay_time: float, phase: float, omega: float
) -> np.ndarray:
    tt = np.asarray(t, dtype=float)
    return amplitude * np.exp(-tt / decay_time) * np.sin(omega * tt + phase)


def zero_crossings(t: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Linearly interpolated zero-crossing times and their direction (+1 rising)."""
    sign = np.signbit(y)
    idx = np.where(sign[:-1] != sign[1:])[0]
    y0, y1 = y[idx], y[idx + 1]
    frac = y0 / (y0 - y1)
    times = t[idx] + frac * (t[idx + 1] - t[idx])
    return times, np.where(y1 > y0, 1, -1)


def _reject_spurious(times: np.ndarray, rising: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Drop crossings closer than half the median spacing to the previous kept one."""
    if times.size < 3:
        return times, rising
    spacing = float(np.median(np.diff(times)))
    keep = [0]
    for k in range(1, times.size):
        if times[k] - times[keep[-1]] >= 0.5 * spacing:
            keep.append(k)
    return times[keep], rising[keep]


def _smoothing_window(n: int) -> int:
    window = max(5, 2 * (n // 160) + 1)
    return window if window <= n else (n if n % 2 else n - 1)


def initial_damped_sinusoid(t: ArrayLike, phi: ArrayLike) -> Dict[str, float]:
    """Starting values for the damped-sinusoid fit.

    omega_B comes from the median zero-crossing spacing of the smoothed
    trace, theta from the first rising crossing, tau from a log-linear fit of
    the half-period peak envelope and Phi from the largest |phi| scaled back
    to T=0.

    Raises:
        FittingError: If the trace spans fewer than two oscillation periods.
    """
    ts, ys = sorted_series(t, phi, 8)
    window = _smoothing_window(ts.size)
    smooth = savgol_filter(ys, window, 3) if window > 3 else ys
    crossings, direction = _reject_spurious(*zero_crossings(ts, smooth))
    if crossings.size < 2:
        raise FittingError(f"found {crossings.size} zero crossings; need at least two periods")
    half_period = float(np.median(np.diff(crossings)))
    omega = math.pi / half_period
    span = float(ts[-1] - ts[0])
    if span < 2.0 * (2.0 * math.pi / omega):
        raise FittingError(
            f"series spans {span:.3g} s, less than two periods of {2 * math.pi / omega:.3g} s"
        )

    rising = crossings[direction > 0]
    first = float(rising[0]) if rising.size else float(crossings[0]) - half_period
    phase = math.remainder(-omega * first, 2.0 * math.pi)

    edges = np.concatenate(([ts[0]], crossings, [ts[-1]]))
    peak_t, peak_y = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        mask = (ts >= a) & (ts <= b)
        if np.count_nonzero(mask) == 0:
            continue
        k = int(np.argmax(np.abs(smooth[mask])))
        peak_t.append(float(ts[mask][k]))
        peak_y.append(float(abs(smooth[mask][k])))
    peaks = np.array(peak_y)
    decay = 10.0 * span
    if peaks.size >= 3 and np.all(peaks > 0):
        slope, _ = np.polyfit(np.array(peak_t), np.log(peaks), 1)
        if slope < 0:
            decay = -1.0 / slope
    k_max = int(np.argmax(np.abs(smooth)))
    amplitude = float(abs(smooth[k_max])) * math.exp(float(ts[k_max]) / decay)
    guess = {"amplitude": amplitude, "decay_time": decay, "phase": phase, "omega": omega}
    logger.debug(f"Damped sinusoid initial guess: {guess}")
    return guess


def fit_damped_sinusoid(
    t: ArrayLike,
    phi: ArrayLike,
    initial: Optional[Mapping[str, float]] = None,
    free_frequency: bool = True,
) -> FitResult:
    """Fit phi(T) = Phi*exp(-T/tau)*sin(omega_B*T + theta).

    Args:
        t: Hold times (s).
        phi: Rotation angles (rad).
        initial: Overrides for ``amplitude``, ``decay_time``, ``phase`` and
            ``omega``; the rest come from ``initial_damped_sinusoid``.
        free_frequency: Fit omega_B; when False it stays at its initial value
            (e.g. the Larmor frequency computed from the field).

    Returns:
        FitResult with parameters (amplitude, decay_time, phase[, omega]).
    """
    ts, ys = sorted_series(t, phi, 8)
    start = initial_damped_sinusoid(ts, ys)
    if initial:
        start.update({k: float(v) for k, v in initial.items()})
    span = float(ts[-1] - ts[0])
    lo_tau = 1e-6 * span

    names = ["amplitude", "decay_time", "phase"]
    guess = [start["amplitude"], max(start["decay_time"], lo_tau), start["phase"]]
    lower = [-np.inf, lo_tau, -np.inf]
    upper = [np.inf, np.inf, np.inf]
    if free_frequency:
        names.append("omega")
        guess.append(start["omega"])
        lower.append(0.0)
        upper.append(np.inf)

        def model(p: np.ndarray) -> np.ndarray:
            return damped_sinusoid(ts, p[0], p[1], p[2], p[3])

    else:
        fixed = start["omega"]

        def model(p: np.ndarray) -> np.ndarray:
            return damped_sinusoid(ts, p[0], p[1], p[2], fixed)

    return least_squares(model, guess, ys, bounds=(lower, upper), parameter_names=names)
