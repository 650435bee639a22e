"""Damped Gauss-Newton (Levenberg-Marquardt) least squares.

The engine minimizes ||model(p) - data||^2 over parameters rescaled by their
initial magnitudes, with:
- central finite-difference Jacobians (relative step ``fit_fd_step``),
- Levenberg damping A + lambda*I, lambda starting at 1e-3*max diag(A) and
  multiplied by 10 on a rejected step, divided by 10 on an accepted one,
- box bounds enforced by projection after each step,
- termination when the relative step drops below ``fit_xtol`` or after
  ``fit_max_iterations`` accepted iterations.
Failure to converge is reported in the result, never raised.
"""

from __future__ import annotations

import logging
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike

from ybfaraday.config import get_settings
from ybfaraday.models.fit import FitResult

logger = logging.getLogger(__name__)

Model = Callable[[np.ndarray], ArrayLike]
Bounds = Tuple[ArrayLike, ArrayLike]

# Damping beyond max diag(A) * this factor means no useful step exists.
MAX_DAMPING_FACTOR = 1e16


class FittingError(ValueError):
    """Raised for malformed fit inputs (shape mismatch, initial guess out of bounds)."""

    pass


def numerical_jacobian(
    model: Model,
    params: ArrayLike,
    rel_step: float = 1e-6,
    scale: Optional[ArrayLike] = None,
) -> np.ndarray:
    """Central finite-difference Jacobian d model / d params.

    The step of parameter i is ``rel_step * |p_i|``, or ``rel_step * scale_i``
    (1 when no scale is given) for a zero parameter.
    """
    p = np.asarray(params, dtype=float)
    ref = np.abs(p) if scale is None else np.maximum(np.abs(p), np.abs(np.asarray(scale)))
    steps = rel_step * np.where(ref > 0, ref, 1.0)
    columns = []
    for i in range(p.size):
        forward = p.copy()
        backward = p.copy()
        forward[i] += steps[i]
        backward[i] -= steps[i]
        diff = np.asarray(model(forward), dtype=float) - np.asarray(model(backward), dtype=float)
        columns.append(diff / (2.0 * steps[i]))
    return np.column_stack(columns)


def _bounds_arrays(bounds: Optional[Bounds], n: int) -> Tuple[np.ndarray, np.ndarray]:
    if bounds is None:
        return np.full(n, -np.inf), np.full(n, np.inf)
    lower = np.broadcast_to(np.asarray(bounds[0], dtype=float), (n,)).copy()
    upper = np.broadcast_to(np.asarray(bounds[1], dtype=float), (n,)).copy()
    if np.any(lower > upper):
        raise FittingError(f"lower bounds {lower} exceed upper bounds {upper}")
    return lower, upper


def least_squares(
    model: Model,
    initial: ArrayLike,
    data: ArrayLike,
    bounds: Optional[Bounds] = None,
    parameter_names: Optional[Sequence[str]] = None,
    max_iterations: Optional[int] = None,
    xtol: Optional[float] = None,
    fd_step: Optional[float] = None,
) -> FitResult:
    """Fit ``model`` to ``data`` starting from ``initial``.

    Args:
        model: Maps a parameter vector to the predicted series.
        initial: Initial parameter vector (inside ``bounds``).
        data: Observed series, same length as the model output.
        bounds: Optional (lower, upper) box; use +-inf for open sides.
        parameter_names: Labels stored in the result.
        max_iterations: Defaults to ``Settings.fit_max_iterations``.
        xtol: Relative-step tolerance, defaults to ``Settings.fit_xtol``.
        fd_step: Finite-difference relative step, defaults to ``Settings.fit_fd_step``.

    Returns:
        FitResult; ``converged`` is False when the iteration or damping limit
        was hit.

    Raises:
        FittingError: If the data and model output lengths differ, there are
            fewer points than parameters, or the initial guess violates the bounds.
    """
    settings = get_settings()
    max_iterations = max_iterations or settings.fit_max_iterations
    xtol = xtol or settings.fit_xtol
    fd_step = fd_step or settings.fit_fd_step

    p0 = np.atleast_1d(np.asarray(initial, dtype=float))
    y = np.atleast_1d(np.asarray(data, dtype=float))
    n = p0.size
    names = list(parameter_names) if parameter_names is not None else []
    if names and len(names) != n:
        raise FittingError(f"{len(names)} parameter names for {n} parameters")
    if y.ndim != 1:
        raise FittingError("data must be a 1-D series")
    if y.size < n:
        raise FittingError(f"{y.size} data points cannot determine {n} parameters")
    lower, upper = _bounds_arrays(bounds, n)
    if np.any(p0 < lower) or np.any(p0 > upper):
        raise FittingError(f"initial guess {p0.tolist()} lies outside the bounds")
    first = np.asarray(model(p0), dtype=float)
    if first.shape != y.shape:
        raise FittingError(f"model output shape {first.shape} differs from data shape {y.shape}")

    scale = np.where(np.abs(p0) > 0, np.abs(p0), 1.0)
    lo_u, hi_u = lower / scale, upper / scale

    def residual(u: np.ndarray) -> np.ndarray:
        return np.asarray(model(u * scale), dtype=float) - y

    def jacobian(u: np.ndarray) -> np.ndarray:
        return numerical_jacobian(residual, u, fd_step, np.ones(n))

    u = p0 / scale
    r = first - y
    cost = float(r @ r)
    history: List[float] = [math.sqrt(cost)]
    converged = False
    message = "iteration limit reached"
    iterations = 0

    jac = jacobian(u)
    normal = jac.T @ jac
    damping = 1e-3 * float(np.max(np.diag(normal))) if normal.size else 0.0
    damping_limit = MAX_DAMPING_FACTOR * max(float(np.max(np.diag(normal))), 1.0)

    while iterations < max_iterations:
        gradient = jac.T @ r
        if cost == 0.0 or not np.any(gradient):
            converged = True
            message = "zero residual" if cost == 0.0 else "zero gradient"
            break

        accepted = False
        while True:
            try:
                step = -np.linalg.solve(normal + damping * np.eye(n), gradient)
            except np.linalg.LinAlgError:
                step = None
            if step is not None:
                trial = np.clip(u + step, lo_u, hi_u)
                taken = trial - u
                small = np.linalg.norm(taken) <= xtol * (np.linalg.norm(u) + xtol)
                r_trial = residual(trial)
                cost_trial = float(r_trial @ r_trial)
                if np.isfinite(cost_trial) and cost_trial <= cost:
                    u, r, cost = trial, r_trial, cost_trial
                    accepted = True
                    damping /= 10.0
                    if small:
                        converged = True
                        message = "relative step below xtol"
                    break
                if small:
                    # No representable improvement along the damped direction.
                    converged = True
                    message = "relative step below xtol"
                    break
            damping = max(damping * 10.0, np.finfo(float).tiny)
            if damping > damping_limit:
                message = "damping limit reached without improvement"
                break

        if accepted:
            iterations += 1
            history.append(math.sqrt(cost))
            logger.debug(
                f"LM iteration {iterations}: residual_norm={history[-1]:.6e} damping={damping:.3e}"
            )
        if converged or not accepted:
            break
        jac = jacobian(u)
        normal = jac.T @ jac

    params = u * scale
    covariance = _covariance(model, params, y, fd_step, scale)
    result = FitResult(
        parameters=params.tolist(),
        parameter_names=names,
        residual_norm=math.sqrt(cost),
        iterations=iterations,
        converged=converged,
        covariance=covariance,
        residual_history=history,
        message=message,
    )
    if converged:
        logger.info(
            f"Fit converged in {iterations} iterations, residual_norm={result.residual_norm:.4e}"
        )
    else:
        logger.warning(f"Fit did not converge after {iterations} iterations: {message}")
    return result


def _covariance(
    model: Model, params: np.ndarray, data: np.ndarray, fd_step: float, scale: np.ndarray
) -> Optional[List[List[float]]]:
    """s^2 (J^T J)^-1 with s^2 = ||r||^2/(m - n); None when m <= n."""
    m, n = data.size, params.size
    if m <= n:
        return None
    jac = numerical_jacobian(model, params, fd_step, scale)
    r = np.asarray(model(params), dtype=float) - data
    s2 = float(r @ r) / (m - n)
    return (s2 * np.linalg.pinv(jac.T @ jac)).tolist()
