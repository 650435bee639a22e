"""Half-integer quantum number helpers shared by the physics modules."""

from __future__ import annotations

from fractions import Fraction
from typing import List, Union

HalfIntegerLike = Union[int, float, str, Fraction]


class AngularMomentumError(ValueError):
    """Raised when quantum numbers are invalid or violate coupling rules."""

    pass


def half_integer(value: HalfIntegerLike) -> Fraction:
    """Coerce a value to an exact half-integer.

    Accepts ints, floats with an exact half-integer value, strings such as
    ``"5/2"`` or ``"2.5"``, and Fractions.

    Raises:
        AngularMomentumError: If the value is not an integer or half-integer.
    """
    try:
        if isinstance(value, float):
            frac = Fraction(value).limit_denominator(2)
            if float(frac) != value:
                raise AngularMomentumError(f"{value!r} is not a half-integer")
        else:
            frac = Fraction(str(value).strip()) if isinstance(value, str) else Fraction(value)
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise AngularMomentumError(f"Cannot read {value!r} as a half-integer") from e
    if frac.denominator not in (1, 2):
        raise AngularMomentumError(f"{value!r} is not a half-integer")
    return frac


def projections(j: HalfIntegerLike) -> List[Fraction]:
    """Return the magnetic projections -j, -j+1, ..., j in ascending order."""
    jj = half_integer(j)
    if jj < 0:
        raise AngularMomentumError(f"Angular momentum must be non-negative, got {jj}")
    return [-jj + k for k in range(int(2 * jj) + 1)]


def coupled_values(j1: HalfIntegerLike, j2: HalfIntegerLike) -> List[Fraction]:
    """Return |j1-j2|, ..., j1+j2 (the triangle rule)."""
    a, b = half_integer(j1), half_integer(j2)
    lo, hi = abs(a - b), a + b
    return [lo + k for k in range(int(hi - lo) + 1)]


def format_half_integer(value: Fraction) -> str:
    """Render ``Fraction(5, 2)`` as ``"5/2"`` and ``Fraction(1)`` as ``"1"``."""
    return str(half_integer(value))
