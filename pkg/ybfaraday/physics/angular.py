"""Exact angular-momentum coupling for the 1S0(F=I) -> 1P1(F') transition.

Squared Clebsch-Gordan coefficients are computed with the closed-form
(Racah) factorial sum in exact integer / rational arithmetic. Only squared
values are exposed, so no phase convention leaks out.

Strength convention: the ground state |F=I, m> absorbs a photon of
polarization q (carried by the J'=1 electronic angular momentum) and goes to
|F', m+q>, with amplitude <1, q; I, m | F', m+q>.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from math import factorial, gcd
from typing import Dict, List, Tuple

from ybfaraday.models.angular import Polarization, StrengthTable
from ybfaraday.utils.quantum import (
    AngularMomentumError,
    HalfIntegerLike,
    coupled_values,
    half_integer,
    projections,
)

logger = logging.getLogger(__name__)

# Photon angular momentum carried into the 1P1 (J'=1) manifold.
PHOTON_J = Fraction(1)

# Stretched-state coefficients as printed alongside the spin-5/2 rotation formula
# (over a common denominator of 84); kept only for comparison output.
PRINTED_STRETCHED_52: Dict[Fraction, int] = {
    Fraction(7, 2): 10,
    Fraction(3, 2): -7,
    Fraction(5, 2): -6,
}


def _is_int(x: Fraction) -> bool:
    return x.denominator == 1


@lru_cache(maxsize=4096)
def _cg_sq(j1: Fraction, m1: Fraction, j2: Fraction, m2: Fraction, j: Fraction) -> Fraction:
    m = m1 + m2
    if abs(m) > j:
        return Fraction(0)

    # Integer arguments of the factorials.
    a = j1 + j2 - j
    b = j1 - j2 + j
    c = -j1 + j2 + j
    d = j1 + j2 + j + 1
    for x in (a, b, c, d):
        if not _is_int(x) or x < 0:
            raise AngularMomentumError(
                f"({j1}, {j2}) cannot couple to J={j}: triangle rule violated"
            )

    prefactor = Fraction(
        (2 * j + 1) * factorial(int(a)) * factorial(int(b)) * factorial(int(c)),
        factorial(int(d)),
    )
    prefactor *= Fraction(
        factorial(int(j + m))
        * factorial(int(j - m))
        * factorial(int(j1 - m1))
        * factorial(int(j1 + m1))
        * factorial(int(j2 - m2))
        * factorial(int(j2 + m2))
    )

    kmin = int(max(0, j2 - j - m1, j1 + m2 - j))
    kmax = int(min(a, j1 - m1, j2 + m2))
    total = Fraction(0)
    for k in range(kmin, kmax + 1):
        denom = (
            factorial(k)
            * factorial(int(a) - k)
            * factorial(int(j1 - m1) - k)
            * factorial(int(j2 + m2) - k)
            * factorial(int(j - j2 + m1) + k)
            * factorial(int(j - j1 - m2) + k)
        )
        total += Fraction((-1) ** k, denom)
    # prefactor is the square of the square-root factor, so the squared
    # coefficient is prefactor * total**2.
    return prefactor * total * total


def clebsch_gordan_sq(
    j1: HalfIntegerLike,
    m1: HalfIntegerLike,
    j2: HalfIntegerLike,
    m2: HalfIntegerLike,
    J: HalfIntegerLike,
) -> Fraction:
    """Return |<j1, j2; m1, m2 | j1, j2; J, m1+m2>|^2 as an exact rational.

    Args:
        j1, m1: First angular momentum and its projection.
        j2, m2: Second angular momentum and its projection.
        J: Total angular momentum.

    Returns:
        Squared coefficient in [0, 1]; 0 when |m1+m2| > J.

    Raises:
        AngularMomentumError: If a projection exceeds its angular momentum,
            j - m is not an integer, or J violates the triangle rule.

    Example:
        >>> clebsch_gordan_sq(1, 1, "1/2", "-1/2", "3/2")
        Fraction(1, 3)
    """
    j1f, m1f, j2f, m2f, jf = (half_integer(v) for v in (j1, m1, j2, m2, J))
    for jj, mm in ((j1f, m1f), (j2f, m2f)):
        if jj < 0 or abs(mm) > jj or not _is_int(jj - mm):
            raise AngularMomentumError(f"invalid projection m={mm} for j={jj}")
    if not (abs(j1f - j2f) <= jf <= j1f + j2f) or not _is_int(j1f + j2f - jf):
        raise AngularMomentumError(
            f"J={jf} not allowed for j1={j1f}, j2={j2f} (triangle rule)"
        )
    return _cg_sq(j1f, m1f, j2f, m2f, jf)


def excited_levels(nuclear_spin: HalfIntegerLike) -> List[Fraction]:
    """Hyperfine levels F' of 1P1 for nuclear spin I."""
    return coupled_values(PHOTON_J, nuclear_spin)


def transition_strength(
    nuclear_spin: HalfIntegerLike, m: HalfIntegerLike, q: int, f_prime: HalfIntegerLike
) -> Fraction:
    """Squared amplitude from |I, m> with a q-photon into |F', m+q>."""
    spin, mm, fp = half_integer(nuclear_spin), half_integer(m), half_integer(f_prime)
    if abs(mm + q) > fp:
        return Fraction(0)
    return clebsch_gordan_sq(PHOTON_J, q, spin, mm, fp)


@lru_cache(maxsize=64)
def _table(spin: Fraction, q: int) -> StrengthTable:
    entries: Dict[Tuple[Fraction, Fraction], Fraction] = {}
    for m in projections(spin):
        for fp in excited_levels(spin):
            entries[(m, fp)] = transition_strength(spin, m, q, fp)
    return StrengthTable(
        nuclear_spin=spin, polarization=Polarization.from_q(q), entries=entries
    )


def sigma_strength_table(nuclear_spin: HalfIntegerLike, q: int) -> StrengthTable:
    """Strength table for q-polarized light (q = +1, -1 or 0).

    Args:
        nuclear_spin: Nuclear spin I of the isotope.
        q: Photon projection, +1 for sigma+, -1 for sigma-, 0 for pi.

    Returns:
        StrengthTable with an entry for every (m, F') pair.
    """
    if q not in (-1, 0, 1):
        raise AngularMomentumError(f"q must be -1, 0 or +1, got {q}")
    return _table(half_integer(nuclear_spin), q)


def pi_line_strengths(nuclear_spin: HalfIntegerLike) -> Dict[Fraction, Fraction]:
    """Population-averaged pi-line strength per F': (2F'+1)/(3(2I+1)).

    The values sum to 1 over F'.
    """
    spin = half_integer(nuclear_spin)
    if spin < 0:
        raise AngularMomentumError(f"nuclear spin must be non-negative, got {spin}")
    return {fp: Fraction(int(2 * fp + 1), 3 * int(2 * spin + 1)) for fp in excited_levels(spin)}


def decay_branching(
    nuclear_spin: HalfIntegerLike, f_prime: HalfIntegerLike, m_prime: HalfIntegerLike
) -> Dict[Fraction, Fraction]:
    """Spontaneous-decay branching of |F', m'> into ground sublevels m.

    Each branch is proportional to the absorption strength of the reverse
    transition; the ratios are normalized to sum to 1.
    """
    spin, fp, mp = half_integer(nuclear_spin), half_integer(f_prime), half_integer(m_prime)
    if abs(mp) > fp:
        raise AngularMomentumError(f"m'={mp} does not exist in F'={fp}")
    weights: Dict[Fraction, Fraction] = {}
    for q in (-1, 0, 1):
        m = mp - q
        if abs(m) <= spin:
            w = transition_strength(spin, m, q, fp)
            if w:
                weights[m] = weights.get(m, Fraction(0)) + w
    total = sum(weights.values(), Fraction(0))
    if total == 0:
        raise AngularMomentumError(f"|F'={fp}, m'={mp}> has no decay channel for I={spin}")
    return {m: w / total for m, w in sorted(weights.items())}


def excited_g_ratio(nuclear_spin: HalfIntegerLike, f_prime: HalfIntegerLike) -> Fraction:
    """g_F'/g_J' for J'=1 with the nuclear moment neglected."""
    spin, fp = half_integer(nuclear_spin), half_integer(f_prime)
    if fp == 0:
        return Fraction(0)
    return (fp * (fp + 1) + 2 - spin * (spin + 1)) / (2 * fp * (fp + 1))


def stretched_coefficients(
    nuclear_spin: HalfIntegerLike, source: str = "derived"
) -> Dict[Fraction, Fraction]:
    """Dispersive-function coefficients of the stretched-state rotation.

    For populations entirely in m = +I the rotation is
    (Gamma/8) * sum_F' [S+(I, F') - S-(I, F')] g^(F') * N*sigma0*L. The
    returned map holds (S+ - S-) * D / 8 per F', with D the smallest integer
    making every value integral (``stretched_denominator``). For I=5/2 the
    derived set is {7/2: 10, 5/2: -3, 3/2: -7} over D=84, for I=1/2 it is
    {3/2: 1, 1/2: -1} over D=12.

    Args:
        nuclear_spin: Nuclear spin I.
        source: ``"derived"`` (from the Clebsch-Gordan oracle) or
            ``"printed"`` (only defined for I = 5/2).

    Returns:
        Map F' -> integer-valued Fraction coefficient over ``stretched_denominator(I)``.
    """
    spin = half_integer(nuclear_spin)
    if source == "printed":
        if spin != Fraction(5, 2):
            raise AngularMomentumError("printed coefficients exist only for I = 5/2")
        return {fp: Fraction(c) for fp, c in PRINTED_STRETCHED_52.items()}
    if source != "derived":
        raise AngularMomentumError(f"unknown coefficient source {source!r}")

    denominator = stretched_denominator(spin)
    plus = sigma_strength_table(spin, 1)
    minus = sigma_strength_table(spin, -1)
    return {
        fp: (plus.entry(spin, fp) - minus.entry(spin, fp)) * denominator / 8
        for fp in excited_levels(spin)
    }


def stretched_denominator(nuclear_spin: HalfIntegerLike) -> int:
    """Smallest D such that (D/8)*(S+ - S-) is integral for every F' (84 for I=5/2)."""
    spin = half_integer(nuclear_spin)
    plus = sigma_strength_table(spin, 1)
    minus = sigma_strength_table(spin, -1)
    lcm = 1
    for fp in excited_levels(spin):
        den = ((plus.entry(spin, fp) - minus.entry(spin, fp)) / 8).denominator
        lcm = lcm * den // gcd(lcm, den)
    return lcm


def format_table(table: StrengthTable) -> str:
    """Render a strength table with exact fractions, one ground sublevel per row."""
    f_primes = table.f_primes
    header = ["m_I"] + [f"F'={fp}" for fp in f_primes]
    rows = [header]
    for m in table.m_values:
        rows.append([str(m)] + [str(table.entry(m, fp)) for fp in f_primes])
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = [
        f"I={table.nuclear_spin} polarization={table.polarization.value}",
    ]
    for row in rows:
        lines.append("  ".join(cell.rjust(w) for cell, w in zip(row, widths)))
    return "\n".join(lines)
