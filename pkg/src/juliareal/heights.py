"""Weil and canonical heights for rational points under polynomial maps.

Everything runs on exact big-rational orbits; floating iterates are useless
at the depths where the height limit stabilizes.  math.log on Python ints is
correctly rounded, which keeps h(f^n(x))/d^n accurate to the last few ulps.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .poly import Polynomial

DEFAULT_BIT_CAP = 10 ** 6


class BitSizeCapError(ValueError):
    """Orbit value too large; retry with a smaller depth."""


def weil_height(x) -> float:
    """log max(|num|, |den|) of x in lowest terms; h(0) = 0."""
    x = Fraction(x)
    return math.log(max(abs(x.numerator), x.denominator))


def _exact_orbit_point(p: Polynomial, x, n, bit_cap):
    q = p.to_exact()
    d = q.degree
    v = Fraction(x)
    for k in range(n):
        # the next value has about d times the bits; refuse before paying
        # for a multiplication that would blow the cap anyway
        bits = v.numerator.bit_length() + v.denominator.bit_length()
        if bits > bit_cap or d * bits > 4 * bit_cap:
            raise BitSizeCapError(
                f"orbit value at step {k + 1} would exceed {bit_cap} bits; "
                f"use a depth below {k + 1}")
        v = Fraction(q(v))
        if v.numerator.bit_length() + v.denominator.bit_length() > bit_cap:
            raise BitSizeCapError(
                f"orbit value at step {k + 1} exceeds {bit_cap} bits; "
                f"use a depth below {k + 1}")
    return v


def height_constant(p: Polynomial) -> float:
    """Telescoping constant C with |h(f(y)) - d h(y)| <= C for all rational y.

    Crude but explicit: log(1 + sum |c_i|) + d log 2 from clearing
    denominators in the two-variable homogenization.  Used as an error bar
    only.
    """
    q = p.to_exact()
    total = sum(abs(Fraction(c)) for c in q.coeffs)
    return math.log(1.0 + float(total)) + q.degree * math.log(2.0)


def canonical_height(p: Polynomial, x, n) -> tuple[float, float]:
    """(h(f^n(x)) / d^n, C_f / d^n) for exact rational x; degree >= 2."""
    q = p.to_exact()
    if q.degree < 2:
        raise ValueError("degree >= 2 required")
    v = _exact_orbit_point(q, x, n, DEFAULT_BIT_CAP)
    dn = q.degree ** n
    return weil_height(v) / dn, height_constant(q) / dn


def functional_equation_residual(p: Polynomial, x, n) -> float:
    """|h^(f(x), n-1) - d h^(x, n)| with aligned terminal orbit point.

    Both estimates end at f^n(x), so the residual is pure log rounding.
    """
    if n < 1:
        raise ValueError("depth >= 1 required")
    q = p.to_exact()
    fx = Fraction(q(Fraction(x)))
    left, _ = canonical_height(q, fx, n - 1)
    right, _ = canonical_height(q, x, n)
    return abs(left - q.degree * right)
