"""Dense univariate polynomials over floats or exact rationals.

One coefficient representation serves both domains: floats for the numeric
pipeline, ``fractions.Fraction`` (or int) for exact orbit work.  Coefficients
are stored in ascending power order, c0 .. cd, trailing zeros trimmed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

# Coefficient comparisons throughout the package: relative 1e-9 with an
# absolute floor of 1e-12.
REL_TOL = 1e-9
ABS_TOL = 1e-12

# Composition/iteration refuses to build anything bigger than this many
# coefficients.
DEGREE_CAP = 10**6

_EXACT_TYPES = (int, Fraction)


class DegreeCapError(ValueError):
    """Raised when iteration would exceed the coefficient-count cap."""


def close(a, b, rel=REL_TOL, abs_=ABS_TOL):
    """Scalar comparison with relative tolerance and absolute floor."""
    return abs(a - b) <= max(abs_, rel * max(abs(a), abs(b)))


def _trim(coeffs):
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


class Polynomial:
    """Immutable dense polynomial; exact iff all coefficients are int/Fraction."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        if len(coeffs) == 0:
            coeffs = [0]
        object.__setattr__(self, "coeffs", tuple(_trim(coeffs)))

    def __setattr__(self, *a):
        raise AttributeError("Polynomial is immutable")

    # -- basic structure ---------------------------------------------------
    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1]

    @property
    def is_zero(self):
        return self.degree == 0 and self.coeffs[0] == 0

    @property
    def is_exact(self):
        return all(isinstance(c, _EXACT_TYPES) for c in self.coeffs)

    def to_float(self):
        return Polynomial([float(c) for c in self.coeffs])

    def to_exact(self):
        return Polynomial([c if isinstance(c, _EXACT_TYPES) else Fraction(c)
                           for c in self.coeffs])

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)})"

    # -- evaluation --------------------------------------------------------
    def __call__(self, z):
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * z + c
        return acc

    def eval_many(self, z):
        """Vectorized Horner on a numpy array (float coefficients)."""
        z = np.asarray(z)
        acc = np.full(z.shape, complex(self.coeffs[-1]) if np.iscomplexobj(z)
                      else float(self.coeffs[-1]), dtype=z.dtype)
        for c in reversed(self.coeffs[:-1]):
            acc = acc * z + (complex(c) if np.iscomplexobj(z) else float(c))
        return acc

    # -- arithmetic --------------------------------------------------------
    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return Polynomial([x + y for x, y in zip(a, b)])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    __radd__ = __add__

    def __mul__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if (len(a) + len(b) > 128 and not self.is_exact and not other.is_exact):
            return Polynomial(list(np.convolve(np.asarray(a, dtype=float),
                                               np.asarray(b, dtype=float))))
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return Polynomial(out)

    __rmul__ = __mul__

    @staticmethod
    def _coerce(v):
        if isinstance(v, Polynomial):
            return v
        return Polynomial([v])

    # -- calculus / composition -------------------------------------------
    def derivative(self):
        if self.degree == 0:
            return Polynomial([0 * self.coeffs[0]])
        return Polynomial([i * self.coeffs[i] for i in range(1, len(self.coeffs))])

    def compose(self, inner):
        """self(inner(X)) by Horner over the outer coefficients."""
        if (self.degree * inner.degree) + 1 > DEGREE_CAP:
            raise DegreeCapError(
                f"composition would need {self.degree * inner.degree + 1} "
                f"coefficients (cap {DEGREE_CAP})")
        acc = Polynomial([self.coeffs[-1]])
        for c in reversed(self.coeffs[:-1]):
            acc = acc * inner + Polynomial([c])
        return acc

    def iterate(self, n):
        """n-fold self-composition, n >= 1."""
        if n < 1:
            raise ValueError("iteration count must be >= 1")
        if self.degree ** n + 1 > DEGREE_CAP:
            raise DegreeCapError(
                f"degree {self.degree}^{n} exceeds coefficient cap {DEGREE_CAP}")
        out = self
        for _ in range(n - 1):
            out = self.compose(out)
        return out

    # -- exact division (Fraction/int coefficients) ------------------------
    def divmod_exact(self, other):
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = [Fraction(c) for c in self.coeffs]
        div = [Fraction(c) for c in other.coeffs]
        dq = len(rem) - len(div)
        if dq < 0:
            return Polynomial([Fraction(0)]), Polynomial(rem)
        quo = [Fraction(0)] * (dq + 1)
        for k in range(dq, -1, -1):
            q = rem[k + len(div) - 1] / div[-1]
            quo[k] = q
            if q:
                for j, d in enumerate(div):
                    rem[k + j] -= q * d
        return Polynomial(quo), Polynomial(rem[:len(div) - 1] or [Fraction(0)])

    def gcd_exact(self, other):
        """Monic gcd over the rationals."""
        a, b = self.to_exact(), other.to_exact()
        while not b.is_zero:
            a, b = b, a.divmod_exact(b)[1]
        if a.is_zero:
            return a
        lead = a.lead
        return Polynomial([c / lead for c in a.coeffs])


# -- affine conjugation ----------------------------------------------------

@dataclass(frozen=True)
class AffineMap:
    """x -> scale*x + shift with scale != 0."""

    scale: float
    shift: float = 0.0

    def __post_init__(self):
        if self.scale == 0:
            raise ValueError("affine map needs nonzero scale")

    def __call__(self, x):
        return self.scale * x + self.shift

    def inverse(self):
        return AffineMap(1 / self.scale, -self.shift / self.scale)

    def as_poly(self):
        return Polynomial([self.shift, self.scale])

    @staticmethod
    def identity():
        return AffineMap(1.0, 0.0)


def conjugate(p: Polynomial, phi: AffineMap) -> Polynomial:
    """phi o p o phi^{-1}."""
    inner = p.compose(phi.inverse().as_poly())
    return phi.as_poly().compose(inner)


def cubic_normal_form(p: Polynomial):
    """Conjugate a cubic into +-X^3 + A X + B.

    Returns (normal form, phi) with conjugate(p, phi) equal to the normal
    form; the X^2 coefficient is zeroed exactly and the cubic coefficient
    snapped to +-1.
    """
    if p.degree != 3:
        raise ValueError(f"cubic expected, got degree {p.degree}")
    c3 = float(p.coeffs[3])
    c2 = float(p.coeffs[2])
    h = math.sqrt(abs(c3))
    k = h * c2 / (3.0 * c3)
    phi = AffineMap(h, k)
    g = conjugate(p.to_float(), phi)
    coeffs = [float(c) for c in g.coeffs] + [0.0] * (4 - len(g.coeffs))
    # residual quadratic term / lead deviation is pure rounding; snap it
    coeffs[2] = 0.0
    coeffs[3] = math.copysign(1.0, c3)
    return Polynomial(coeffs), phi


# -- resultants and discriminants -----------------------------------------

def _det_exact(rows):
    """Fraction-free Bareiss determinant of a square matrix of Fractions."""
    n = len(rows)
    m = [[Fraction(x) for x in row] for row in rows]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def sylvester_resultant(a, b):
    """Resultant of two coefficient sequences (ascending order).

    Degrees are taken from the sequence lengths, so padded sequences give the
    resultant of the corresponding homogeneous forms.
    """
    m = len(a) - 1
    n = len(b) - 1
    if m == 0 and n == 0:
        return 1
    ar = list(reversed(a))
    br = list(reversed(b))
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + ar + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + br + [0] * (size - n - 1 - i))
    exact = all(isinstance(x, _EXACT_TYPES + (Fraction,)) for x in a + b)
    if exact:
        return _det_exact(rows)
    return float(np.linalg.det(np.array(rows, dtype=float)))


def resultant(p: Polynomial, q: Polynomial):
    return sylvester_resultant(list(p.coeffs), list(q.coeffs))


def discriminant(p: Polynomial):
    """Discriminant, with closed forms for degrees 2 and 3.

    Cubic sign convention: disc > 0 means three distinct real roots,
    disc < 0 one real root, disc = 0 a repeated root.
    """
    d = p.degree
    if d < 2:
        raise ValueError("discriminant needs degree >= 2")
    c = p.coeffs
    if d == 2:
        return c[1] * c[1] - 4 * c[2] * c[0]
    if d == 3:
        a3, a2, a1, a0 = c[3], c[2], c[1], c[0]
        return (18 * a3 * a2 * a1 * a0 - 4 * a2**3 * a0 + a2**2 * a1**2
                - 4 * a3 * a1**3 - 27 * a3**2 * a0**2)
    res = resultant(p, p.derivative())
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    if p.is_exact:
        return sign * Fraction(res) / Fraction(p.lead)
    return sign * res / p.lead


# -- serialization ---------------------------------------------------------

def coeff_to_json(c):
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return c


def coeff_from_json(v):
    if isinstance(v, str):
        return Fraction(v)
    return v


def poly_to_json(p: Polynomial):
    return [coeff_to_json(c) for c in p.coeffs]


def poly_from_json(values):
    return Polynomial([coeff_from_json(v) for v in values])
