"""Brute-force dynamical ground truth.

Escape-time membership and renders, backward-orbit trees via the batched
root solver, empirical preimage measures with a Kolmogorov-Smirnov distance,
and exact (big-rational) orbit-status certification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .poly import Polynomial
from .roots import RootFindingError, roots_shifted

DEFAULT_ORBIT_CAP = 3 ** 10


class OrbitCapError(ValueError):
    """Backward-orbit level would exceed the point cap."""


class ExceptionalPointError(ValueError):
    """Base point has a one-point preimage set; measures degenerate."""


def escape_radius(p: Polynomial) -> float:
    """R with |z| > R implying |p(z)| >= 2|z| (and hence monotone escape)."""
    q = p.to_float()
    if q.degree < 2:
        raise ValueError("degree >= 2 required")
    return max(1.0, (2.0 + sum(abs(float(c)) for c in q.coeffs[:-1])) / abs(float(q.lead)))


def filled_julia_member(p: Polynomial, z, max_iter=200):
    """'escaped(k)' if the orbit leaves the escape radius at step k <= budget,
    else 'inside' -- which only means "did not escape within budget"."""
    q = p.to_float()
    radius = escape_radius(q)
    v = complex(z)
    for k in range(max_iter + 1):
        if abs(v) > radius:
            return ("escaped", k)
        v = q(v)
    return ("inside", None)


def render_filled_julia(p: Polynomial, window, resolution, max_iter=100):
    """Escape-time byte grid over a complex rectangle.

    window = (re_min, re_max, im_min, im_max); resolution = (width, height).
    255 = not escaped within budget, lower bytes = earlier escape.  Row 0 is
    the top of the window (largest imaginary part).
    """
    re_min, re_max, im_min, im_max = window
    width, height = resolution
    if width < 1 or height < 1:
        raise ValueError("positive resolution required")
    q = p.to_float()
    radius = escape_radius(q)
    xs = np.linspace(re_min, re_max, width)
    ys = np.linspace(im_max, im_min, height)
    z = xs[None, :] + 1j * ys[:, None]
    steps = np.full(z.shape, -1, dtype=np.int32)
    active = np.abs(z) <= radius
    steps[~active] = 0
    v = z.copy()
    for k in range(max_iter):
        v[active] = q.eval_many(v[active])
        escaped = active & (np.abs(v) > radius)
        steps[escaped] = k + 1
        active &= ~escaped
        if not active.any():
            break
    out = np.where(steps < 0, 255,
                   np.minimum(254, (255.0 * steps / max_iter)).astype(np.int32))
    return out.astype(np.uint8)


@dataclass
class BackwardOrbit:
    """Level-n preimage multiset of a base point (multiplicities kept)."""

    base: complex
    depth: int
    points: np.ndarray          # complex, d^depth entries
    poly: Polynomial

    def residuals(self):
        """|f^n(point) - base| by n-fold forward evaluation."""
        q = self.poly.to_float()
        v = self.points.copy()
        for _ in range(self.depth):
            v = q.eval_many(v)
        return np.abs(v - self.base)


def backward_orbit(p: Polynomial, alpha, depth, cap=DEFAULT_ORBIT_CAP) -> BackwardOrbit:
    """Full preimage tree level `depth` via iterated root extraction."""
    q = p.to_float()
    d = q.degree
    if d < 1:
        raise ValueError("degree >= 1 required")
    if d ** depth > cap:
        raise OrbitCapError(f"{d}^{depth} points exceeds cap {cap}")
    level = np.array([complex(alpha)], dtype=complex)
    for n in range(depth):
        try:
            level = roots_shifted(q, level).ravel()
        except RootFindingError as err:
            raise RootFindingError(
                f"root finding failed expanding level {n + 1}", best=err.best) from err
        # deterministic order for reproducible measures
        level = level[np.lexsort((level.imag, level.real))]
    return BackwardOrbit(complex(alpha), depth, level, q)


def max_imag_stat(orbit: BackwardOrbit) -> float:
    """Largest |Im| over the orbit; nonzero falsifies total realness."""
    if orbit.points.size == 0:
        return 0.0
    return float(np.abs(orbit.points.imag).max())


def check_non_exceptional(p: Polynomial, alpha, tol=1e-9):
    """Refuse measure work when f^-1(alpha) is a single point (as a set)."""
    q = p.to_float()
    roots = roots_shifted(q, [complex(alpha)])[0]
    scale = 1.0 + float(np.abs(roots).max())
    if q.degree >= 2 and (np.abs(roots - roots[0]) <= max(tol, 1e-6) * scale).all():
        raise ExceptionalPointError(
            f"f^-1({alpha}) is the single point {roots[0]}; "
            "equidistribution does not apply")


@dataclass
class EmpiricalMeasure:
    """Uniform-weight sample measure; comparisons use real parts."""

    samples: np.ndarray
    has_nonreal: bool = False

    @classmethod
    def from_orbit(cls, orbit: BackwardOrbit, nonreal_tol=1e-9):
        pts = orbit.points
        return cls(samples=pts, has_nonreal=bool(max_imag_stat(orbit) > nonreal_tol))

    @property
    def real_parts(self):
        return np.sort(self.samples.real.astype(float))

    def cdf_distance(self, cdf):
        """Sup distance between the empirical CDF and a callable CDF."""
        x = self.real_parts
        n = x.size
        fx = np.asarray([cdf(v) for v in x], dtype=float)
        upper = np.abs(np.arange(1, n + 1) / n - fx)
        lower = np.abs(np.arange(0, n) / n - fx)
        return float(np.maximum(upper, lower).max())


def empirical_cdf_distance(m1: EmpiricalMeasure, m2: EmpiricalMeasure) -> float:
    """Two-sample Kolmogorov-Smirnov sup-distance of real-part CDFs."""
    a = m1.real_parts
    b = m2.real_parts
    if a.size == 0 or b.size == 0:
        raise ValueError("empty measure")
    grid = np.concatenate([a, b])
    grid.sort(kind="mergesort")
    fa = np.searchsorted(a, grid, side="right") / a.size
    fb = np.searchsorted(b, grid, side="right") / b.size
    return float(np.abs(fa - fb).max())


# ---------------------------------------------------------------------------
# exact orbit-status certification
# ---------------------------------------------------------------------------

@dataclass
class OrbitStatus:
    tag: str                       # periodic | preperiodic | nonperiodic | undecided
    period: int | None = None
    tail: int | None = None
    reason: str | None = None      # escape / denominator-growth / height-growth
    prefix: list = field(default_factory=list)

    @property
    def counts_as_nonperiodic(self):
        """Nonperiodic in the strict sense: never returns to itself."""
        return self.tag == "nonperiodic" or self.tag == "preperiodic"

    def to_json(self):
        out = {"tag": self.tag}
        if self.period is not None:
            out["period"] = self.period
        if self.tail is not None:
            out["tail"] = self.tail
        if self.reason is not None:
            out["reason"] = self.reason
        out["prefix"] = [f"{v.numerator}/{v.denominator}" for v in self.prefix]
        return out


_PREFIX_KEEP = 8


def orbit_status(p: Polynomial, alpha, max_steps=64, bit_cap=10 ** 6) -> OrbitStatus:
    """Exact orbit classification for rational alpha under an exact polynomial.

    periodic(k): alpha revisits itself after exactly k steps.
    preperiodic(tail, k): some later value repeats.
    nonperiodic: certified by monotone escape past the escape radius, or --
    for monic integer polynomials -- by exact q^(d^k) denominator growth.
    Anything else within the step budget is 'undecided'.
    """
    if not p.is_exact:
        raise ValueError("exact rational coefficients required")
    q = p.to_exact()
    d = q.degree
    alpha = Fraction(alpha)
    prefix = [alpha]

    # integer coefficients with lead coprime to q: the orbit denominators
    # are exactly q^(d^k), strictly increasing, so no value ever repeats
    int_coeffs = all(Fraction(c).denominator == 1 for c in q.coeffs)
    if (int_coeffs and alpha.denominator > 1
            and math.gcd(int(q.lead), alpha.denominator) == 1):
        x = alpha
        for _ in range(min(3, max_steps)):
            x = q(x)
            prefix.append(x)
        return OrbitStatus(
            "nonperiodic",
            reason=f"denominator-growth: denominators are q^(d^k) with "
                   f"q={alpha.denominator}, d={d}, strictly increasing",
            prefix=prefix[:_PREFIX_KEEP])

    radius = Fraction(escape_radius(q))
    seen = {alpha: 0}
    x = alpha
    for k in range(1, max_steps + 1):
        x = q(x)
        if len(prefix) < _PREFIX_KEEP:
            prefix.append(x)
        if x in seen:
            j = seen[x]
            if j == 0 and x == alpha:
                return OrbitStatus("periodic", period=k, prefix=prefix)
            return OrbitStatus("preperiodic", tail=j, period=k - j, prefix=prefix)
        seen[x] = k
        if abs(x) > radius:
            return OrbitStatus(
                "nonperiodic",
                reason=f"escape: |f^{k}(alpha)| = {float(abs(x)):.6g} exceeds "
                       f"escape radius {float(radius):.6g}",
                prefix=prefix)
        if x.numerator.bit_length() + x.denominator.bit_length() > bit_cap:
            break
    return OrbitStatus("undecided", prefix=prefix)
