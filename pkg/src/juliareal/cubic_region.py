"""The explicit parameter region for the family X^3 + A X + B.

Membership is the closed analytic condition A <= -3, B^2 <= -4A(A+3)^2/27.
The scan machinery cross-validates it cell by cell against the general
classifier and reports each cell's distance to the analytic boundary curve.
"""

from __future__ import annotations

import csv
import io
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .classifier import classify_real_julia
from .poly import Polynomial, discriminant


@dataclass(frozen=True)
class CubicParams:
    A: float
    B: float

    @property
    def a(self):
        """sqrt(-A/3); only defined on the A <= 0 half-plane."""
        if self.A > 0:
            raise ValueError("a = sqrt(-A/3) needs A <= 0")
        return math.sqrt(-self.A / 3.0)

    def poly(self):
        return Polynomial([self.B, self.A, 0.0, 1.0])

    def critical_interval_endpoints(self):
        """[B - 2a^3, B + 2a^3] for A <= 0."""
        cube = self.a ** 3
        return (self.B - 2.0 * cube, self.B + 2.0 * cube)


def region_bound(A):
    """The boundary value -4A(A+3)^2/27; B is admissible iff B^2 <= this."""
    return -4.0 * A * (A + 3.0) ** 2 / 27.0


def in_region(A, B) -> bool:
    """Closed inequalities, no tolerance: A <= -3 and B^2 <= -4A(A+3)^2/27."""
    return A <= -3.0 and B * B <= region_bound(A)


def b_zero(a) -> float:
    """Largest B >= 0 with (-3a^2, B) in the region, for a >= 1: 2a(a^2-1)."""
    if a < 1:
        raise ValueError("no admissible B for a < 1")
    return 2.0 * a * (a * a - 1.0)


def in_three_fixed_set(A, B) -> bool:
    """Closed set where X^3 + (A-1)X + B has three real roots (disc >= 0)."""
    return -4.0 * (A - 1.0) ** 3 - 27.0 * B * B >= 0.0


def fixed_point_trajectory(a, b_grid):
    """Rows (B, alpha1, alpha2, in_set) tracking the extreme real fixed points.

    alpha1/alpha2 are the smallest/largest real roots of f - X for
    f = X^3 - 3a^2 X + B; rows outside the three-real-fixed-point set carry
    in_set = False and NaN alphas instead of aborting the sweep.
    """
    A = -3.0 * a * a
    rows = []
    for B in b_grid:
        B = float(B)
        if not in_three_fixed_set(A, B):
            rows.append((B, math.nan, math.nan, False))
            continue
        r = np.roots([1.0, 0.0, A - 1.0, B])
        real = np.sort(r.real[np.abs(r.imag) <= 1e-7 * (1.0 + np.abs(r))])
        rows.append((B, float(real[0]), float(real[-1]), True))
    return rows


def boundary_distance(A, B, a_samples=2001, a_lo=-9.0):
    """Euclidean distance in the (A, B) plane to the curve B^2 = -4A(A+3)^2/27.

    The curve (A <= -3 branch, both signs of B) is sampled densely and the
    minimum point distance returned; accurate to the sampling resolution,
    which is all the scan band test needs.
    """
    As = np.linspace(a_lo, -3.0, a_samples)
    Bs = np.sqrt(np.maximum(region_bound(As), 0.0))
    d2 = np.minimum((As - A) ** 2 + (Bs - B) ** 2,
                    (As - A) ** 2 + (-Bs - B) ** 2)
    return float(math.sqrt(d2.min()))


@dataclass
class ScanSummary:
    cells: int
    disagreements: int
    max_disagree_distance: float
    rows: list       # (A, B, analytic, classifier, agree, boundary_distance)

    def to_csv(self, stream, header_comment=None):
        if header_comment:
            stream.write(f"# {header_comment}\r\n")
        w = csv.writer(stream, lineterminator="\r\n")
        w.writerow(["A", "B", "analytic", "classifier", "agree",
                    "boundary_distance"])
        for A, B, an, cl, ag, dist in self.rows:
            w.writerow([f"{A:.6g}", f"{B:.6g}", int(an), int(cl), int(ag),
                        f"{dist:.6g}"])

    def to_pgm(self, a_count, b_count):
        """P5 bitmap, rows over A, columns over B: 255 in-region, 0 out, 128 disagree."""
        img = np.zeros((a_count, b_count), dtype=np.uint8)
        for idx, (A, B, an, cl, ag, dist) in enumerate(self.rows):
            i, j = divmod(idx, b_count)
            img[i, j] = 128 if not ag else (255 if an else 0)
        buf = io.BytesIO()
        buf.write(f"P5\n{b_count} {a_count}\n255\n".encode())
        buf.write(img.tobytes())
        return buf.getvalue()


def _worker_count():
    env = os.environ.get("JULIAREAL_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _scan_row(args):
    A, b_vals, cross_check = args
    out = []
    for B in b_vals:
        analytic = in_region(A, B)
        verdict = classify_real_julia(
            Polynomial([B, A, 0.0, 1.0]), cross_check=cross_check).julia_real
        out.append((A, B, analytic, verdict))
    return out


def region_scan(a_range, b_range, step, cross_check=True) -> ScanSummary:
    """Grid cross-validation of the analytic region against the classifier.

    a_range/b_range are inclusive (lo, hi) bounds stepped by `step`.  Rows are
    emitted in (A, B) lexicographic order regardless of worker count.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    a_lo, a_hi = a_range
    b_lo, b_hi = b_range
    a_vals = np.arange(round((a_hi - a_lo) / step) + 1) * step + a_lo
    b_vals = np.arange(round((b_hi - b_lo) / step) + 1) * step + b_lo

    tasks = [(float(A), [float(b) for b in b_vals], cross_check) for A in a_vals]
    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_row = list(pool.map(_scan_row, tasks))
    else:
        per_row = [_scan_row(t) for t in tasks]

    # distance computation is vectorized over the whole grid at once
    As = np.linspace(-9.0, -3.0, 2001)
    Bs = np.sqrt(np.maximum(region_bound(As), 0.0))
    rows = []
    disagreements = 0
    max_dist = 0.0
    for row in per_row:
        for A, B, analytic, verdict in row:
            d2 = np.minimum((As - A) ** 2 + (Bs - B) ** 2,
                            (As - A) ** 2 + (Bs + B) ** 2)
            dist = float(math.sqrt(d2.min()))
            agree = analytic == verdict
            if not agree:
                disagreements += 1
                max_dist = max(max_dist, dist)
            rows.append((A, B, analytic, verdict, agree, dist))
    return ScanSummary(len(rows), disagreements, max_dist, rows)
