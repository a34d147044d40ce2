import math
from fractions import Fraction

import numpy as np
import pytest

from juliareal.orbit import (BackwardOrbit, EmpiricalMeasure, ExceptionalPointError,
                             OrbitCapError, backward_orbit, check_non_exceptional,
                             empirical_cdf_distance, escape_radius,
                             filled_julia_member, max_imag_stat, orbit_status,
                             render_filled_julia)
from juliareal.poly import Polynomial


def P(*coeffs):
    return Polynomial(list(coeffs))


CHEB = P(-2.0, 0.0, 1.0)          # x^2 - 2
BASILICA = P(-1.0, 0.0, 1.0)      # x^2 - 1


def arcsine_cdf(x):
    """CDF of the x = 2cos(theta) pushforward of uniform theta; validated
    in TestArcsineOracle before anything else relies on it."""
    if x <= -2:
        return 0.0
    if x >= 2:
        return 1.0
    return 0.5 + math.asin(x / 2) / math.pi


class TestEscapeRadius:
    def test_known_values(self):
        assert escape_radius(P(0.0, 0.0, 1.0)) == 2.0
        assert escape_radius(CHEB) == 4.0
        assert escape_radius(P(0.0, -3.0, 0.0, 1.0)) == 5.0

    def test_escape_property(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            p = Polynomial(list(rng.uniform(-2, 2, 4)))
            if abs(p.lead) < 0.2:
                continue
            R = escape_radius(p)
            for ang in np.linspace(0, 2 * math.pi, 7):
                z = (R + 0.01) * complex(math.cos(ang), math.sin(ang))
                assert abs(p(z)) > abs(z)

    def test_degree_guard(self):
        with pytest.raises(ValueError):
            escape_radius(P(0.0, 1.0))


class TestFilledJulia:
    def test_chebyshev_interval(self):
        assert filled_julia_member(CHEB, 1.5)[0] == "inside"
        status, k = filled_julia_member(CHEB, 2.1)
        assert status == "escaped" and k >= 1

    def test_powering_fixed_point(self):
        assert filled_julia_member(P(0.0, 0.0, 1.0), 0.0)[0] == "inside"


class TestRender:
    def test_chebyshev_confined_to_axis(self):
        grid = render_filled_julia(CHEB, (-2.5, 2.5, -1.0, 1.0), (512, 205))
        rows = np.where((grid == 255).any(axis=1))[0]
        mid = (205 - 1) / 2
        assert rows.size > 0
        assert all(abs(r - mid) <= 1.0 for r in rows)

    def test_powering_unit_disk(self):
        grid = render_filled_julia(P(0.0, 0.0, 1.0), (-1.5, 1.5, -1.5, 1.5),
                                   (101, 101), max_iter=200)
        ys, xs = np.where(grid == 255)
        x = np.linspace(-1.5, 1.5, 101)[xs]
        y = np.linspace(1.5, -1.5, 101)[ys]
        assert (np.hypot(x, y) <= 1.0 + 0.05).all()

    def test_basilica_spreads_off_axis(self):
        grid = render_filled_julia(BASILICA, (-2.0, 2.0, -1.0, 1.0), (256, 129))
        ys, _ = np.where(grid == 255)
        mid = (129 - 1) / 2
        off = np.abs(ys - mid) > 1.0
        assert off.sum() >= 0.05 * ys.size

    def test_determinism(self):
        a = render_filled_julia(BASILICA, (-2, 2, -1, 1), (64, 33))
        b = render_filled_julia(BASILICA, (-2, 2, -1, 1), (64, 33))
        assert (a == b).all()


class TestBackwardOrbit:
    def test_level_one(self):
        orb = backward_orbit(CHEB, 0.0, 1)
        assert np.allclose(sorted(orb.points.real),
                           [-math.sqrt(2), math.sqrt(2)], atol=1e-12)

    def test_level_two(self):
        orb = backward_orbit(CHEB, 0.0, 2)
        want = sorted([math.sqrt(2 + math.sqrt(2)), -math.sqrt(2 + math.sqrt(2)),
                       math.sqrt(2 - math.sqrt(2)), -math.sqrt(2 - math.sqrt(2))])
        assert np.allclose(sorted(orb.points.real), want, atol=1e-10)
        assert np.abs(orb.points.imag).max() < 1e-12

    def test_residual_invariant(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            p = Polynomial(list(rng.uniform(-2, 2, rng.integers(3, 5))))
            if abs(p.lead) < 0.3:
                continue
            alpha = rng.uniform(-1, 1)
            orb = backward_orbit(p, alpha, 5)
            assert orb.residuals().max() <= 1e-6 * (1 + abs(alpha))

    def test_conjugation_closure(self):
        orb = backward_orbit(BASILICA, 1 / 3, 4)
        pts = np.sort_complex(orb.points)
        conj = np.sort_complex(np.conj(orb.points))
        assert np.allclose(pts, conj, atol=1e-9)

    def test_cap(self):
        with pytest.raises(OrbitCapError):
            backward_orbit(CHEB, 0.0, 40)

    def test_cardinality(self):
        orb = backward_orbit(P(0.0, -1.0, 0.0, 1.0), 0.25, 3)
        assert orb.points.size == 27


class TestMaxImag:
    def test_basilica_depth_two_hand_value(self):
        orb = backward_orbit(BASILICA, 1 / 3, 2)
        want = math.sqrt(math.sqrt(4 / 3) - 1)
        assert abs(max_imag_stat(orb) - want) < 1e-6
        assert max_imag_stat(orb) > 0.39

    def test_chebyshev_stays_real(self):
        for depth in (4, 8, 12):
            orb = backward_orbit(CHEB, 1 / 3, depth)
            assert max_imag_stat(orb) <= 1e-9


class TestArcsineOracle:
    def test_closed_form_matches_simulation(self):
        # independent validation: push uniform theta through 2cos(theta)
        rng = np.random.default_rng(100)
        sample = 2 * np.cos(rng.uniform(0, math.pi, 200_000))
        xs = np.linspace(-1.95, 1.95, 41)
        emp = np.searchsorted(np.sort(sample), xs, side="right") / sample.size
        closed = np.array([arcsine_cdf(x) for x in xs])
        assert np.abs(emp - closed).max() < 5e-3

    def test_equidistribution_limit(self):
        orb = backward_orbit(CHEB, 1 / 3, 14)
        m = EmpiricalMeasure.from_orbit(orb)
        assert not m.has_nonreal
        assert m.cdf_distance(arcsine_cdf) <= 0.02


class TestKS:
    def test_identical_zero(self):
        m = EmpiricalMeasure(np.array([1.0, 2.0, 3.0], dtype=complex))
        assert empirical_cdf_distance(m, m) == 0.0

    def test_symmetry(self):
        a = EmpiricalMeasure(np.array([0.0, 1.0], dtype=complex))
        b = EmpiricalMeasure(np.array([0.5, 1.5, 2.0], dtype=complex))
        assert empirical_cdf_distance(a, b) == empirical_cdf_distance(b, a)

    def test_known_distance(self):
        a = EmpiricalMeasure(np.array([0.0], dtype=complex))
        b = EmpiricalMeasure(np.array([1.0], dtype=complex))
        assert empirical_cdf_distance(a, b) == 1.0

    def test_cauchy_levels(self):
        dists = []
        for n in (6, 8, 10):
            m1 = EmpiricalMeasure.from_orbit(backward_orbit(CHEB, 1 / 3, n))
            m2 = EmpiricalMeasure.from_orbit(backward_orbit(CHEB, 1 / 3, n + 2))
            dists.append(empirical_cdf_distance(m1, m2))
        inversions = [y - x for x, y in zip(dists, dists[1:]) if y > x]
        assert len(inversions) <= 1
        assert all(v < 0.005 for v in inversions)

    def test_nonreal_flagged(self):
        orb = backward_orbit(BASILICA, 1 / 3, 3)
        assert EmpiricalMeasure.from_orbit(orb).has_nonreal


class TestExceptionalGuard:
    def test_powering_origin_refused(self):
        with pytest.raises(ExceptionalPointError):
            check_non_exceptional(P(0.0, 0.0, 1.0), 0.0)

    def test_ordinary_point_passes(self):
        check_non_exceptional(CHEB, 0.0)


class TestOrbitStatus:
    def test_periodic(self):
        st = orbit_status(P(-1, 0, 1), Fraction(0))
        assert st.tag == "periodic" and st.period == 2

    def test_preperiodic(self):
        st = orbit_status(P(-2, 0, 1), Fraction(0))
        assert st.tag == "preperiodic"
        assert st.tail == 2 and st.period == 1

    def test_denominator_growth(self):
        st = orbit_status(P(-2, 0, 1), Fraction(1, 3))
        assert st.tag == "nonperiodic"
        assert "denominator-growth" in st.reason
        assert st.prefix[:3] == [Fraction(1, 3), Fraction(-17, 9), Fraction(127, 81)]

    def test_escape(self):
        st = orbit_status(P(-2, 0, 1), Fraction(3))
        assert st.tag == "nonperiodic"
        assert "escape" in st.reason

    def test_deterministic(self):
        a = orbit_status(P(-2, 0, 1), Fraction(1, 3))
        b = orbit_status(P(-2, 0, 1), Fraction(1, 3))
        assert a.to_json() == b.to_json()

    def test_rejects_float_coefficients(self):
        with pytest.raises(ValueError):
            orbit_status(P(0.5, 0.25, 1.0), Fraction(1))

    def test_undecided_possible(self):
        # non-monic map with a bounded, apparently aperiodic rational orbit
        st = orbit_status(Polynomial([Fraction(-7, 8), 0, 1]), Fraction(0),
                          max_steps=12)
        assert st.tag == "undecided"
