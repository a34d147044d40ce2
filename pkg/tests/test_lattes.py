import math
from fractions import Fraction

import numpy as np
import pytest

from juliareal.lattes import (INFINITY, CriticalPointMismatchError, CurvePoint,
                              NonAbelianCertificate, RationalMap,
                              SingularCurveError, WeierstrassCurve,
                              certify_nonabelian, check_commutation,
                              double_point, duplication_lattes,
                              lattes_critical_points, rational_orbit_status,
                              real_surjectivity)
from juliareal.orbit import ExceptionalPointError
from juliareal.poly import Polynomial


def P(*coeffs):
    return Polynomial(list(coeffs))


E_NEG = WeierstrassCurve(0, 0, -2)        # y^2 = x^3 - 2, disc < 0
E_POS = WeierstrassCurve(0, -1, 0)        # y^2 = x^3 - x,  disc > 0


def random_curves(rng, count):
    out = []
    while len(out) < count:
        a, b, c = (int(v) for v in rng.integers(-3, 4, 3))
        try:
            out.append(WeierstrassCurve(a, b, c))
        except SingularCurveError:
            continue
    return out


class TestCurve:
    def test_disc_values(self):
        assert E_NEG.disc == -108
        assert E_POS.disc == 4

    def test_singular_rejected(self):
        with pytest.raises(SingularCurveError):
            WeierstrassCurve(0, 0, 0)
        with pytest.raises(SingularCurveError):
            WeierstrassCurve(0, -3, 2)       # (x-1)^2 (x+2)


class TestDuplicationMap:
    def test_explicit_form_x3_minus_2(self):
        f = duplication_lattes(E_NEG)
        assert f.num.coeffs == (0, 16, 0, 0, 1)
        assert f.den.coeffs == (-8, 0, 0, 4)

    def test_explicit_form_x3_minus_x(self):
        f = duplication_lattes(E_POS)
        assert f.num.coeffs == (1, 0, 2, 0, 1)      # (x^2+1)^2
        assert f.den.coeffs == (0, -4, 0, 4)        # 4x(x^2-1)

    def test_random_curves_coprime_degree_4(self):
        rng = np.random.default_rng(51)
        for curve in random_curves(rng, 10):
            f = duplication_lattes(curve)
            assert f.degree == 4

    def test_shared_root_rejected(self):
        with pytest.raises(ValueError):
            RationalMap(P(-1.0, 1.0), P(-1.0, 1.0) * P(1.0, 1.0))

    def test_evaluation_at_infinity(self):
        f = duplication_lattes(E_NEG)
        assert f(INFINITY) is INFINITY

    def test_pole_value(self):
        f = duplication_lattes(E_POS)
        assert f(0) is INFINITY
        assert f(Fraction(1)) is INFINITY


class TestGroupLaw:
    def test_two_torsion_doubles_to_infinity(self):
        pt = double_point(E_POS, CurvePoint(1.0, 0.0))
        assert pt.at_infinity
        assert double_point(E_POS, CurvePoint.zero()).at_infinity

    def test_fixed_point_of_dynamics(self):
        # (2, sqrt 6) on y^2 = x^3 - 2 doubles back over x = 2
        pt = double_point(E_NEG, CurvePoint(2.0, math.sqrt(6.0)))
        assert abs(pt.x - 2.0) < 1e-12
        assert pt.on_curve(E_NEG)

    def test_double_stays_on_curve(self):
        rng = np.random.default_rng(52)
        for curve in random_curves(rng, 8):
            Fp = curve.F.to_float()
            for _ in range(10):
                x0 = float(rng.uniform(-4, 4))
                if Fp(x0) <= 1e-9:
                    continue
                pt = double_point(curve, CurvePoint(x0, math.sqrt(Fp(x0))))
                if not pt.at_infinity:
                    assert pt.on_curve(curve, rel=1e-6)


class TestCommutation:
    def test_fixed_point(self):
        assert check_commutation(E_NEG, 2.0) < 1e-12

    def test_two_torsion_both_infinite(self):
        assert check_commutation(E_POS, 1.0) == 0.0
        assert check_commutation(E_POS, 0.0) == 0.0

    def test_random_curves_and_points(self):
        rng = np.random.default_rng(53)
        for curve in random_curves(rng, 10):
            f = duplication_lattes(curve)
            ff = RationalMap(f.num.to_float(), f.den.to_float())
            Fp = curve.F.to_float()
            done = 0
            while done < 100:
                x0 = float(rng.uniform(-6, 6))
                if Fp(x0) <= 1e-6:
                    continue
                val = ff(x0)
                if val is INFINITY or abs(float(val)) > 1e6:
                    continue
                assert check_commutation(curve, x0) <= 1e-8 * (1 + abs(float(val)))
                done += 1

    def test_no_real_point_rejected(self):
        with pytest.raises(ValueError):
            check_commutation(E_NEG, 0.0)       # F(0) = -2 < 0


class TestCriticalPoints:
    def test_disc_negative_straddle(self):
        crit = lattes_critical_points(E_NEG)
        alpha = 2.0 ** (1.0 / 3.0)
        assert len(crit) == 2
        assert crit[0] < alpha < crit[1]
        f = duplication_lattes(E_NEG)
        ff = RationalMap(f.num.to_float(), f.den.to_float())
        assert abs(float(ff(crit[0])) - float(ff(crit[1]))) <= 1e-8

    def test_disc_positive_count(self):
        crit = lattes_critical_points(E_POS)
        assert len(crit) == 4

    def test_routes_agree_random(self):
        rng = np.random.default_rng(54)
        for curve in random_curves(rng, 10):
            lattes_critical_points(curve)       # mismatch raises


class TestRamification:
    def test_generic_fiber_has_four_preimages(self):
        from juliareal.roots import complex_roots
        rng = np.random.default_rng(55)
        for curve in random_curves(rng, 5):
            f = duplication_lattes(curve)
            for t in rng.uniform(-5, 5, 5):
                g = f.num.to_float() - Polynomial([float(t)]) * f.den.to_float()
                assert g.degree == 4
                assert len(complex_roots(g)) == 4


class TestSurjectivity:
    def test_disc_negative_surjective(self):
        out = real_surjectivity(E_NEG)
        assert out["surjective"]
        w = out["witness"]
        assert abs(w["f_c1"] - w["f_c2"]) <= 1e-8

    def test_family_gap_contains_zero(self):
        for a in (1, 2, 3):
            curve = WeierstrassCurve(0, -a * a, 0)
            out = real_surjectivity(curve)
            assert not out["surjective"]
            lo, hi = out["witness"]["gap"]
            assert lo < 0 < hi
            # the image stays away from zero by roughly a
            assert abs(lo) > 0.5 * a and hi > 0.5 * a

    def test_gap_values_really_omitted(self):
        out = real_surjectivity(E_POS)
        lo, hi = out["witness"]["gap"]
        probe = (lo + hi) / 2
        f = duplication_lattes(E_POS)
        g = f.num.to_float() - Polynomial([probe]) * f.den.to_float()
        from juliareal.roots import real_roots
        assert real_roots(g) == []


class TestRationalOrbit:
    def test_height_growth_certificate(self):
        f = duplication_lattes(E_NEG)
        st = rational_orbit_status(f, Fraction(1, 3))
        assert st.tag == "nonperiodic"
        assert "height-growth" in st.reason

    def test_fixed_point_periodic(self):
        f = duplication_lattes(E_NEG)
        st = rational_orbit_status(f, Fraction(2))
        assert st.tag == "periodic" and st.period == 1

    def test_pole_orbit(self):
        f = duplication_lattes(E_POS)
        st = rational_orbit_status(f, Fraction(1))
        assert st.tag == "nonperiodic"
        assert "pole" in st.reason

    def test_rejects_float(self):
        f = duplication_lattes(E_NEG)
        ff = RationalMap(f.num.to_float(), f.den.to_float())
        with pytest.raises(ValueError):
            rational_orbit_status(ff, Fraction(1, 3))


class TestCertify:
    def test_odd_cubic_certified(self):
        cert = certify_nonabelian(P(0, -1, 0, 1), Fraction(1, 2))
        assert cert.certified
        assert cert.to_json()["verdict"] == "certified"

    def test_lattes_certified(self):
        cert = certify_nonabelian(duplication_lattes(E_NEG), Fraction(1, 3),
                                  curve=E_NEG)
        assert cert.certified

    def test_even_degree_not_certified(self):
        cert = certify_nonabelian(P(-1, 0, 1), Fraction(1, 3))
        assert not cert.certified
        assert not cert.surjective["pass"]
        assert cert.julia_nonreal["pass"]

    def test_periodic_alpha_not_certified(self):
        cert = certify_nonabelian(P(-1, 0, 1), Fraction(0))
        assert not cert.certified
        assert cert.nonperiodic["tag"] == "periodic"

    def test_real_julia_not_certified(self):
        # -x^3 + 3x has a real Julia set; only that check fails
        cert = certify_nonabelian(P(0, 3, 0, -1), Fraction(1, 3))
        assert not cert.certified
        assert cert.surjective["pass"]
        assert not cert.julia_nonreal["pass"]

    def test_mutation_each_check_matters(self):
        flips = [
            (P(-1, 0, 1), Fraction(1, 3), "surjective"),
            (P(0, 3, 0, -1), Fraction(1, 3), "julia_nonreal"),
            (P(0, -1, 0, 1), Fraction(0), "nonperiodic"),
        ]
        for poly, alpha, check in flips:
            baseline = certify_nonabelian(poly, alpha)
            mutated = certify_nonabelian(poly, alpha, disabled={check})
            assert not baseline.certified
            assert mutated.certified

    def test_exceptional_alpha_rejected(self):
        with pytest.raises(ExceptionalPointError):
            certify_nonabelian(P(0, 0, 0, 1), Fraction(0))

    def test_unknown_check_name(self):
        with pytest.raises(ValueError):
            certify_nonabelian(P(0, -1, 0, 1), Fraction(1, 2),
                               disabled={"bogus"})

    def test_json_shape(self):
        cert = certify_nonabelian(duplication_lattes(E_NEG), Fraction(1, 3),
                                  curve=E_NEG)
        js = cert.to_json()
        assert set(js) == {"map", "alpha", "checks", "verdict"}
        assert set(js["checks"]) == {"surjective", "julia_nonreal", "nonperiodic"}
