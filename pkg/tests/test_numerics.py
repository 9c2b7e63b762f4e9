import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crouzeix_lab.errors import InvalidGrid, InvalidParameter
from crouzeix_lab.numerics import (
    CurveSamples,
    Polynomial,
    cheb_eval,
    circle_curve,
    ellipse_curve,
    max_modulus_on_curve,
    poly_affine,
    poly_derivative,
    poly_eval,
    profile_check,
    profile_margin,
    segment_curve,
)

QUARTER_TWENTIETH = Polynomial([0, 1, 0, 0.25, 0, -0.05])

coeff = st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False)


class TestChebyshev:

    @pytest.mark.parametrize("n, z, expected", [(2, 1, 1), (2, 0.5, -0.5), (4, 0, 1)])
    def test_examples(self, n, z, expected):
        assert cheb_eval(n, z) == pytest.approx(expected, abs=1e-15)

    def test_low_degrees(self):
        assert cheb_eval(0, 3 + 1j) == 1
        assert cheb_eval(1, 3 + 1j) == 3 + 1j

    @given(st.integers(0, 64), st.floats(0, math.pi))
    def test_cosine_identity(self, n, t):
        assert abs(cheb_eval(n, math.cos(t)) - math.cos(n * t)) < 1e-12

    def test_off_interval_matches_joukowski(self):
        # T_n((w + 1/w)/2) = (w^n + w^-n)/2
        w = 1.7 * np.exp(0.4j)
        z = (w + 1 / w) / 2
        for n in (3, 10, 25):
            assert cheb_eval(n, z) == pytest.approx((w**n + w**-n) / 2, rel=1e-12)

    def test_vectorised(self):
        t = np.linspace(0, math.pi, 7)
        assert np.allclose(cheb_eval(5, np.cos(t)), np.cos(5 * t), atol=1e-14)

    def test_negative_degree(self):
        with pytest.raises(InvalidParameter):
            cheb_eval(-1, 0.3)


class TestPolynomial:

    def test_trailing_zeros_stripped(self):
        assert Polynomial([1, 2, 0, 0]).coeffs == (1, 2)
        assert Polynomial([0, 0]).coeffs == (0,)
        assert Polynomial([0]).is_zero()

    def test_empty_rejected(self):
        with pytest.raises(InvalidParameter):
            Polynomial([])

    def test_non_finite_rejected(self):
        with pytest.raises(InvalidParameter):
            Polynomial([1, float("nan")])

    def test_identity(self):
        assert poly_eval(Polynomial([0, 1]), 1j) == 1j

    def test_quarter_twentieth_at_one(self):
        assert poly_eval(QUARTER_TWENTIETH, 1) == pytest.approx(1.2, abs=1e-15)

    def test_quintic_derivative_at_zero(self):
        f = Polynomial([0, 1, 0, 0.3, 0, -0.04])
        assert poly_eval(poly_derivative(f), 0) == 1

    def test_derivative_examples(self):
        assert poly_derivative(Polynomial([0, 1])).coeffs == (1,)
        assert poly_derivative(QUARTER_TWENTIETH).coeffs == pytest.approx((1, 0, 0.75, 0, -0.25))
        assert poly_derivative(Polynomial([5])).is_zero()

    @given(st.lists(coeff, min_size=1, max_size=11),
           st.floats(-0.9, 0.9), st.floats(-0.9, 0.9))
    @settings(max_examples=200)
    def test_derivative_matches_central_differences(self, cs, x, y):
        z = complex(x, y)
        if abs(z) > 0.9:
            z *= 0.9 / abs(z)
        p = Polynomial(cs)
        h = 1e-5
        fd = (poly_eval(p, z + h) - poly_eval(p, z - h)) / (2 * h)
        exact = poly_eval(poly_derivative(p), z)
        assert abs(fd - exact) <= 1e-6 * max(1.0, abs(exact))

    def test_affine_substitution(self):
        p = Polynomial([1, -2, 0.5j, 3])
        alpha, beta = 0.7 - 1.2j, 0.3 + 2j
        q = poly_affine(p, alpha, beta)
        for z in (0.1, 1 + 1j, -2j):
            assert poly_eval(q, z) == pytest.approx(poly_eval(p, (z - beta) / alpha), rel=1e-12)


class TestCurves:

    def test_invariants(self):
        with pytest.raises(InvalidParameter):
            CurveSamples([0, 1], [0, 1])
        with pytest.raises(InvalidParameter):
            CurveSamples([0, 2, 1], [0, 1, 2])

    def test_segment_endpoints(self):
        c = segment_curve(-1, 1j, 5)
        assert c.points[0] == -1 and c.points[-1] == 1j


class TestMaxModulus:

    def test_identity_on_circle(self):
        val, _ = max_modulus_on_curve(Polynomial([0, 1]), circle_curve(1.0, 512), refine=False)
        assert val == pytest.approx(1.0, abs=1e-15)

    def test_identity_on_ellipse(self):
        val, t = max_modulus_on_curve(Polynomial([0, 1]), ellipse_curve(math.sqrt(2), 1.0, 360), refine=True)
        assert val == pytest.approx(math.sqrt(2), abs=1e-15)
        assert min(t, 2 * math.pi - t) < 1e-6 or abs(t - math.pi) < 1e-6

    def test_quarter_twentieth_on_circle(self):
        # dense-grid oracle at 1e5 points gives (1.2, 0)
        val, t = max_modulus_on_curve(QUARTER_TWENTIETH, circle_curve(1.0, 512), refine=True)
        assert val == pytest.approx(1.2, abs=1e-14)
        assert min(abs(t), abs(t - math.pi), abs(2 * math.pi - t)) < 1e-6

    @given(st.lists(coeff, min_size=2, max_size=5), st.integers(8, 64))
    @settings(max_examples=30, deadline=None)
    def test_refinement_brackets(self, cs, m):
        p = Polynomial(cs)
        curve = circle_curve(1.0, m)
        plain, _ = max_modulus_on_curve(p, curve, refine=False)
        refined, _ = max_modulus_on_curve(p, curve, refine=True)
        t = np.linspace(0, 2 * math.pi, 10**6, endpoint=False)
        oracle = float(np.max(np.abs(poly_eval(p, np.exp(1j * t)))))
        assert refined >= plain
        assert refined <= oracle + 1e-10

    def test_refine_without_param_fn_uses_chords(self):
        base = circle_curve(1.0, 16)
        bare = CurveSamples(base.params, base.points, period=base.period)
        p = Polynomial([0.3j, 1])
        plain, _ = max_modulus_on_curve(p, bare, refine=False)
        refined, _ = max_modulus_on_curve(p, bare, refine=True)
        assert plain <= refined <= 1.3 + 1e-12


class TestProfileCheck:
    x = np.linspace(0, 0.99, 1000)

    def test_affine_convex(self):
        assert profile_check(self.x, self.x, "convex")

    def test_quarter_twentieth_convex(self):
        # f'' = 1.5x - x^3 >= 0 on [0, 1]
        assert profile_check(self.x, self.x + self.x**3 / 4 - self.x**5 / 20, "convex")

    def test_quarter_twentieth_imaginary_axis_concave(self):
        # -i f(iy) = y - y^3/4 - y^5/20, second derivative -1.5y - y^3 <= 0
        y = self.x
        assert profile_check(y, y - y**3 / 4 - y**5 / 20, "concave")

    def test_failures(self):
        assert not profile_check(self.x, -self.x**2, "convex")
        assert not profile_check(self.x, -self.x, "increasing")
        assert not profile_check(self.x, self.x - 0.5, "positive")

    def test_combined_modes(self):
        assert profile_check(self.x, np.sinh(self.x), ("positive", "increasing", "convex"))

    def test_non_uniform_grid_rejected(self):
        g = self.x**2
        with pytest.raises(InvalidGrid):
            profile_check(g, g, "convex")
        assert profile_check(g, g, "increasing")

    def test_margin_reports_minimum(self):
        assert profile_margin(self.x, self.x**2, "convex") == pytest.approx(2.0, rel=1e-6)

    @given(st.lists(st.floats(-10, 10), min_size=3, max_size=40))
    def test_convex_concave_duality(self, vals):
        grid = np.arange(len(vals), dtype=float)
        v = np.array(vals)
        assert profile_check(grid, v, "convex") == profile_check(grid, -v, "concave")
