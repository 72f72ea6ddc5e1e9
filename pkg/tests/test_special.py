import math

import numpy as np
import pytest
from scipy import special as sp

from heatkit.errors import AccuracyError, DomainError
from heatkit.models import JacobiParams, PiKind
from heatkit.special import (
    EULER_GAMMA, SQRT_PI, bessel_k_half_int, d_alpha, e_alpha, gamma_fn, gauss_jacobi_rule, h0, h0_ultra,
    half_rule, integrate_against_pi, jacobi_norm, jacobi_poly, jacobi_poly_all, pi_distribution, pi_measure,
    pi_tail, scaled_bessel_k_half_int,
)
from heatkit.summation import KahanSummation, kahan_sum


class TestCompensatedSummation:
    """Kahan accumulator against exact fsum."""

    def test_tenths_sum_to_one(self):
        assert kahan_sum([0.1] * 10) == 1.0
        assert sum([0.1] * 10) != 1.0

    def test_small_terms_are_not_lost(self):
        values = [1.0] + [1e-16] * 10
        exact = math.fsum(values)
        assert abs(kahan_sum(values) - exact) < abs(sum(values) - exact)

    def test_accumulator_float(self):
        acc = KahanSummation()
        acc.extend([1.5, 2.5])
        assert float(acc) == 4.0


class TestGammaAndScales:
    """Γ, 𝔇_α and the linear proxy 𝔼_α."""

    def test_gamma_values(self):
        assert gamma_fn(5) == pytest.approx(24.0)
        assert gamma_fn(0.5) == pytest.approx(SQRT_PI)
        assert gamma_fn(-0.5) == pytest.approx(-2 * SQRT_PI)
        assert gamma_fn(-1.5) == pytest.approx(4 * SQRT_PI / 3)

    def test_gamma_poles(self):
        for x in (0, -1, -3):
            with pytest.raises(DomainError):
                gamma_fn(x)

    def test_d_alpha_special_values(self):
        assert d_alpha(-0.5) == pytest.approx(math.exp(-EULER_GAMMA), rel=1e-12)
        assert d_alpha(0.5) == pytest.approx(1.0)
        assert d_alpha(1.5) == pytest.approx(math.sqrt(2))

    def test_d_alpha_continuous_across_minus_half(self):
        assert d_alpha(-0.5 + 1e-7) == pytest.approx(d_alpha(-0.5), rel=1e-6)
        assert d_alpha(-0.5 - 1e-7) == pytest.approx(d_alpha(-0.5), rel=1e-6)

    def test_d_alpha_rejects_low_alpha(self):
        with pytest.raises(DomainError):
            d_alpha(-1.5)

    def test_linear_proxy_brackets(self):
        for alpha in np.linspace(-0.5, 20, 30):
            ratio = d_alpha(alpha) / e_alpha(alpha)
            assert 1 - 1e-12 <= ratio <= 1.1


class TestHalfIntegerBessel:
    """Closed-form K_ν for half-integer ν."""

    @pytest.mark.parametrize("nu", [0.5, 1.5, 2.5, 5.5])
    @pytest.mark.parametrize("y", [0.1, 1.0, 7.5, 40.0])
    def test_against_scipy(self, nu, y):
        expected = math.sqrt(2 * y / math.pi) * float(sp.kve(nu, y))
        assert scaled_bessel_k_half_int(nu, y) == pytest.approx(expected, rel=1e-12)

    def test_order_half(self):
        y = 2.0
        assert bessel_k_half_int(0.5, y) == pytest.approx(math.sqrt(math.pi / (2 * y)) * math.exp(-y))

    def test_rejects_integer_order(self):
        with pytest.raises(DomainError):
            scaled_bessel_k_half_int(1.0, 1.0)
        with pytest.raises(DomainError):
            scaled_bessel_k_half_int(0.5, 0.0)


class TestJacobiPolynomials:
    """Recurrence values, endpoint values and norms."""

    @pytest.mark.parametrize("a,b", [(0.0, 0.0), (0.5, -0.5), (2.0, 0.25), (-0.7, -0.8)])
    def test_against_scipy(self, a, b):
        params = JacobiParams(a, b)
        x = np.linspace(-0.95, 0.95, 9)
        values = jacobi_poly_all(12, params, x)
        for n in (0, 1, 5, 12):
            np.testing.assert_allclose(values[n], sp.eval_jacobi(n, a, b, x), rtol=1e-10, atol=1e-12)

    def test_endpoint_values(self):
        params = JacobiParams(1.5, 0.5)
        assert jacobi_poly(6, params, 1.0) == pytest.approx(sp.binom(7.5, 6))
        assert jacobi_poly(5, params, -1.0) == pytest.approx(-sp.binom(5.5, 5))

    def test_legendre_norms(self):
        params = JacobiParams(0.0, 0.0)
        assert h0(params) == pytest.approx(2.0)
        for n in range(1, 6):
            assert jacobi_norm(n, params) == pytest.approx(2 / (2 * n + 1))

    def test_chebyshev_h0(self):
        assert h0(JacobiParams(-0.5, -0.5)) == pytest.approx(math.pi)

    @pytest.mark.parametrize("lam", [-0.5, 0.0, 0.5, 2.25])
    def test_ultraspherical_h0(self, lam):
        assert h0_ultra(lam) == pytest.approx(h0(JacobiParams(lam, lam)), rel=1e-12)

    def test_norm_matches_quadrature(self):
        a, b = 1.0, 0.5
        x, w = sp.roots_jacobi(30, a, b)
        p3 = sp.eval_jacobi(3, a, b, x)
        p4 = sp.eval_jacobi(4, a, b, x)
        assert float(np.sum(w * p3 * p3)) == pytest.approx(jacobi_norm(3, JacobiParams(a, b)), rel=1e-10)
        assert abs(float(np.sum(w * p3 * p4))) < 1e-12


class TestPiMeasures:
    """The dΠ_α family, its distribution function and quadrature."""

    def test_kinds(self):
        assert pi_measure(-0.5).kind == PiKind.POINT_MASS
        assert pi_measure(0.3).kind == PiKind.DENSITY
        assert pi_measure(-0.75).kind == PiKind.SIGNED_LOCAL
        with pytest.raises(DomainError):
            pi_measure(-1.0)

    def test_uniform_distribution(self):
        for u in (-0.8, 0.0, 0.3, 1.0):
            assert pi_distribution(0.5, u) == pytest.approx(u / 2)

    @pytest.mark.parametrize("alpha", [0.0, 0.5, 3.0])
    def test_total_mass_half_on_each_side(self, alpha):
        assert pi_distribution(alpha, 1.0) == pytest.approx(0.5)
        assert half_rule(alpha, 40).total_mass == pytest.approx(0.5, rel=1e-12)

    def test_distribution_is_odd(self):
        for alpha in (0.2, -0.7):
            assert pi_distribution(alpha, -0.4) == pytest.approx(-pi_distribution(alpha, 0.4))

    def test_signed_measure_refuses_endpoint(self):
        with pytest.raises(DomainError):
            pi_distribution(-0.7, 1.0)

    def test_second_moments(self):
        square = lambda u: u * u  # noqa: E731
        assert gauss_jacobi_rule(0.5, 20).integrate(square) == pytest.approx(1 / 3)
        assert gauss_jacobi_rule(1.0, 20).integrate(square) == pytest.approx(1 / 4)

    def test_point_mass_integral(self):
        assert integrate_against_pi(-0.5, lambda u: u + 2) == pytest.approx(2.0)
        assert integrate_against_pi(-0.5, lambda u: u + 2, half=True) == pytest.approx(1.5)

    def test_integral_settles_for_smooth_integrand(self):
        value = integrate_against_pi(1.5, math.cos, n_nodes=16)
        expected = 3 * (math.sin(1.0) - math.cos(1.0))
        assert value == pytest.approx(expected, rel=1e-10)

    def test_unsettled_quadrature_raises(self):
        with pytest.raises(AccuracyError):
            integrate_against_pi(0.5, lambda u: math.cos(400 * u), n_nodes=4, tol=1e-14)

    def test_rule_needs_alpha_above_minus_half(self):
        with pytest.raises(DomainError):
            gauss_jacobi_rule(-0.5, 10)

    def test_tail_of_uniform_distribution(self):
        # |Π_{1/2}(u)| = u/2, so the tail from 0 is 1/4
        assert pi_tail(0.5, 0.0) == pytest.approx(0.25, rel=1e-9)
        assert pi_tail(-0.5, 0.3) == 0.0
