import math

import numpy as np
import pytest
from scipy import integrate, special as sp

from heatkit.errors import DomainError, RefusalError
from heatkit.kernels import (
    LARGE_TIME, auto_method, cross_kernel, h_kernel_series, jacobi_kernel, jacobi_kernel_series,
    jacobi_kernel_theta, large_time_bound, large_time_remainder, poly_sup_bound, reduction_oracle, sphere_kernel,
    uses_series,
)
from heatkit.models import CrossFamily, CrossSpace, EvalPolicy, JacobiParams, KernelMethod
from heatkit.special import h0, jacobi_poly_all
from heatkit.theta import theta


CLOSED_FORM_PAIRS = [(-0.5, -0.5), (0.5, 0.5), (-0.5, 0.5), (0.5, -0.5)]


def heat_residual(f, alpha, beta, t, x, dt=1e-4, dx=1e-3):
    """((∂_t + J_x) f, ∂_t f) by central differences."""
    d_t = (f(t + dt, x) - f(t - dt, x)) / (2 * dt)
    d_x = (f(t, x + dx) - f(t, x - dx)) / (2 * dx)
    d_xx = (f(t, x + dx) - 2 * f(t, x) + f(t, x - dx)) / dx ** 2
    return d_t - (1 - x * x) * d_xx - (beta - alpha - (alpha + beta + 2) * x) * d_x, d_t


class TestClosedForms:
    """θ closed forms against the defining series."""

    @pytest.mark.parametrize("a,b", CLOSED_FORM_PAIRS)
    @pytest.mark.parametrize("t", [0.2, 0.5, 2.0])
    def test_series_equivalence(self, a, b, t):
        params = JacobiParams(a, b)
        for th in np.linspace(0.0, math.pi, 7):
            for ph in np.linspace(0.0, math.pi, 7):
                closed = jacobi_kernel_theta(params, t, float(th), float(ph))
                series = jacobi_kernel_series(params, t, math.cos(th), math.cos(ph))
                assert closed == pytest.approx(series, rel=1e-9, abs=1e-12)

    def test_chebyshev_kernel_is_two_thetas(self):
        params = JacobiParams(-0.5, -0.5)
        t, th, ph = 0.4, 1.0, 0.3
        expected = theta(t, th - ph) + theta(t, th + ph)
        assert jacobi_kernel_theta(params, t, th, ph) == pytest.approx(expected)

    def test_small_time_needs_no_floor(self):
        params = JacobiParams(0.5, 0.5)
        assert jacobi_kernel(params, 1e-3, 1.0, 1.0) > 0
        assert auto_method(params, 1e-3) == KernelMethod.THETA

    def test_rejects_generic_parameters(self):
        with pytest.raises(DomainError):
            jacobi_kernel_theta(JacobiParams(1.0, 0.0), 0.5, 1.0, 1.0)


class TestSeries:
    """The defining series and its structural properties."""

    @pytest.mark.parametrize("a,b", [(0.0, 0.0), (1.0, 0.5), (2.5, -0.3), (-0.7, -0.8)])
    def test_conservation(self, a, b):
        params = JacobiParams(a, b)
        nodes, weights = sp.roots_jacobi(80, a, b)
        for x in (-0.9, 0.1, 0.7):
            values = jacobi_kernel_series(params, 0.3, x, nodes)
            assert float(np.sum(weights * values)) == pytest.approx(1.0, rel=1e-9)

    def test_symmetry_and_reflection(self):
        params = JacobiParams(1.5, 0.25)
        t, x, y = 0.2, 0.35, -0.6
        g = jacobi_kernel(params, t, x, y)
        assert jacobi_kernel(params, t, y, x) == pytest.approx(g, rel=1e-12)
        assert jacobi_kernel(params.swapped(), t, -x, -y) == pytest.approx(g, rel=1e-12)

    def test_positivity_on_grid(self):
        params = JacobiParams(0.75, 2.0)
        for x in np.linspace(-1, 1, 9):
            for y in np.linspace(-1, 1, 9):
                assert jacobi_kernel(params, 0.25, float(x), float(y)) > 0

    def test_equilibrium_at_large_time(self):
        params = JacobiParams(1.0, 0.5)
        assert jacobi_kernel(params, 25.0, 0.3, -0.2) == pytest.approx(1 / h0(params), rel=1e-9)

    def test_refuses_small_time(self):
        params = JacobiParams(1.0, 0.25)
        with pytest.raises(RefusalError):
            jacobi_kernel(params, 0.01, 0.2, 0.1)
        assert uses_series(params, 0.02) and not uses_series(params, 0.01)

    def test_custom_floor(self):
        params = JacobiParams(1.0, 0.25)
        policy = EvalPolicy(t_floor=0.005)
        assert jacobi_kernel(params, 0.01, 0.2, 0.1, policy) > 0

    def test_rejects_points_outside_interval(self):
        with pytest.raises(DomainError):
            jacobi_kernel(JacobiParams(0.0, 0.0), 0.5, 1.2, 0.0)
        with pytest.raises(DomainError):
            jacobi_kernel(JacobiParams(0.0, 0.0), -0.5, 0.0, 0.0)

    def test_derivative_at_pole(self):
        a, b, t, x, h = 0.3, 0.2, 0.3, 0.4, 1e-5
        params = JacobiParams(a, b)
        diff = (jacobi_kernel(params, t, x + h, 1.0) - jacobi_kernel(params, t, x - h, 1.0)) / (2 * h)
        shifted = jacobi_kernel(JacobiParams(a + 1, b + 1), t, x, 1.0)
        assert diff == pytest.approx(2 * (a + 1) * math.exp(-t * (a + b + 2)) * shifted, rel=1e-5)

    @pytest.mark.parametrize("a,b", [(0.0, 0.0), (0.5, 0.5), (1.0, -0.5)])
    def test_chapman_kolmogorov(self, a, b):
        params = JacobiParams(a, b)
        nodes, weights = sp.roots_jacobi(80, a, b)
        x, y = 0.3, -0.6
        convolved = math.fsum(w * jacobi_kernel(params, 0.5, x, float(z)) * jacobi_kernel(params, 0.5, float(z), y)
                              for z, w in zip(nodes, weights))
        assert convolved == pytest.approx(jacobi_kernel(params, 1.0, x, y), rel=1e-7)

    @pytest.mark.parametrize("a,b", [(0.0, 0.0), (0.5, 0.5), (1.0, -0.5)])
    def test_heat_equation(self, a, b):
        params = JacobiParams(a, b)
        for x, y in ((0.2, -0.4), (-0.5, 0.7)):
            residual, d_t = heat_residual(lambda s, u: jacobi_kernel(params, s, u, y), a, b, 0.3, x)
            assert abs(residual) <= 1e-4 * abs(d_t)

    def test_quadratic_map(self):
        alpha, t, th = 1.0, 0.4, 1.3
        lhs = jacobi_kernel(JacobiParams(alpha, -0.5), t, math.cos(th), 1.0)
        inner = JacobiParams(alpha, alpha)
        c = math.cos(th / 2)
        rhs = 2 ** (-alpha - 1.5) * (jacobi_kernel(inner, t / 4, c, 1.0) + jacobi_kernel(inner, t / 4, -c, 1.0))
        assert lhs == pytest.approx(rhs, rel=1e-9)


class TestReductionOracle:
    """Double-quadrature estimate against the series."""

    @pytest.mark.parametrize("a,b", [(0.5, 0.5), (1.0, 0.0), (1.5, 0.5)])
    @pytest.mark.parametrize("t", [0.2, 0.5, 1.0])
    def test_matches_series(self, a, b, t):
        params = JacobiParams(a, b)
        for th in (0.3, 1.4, 2.8):
            for ph in (0.5, 2.0):
                oracle = reduction_oracle(params, t, th, ph)
                series = jacobi_kernel_series(params, t, math.cos(th), math.cos(ph))
                assert oracle == pytest.approx(series, rel=1e-6)

    def test_needs_parameters_above_minus_half(self):
        with pytest.raises(DomainError):
            reduction_oracle(JacobiParams(-0.7, 0.5), 0.5, 1.0, 1.0)


class TestPolynomialBounds:
    """max |P_n| estimates feeding the tail majorant."""

    def test_exact_when_one_parameter_is_large(self):
        params = JacobiParams(2.0, 0.5)
        x = np.linspace(-1, 1, 2001)
        values = jacobi_poly_all(10, params, x)
        for n in (1, 4, 10):
            assert poly_sup_bound(n, params) == pytest.approx(float(np.max(np.abs(values[n]))), rel=1e-12)

    def test_bound_below_minus_half(self):
        params = JacobiParams(-0.7, -0.8)
        x = np.linspace(-1, 1, 4001)
        values = jacobi_poly_all(12, params, x)
        for n in range(13):
            assert float(np.max(np.abs(values[n]))) <= poly_sup_bound(n, params) * (1 + 1e-12)


class TestManifoldKernels:
    """Sphere and CROSS heat kernels."""

    def test_circle(self):
        assert sphere_kernel(1, 0.6, 0.0) == pytest.approx(theta(0.6, 0.0))

    def test_two_sphere_unit_mass(self):
        mass, _ = integrate.quad(lambda p: sphere_kernel(2, 0.3, p) * math.sin(p), 0, math.pi, epsabs=1e-12)
        assert 2 * math.pi * mass == pytest.approx(1.0, rel=1e-8)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_cross_route_for_spheres(self, d):
        space = CrossSpace(CrossFamily.SPHERE, d)
        for r in (0.0, 1.0, 2.5):
            assert cross_kernel(space, 0.4, r) == pytest.approx(sphere_kernel(d, 0.4, r), rel=1e-9)

    def test_projective_distance_range(self):
        space = CrossSpace(CrossFamily.COMPLEX_PROJECTIVE, 4, diameter=math.pi / 2)
        assert cross_kernel(space, 0.1, math.pi / 2) > 0
        with pytest.raises(DomainError):
            cross_kernel(space, 0.1, 2.0)

    def test_sphere_dimension_checks(self):
        with pytest.raises(DomainError):
            sphere_kernel(0, 0.5, 0.0)
        with pytest.raises(DomainError):
            sphere_kernel(2, 0.5, 4.0)


class TestLargeTime:
    """E_t = h_0 G_t - 1 and its uniform bound."""

    @pytest.mark.parametrize("a,b", [(0.0, 0.0), (2.0, 0.5), (-0.7, -0.8)])
    @pytest.mark.parametrize("t", [LARGE_TIME, 2.0, 5.0])
    def test_remainder_below_bound(self, a, b, t):
        params = JacobiParams(a, b)
        bound = large_time_bound(params, t)
        for x in np.linspace(-1, 1, 9):
            for y in np.linspace(-1, 1, 9):
                assert abs(large_time_remainder(params, t, float(x), float(y))) < bound

    def test_remainder_needs_large_time(self):
        with pytest.raises(DomainError):
            large_time_remainder(JacobiParams(0.0, 0.0), 1.0, 0.0, 0.0)


class TestAuxiliaryH:
    """The even auxiliary series used by the real projective refinement."""

    def test_domain(self):
        with pytest.raises(DomainError):
            h_kernel_series(-0.5, 0.5, 0.0)
        with pytest.raises(RefusalError):
            h_kernel_series(-1.25, 0.001, 0.0)

    def test_even_and_positive(self):
        for x in (0.0, 0.4, 0.9):
            value = h_kernel_series(-1.25, 0.4, x)
            assert value > 0
            assert h_kernel_series(-1.25, 0.4, -x) == pytest.approx(value, rel=1e-12)

    @pytest.mark.parametrize("lam", [-1.25, -1.0])
    def test_heat_equation(self, lam):
        for x in (0.2, 0.6):
            residual, d_t = heat_residual(lambda s, u: h_kernel_series(lam, s, u), lam, lam, 0.3, x)
            assert d_t > 0
            assert abs(residual) <= 1e-4 * d_t
