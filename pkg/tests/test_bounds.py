import math

import numpy as np
import pytest

from heatkit.bounds import (
    envelope_values, f_arccos_sq, f_gap_weight, large_time_bounds, manifold_envelope, medium_time_bounds,
    odd_sphere_bounds, psi_envelope, psi_z_constants, sandwich_envelopes, sphere_bounds, theta_derivative_bounds,
    theta_item_horizon, theta_upper_multiplier, xi_envelope, z_envelope,
)
from heatkit.constants import B_LARGE, B_SMALL
from heatkit.errors import ConfigurationError, DomainError
from heatkit.kernels import jacobi_kernel, sphere_kernel
from heatkit.models import CrossFamily, CrossSpace, JacobiParams, Side, Variant
from heatkit.theta import g_ultra_half_int, neg_d_pow_theta


class TestEnvelopes:
    """F phase, Ψ and Ξ envelopes."""

    def test_f_at_unit_arguments(self):
        assert f_arccos_sq(1.2, 0.4, 1.0, 1.0) == pytest.approx(((1.2 - 0.4) / 2) ** 2, rel=1e-12)
        assert f_gap_weight(1.2, 0.4, 1.0, 1.0) == 0.0

    def test_psi_is_one_for_chebyshev(self):
        assert psi_envelope(-0.5, B_SMALL, 0.3, 1.0, 2.0) == 1.0

    def test_psi_regimes(self):
        # 𝔇_{1/2} = 1
        assert psi_envelope(0.5, B_LARGE, 0.4, 0.1, 0.1) == pytest.approx(1 / 0.4)
        assert psi_envelope(0.5, B_LARGE, 0.01, 2.0, 2.0) == pytest.approx(1 / (B_LARGE * 4))

    def test_xi_reflection(self):
        params = JacobiParams(1.0, 0.25)
        value = xi_envelope(params, B_SMALL, 0.2, 0.7, 1.1)
        mirrored = xi_envelope(params.swapped(), B_SMALL, 0.2, math.pi - 0.7, math.pi - 1.1)
        assert mirrored == pytest.approx(value, rel=1e-12)

    @pytest.mark.parametrize("alpha", [0.0, 1.0, 2.5])
    def test_psi_z_constants(self, alpha):
        m, big_m = psi_z_constants(alpha, B_SMALL)
        for t in (0.01, 0.3, 2.0):
            for th in np.linspace(0, math.pi, 5):
                for ph in np.linspace(0, math.pi, 5):
                    value = psi_envelope(alpha, B_SMALL, t, th, ph) * (t + th * ph) ** (alpha + 0.5)
                    assert m * (1 - 1e-12) <= value <= big_m * (1 + 1e-12)

    def test_z_envelope_positive(self):
        assert z_envelope(JacobiParams(0.5, 0.5), 0.1, 0.0, math.pi) > 0

    def test_sandwich_envelope_sides(self):
        lower, upper = sandwich_envelopes(JacobiParams(0.0, 0.0), 1.0, constants=(0.1, 2.0))
        assert (lower.side, lower.kappa, lower.constant) == (Side.LOWER, B_LARGE, 0.1)
        assert (upper.side, upper.kappa, upper.constant) == (Side.UPPER, B_SMALL, 2.0)


class TestThetaDerivativeEstimates:
    """Bounds on (-D)^N θ_t over [0, π/2]."""

    def test_horizons(self):
        assert theta_item_horizon("b", 2) == pytest.approx(1 / 3)
        assert theta_item_horizon("c", 2) == pytest.approx(1 / 16)
        assert theta_item_horizon("d", 1) == pytest.approx(math.pi ** 2 / 2)
        assert theta_item_horizon("d", 2) is None
        assert theta_item_horizon("row1", 3) == pytest.approx(1 / 7)
        assert theta_item_horizon("row2", 0) == 1.0

    def test_bad_item_parameters(self):
        with pytest.raises(ConfigurationError):
            theta_item_horizon("e", 1)
        with pytest.raises(ConfigurationError):
            theta_item_horizon("c", 2, delta=3.0)

    def test_circle_picks_special_row(self):
        multiplier, item = theta_upper_multiplier(0, 0.5)
        assert item == "d"
        assert multiplier == pytest.approx(1 + 2 * math.exp(-math.pi ** 2))

    def test_no_estimate_at_large_time(self):
        with pytest.raises(DomainError):
            theta_upper_multiplier(3, 1.0)

    @pytest.mark.parametrize("N", [1, 2, 3])
    @pytest.mark.parametrize("t", [0.02, 0.1])
    def test_derivatives_within_bounds(self, N, t):
        for phi in np.linspace(0, math.pi / 2, 7):
            lower, upper = theta_derivative_bounds(N, t, float(phi))
            value = neg_d_pow_theta(N, t, float(phi))
            assert lower <= value <= upper

    def test_odd_sphere_kernel_within_bounds(self):
        for phi in np.linspace(0, math.pi / 2, 5):
            lower, upper = odd_sphere_bounds(1.5, 0.1, float(phi))
            assert lower <= g_ultra_half_int(1.5, 0.1, float(phi)) <= upper


class TestManifoldBounds:
    """Sphere and CROSS constants."""

    def test_two_sphere_constants(self):
        T = 1.0
        bound = manifold_envelope(CrossSpace(CrossFamily.SPHERE, 2), T)
        assert bound.upper_constant == pytest.approx(2 * math.pi * math.exp(T / 4), rel=1e-12)
        assert bound.lower_constant == pytest.approx(math.sqrt(2) * math.exp(-math.pi / 4), rel=1e-12)
        assert bound.ratio == pytest.approx(12.512168, abs=1e-5)

    def test_circle_constants(self):
        T = 2.0
        bound = manifold_envelope(CrossSpace(CrossFamily.SPHERE, 1), T)
        assert bound.upper_constant == pytest.approx(2 * (1 + 2 * math.exp(-2 * math.pi ** 2 / T)), rel=1e-12)
        assert bound.lower_constant == pytest.approx(1.0, rel=1e-12)

    def test_real_projective_plane(self):
        T = 1.0
        space = CrossSpace(CrossFamily.REAL_PROJECTIVE, 2, diameter=math.pi / 2)
        bound = manifold_envelope(space, T)
        assert bound.upper_constant == pytest.approx(4 * math.pi * math.exp(T / 16), rel=1e-12)
        assert bound.gaussian_lower and bound.lower_constant is None
        assert bound.horizon == pytest.approx(T / 4)

    def test_general_variant_is_lower_only(self):
        bound = manifold_envelope(CrossSpace(CrossFamily.SPHERE, 2), variant=Variant.GENERAL)
        assert bound.upper_constant is None and bound.ratio is None
        assert bound.lower_constant == pytest.approx(math.sqrt(2) * math.exp(-math.pi / 4), rel=1e-12)
        lower, upper = envelope_values(bound, 50.0, 1.0)
        assert upper is None and lower > 0

    def test_general_variant_refused_for_real_projective(self):
        with pytest.raises(ConfigurationError):
            manifold_envelope(CrossSpace(CrossFamily.REAL_PROJECTIVE, 3, diameter=math.pi / 2),
                              variant=Variant.GENERAL)

    def test_needs_horizon(self):
        with pytest.raises(DomainError):
            manifold_envelope(CrossSpace(CrossFamily.SPHERE, 2))

    def test_beyond_horizon(self):
        bound = manifold_envelope(CrossSpace(CrossFamily.SPHERE, 2), 1.0)
        with pytest.raises(DomainError):
            envelope_values(bound, 1.5, 0.5)

    @pytest.mark.parametrize("t", [0.3, 0.8])
    def test_two_sphere_kernel_in_sandwich(self, t):
        for phi in (0.0, 1.0, 2.0):
            lower, upper = sphere_bounds(2, 1.0, t, phi)
            assert lower <= sphere_kernel(2, t, phi) <= upper


class TestLongTimes:
    """Medium and large time constants."""

    def test_large_time_legendre(self):
        params = JacobiParams(0.0, 0.0)
        result = large_time_bounds(params, 2.0)
        assert result.sandwich
        assert (result.lower, result.upper) == pytest.approx((0.25, 0.75))
        assert result.threshold == pytest.approx(1 + math.log(4) / 2)
        for x in (-1.0, 0.0, 1.0):
            assert result.lower <= jacobi_kernel(params, 2.0, x, 1.0) <= result.upper

    def test_large_time_needs_large_t(self):
        with pytest.raises(DomainError):
            large_time_bounds(JacobiParams(0.0, 0.0), 1.0)

    def test_medium_time_brackets_kernel(self):
        params = JacobiParams(0.0, 0.0)
        lower, upper = medium_time_bounds(params, 0.5)
        for t in (0.5, 1.0, 3.0):
            for x in (-1.0, 0.0, 1.0):
                value = jacobi_kernel(params, t, x, 1.0)
                assert lower <= value <= upper
