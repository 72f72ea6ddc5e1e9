import math

import pytest

from heatkit.constants import (
    B_LARGE, B_SMALL, EPSILON_STAR, W0, W0_PRIME, W1,
    b_alpha, big_b_alpha, big_k_alpha, big_l_alpha, big_m_omega, big_n_alpha, big_omega_fn, footnote_constants,
    is_half_integer, k_alpha, l_alpha, lam_check, large_time_constant, m_omega, n_alpha, numerical_constants,
    omega_fn, q_fn, snap, tag, theta_sum_4pi, theta_sum_5pi, theta_sum_direct, upper_gamma,
)
from heatkit.errors import DomainError
from heatkit.special import SQRT_PI


class TestNumericalConstants:
    """γ, 𝔟, 𝔅 and the 𝔴 family."""

    def test_values(self):
        assert B_SMALL == pytest.approx(2 / math.pi ** 2)
        assert B_LARGE == 0.5
        assert EPSILON_STAR == pytest.approx(256 / (27 * math.pi ** 3))
        assert W0 == pytest.approx(1.042 / (1 + EPSILON_STAR))
        assert W0_PRIME == pytest.approx(1.001 * math.e)
        assert W1 == pytest.approx(math.pi / 4 * (1 + EPSILON_STAR))

    def test_table_keys(self):
        assert set(numerical_constants()) == {"gamma", "b_small", "B_large", "w0", "w0_prime", "w1"}

    def test_quoted_decimals(self):
        quoted = footnote_constants()
        assert quoted["gamma"] == pytest.approx(0.5772, abs=1e-4)
        assert quoted["epsilon"] == pytest.approx(0.3058, abs=1e-4)
        assert quoted["sqrt(2)*e^(-pi/4)"] == pytest.approx(0.6447, abs=1e-4)
        assert quoted["sphere2_ratio_T1"] == pytest.approx(12.512168, abs=1e-5)

    def test_theta_sums_in_closed_form(self):
        assert theta_sum_4pi() == pytest.approx(theta_sum_direct(4), rel=1e-12)
        assert theta_sum_5pi() == pytest.approx(theta_sum_direct(5, two_sided=True), rel=1e-12)

    def test_large_time_constant_positive(self):
        assert large_time_constant() > 1


class TestParametricConstants:
    """Lower/upper pairs depending on one parameter."""

    @pytest.mark.parametrize("alpha", [-0.25, 0.0, 0.5, 3.0, 10.5])
    def test_pair_relations(self, alpha):
        assert k_alpha(alpha) == pytest.approx(2 ** (alpha - 0.5) * abs(alpha + 0.5) * big_k_alpha(alpha))
        assert l_alpha(alpha) == pytest.approx(abs(alpha + 0.5) / 4 * big_l_alpha(alpha))
        assert 0 < n_alpha(alpha) <= big_n_alpha(alpha)
        assert 0 < b_alpha(alpha) <= big_b_alpha(alpha)

    def test_chebyshev_values(self):
        assert b_alpha(-0.5) == 0.5
        assert big_b_alpha(-0.5) == 0.5
        assert k_alpha(-0.5) == 0.0

    def test_b_at_half(self):
        assert big_b_alpha(0.5) == pytest.approx(math.gamma(1.5) / SQRT_PI)
        assert b_alpha(0.5) == pytest.approx(0.5 * math.exp(-1))

    @pytest.mark.parametrize("omega", [0.5, 1.0, 4.0])
    def test_m_pair(self, omega):
        assert 0 < m_omega(omega) < big_m_omega(omega)

    def test_lam_check(self):
        assert lam_check(0.3) == pytest.approx(0.7)
        assert lam_check(1.75) == pytest.approx(2.25)
        assert lam_check(-0.75) == pytest.approx(-0.25)

    def test_domain_checks(self):
        with pytest.raises(DomainError):
            k_alpha(-1.0)
        with pytest.raises(DomainError):
            n_alpha(-0.5)
        with pytest.raises(DomainError):
            m_omega(0.0)


class TestAuxiliaryFunctions:
    """ω_λ, Ω_λ, q_λ and the incomplete Gamma helper."""

    def test_omega_is_one_on_half_integers(self):
        assert omega_fn(1.5, 0.7) == pytest.approx(1.0)

    def test_omega_pair_at_time_zero(self):
        assert omega_fn(0.75, 0.0) == pytest.approx(2 ** 0.25)
        assert big_omega_fn(1.0, 0.0) == pytest.approx(2 ** -0.5)

    def test_q_at_zero(self):
        assert q_fn(0.0, 0.0) == pytest.approx(4.0)

    def test_upper_gamma(self):
        assert upper_gamma(1.0, 2.0) == pytest.approx(math.exp(-2))


class TestHelpers:
    """Ledger tags and snapping."""

    def test_tag(self):
        assert tag("C^A", 1.5, 0.25) == "C^A[1.5, 0.25]"
        assert tag("gamma") == "gamma"

    def test_snap(self):
        assert snap(2.0 + 1e-14) == 2.0
        assert snap(2.1) == 2.1

    def test_half_integers(self):
        assert is_half_integer(-0.5) and is_half_integer(2.5)
        assert not is_half_integer(1.0) and not is_half_integer(-1.5)
