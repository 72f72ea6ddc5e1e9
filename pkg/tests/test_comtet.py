import math
import os
import json
import tempfile

import numpy as np
import pytest
from scipy import special as sp
import sympy

from heatkit.comtet import (
    apoly_factorial_closed_form, bessel_sum_identity_lhs, bessel_sum_identity_rhs, build_coeff_table,
    coeff_table, eval_apoly, hgw_sequences, l_pow_psi, l_pow_psi_bound, lah_partition_sum, lah_sum,
    partition_count, phi_nj, phi_nj_bound, psi_coeff,
)
from heatkit.errors import CapacityError, DomainError


def stirling_first(n, k):
    rows = [[1]]
    for m in range(1, n + 1):
        prev = rows[-1] + [0]
        rows.append([0] + [prev[j - 1] + (m - 1) * prev[j] for j in range(1, m + 1)])
    return rows[n][k]


class TestCoefficientTable:
    """Comtet polynomial coefficients and their special evaluations."""

    def test_all_ones_gives_stirling_first_kind(self):
        table = coeff_table(10)
        for N in range(1, 9):
            for j in range(1, N + 1):
                assert eval_apoly(N, j, [1.0] * (N - j + 1), table) == pytest.approx(stirling_first(N, j))

    def test_first_two_ones_give_stirling_second_kind(self):
        table = coeff_table(10)
        for N in range(2, 9):
            for j in range(1, N + 1):
                args = [1.0, 1.0] + [0.0] * (N - j - 1)
                expected = float(sp.stirling2(N, j, exact=True))
                assert eval_apoly(N, j, args[:N - j + 1], table) == pytest.approx(expected)

    def test_factorial_arguments(self):
        table = coeff_table(10)
        for N in range(1, 9):
            for j in range(1, N + 1):
                args = [float(math.factorial(i)) for i in range(N - j + 1)]
                assert eval_apoly(N, j, args, table) == pytest.approx(apoly_factorial_closed_form(N, j))

    def test_low_weight_closed_forms(self):
        table = coeff_table(10)
        p0, p1, p2, p3, p4 = 0.7, 1.3, 0.4, 1.9, 0.6
        for N in range(2, 10):
            c = math.comb(N, 2)
            assert eval_apoly(N, N - 1, [p0, p1], table) == pytest.approx(c * p0 ** (N - 1) * p1)
        for N in range(3, 10):
            c = math.comb(N, 3)
            expected = c * p0 ** (N - 1) * p2 + (3 * N - 5) / 4 * c * p0 ** (N - 2) * p1 ** 2
            assert eval_apoly(N, N - 2, [p0, p1, p2], table) == pytest.approx(expected)
        for N in range(4, 10):
            c = math.comb(N, 4)
            expected = (c * p0 ** (N - 1) * p3 + 2 * (N - 2) * c * p0 ** (N - 2) * p1 * p2
                        + (N - 3) * (N - 2) / 2 * c * p0 ** (N - 3) * p1 ** 3)
            assert eval_apoly(N, N - 3, [p0, p1, p2, p3], table) == pytest.approx(expected)
        for N in range(5, 10):
            c = math.comb(N, 5)
            expected = (c * p0 ** (N - 1) * p4 + (5 * N - 13) / 2 * c * p0 ** (N - 2) * p1 * p3
                        + (15 * N ** 3 - 150 * N ** 2 + 485 * N - 502) / 48 * c * p0 ** (N - 4) * p1 ** 4)
            # the quoted form has no (L^2 Psi)^2 term, so compare with L^2 Psi = 0
            assert eval_apoly(N, N - 4, [p0, p1, 0.0, p3, p4], table) == pytest.approx(expected)

    @pytest.mark.parametrize("N", range(1, 9))
    def test_recurrence_matches_symbolic_derivative(self, N):
        # F(z) = exp(w z²/2) has L^j F = w^j F, so D^N F(φ) / F(φ) = Σ_j w^j Φ_{N,j}(φ)
        phi, w = sympy.symbols("phi w", positive=True)
        gaussian = sympy.exp(w * phi ** 2 / 2)
        expr = gaussian
        for _ in range(N):
            expr = sympy.expand(sympy.diff(expr, phi) / sympy.sin(phi))
        quotient = sympy.expand(expr.subs(gaussian, 1))
        assert not quotient.has(sympy.exp)
        table = build_coeff_table(8)
        for at in (sympy.Rational(3, 10), sympy.Rational(6, 5)):
            assert float(quotient.coeff(w, 0).subs(phi, at).evalf(30)) == pytest.approx(0.0, abs=1e-20)
            for j in range(1, N + 1):
                expected = float(quotient.coeff(w, j).subs(phi, at).evalf(30))
                assert phi_nj(N, j, float(at), table) == pytest.approx(expected, rel=1e-10)

    def test_wrong_argument_count(self):
        with pytest.raises(DomainError):
            eval_apoly(3, 1, [1.0], coeff_table(5))

    def test_capacity(self):
        with pytest.raises(CapacityError):
            build_coeff_table(26)
        with pytest.raises(CapacityError):
            coeff_table(4).entries(5, 1)

    def test_json_dump_keys(self):
        table = build_coeff_table(4)
        with tempfile.NamedTemporaryFile(mode='w', suffix='.json', delete=False) as f:
            temp_path = f.name
        try:
            table.dump(temp_path)
            with open(temp_path) as fh:
                data = json.load(fh)
            assert data["1/1/1"] == 1
            assert sum(data.values()) == sum(sum(table.entries(N, j).values())
                                             for N in range(1, 5) for j in range(1, N + 1))
        finally:
            os.unlink(temp_path)


class TestPsiSeries:
    """Ψ(φ) = φ/sin φ and its L-powers."""

    def test_psi_itself(self):
        for phi in (0.1, 0.7, math.pi / 2):
            assert l_pow_psi(0, phi) == pytest.approx(phi / math.sin(phi), rel=1e-13)

    def test_values_at_zero(self):
        assert psi_coeff(1) == pytest.approx(1 / 6)
        assert l_pow_psi(1, 0.0) == pytest.approx(1 / 3)

    def test_first_l_power_by_differences(self):
        phi, h = 0.9, 1e-5
        psi = lambda x: x / math.sin(x)  # noqa: E731
        expected = (psi(phi + h) - psi(phi - h)) / (2 * h) / phi
        assert l_pow_psi(1, phi) == pytest.approx(expected, rel=1e-8)

    @pytest.mark.parametrize("i", range(0, 16))
    def test_bound_at_half_pi(self, i):
        assert 0 < l_pow_psi(i, math.pi / 2) <= l_pow_psi_bound(i)

    def test_rejects_large_angle(self):
        with pytest.raises(DomainError):
            l_pow_psi(2, 2.0)

    @pytest.mark.parametrize("N", [2, 5, 9])
    def test_phi_nj_bound(self, N):
        table = coeff_table(12)
        for phi in np.linspace(0.0, math.pi / 2, 7):
            for j in range(1, N + 1):
                assert 0 < phi_nj(N, j, float(phi), table) <= phi_nj_bound(N, j) * (1 + 1e-12)


class TestIdentities:
    """Bessel-sum and Lah identities, partitions."""

    @pytest.mark.parametrize("N", range(1, 8))
    def test_bessel_sum(self, N):
        for x in (0.3, 1.0, 4.5):
            assert bessel_sum_identity_lhs(N, x) == pytest.approx(bessel_sum_identity_rhs(N, x), rel=1e-12)

    @pytest.mark.parametrize("N", range(1, 9))
    def test_lah(self, N):
        assert lah_sum(N, 0.7) == pytest.approx(lah_partition_sum(N, 0.7), rel=1e-12)

    def test_partition_counts(self):
        assert [partition_count(n) for n in range(0, 8)] == [1, 1, 2, 3, 5, 7, 11, 15]
        assert partition_count(10) == 42


class TestSequences:
    """h_j, g_j and w_j."""

    def test_values_at_half_pi(self):
        h, g, w = hgw_sequences(6, math.pi / 2)
        # g_j(π/2): π/2, then [(j-2)!!]² for even j and π[(j-2)!!]²/2 for odd j
        np.testing.assert_allclose(g, [math.pi / 2, 1.0, math.pi / 2, 4.0, 9 * math.pi / 2, 64.0], rtol=1e-12)
        np.testing.assert_allclose(h, g, rtol=1e-12)

    def test_first_terms(self):
        phi = 1.1
        h, g, _ = hgw_sequences(2, phi)
        assert h[0] == pytest.approx(phi)
        assert h[1] == pytest.approx(math.sin(phi) - phi * math.cos(phi))
        assert g[0] == pytest.approx(phi / math.sin(phi))

    def test_expansion_and_recurrence_agree(self):
        phi = 0.55
        _, by_recurrence, _ = hgw_sequences(6, phi, small_phi=0.5)
        _, by_expansion, _ = hgw_sequences(6, phi, small_phi=0.6)
        np.testing.assert_allclose(by_recurrence, by_expansion, rtol=1e-6)

    def test_w_bounded_by_pi_powers(self):
        for phi in (0.3, 1.0, 2.0, 3.0):
            _, _, w = hgw_sequences(10, phi)
            for j, wj in enumerate(w, start=1):
                assert wj <= math.pi ** (j - 1) * (1 + 1e-9)

    def test_rejects_endpoints(self):
        with pytest.raises(DomainError):
            hgw_sequences(4, 0.0)
        with pytest.raises(DomainError):
            hgw_sequences(0, 1.0)
