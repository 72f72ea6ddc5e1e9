"""Property suites: every lemma-level inequality checked numerically on fixed grids and seeded samples."""
import math

import numpy as np
from scipy import integrate, special as sp

from .bounds import (
    THETA_ITEMS, f_arccos_sq, f_gap_weight, large_time_bounds, odd_sphere_bounds, psi_envelope,
    theta_derivative_bounds, theta_item_horizon,
)
from .comtet import (
    apoly_factorial_closed_form, bessel_sum_identity_lhs, bessel_sum_identity_rhs, coeff_table, eval_apoly,
    hgw_sequences, lah_partition_sum, lah_sum, l_pow_psi, l_pow_psi_bound, phi_nj, phi_nj_bound,
)
from .constants import (
    B_LARGE, B_SMALL, b_alpha, big_b_alpha, big_k_alpha, big_l_alpha, big_m_omega, big_n_alpha, k_alpha, l_alpha,
    m_omega, n_alpha, upper_gamma,
)
from .errors import ConfigurationError, HeatkitError
from .kernels import LARGE_TIME, h_kernel_series, jacobi_kernel, large_time_remainder
from .logger import get_logger
from .models import JacobiParams, SuiteReport
from .special import (
    d_alpha, e_alpha, gamma_fn, half_rule, integrate_against_pi, pi_density, pi_distribution, pi_tail,
    scaled_bessel_k_half_int,
)
from .theta import g_ultra_half_int, neg_d_pow_theta, sphere_kernel_odd

SEED = 20240611
REL_TOL = 1e-9
MAX_FAILURES = 25

logger = get_logger("suites")


class SuiteRecorder:
    """Accumulates checks into a SuiteReport, grouped by check name."""

    def __init__(self, name):
        self.report = SuiteReport(name)
        self._groups = {}

    def _group(self, name, experimental):
        if name not in self._groups:
            self._groups[name] = {"name": name, "count": 0, "failed": 0,
                                  "worst_margin": math.inf, "experimental": experimental}
            self.report.checks.append(self._groups[name])
        return self._groups[name]

    def record(self, name, margin, point=None, tol=REL_TOL, experimental=False):
        group = self._group(name, experimental)
        group["count"] += 1
        group["worst_margin"] = min(group["worst_margin"], margin)
        ok = margin >= -tol
        if experimental:
            self.report.experimental += 1
            if not ok:
                group["failed"] += 1
            return ok
        self.report.worst_margin = min(self.report.worst_margin, margin)
        if ok:
            self.report.passed += 1
        else:
            group["failed"] += 1
            self.report.failed += 1
            if len(self.report.failures) < MAX_FAILURES:
                self.report.failures.append({"check": name, "point": point, "margin": margin})
        return ok

    def at_most(self, name, value, bound, point=None, tol=REL_TOL, experimental=False):
        """value <= bound, margin relative to |bound|."""
        margin = (bound - value) / max(abs(bound), 1e-300)
        return self.record(name, margin, point, tol, experimental)

    def between(self, name, lower, value, upper, point=None, tol=REL_TOL):
        self.at_most(f"{name} (lower)", lower, value, point, tol)
        self.at_most(f"{name} (upper)", value, upper, point, tol)

    def close(self, name, value, expected, point=None, tol=1e-10):
        margin = -abs(value - expected) / max(abs(expected), 1e-300)
        return self.record(name, margin, point, tol)

    def error(self, name, point, exc):
        group = self._group(name, False)
        group["count"] += 1
        group["failed"] += 1
        self.report.failed += 1
        if len(self.report.failures) < MAX_FAILURES:
            self.report.failures.append({"check": name, "point": point, "error": str(exc)})


def _guarded(recorder, name, point, fn):
    try:
        return fn()
    except HeatkitError as e:
        recorder.error(name, point, e)
        return None


# -- suites ---------------------------------------------------------------------

def pi_measure_suite(rec, rng):
    grid = np.linspace(0.01, 0.99, 50)
    for alpha in (-0.9, -0.75, -0.6):
        k, big_k = k_alpha(alpha), big_k_alpha(alpha)
        l, big_l = l_alpha(alpha), big_l_alpha(alpha)
        for u in grid:
            shape = u * (1 - u) ** (alpha + 0.5)
            rec.between("|Pi_alpha| sandwich", k * shape, abs(pi_distribution(alpha, u)), big_k * shape, (alpha, u))
        for u0 in np.linspace(0.0, 0.95, 12):
            tail = pi_tail(alpha, u0)
            power = (1 - u0) ** (alpha + 1.5) / (alpha + 1.5)
            rec.between("tail of |Pi_alpha|", k * power, tail, big_k * power, (alpha, u0), tol=1e-8)
            density = pi_density(alpha + 2, u0)
            rec.between("tail against dPi_(alpha+2)", l * density, tail, big_l * density, (alpha, u0), tol=1e-8)
    for alpha in (0.0, 0.25, 1.0, 2.5):
        n, big_n = n_alpha(alpha), big_n_alpha(alpha)
        for u in np.linspace(0.0, 0.99, 34):
            density = pi_density(alpha, u)
            rec.between("(1-u)^(alpha-1/2) against dPi_alpha", n * density, (1 - u) ** (alpha - 0.5),
                        big_n * density, (alpha, u))
    for alpha in (0.25, 1.0, 2.5):
        norm = gamma_fn(alpha + 1) / (math.sqrt(math.pi) * gamma_fn(alpha + 0.5))
        for label, f in (("1", lambda u: 1.0), ("u", lambda u: u), ("u^2", lambda u: u * u),
                         ("exp(-u)", lambda u: math.exp(-u))):
            direct, _ = integrate.quad(f, -1, 1, weight="alg", wvar=(alpha - 0.5, alpha - 0.5),
                                       epsabs=1e-14, epsrel=1e-12)
            rec.close("Gauss-Jacobi rule against adaptive quadrature",
                      integrate_against_pi(alpha, f), norm * direct, (alpha, label), tol=1e-10)
        rec.close("half rule mass", half_rule(alpha, 32).total_mass, 0.5, alpha, tol=1e-12)
    for alpha in (0.0, 0.5, 1.0, 3.0):
        rec.close("second moment of dPi_alpha", integrate_against_pi(alpha, lambda u: u * u),
                  1 / (2 * alpha + 2), alpha, tol=1e-12)


def f_bounds_suite(rec, rng):
    theta, varphi = rng.uniform(0, math.pi, (2, 10000))
    u, v = rng.uniform(0, 1, (2, 10000))
    for a, b, s, w in zip(theta, varphi, u, v):
        gap = f_arccos_sq(a, b, s, w) - (a - b) ** 2 / 4
        weight = f_gap_weight(a, b, s, w)
        point = (float(a), float(b), float(s), float(w))
        rec.at_most("F(u,v) - F(1,1) above b-weight", B_SMALL * weight, gap + 1e-13, point)
        rec.at_most("F(u,v) - F(1,1) below B-weight", gap, B_LARGE * weight + 1e-13, point)
    for a, b in zip(theta[:200], varphi[:200]):
        rec.at_most("F(1,1) = (theta-varphi)^2/4", abs(f_arccos_sq(a, b, 1, 1) - (a - b) ** 2 / 4), 1e-12,
                    (float(a), float(b)))
        rec.close("F(0,0) = pi^2/4", f_arccos_sq(a, b, 0, 0), math.pi ** 2 / 4, (float(a), float(b)), tol=1e-12)
    # the constants cannot be improved
    for eps in (1e-3, 1e-4):
        ratio = f_arccos_sq(0, 0, 1 - eps, 1 - eps) / f_gap_weight(0, 0, 1 - eps, 1 - eps)
        rec.close("optimality of b", ratio, B_SMALL, eps, tol=10 * eps)
        theta_near = math.pi - eps
        ratio = ((f_arccos_sq(theta_near, 0, 0, 0) - theta_near ** 2 / 4)
                 / f_gap_weight(theta_near, 0, 0, 0))
        rec.close("optimality of B", ratio, B_LARGE, eps, tol=10 * eps)


def integral_lemmas_suite(rec, rng):
    for omega in (0.5, 1.0, 1.5, 2.0):
        for xi in (0.0, 0.5, 1.0, 5.0, 20.0):
            shape = (1 + xi) ** (omega - 1) * math.exp(-xi)
            rec.between("incomplete gamma sandwich", m_omega(omega) * shape, upper_gamma(omega, xi),
                        big_m_omega(omega) * shape, (omega, xi))
        for a, b in ((0.0, 1.0), (0.3, 0.5), (1.0, 1.9), (2.0, 7.0), (5.0, 5.5)):
            exact = (b ** omega - a ** omega) / omega
            shape = b ** (omega - 1) * (b - a)
            rec.between("power integral sandwich", (1 - 2 ** -omega) / omega * shape, exact,
                        2 / omega * shape, (omega, a, b))
    for alpha in (-0.5, 0.0, 1.0, 2.5):
        for xi in (0.0, 1.0, 10.0, 100.0):
            value = _guarded(rec, "exponential moment of dPi_alpha", (alpha, xi), lambda: integrate_against_pi(
                alpha, lambda s: math.exp(-xi * (1 - s)), n_nodes=96, tol=1e-9, half=True))
            if value is None:
                continue
            shape = max(d_alpha(alpha), xi) ** (-alpha - 0.5)
            rec.between("exponential moment of dPi_alpha", b_alpha(alpha) * shape, value,
                        big_b_alpha(alpha) * shape, (alpha, xi), tol=1e-8)
    angles = ((0.0, 0.0), (0.4, 1.1), (1.5, 1.5), (3.0, 0.2), (math.pi, math.pi / 2))
    for alpha, beta in ((-0.5, -0.5), (0.0, 0.5), (1.0, -0.5), (0.5, 1.5)):
        outer, inner = half_rule(alpha, 80), half_rule(beta, 80)
        for t in (0.1, 0.5, 2.0):
            for theta, varphi in angles:
                total = math.fsum(
                    wu * wv * math.exp(-f_arccos_sq(theta, varphi, u, v) / t)
                    for u, wu in zip(outer.nodes, outer.weights) for v, wv in zip(inner.nodes, inner.weights))
                shape = t ** (alpha + beta + 1) * math.exp(-(theta - varphi) ** 2 / (4 * t))
                lower = (b_alpha(alpha) * b_alpha(beta) * shape
                         * psi_envelope(alpha, B_LARGE, t, theta, varphi)
                         * psi_envelope(beta, B_LARGE, t, math.pi - theta, math.pi - varphi))
                upper = (big_b_alpha(alpha) * big_b_alpha(beta) * shape
                         * psi_envelope(alpha, B_SMALL, t, theta, varphi)
                         * psi_envelope(beta, B_SMALL, t, math.pi - theta, math.pi - varphi))
                rec.between("double integral of exp(-F/t)", lower, total, upper, (alpha, beta, t, theta, varphi),
                            tol=1e-6)
    for beta in (-0.5, 0.0, 1.0, 2.5):
        rule = half_rule(beta, 80)
        for t in (0.1, 0.5, 2.0):
            for theta in (0.0, 0.7, 2.0, math.pi):
                total = rule.integrate(lambda v: math.exp(-f_arccos_sq(theta, 0.0, 1.0, v) / t))
                shape = t ** (beta + 0.5) * math.exp(-theta * theta / (4 * t))
                lower = b_alpha(beta) * psi_envelope(beta, B_LARGE, t, math.pi - theta, math.pi) * shape
                upper = big_b_alpha(beta) * psi_envelope(beta, B_SMALL, t, math.pi - theta, math.pi) * shape
                rec.between("single integral of exp(-F/t) at varphi=0", lower, total, upper, (beta, t, theta),
                            tol=1e-6)


def gamma_suite(rec, rng):
    for x in np.linspace(0.1, 50, 100):
        stirling = 0.5 * math.log(2 * math.pi) + (x - 0.5) * math.log(x) - x
        log_g = float(sp.gammaln(x))
        rec.at_most("Stirling lower bound", stirling, log_g, float(x), tol=0)
        rec.at_most("Stirling upper bound", log_g, stirling + 1 / (12 * x), float(x), tol=0)
    for _ in range(300):
        x = rng.uniform(0.05, 30)
        y = rng.uniform(0, x)
        if y <= 0:
            continue
        rec.at_most("gamma ratio bound", float(sp.gammaln(x) - sp.gammaln(y)), (x - y) * math.log(x),
                    (float(x), float(y)), tol=1e-14)
    for j in range(1, 31):
        rec.at_most("Gamma(j+1/2) lower bound",
                    0.5 * math.log(2 * math.pi) - 1 / 12 + j * math.log(j) - j, float(sp.gammaln(j + 0.5)), j, tol=0)
    for x in (0.0, 0.5, 2.0, 7.5, 20.0):
        values = [float(sp.binom(x + y, y)) for y in np.linspace(0, 10, 41)]
        for y, (a, b) in enumerate(zip(values, values[1:])):
            rec.at_most("binom(x+y, y) increasing in y", a, b, (x, y))
    alphas = np.linspace(-1.45, 20, 200)
    values = [d_alpha(a) for a in alphas]
    for a, (lo, hi) in zip(alphas[1:], zip(values, values[1:])):
        rec.at_most("D_alpha increasing", lo, hi, float(a), tol=0)
    for a in np.linspace(-0.49, 20, 100):
        rec.between("D_alpha linear bounds", (a + 1.5) / math.e, d_alpha(a), (a + 1.5) * math.exp(-np.euler_gamma),
                    float(a), tol=0)
        ratio = d_alpha(a) / e_alpha(a)
        rec.between("D_alpha / E_alpha", 1.0, ratio, 1.1, float(a), tol=1e-12)
    for a, expected in ((-1.0, 1 / math.pi), (0.0, math.pi / 4), (0.5, 1.0), (-0.5, math.exp(-np.euler_gamma))):
        rec.close("D_alpha special values", d_alpha(a), expected, a, tol=1e-12)


def bessel_suite(rec, rng):
    for m in range(11):
        nu = m + 0.5
        for eps in (0.1, 1 / 3, 2 / 3):
            for scale in (1.0, 1.5, 4.0):
                y = 2 * nu / (3 * eps) * scale
                rec.at_most("scaled K_nu bound", scaled_bessel_k_half_int(nu, y), (1 + eps) ** (nu - 0.5),
                            (nu, eps, y))
        for y in (0.1, 1.0, 7.0, 50.0):
            reference = math.sqrt(2 * y / math.pi) * float(sp.kve(nu, y))
            rec.close("scaled K_nu against scipy", scaled_bessel_k_half_int(nu, y), reference, (nu, y), tol=1e-11)
            rec.at_most("scaled K_nu at least 1", 1.0, scaled_bessel_k_half_int(nu, y), (nu, y), tol=0)


def _stirling_first(n_max):
    c = [[0] * (n_max + 1) for _ in range(n_max + 1)]
    c[0][0] = 1
    for n in range(n_max):
        for k in range(1, n + 2):
            c[n + 1][k] = n * c[n][k] + c[n][k - 1]
    return c


def _double_factorial(n):
    return math.prod(range(n, 0, -2))


def _g_at_half_pi(j):
    if j == 1:
        return math.pi / 2
    value = _double_factorial(j - 2) ** 2
    return value if j % 2 == 0 else math.pi * value / 2


def comtet_suite(rec, rng):
    table = coeff_table(20)
    first = _stirling_first(10)
    for N in range(1, 11):
        for j in range(1, N + 1):
            width = N - j + 1
            rec.close("A(1,...,1) = Stirling first kind", eval_apoly(N, j, [1.0] * width, table),
                      first[N][j], (N, j), tol=1e-14)
            args = ([1.0, 1.0] + [0.0] * width)[:width]
            rec.close("A(1,1,0,...) = Stirling second kind", eval_apoly(N, j, args, table),
                      float(sp.stirling2(N, j, exact=True)), (N, j), tol=1e-14)
    for N in range(1, 16):
        for j in range(1, N + 1):
            args = [float(math.factorial(i)) for i in range(N - j + 1)]
            rec.close("A(0!,1!,...) closed form", eval_apoly(N, j, args, table),
                      apoly_factorial_closed_form(N, j), (N, j), tol=1e-12)
    phis = np.linspace(0, math.pi / 2, 13)
    for i in range(16):
        top = l_pow_psi(i, math.pi / 2)
        rec.at_most("L^i Psi at pi/2 bound", top, l_pow_psi_bound(i), i)
        for phi in phis:
            value = l_pow_psi(i, phi)
            rec.at_most("L^i Psi positive", 0.0, value, (i, float(phi)), tol=0)
            rec.at_most("L^i Psi maximal at pi/2", value, top, (i, float(phi)))
    for N in range(1, 13):
        for j in range(1, N + 1):
            bound = phi_nj_bound(N, j)
            for phi in phis[::3]:
                rec.at_most("Phi_Nj bound", phi_nj(N, j, phi, table), bound, (N, j, float(phi)))
    for N in range(1, 13):
        for x in (0.5, 1.0, 5.0, 40.0):
            rec.close("Bessel-sum identity", bessel_sum_identity_lhs(N, x), bessel_sum_identity_rhs(N, x),
                      (N, x), tol=1e-10)
    for N in range(1, 11):
        for s in (0.5, 1.0, 2.0):
            rec.close("Lah identity", lah_sum(N, s), lah_partition_sum(N, s), (N, s), tol=1e-12)

    j_max = 12
    grid = np.linspace(0.05, math.pi - 0.05, 60)
    seqs = [hgw_sequences(j_max, phi) for phi in grid]
    for j in range(j_max):
        for phi, (h, g, _w), (h_next, g_next, _w_next) in zip(grid, seqs, seqs[1:]):
            rec.at_most("h_j non-negative", 0.0, h[j], (j + 1, float(phi)), tol=0)
            rec.at_most("h_j increasing", h[j], h_next[j] * (1 + 1e-9) + 1e-300, (j + 1, float(phi)))
            rec.at_most("g_j increasing", g[j], g_next[j] * (1 + 1e-9), (j + 1, float(phi)))
    step = 1e-5
    for phi in (0.7, 1.2, 2.0, 2.6):
        up, down, here = hgw_sequences(j_max, phi + step), hgw_sequences(j_max, phi - step), hgw_sequences(j_max, phi)
        for j in range(1, j_max - 1):
            derivative = (up[0][j] - down[0][j]) / (2 * step)
            rec.close("h'_(j+1) = j^2 h_j sin(phi)", derivative, j * j * here[0][j - 1] * math.sin(phi),
                      (j, phi), tol=1e-6)
    half = hgw_sequences(j_max, math.pi / 2)[1]
    for j in range(1, j_max + 1):
        rec.close("g_j(pi/2) closed form", half[j - 1], _g_at_half_pi(j), j, tol=1e-9)
    for phi in np.linspace(0.02, math.pi / 2, 40):
        h, g, w = hgw_sequences(j_max, phi)
        for j in range(1, j_max + 1):
            rec.at_most("g_j below g_j(pi/2)", g[j - 1], _g_at_half_pi(j), (j, float(phi)))
            rec.at_most("w_j <= pi^(j-1)", w[j - 1], math.pi ** (j - 1), (j, float(phi)))
            rec.at_most("w_j <= (pi/2)^(j-1)", w[j - 1], (math.pi / 2) ** (j - 1), (j, float(phi)),
                        experimental=True)


def theta_bounds_suite(rec, rng):
    phis = np.linspace(0, math.pi / 2, 9)
    for N in range(7):
        for item in THETA_ITEMS:
            horizon = theta_item_horizon(item, N)
            if horizon is None:
                continue
            for t in sorted({min(horizon, 2.0), horizon * 0.3, max(horizon * 0.05, 1e-3)}):
                for phi in phis:
                    point = (N, item, t, float(phi))
                    value = _guarded(rec, "(-D)^N theta_t sandwich", point, lambda: neg_d_pow_theta(N, t, phi))
                    if value is None:
                        continue
                    lower, upper = theta_derivative_bounds(N, t, phi, item)
                    rec.between(f"(-D)^N theta_t sandwich [{item}]", lower, value, upper, point, tol=1e-9)
    for lam in (-0.5, 0.5, 1.5, 2.5):
        t_max = 1 / (2 * lam + 2) if lam > -0.5 else 1.0
        for t in (t_max, t_max / 4, t_max / 20):
            for phi in np.linspace(0, math.pi / 2, 9):
                point = (lam, t, float(phi))
                value = _guarded(rec, "odd-sphere kernel sandwich", point, lambda: g_ultra_half_int(lam, t, phi))
                if value is None:
                    continue
                lower, upper = odd_sphere_bounds(lam, t, phi)
                rec.between("odd-sphere kernel sandwich", lower, value, upper, point, tol=1e-9)
    t = 1e-3
    for d in (3, 5, 7):
        scaled = (4 * math.pi * t) ** (d / 2) * sphere_kernel_odd((d - 1) // 2, t, 0.0)
        rec.record("small-time limit at the pole", 0.02 - abs(scaled - 1), (d, t), tol=0)


def kernel_identities_suite(rec, rng):
    samples = rng.uniform(-1, 1, (12, 2))
    for alpha, beta in ((0.0, 0.0), (0.5, 0.5), (1.0, -0.5), (-0.7, 0.3), (2.0, 1.0)):
        params = JacobiParams(alpha, beta)
        for t in (0.1, 0.5, 1.0):
            for x, y in samples:
                point = (alpha, beta, t, float(x), float(y))
                g = jacobi_kernel(params, t, x, y)
                rec.at_most("positivity", 0.0, g, point, tol=0)
                rec.close("symmetry in (x, y)", jacobi_kernel(params, t, y, x), g, point, tol=1e-10)
                rec.close("reflection symmetry", jacobi_kernel(params.swapped(), t, -x, -y), g, point, tol=1e-10)
            nodes, weights = sp.roots_jacobi(60, alpha, beta)
            for x in (-0.9, 0.0, 0.6):
                mass = math.fsum(w * jacobi_kernel(params, t, x, float(z)) for z, w in zip(nodes, weights))
                rec.close("conservation", mass, 1.0, (alpha, beta, t, x), tol=1e-8)
    step = 1e-5
    for alpha, beta in ((0.0, 0.0), (0.5, -0.5), (1.5, 0.5)):
        params, shifted = JacobiParams(alpha, beta), JacobiParams(alpha + 1, beta + 1)
        for t in (0.3, 1.0):
            for x in (-0.5, 0.0, 0.5):
                derivative = (jacobi_kernel(params, t, x + step, 1.0)
                              - jacobi_kernel(params, t, x - step, 1.0)) / (2 * step)
                expected = 2 * (alpha + 1) * math.exp(-t * (alpha + beta + 2)) * jacobi_kernel(shifted, t, x, 1.0)
                rec.close("x-derivative at y=1", derivative, expected, (alpha, beta, t, x), tol=1e-5)
    for alpha in (0.0, 0.5, 1.0):
        params, ultra = JacobiParams(alpha, -0.5), JacobiParams(alpha, alpha)
        for t in (0.4, 1.0):
            for theta in np.linspace(0, math.pi, 7):
                c = math.cos(theta / 2)
                expected = 2 ** (-alpha - 1.5) * (jacobi_kernel(ultra, t / 4, c, 1.0)
                                                  + jacobi_kernel(ultra, t / 4, -c, 1.0))
                rec.close("quadratic map", jacobi_kernel(params, t, math.cos(theta), 1.0), expected,
                          (alpha, t, float(theta)), tol=1e-8)
    for lam in (-1.25, -1.0):
        g1, g2 = JacobiParams(lam + 1, lam + 1), JacobiParams(lam + 2, lam + 2)
        for t in (0.5, 1.0):
            for x in (-0.6, 0.3, 0.8):
                point = (lam, t, x)
                first = (h_kernel_series(lam, t, x + step) - h_kernel_series(lam, t, x - step)) / (2 * step)
                odd = 0.5 * (jacobi_kernel(g1, t, x, 1.0) - jacobi_kernel(g1, t, -x, 1.0))
                rec.close("H' against the odd part", first, 2 * math.exp(-t * (2 * lam + 2)) * odd, point, tol=1e-5)
                h2 = 1e-3
                second = (h_kernel_series(lam, t, x + h2) - 2 * h_kernel_series(lam, t, x)
                          + h_kernel_series(lam, t, x - h2)) / (h2 * h2)
                even = 0.5 * (jacobi_kernel(g2, t, x, 1.0) + jacobi_kernel(g2, t, -x, 1.0))
                rec.close("H'' against the even part", second,
                          4 * (lam + 2) * math.exp(-t * (4 * lam + 6)) * even, point, tol=1e-5)
    for alpha, beta, eps, delta in ((0.0, 0.0, 1.0, 0.0), (0.5, 0.5, 1.0, 1.0), (0.0, 1.0, 0.0, 2.0)):
        base, raised = JacobiParams(alpha, beta), JacobiParams(alpha + eps, beta + delta)
        for x, y in samples[:8]:
            for t in (0.2, 0.7):
                weight = ((1 - x) * (1 - y)) ** (eps / 2) * ((1 + x) * (1 + y)) ** (delta / 2)
                growth = math.exp((eps + delta) / 2 * (alpha + beta + 1 + (eps + delta) / 2) * t)
                rec.at_most("comparison principle", weight * jacobi_kernel(raised, t, x, y),
                            growth * jacobi_kernel(base, t, x, y), (alpha, beta, eps, delta, t, float(x), float(y)))
    pairs = ((0.2, -0.4), (-0.5, 0.7))
    for alpha, beta in ((0.0, 0.0), (0.5, 0.5), (1.0, -0.5)):
        params = JacobiParams(alpha, beta)
        nodes, weights = sp.roots_jacobi(80, alpha, beta)
        for x, y in pairs:
            point = (alpha, beta, x, y)
            convolved = math.fsum(w * jacobi_kernel(params, 0.5, x, float(z)) * jacobi_kernel(params, 0.5, float(z), y)
                                  for z, w in zip(nodes, weights))
            rec.close("Chapman-Kolmogorov", convolved, jacobi_kernel(params, 1.0, x, y), point, tol=1e-7)
            residual, d_t = _heat_residual(lambda s, u: jacobi_kernel(params, s, u, y), alpha, beta, 0.3, x)
            rec.at_most("heat equation for G", abs(residual), 1e-4 * abs(d_t), point)
    for lam in (-1.25, -1.0):
        for x in (0.2, 0.6):
            residual, d_t = _heat_residual(lambda s, u: h_kernel_series(lam, s, u), lam, lam, 0.3, x)
            rec.at_most("heat equation for H", abs(residual), 1e-4 * abs(d_t), (lam, x))


def _heat_residual(f, alpha, beta, t, x, dt=1e-4, dx=1e-3):
    """((∂_t + J_x) f, ∂_t f) at (t, x) by central differences, J = -(1-x²)∂² - (β-α-(α+β+2)x)∂."""
    d_t = (f(t + dt, x) - f(t - dt, x)) / (2 * dt)
    up, mid, down = f(t, x + dx), f(t, x), f(t, x - dx)
    d_x = (up - down) / (2 * dx)
    d_xx = (up - 2 * mid + down) / dx ** 2
    return d_t - (1 - x * x) * d_xx - (beta - alpha - (alpha + beta + 2) * x) * d_x, d_t


def large_time_suite(rec, rng):
    grid = np.linspace(-1, 1, 9)
    for alpha, beta in ((0.0, 0.0), (2.0, 0.5), (-0.7, -0.8)):
        params = JacobiParams(alpha, beta)
        for t in (LARGE_TIME, 2.0, 3.0, 5.0):
            bound = large_time_bounds(params, t).bound
            for x in grid:
                for y in grid:
                    remainder = large_time_remainder(params, t, x, y)
                    rec.at_most("large-time remainder", abs(remainder), bound, (alpha, beta, t, float(x), float(y)),
                                tol=0)
    for alpha, beta in ((-0.5, -0.5), (0.0, 0.0), (1.0, -0.5), (3.0, 2.0)):
        params = JacobiParams(alpha, beta)
        t = max(1 + math.log(8), LARGE_TIME)
        summary = large_time_bounds(params, t)
        rec.at_most("threshold below 1 + log 8", summary.threshold, 1 + math.log(8), (alpha, beta))
        for x in grid:
            for y in grid:
                g = jacobi_kernel(params, t, x, y)
                rec.between("large-time sandwich", summary.lower, g, summary.upper, (alpha, beta, float(x), float(y)))


SUITES = {
    "pi-measure": pi_measure_suite,
    "f-bounds": f_bounds_suite,
    "integral-lemmas": integral_lemmas_suite,
    "gamma": gamma_suite,
    "bessel": bessel_suite,
    "comtet": comtet_suite,
    "theta-bounds": theta_bounds_suite,
    "kernel-identities": kernel_identities_suite,
    "large-time": large_time_suite,
}


def run_property_suite(name, seed=SEED):
    """Run one named suite with a fixed seed; evaluation failures are counted, never raised."""
    if name not in SUITES:
        raise ConfigurationError(f"unknown suite {name!r}; expected one of {', '.join(SUITES)}")
    rec = SuiteRecorder(name)
    rng = np.random.default_rng(seed)
    logger.info(f"Running suite {name}")
    try:
        SUITES[name](rec, rng)
    except HeatkitError as e:
        rec.error(name, None, e)
    report = rec.report
    logger.info(f"Suite {name}: {report.passed} passed, {report.failed} failed, "
                f"{report.experimental} experimental, worst margin {report.worst_margin:.3g}")
    return report
