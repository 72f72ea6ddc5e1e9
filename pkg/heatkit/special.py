"""Gamma utilities, 𝔇_α, half-integer Bessel K, Jacobi polynomials and norms, the Π_α family."""
import math

import numpy as np
from scipy import integrate, special as sp

from .errors import DomainError, AccuracyError
from .logger import get_logger
from .models import PiKind, PiMeasure, QuadratureRule

EULER_GAMMA = float(np.euler_gamma)
SQRT_PI = math.sqrt(math.pi)

logger = get_logger("special")


def _is_nonpositive_integer(x):
    return x <= 0 and float(x).is_integer()


def gamma_fn(x):
    """Γ(x); negative non-integer arguments are reached by upward recursion from (0,1]."""
    if _is_nonpositive_integer(x):
        raise DomainError(f"gamma has a pole at {x}")
    if x > 0:
        return float(sp.gamma(x))
    shift = math.ceil(-x)
    z = x + shift
    denom = 1.0
    for k in range(shift):
        denom *= x + k
    return float(sp.gamma(z)) / denom


def d_alpha(alpha):
    """𝔇_α = Γ(α+3/2)^{1/(α+1/2)}, with 𝔇_{-1/2} = e^{-γ}."""
    if alpha <= -1.5:
        raise DomainError(f"D_alpha needs alpha > -3/2 (got {alpha})")
    eps = alpha + 0.5
    if abs(eps) < 1e-6:
        # log Γ(1+ε)/ε = -γ + ζ(2)ε/2 + O(ε²)
        return math.exp(-EULER_GAMMA + eps * math.pi ** 2 / 12)
    return math.exp(float(sp.gammaln(alpha + 1.5)) / eps)


def e_alpha(alpha):
    """Linear proxy 𝔼_α = (α+1/2)/e + e^{-γ} for 𝔇_α."""
    return (alpha + 0.5) / math.e + math.exp(-EULER_GAMMA)


def _check_half_integer(nu):
    if not (nu >= 0.5 and float(2 * nu).is_integer() and int(2 * nu) % 2 == 1):
        raise DomainError(f"nu must be a half-integer >= 1/2 (got {nu})")
    return int(nu - 0.5)


def scaled_bessel_k_half_int(nu, y):
    """s_ν(y) = √(2y/π) e^y K_ν(y), a polynomial in 1/y for half-integer ν."""
    m = _check_half_integer(nu)
    if not y > 0:
        raise DomainError(f"Bessel K needs y > 0 (got {y})")
    prev, cur = 1.0, 1.0 + 1.0 / y  # s_{1/2}, s_{3/2}
    if m == 0:
        return prev
    for k in range(1, m):
        order = k + 0.5
        prev, cur = cur, prev + (2 * order / y) * cur
    return cur


def bessel_k_half_int(nu, y):
    return scaled_bessel_k_half_int(nu, y) * math.sqrt(math.pi / (2 * y)) * math.exp(-y)


def _recurrence_coeffs(k, a, b):
    # coefficients producing P_{k+1} from P_k and P_{k-1}
    s = 2 * k + a + b
    a1 = 2 * (k + 1) * (k + a + b + 1) * s
    a2 = (s + 1) * (a * a - b * b)
    a3 = s * (s + 1) * (s + 2)
    a4 = 2 * (k + a) * (k + b) * (s + 2)
    return a1, a2, a3, a4


def iter_jacobi(a, b, x):
    """Yield P_0^{a,b}(x), P_1^{a,b}(x), ... without end; x may be an array.

    Raw exponents are accepted so the ultraspherical family below -1 (as used by H) fits;
    a = b = -1 goes through P_n^{-1,-1} = (x²-1)/4 P_{n-2}^{1,1}.
    """
    x = np.asarray(x, dtype=float)
    if a == b == -1:
        yield np.ones_like(x)
        yield np.zeros_like(x)
        for p in iter_jacobi(1.0, 1.0, x):
            yield 0.25 * (x * x - 1) * p
        return
    at_top = x == 1.0
    at_bottom = x == -1.0
    fix = bool(np.any(at_top) or np.any(at_bottom))
    top, bottom = 1.0, 1.0
    prev = np.ones_like(x)
    yield prev
    cur = 0.5 * (a - b) + 0.5 * (a + b + 2) * x
    k = 1
    while True:
        if fix:
            top *= (k + a) / k
            bottom *= -(k + b) / k
            cur = np.where(at_top, top, np.where(at_bottom, bottom, cur))
        yield cur
        a1, a2, a3, a4 = _recurrence_coeffs(k, a, b)
        if a1 == 0:
            raise DomainError(f"Jacobi recurrence degenerates at degree {k + 1} for ({a}, {b})")
        prev, cur = cur, ((a2 + a3 * x) * cur - a4 * prev) / a1
        k += 1


def jacobi_poly_all(n_max, params, x):
    """[P_0(x), ..., P_{n_max}(x)] by the three-term recurrence; x may be an array."""
    if n_max < 0:
        raise DomainError("n must be >= 0")
    a, b = params.alpha, params.beta
    x = np.asarray(x, dtype=float)
    values = [np.ones_like(x)]
    if n_max >= 1:
        values.append(0.5 * (a - b) + 0.5 * (a + b + 2) * x)
    for k in range(1, n_max):
        a1, a2, a3, a4 = _recurrence_coeffs(k, a, b)
        values.append(((a2 + a3 * x) * values[k] - a4 * values[k - 1]) / a1)
    if np.any(np.abs(x) == 1.0):
        for n in range(n_max + 1):
            top = float(sp.binom(n + a, n))
            bottom = (-1) ** n * float(sp.binom(n + b, n))
            values[n] = np.where(x == 1.0, top, np.where(x == -1.0, bottom, values[n]))
    if values[0].ndim == 0:
        return [float(v) for v in values]
    return values


def jacobi_poly(n, params, x):
    if n < 0:
        raise DomainError("n must be >= 0")
    if x == 1.0:
        return float(sp.binom(n + params.alpha, n))
    if x == -1.0:
        return (-1) ** n * float(sp.binom(n + params.beta, n))
    return jacobi_poly_all(n, params, x)[n]


def h0(params):
    a, b = params.alpha, params.beta
    return math.exp((a + b + 1) * math.log(2) + sp.gammaln(a + 1) + sp.gammaln(b + 1) - sp.gammaln(a + b + 2))


def h0_ultra(lam):
    """h_0^{λ,λ} written as √π Γ(λ+1)/Γ(λ+3/2); needs λ > -1."""
    if lam <= -1:
        raise DomainError(f"h0 needs lambda > -1 (got {lam})")
    return SQRT_PI * math.exp(sp.gammaln(lam + 1) - sp.gammaln(lam + 1.5))


def jacobi_norm(n, params):
    """h_n^{α,β} = ∫ (P_n^{α,β})² dρ_{α,β}."""
    if n < 0:
        raise DomainError("n must be >= 0")
    if n == 0:
        return h0(params)
    a, b = params.alpha, params.beta
    log_h = ((a + b + 1) * math.log(2) + sp.gammaln(n + a + 1) + sp.gammaln(n + b + 1)
             - math.log(2 * n + a + b + 1) - sp.gammaln(n + a + b + 1) - sp.gammaln(n + 1))
    return math.exp(log_h)


def pi_measure(alpha):
    return PiMeasure.for_alpha(alpha)


def _pi_normalizer(alpha):
    # Γ(α+1)/(√π Γ(α+1/2)); negative for -1 < α < -1/2
    return gamma_fn(alpha + 1) / (SQRT_PI * gamma_fn(alpha + 0.5))


def pi_density(alpha, u):
    m = pi_measure(alpha)
    if m.kind == PiKind.POINT_MASS:
        raise DomainError("dPi_{-1/2} is a pair of point masses and has no density")
    if abs(u) >= 1 and alpha < 0.5:
        raise DomainError("density is singular at u = +-1 for alpha < 1/2")
    return _pi_normalizer(alpha) * (1 - u * u) ** (alpha - 0.5)


def pi_distribution(alpha, u):
    """Π_α(u) = ∫_0^u dΠ_α, odd in u."""
    m = pi_measure(alpha)
    if m.kind == PiKind.POINT_MASS:
        raise DomainError("Pi_{-1/2} is the point-mass measure; use PiMeasure instead of the distribution")
    if abs(u) > 1:
        raise DomainError(f"u must lie in [-1, 1] (got {u})")
    if u == 0:
        return 0.0
    s = math.copysign(0.5, u)
    au = abs(u)
    if m.kind == PiKind.DENSITY:
        return s * float(sp.betainc(0.5, alpha + 0.5, au * au))
    if au == 1:
        raise DomainError("Pi_alpha is unbounded at u = +-1 for alpha < -1/2")
    big_k = gamma_fn(alpha + 1) / (SQRT_PI * gamma_fn(alpha + 1.5))
    return s * (float(sp.betainc(0.5, alpha + 1.5, au * au)) - big_k * au * (1 - au * au) ** (alpha + 0.5))


def gauss_jacobi_rule(alpha, n_nodes):
    """Gauss-Jacobi rule for weight (1-u²)^{α-1/2}, normalised to total mass 1."""
    if not alpha > -0.5:
        raise DomainError(f"Gauss-Jacobi rule needs alpha > -1/2 (got {alpha})")
    if n_nodes < 1:
        raise DomainError("n_nodes must be >= 1")
    x, w = sp.roots_jacobi(n_nodes, alpha - 0.5, alpha - 0.5)
    w = w / w.sum()
    return QuadratureRule(tuple(float(v) for v in x), tuple(float(v) for v in w), alpha)


def half_rule(alpha, n_nodes):
    """Rule for the restriction of dΠ_α to [0,1] (total mass 1/2)."""
    if alpha == -0.5:
        return QuadratureRule((1.0,), (0.5,), alpha, half=True)
    if not alpha > -0.5:
        raise DomainError(f"half rule needs alpha >= -1/2 (got {alpha})")
    a = alpha - 0.5
    x, w = sp.roots_jacobi(n_nodes, a, 0.0)
    u = 0.5 * (1 + x)
    scale = 0.5 * 2.0 ** (-a) * _pi_normalizer(alpha)
    weights = w * scale * (1 + u) ** a
    return QuadratureRule(tuple(float(v) for v in u), tuple(float(v) for v in weights), alpha, half=True)


def integrate_against_pi(alpha, f, n_nodes=64, tol=1e-10, half=False):
    """∫ f dΠ_α (over [-1,1], or over [0,1] when half), with a node-doubling check."""
    if alpha == -0.5:
        return 0.5 * f(1.0) if half else 0.5 * (f(-1.0) + f(1.0))
    make = half_rule if half else gauss_jacobi_rule
    coarse = make(alpha, n_nodes).integrate(f)
    fine = make(alpha, 2 * n_nodes).integrate(f)
    if abs(fine - coarse) > tol * max(1.0, abs(fine)):
        raise AccuracyError(
            f"quadrature against dPi_{alpha} did not settle: {n_nodes} nodes -> {coarse}, "
            f"{2 * n_nodes} nodes -> {fine}"
        )
    logger.debug(f"Pi_{alpha} quadrature settled at {fine} ({n_nodes}/{2 * n_nodes} nodes)")
    return fine


def pi_tail(alpha, u0):
    """∫_{u0}^1 |Π_α(u)| du by adaptive quadrature."""
    if not 0 <= u0 < 1:
        raise DomainError("u0 must lie in [0, 1)")
    if alpha == -0.5:
        return 0.0
    val, _ = integrate.quad(lambda u: abs(pi_distribution(alpha, u)), u0, 1, limit=200, epsabs=1e-14, epsrel=1e-11)
    return val
