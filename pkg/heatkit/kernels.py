"""Evaluators for G_t^{α,β}, H_t^λ, the sphere and CROSS kernels, and the large-time remainder."""
import math

import numpy as np
from scipy import special as sp

from .errors import AccuracyError, DomainError, RefusalError
from .logger import get_logger
from .models import CrossSpace, EvalPolicy, JacobiParams, KernelMethod, QuadratureRule
from .special import gauss_jacobi_rule, h0, h0_ultra, iter_jacobi, jacobi_norm, SQRT_PI
from .summation import KahanSummation
from .theta import g_ultra_half_int, sphere_kernel_odd, theta_derivative

# distance to a removable singularity below which the closed forms switch to the limit
SINGULAR_ZONE = 1e-6
LARGE_TIME = 2 * math.log(2)

logger = get_logger("kernels")

# (quarter time, terms (coefficient, c_θ, c_φ, shift)) for 𝔾 = Σ coef ϑ(c_θ θ + c_φ φ + shift)
_CLOSED_FORMS = {
    (-0.5, -0.5): (False, ((1.0, 1.0, -1.0, 0.0), (1.0, 1.0, 1.0, 0.0))),
    (0.5, 0.5): (False, ((1.0, 1.0, -1.0, 0.0), (-1.0, 1.0, 1.0, 0.0))),
    (-0.5, 0.5): (True, ((0.5, 0.5, -0.5, 0.0), (0.5, 0.5, 0.5, 0.0),
                         (-0.5, 0.5, -0.5, math.pi), (-0.5, 0.5, 0.5, math.pi))),
    (0.5, -0.5): (True, ((0.5, 0.5, -0.5, 0.0), (-0.5, 0.5, 0.5, 0.0),
                         (-0.5, 0.5, -0.5, math.pi), (0.5, 0.5, 0.5, math.pi))),
}


def _is_half_integer(v):
    return float(v + 0.5).is_integer() and v >= -0.5


def _policy(policy):
    return policy if policy is not None else EvalPolicy()


def poly_sup_bound(n, params):
    """Upper bound for max_{[-1,1]} |P_n^{α,β}|; exact when α∨β >= -1/2."""
    if n < 0:
        raise DomainError("n must be >= 0")
    hi, lo = max(params.alpha, params.beta), min(params.alpha, params.beta)
    if hi >= -0.5:
        return float(sp.binom(n + hi, n))
    return (2 * n + lo + 1) / (lo + 1) * float(sp.binom(n + lo, n))


def _log_sup(n, a, b):
    hi, lo = max(a, b), min(a, b)
    if hi >= -0.5:
        return float(sp.gammaln(n + hi + 1) - sp.gammaln(n + 1) - sp.gammaln(hi + 1))
    return (math.log((2 * n + lo + 1) / (lo + 1))
            + float(sp.gammaln(n + lo + 1) - sp.gammaln(n + 1) - sp.gammaln(lo + 1)))


def _check_unit(name, v):
    if np.any(np.abs(np.asarray(v, dtype=float)) > 1):
        raise DomainError(f"{name} must lie in [-1, 1]")


def _series(params, t, x, y, policy, drop_first=False, relative_to="min"):
    a, b = params.alpha, params.beta
    s = a + b + 1
    px, py = iter_jacobi(a, b, x), iter_jacobi(a, b, y)
    acc = KahanSummation()

    def log_major(n):
        return -t * n * (n + s) + 2 * _log_sup(n, a, b) - math.log(jacobi_norm(n, params))

    ref_floor = 1.0 / h0(params) if drop_first else 0.0
    for n in range(policy.max_terms):
        p, q = next(px), next(py)
        if n or not drop_first:
            acc.add(math.exp(-t * n * (n + s)) / jacobi_norm(n, params) * p * q)
        if n < 1 or t * n < 4:
            continue
        m_next = log_major(n + 1)
        ratio = math.exp(log_major(n + 2) - m_next)
        if ratio >= 1:
            continue
        tail = math.exp(m_next) / (1 - ratio)
        values = np.abs(np.asarray(acc.sum))
        ref = max(float(values.min() if relative_to == "min" else values.max()), ref_floor)
        if tail <= policy.tol * ref:
            logger.debug(f"series ({a}, {b}) at t={t} truncated after n={n}, tail <= {tail:.3e}")
            return acc.sum
    raise AccuracyError(f"series ({a}, {b}) at t={t} did not settle within {policy.max_terms} terms")


def jacobi_kernel_series(params, t, x, y, policy=None, drop_first=False):
    """G_t^{α,β}(x, y) from the defining series with a rigorous tail majorant.

    x and y may be arrays (broadcast together). With drop_first the n = 0 term is left out.
    """
    policy = _policy(policy)
    if t < policy.t_floor:
        raise RefusalError(t, policy.t_floor)
    _check_unit("x", x)
    _check_unit("y", y)
    value = _series(params, t, x, y, policy, drop_first)
    if not drop_first and np.any(np.asarray(value) <= 0):
        raise AccuracyError(f"series for ({params.alpha}, {params.beta}) at t={t} lost positivity")
    if np.ndim(value) == 0:
        return float(value)
    return value


def _half_angle_factor(p, q, angle):
    # sin(angle/2)^p cos(angle/2)^q and its derivative, for p, q in {0, 1}
    s, c = math.sin(angle / 2), math.cos(angle / 2)
    value = (s if p else 1.0) * (c if q else 1.0)
    deriv = 0.5 * ((c if p else 0.0) * (c if q else 1.0) - (s if q else 0.0) * (s if p else 1.0))
    return value, deriv


def _limit_point(p, q, angle):
    # midpoint between a zero of the factor and the angle: ratio of derivatives there is O(δ²) accurate
    if p and angle < SINGULAR_ZONE:
        return angle / 2
    if q and math.pi - angle < SINGULAR_ZONE:
        return (math.pi + angle) / 2
    return None


def jacobi_kernel_theta(params, t, theta, varphi):
    """G_t^{α,β}(cos θ, cos φ) for α, β ∈ {±1/2} from the ϑ closed forms, for any t > 0."""
    key = (params.alpha, params.beta)
    if key not in _CLOSED_FORMS:
        raise DomainError(f"theta closed forms need alpha, beta in {{-1/2, 1/2}} (got {key})")
    if not t > 0:
        raise DomainError(f"t must be > 0 (got {t})")
    for name, v in (("theta", theta), ("varphi", varphi)):
        if not 0 <= v <= math.pi:
            raise DomainError(f"{name} must lie in [0, pi] (got {v})")
    quarter, terms = _CLOSED_FORMS[key]
    s = t / 4 if quarter else t
    p, q = int(params.alpha + 0.5), int(params.beta + 0.5)

    points, dens, orders = [], 1.0, []
    for angle in (theta, varphi):
        limit = _limit_point(p, q, angle)
        if limit is None:
            points.append(angle)
            dens *= _half_angle_factor(p, q, angle)[0]
            orders.append(0)
        else:
            points.append(limit)
            dens *= _half_angle_factor(p, q, limit)[1]
            orders.append(1)

    acc = KahanSummation()
    for coef, ct, cp, shift in terms:
        z = ct * points[0] + cp * points[1] + shift
        acc.add(coef * ct ** orders[0] * cp ** orders[1] * theta_derivative(s, z, sum(orders)))
    half = (params.alpha + params.beta + 1) / 2
    return acc.sum * math.exp(t * half * half) / (2 ** (2 * half) * dens)


def _half_int_at_pole(params, t, x, policy):
    """G^{α,β}_t(x, 1) for α half-integer through the odd-sphere route (β = α or β = -1/2)."""
    kwargs = {"route": policy.route, "method": policy.theta_method}
    if params.is_ultraspherical:
        return g_ultra_half_int(params.alpha, t, math.acos(x), **kwargs)
    # β = -1/2: G^{α,-1/2}(cos θ, 1) = 2^{-α-3/2}[G^α_{t/4}(cos(θ/2), 1) + G^α_{t/4}(-cos(θ/2), 1)]
    half = math.acos(x) / 2
    return 2 ** (-params.alpha - 1.5) * (g_ultra_half_int(params.alpha, t / 4, half, **kwargs)
                                         + g_ultra_half_int(params.alpha, t / 4, math.pi - half, **kwargs))


def _pole_route_ok(params, y):
    return (y == 1.0 and _is_half_integer(params.alpha)
            and (params.is_ultraspherical or params.beta == -0.5))


def uses_series(params, t, policy=None):
    """Whether the AUTO method evaluates G_t^{α,β} from the defining series."""
    policy = _policy(policy)
    if (params.alpha, params.beta) in _CLOSED_FORMS:
        return False
    return t >= policy.t_floor


def auto_method(params, t, y=1.0, policy=None):
    """Method the AUTO dispatch of jacobi_kernel picks for (params, t, ·, y)."""
    policy = _policy(policy)
    if (params.alpha, params.beta) in _CLOSED_FORMS or (t < policy.t_floor and _pole_route_ok(params, y)):
        return KernelMethod.THETA
    if t >= policy.t_floor:
        return KernelMethod.SERIES
    return KernelMethod.ORACLE


def jacobi_kernel(params, t, x, y, policy=None, method=KernelMethod.AUTO):
    """G_t^{α,β}(x, y) by the cheapest available method."""
    policy = _policy(policy)
    method = KernelMethod(method)
    if not t > 0:
        raise DomainError(f"t must be > 0 (got {t})")
    _check_unit("x", x)
    _check_unit("y", y)
    key = (params.alpha, params.beta)
    if method == KernelMethod.SERIES:
        return jacobi_kernel_series(params, t, x, y, policy)
    if method == KernelMethod.THETA:
        if key in _CLOSED_FORMS:
            return jacobi_kernel_theta(params, t, math.acos(x), math.acos(y))
        if _pole_route_ok(params, y):
            return _half_int_at_pole(params, t, x, policy)
        raise DomainError(f"no theta route for ({params.alpha}, {params.beta}) at y={y}")
    if method == KernelMethod.ORACLE:
        return reduction_oracle(params, t, math.acos(x), math.acos(y), policy)
    if key in _CLOSED_FORMS:
        return jacobi_kernel_theta(params, t, math.acos(x), math.acos(y))
    if t >= policy.t_floor:
        return jacobi_kernel_series(params, t, x, y, policy)
    if _pole_route_ok(params, y):
        return _half_int_at_pole(params, t, x, policy)
    if min(key) >= -0.5 and _is_half_integer(params.lam):
        return reduction_oracle(params, t, math.acos(x), math.acos(y), policy)
    raise RefusalError(t, policy.t_floor)


def h_kernel_series(lam, t, x, policy=None):
    """The even auxiliary function H_t^λ(x) for -3/2 < λ <= -1."""
    policy = _policy(policy)
    if not -1.5 < lam <= -1:
        raise DomainError(f"H needs lambda in (-3/2, -1] (got {lam})")
    if t < policy.t_floor:
        raise RefusalError(t, policy.t_floor)
    _check_unit("x", x)
    base = math.exp(sp.gammaln(lam + 1.5) - sp.gammaln(lam + 2)) / SQRT_PI
    lead = 1.0 / (2 ** (2 * lam + 1) * math.gamma(lam + 2))

    def log_coeff(m):
        return (math.log(2 * m + 2 * lam + 1) + float(sp.gammaln(m + 2 * lam + 1) - sp.gammaln(m + lam + 1))
                - t * m * (m + 2 * lam + 1))

    def log_major(m):
        # |P_m^{λ,λ}| <= Σ_s |C(m+λ, m-s) C(m+λ, s)| from the explicit sum
        s_idx = np.arange(m + 1)
        sup = float(np.sum(np.abs(sp.binom(m + lam, m - s_idx) * sp.binom(m + lam, s_idx))))
        return log_coeff(m) + math.log(sup)

    polys = iter_jacobi(lam, lam, x)
    next(polys)
    acc = KahanSummation()
    for n in range(1, policy.max_terms):
        next(polys)
        p = next(polys)
        acc.add(math.exp(log_coeff(2 * n)) * p)
        if t * n < 2:
            continue
        m_next = log_major(2 * n + 2)
        ratio = math.exp(log_major(2 * n + 4) - m_next)
        if ratio >= 1:
            continue
        tail = lead * math.exp(m_next) / (1 - ratio)
        if tail <= policy.tol * base:
            value = base + lead * acc.sum
            return float(value) if np.ndim(value) == 0 else value
    raise AccuracyError(f"H series at lambda={lam}, t={t} did not settle")


def _full_rule(alpha, n_nodes):
    if alpha == -0.5:
        return QuadratureRule((-1.0, 1.0), (0.5, 0.5), alpha)
    return gauss_jacobi_rule(alpha, n_nodes)


def _oracle_sum(params, t, theta, varphi, rules, policy):
    rule_a, rule_b = rules
    inner = JacobiParams(params.lam, params.lam)
    s = math.sin(theta / 2) * math.sin(varphi / 2)
    c = math.cos(theta / 2) * math.cos(varphi / 2)
    u = np.asarray(rule_a.nodes)[:, None]
    v = np.asarray(rule_b.nodes)[None, :]
    z = np.clip(u * s + v * c, -1.0, 1.0)
    tq = t / 4
    if tq >= policy.t_floor:
        values = _series(inner, tq, z, 1.0, policy, relative_to="max")
    else:
        values = np.vectorize(lambda w: jacobi_kernel(inner, tq, float(w), 1.0, policy))(z)
    weights = np.asarray(rule_a.weights)[:, None] * np.asarray(rule_b.weights)[None, :]
    return h0_ultra(params.lam) / h0(params) * math.fsum((weights * values).ravel())


def reduction_oracle(params, t, theta, varphi, policy=None, rules=None, agreement=1e-8):
    """Independent estimate of G_t^{α,β}(cos θ, cos φ) for α, β >= -1/2 by double quadrature.

    Without explicit rules the quadrature runs at policy.quad_nodes and twice that, and the
    two must agree to `agreement` (relative).
    """
    policy = _policy(policy)
    if min(params.alpha, params.beta) < -0.5:
        raise DomainError("the reduction oracle needs alpha, beta >= -1/2")
    if rules is not None:
        return _oracle_sum(params, t, theta, varphi, rules, policy)
    n = policy.quad_nodes
    coarse = _oracle_sum(params, t, theta, varphi,
                         (_full_rule(params.alpha, n), _full_rule(params.beta, n)), policy)
    fine = _oracle_sum(params, t, theta, varphi,
                       (_full_rule(params.alpha, 2 * n), _full_rule(params.beta, 2 * n)), policy)
    if abs(fine - coarse) > agreement * abs(fine):
        raise AccuracyError(f"reduction oracle did not settle at t={t}: {n} nodes -> {coarse}, "
                            f"{2 * n} nodes -> {fine}")
    return fine


def sphere_kernel(d, t, phi, policy=None):
    """Heat kernel of the unit sphere S^d at geodesic distance φ."""
    policy = _policy(policy)
    if d < 1 or int(d) != d:
        raise DomainError(f"sphere dimension must be an integer >= 1 (got {d})")
    if not 0 <= phi <= math.pi:
        raise DomainError(f"phi must lie in [0, pi] (got {phi})")
    if d % 2:
        return sphere_kernel_odd((d - 1) // 2, t, phi, route=policy.route, method=policy.theta_method)
    alpha = d / 2 - 1
    g = jacobi_kernel(JacobiParams(alpha, alpha), t, math.cos(phi), 1.0, policy)
    return math.gamma(d / 2) / (2 * math.pi ** (d / 2)) * g


def cross_kernel(space, t, dist, policy=None):
    """Heat kernel of a compact rank-one symmetric space as a function of distance."""
    if not isinstance(space, CrossSpace):
        raise DomainError("cross_kernel needs a CrossSpace")
    if not 0 <= dist <= space.diameter * (1 + 1e-12):
        raise DomainError(f"distance must lie in [0, {space.diameter}] (got {dist})")
    k = space.kappa
    params = space.params
    x = max(-1.0, math.cos(k * dist))
    return h0(params) / space.volume * jacobi_kernel(params, k * k * t, x, 1.0, policy)


def large_time_remainder(params, t, x, y, policy=None):
    """E_t^{α,β}(x, y) = h_0 G_t(x, y) - 1, from the series without its constant term."""
    if t < LARGE_TIME:
        raise DomainError(f"large-time remainder needs t >= 2 log 2 (got {t})")
    return h0(params) * jacobi_kernel_series(params, t, x, y, policy, drop_first=True)


def large_time_bound(params, t):
    """Bound for |E_t^{α,β}| uniform in (x, y)."""
    a, b = params.alpha, params.beta
    if max(a, b) >= -0.5:
        const = 2 / (min(a, b) + 1)
    else:
        const = 2.7 / ((a + 1) * (b + 1))
    return const * math.exp(-(t - 1) * (a + b + 2))


def first_term_bound(params, t):
    """Bound for the n = 1 contribution to E_t^{α,β}."""
    a, b = params.alpha, params.beta
    return (a + b + 3) * (max(a, b) + 1) / (min(a, b) + 1) * math.exp(-t * (a + b + 2))
