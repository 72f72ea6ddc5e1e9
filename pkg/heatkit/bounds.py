"""Envelope functions and the explicit bounds built on top of the constant pipeline.

Covers the F(u, v) phase, the Ψ/Ξ/Z envelopes, the odd-sphere derivative
estimates, sphere and CROSS bounds and the medium/large-time constants.
"""
import math

from .constants import B_LARGE, B_SMALL, EPSILON_STAR, PI2, W0, W0_PRIME, W1, h0_of
from .errors import ConfigurationError, DomainError
from .kernels import LARGE_TIME, large_time_bound
from .logger import get_logger
from .models import (
    CrossFamily, CrossSpace, Envelope, JacobiParams, LargeTimeBound, ManifoldBound, Side, Variant,
)
from .pipeline import ConstantPipeline, final_constants
from .special import d_alpha, gamma_fn
from .theta import gauss_kernel

HALF_PI = math.pi / 2
THETA_ITEMS = ("b", "c", "d", "row1", "row2")

logger = get_logger("bounds")


def _check_t(t):
    if not t > 0:
        raise DomainError(f"t must be > 0 (got {t})")


def _check_angle(name, value, top=math.pi):
    if not -1e-12 <= value <= top * (1 + 1e-12):
        raise DomainError(f"{name} must lie in [0, {top:.6g}] (got {value})")


# -- envelopes -------------------------------------------------------------------

def f_arccos_sq(theta, varphi, u, v):
    """F_{θ,φ}(u, v) = arccos(u sin(θ/2) sin(φ/2) + v cos(θ/2) cos(φ/2))²."""
    arg = u * math.sin(theta / 2) * math.sin(varphi / 2) + v * math.cos(theta / 2) * math.cos(varphi / 2)
    return math.acos(min(1.0, max(-1.0, arg))) ** 2


def f_gap_weight(theta, varphi, u, v):
    """θφ(1-u) + (π-θ)(π-φ)(1-v), the quantity F(u,v) - F(1,1) is compared with."""
    return theta * varphi * (1 - u) + (math.pi - theta) * (math.pi - varphi) * (1 - v)


def psi_envelope(alpha, kappa, t, theta, varphi):
    """Ψ_α^κ(t, θ, φ) = [𝔇_α t ∨ κθφ]^{-α-1/2}."""
    if alpha <= -1.5:
        raise DomainError(f"psi envelope needs alpha > -3/2 (got {alpha})")
    _check_t(t)
    if alpha == -0.5:
        return 1.0
    return max(d_alpha(alpha) * t, kappa * theta * varphi) ** (-alpha - 0.5)


def _gaussian_factor(t, theta, varphi):
    return math.exp(-(theta - varphi) ** 2 / (4 * t)) / math.sqrt(t)


def xi_envelope(params, kappa, t, theta, varphi):
    """Ξ_κ^{α,β}(t; θ, φ)."""
    _check_angle("theta", theta)
    _check_angle("varphi", varphi)
    return (psi_envelope(params.alpha, kappa, t, theta, varphi)
            * psi_envelope(params.beta, kappa, t, math.pi - theta, math.pi - varphi)
            * _gaussian_factor(t, theta, varphi))


def z_envelope(params, t, theta, varphi):
    """Z^{α,β}(t; θ, φ), the envelope without the 𝔇 and κ normalisation."""
    _check_t(t)
    _check_angle("theta", theta)
    _check_angle("varphi", varphi)
    a, b = params.alpha, params.beta
    return ((t + theta * varphi) ** (-a - 0.5)
            * (t + (math.pi - theta) * (math.pi - varphi)) ** (-b - 0.5)
            * _gaussian_factor(t, theta, varphi))


def psi_z_constants(alpha, kappa):
    """(m, M) with m ≤ Ψ_α^κ(t,θ,φ)(t+θφ)^{α+1/2} ≤ M for all t > 0 and θ, φ ∈ [0, π]."""
    d = d_alpha(alpha)
    e = alpha + 0.5
    first = (1 / max(d, kappa)) ** e
    second = (2 / min(d, kappa)) ** e
    return min(first, second), max(first, second)


def sandwich_envelopes(params, T, variant=Variant.AUTO, constants=None):
    """Lower (κ = 𝔅) and upper (κ = 𝔟) envelopes carrying the pipeline constants."""
    c, big_c = constants if constants is not None else final_constants(params, T, variant)
    return (Envelope(B_LARGE, c, Side.LOWER, T, params),
            Envelope(B_SMALL, big_c, Side.UPPER, T, params))


def envelope_value(envelope, t, theta, varphi):
    return envelope.constant * xi_envelope(envelope.params, envelope.kappa, t, theta, varphi)


# -- odd-sphere derivative estimates ------------------------------------------------

def theta_item_horizon(item, N, eps=EPSILON_STAR, delta=1.0):
    """Largest t for which estimate `item` of (-D)^N θ_t holds, or None if it does not apply to N."""
    if item == "b":
        if N < 1:
            return None
        if not 0 < eps <= 1 / 3:
            raise ConfigurationError(f"eps must lie in (0, 1/3] (got {eps})")
        return 27 * math.pi ** 3 * eps / (512 * (N - 0.5))
    if item == "c":
        if N < 1:
            return None
        if not 0 < delta <= N:
            raise ConfigurationError(f"delta must lie in (0, N] (got {delta})")
        return delta / (4 * N * N)
    if item == "d":
        return PI2 / 2 if N in (0, 1) else None
    if item == "row1":
        return 1 / (2 * N + 1) if N >= 1 else None
    if item == "row2":
        return 1 / (2 * N + 1) ** 2
    raise ConfigurationError(f"unknown theta estimate {item!r}; expected one of {', '.join(THETA_ITEMS)}")


def _theta_item_multiplier(item, N, t, eps, delta):
    if item == "b":
        return (1 + 21 / 500) / (1 + eps) * (math.pi / 4 * (1 + eps)) ** N
    if item == "c":
        return (1 + 1 / 1000) * math.exp(delta) * (math.pi / 4) ** N
    if item == "d":
        return 1 + 2 * math.exp(-PI2 / (2 * t)) if N == 0 else math.pi / 4
    if item == "row1":
        return W0 * W1 ** N
    return W0_PRIME * (math.pi / 4) ** N


def theta_lower_multiplier(N, t):
    """m with (-D)^N θ_t(φ) ≥ m t^{-N} W_t(φ) on [0, π/2], for every t."""
    if N < 0:
        raise DomainError("N must be >= 0")
    _check_t(t)
    return 2.0 ** -N * math.exp(-t * N * N)


def theta_upper_multiplier(N, t, item="auto", eps=EPSILON_STAR, delta=1.0):
    """(M, item) with (-D)^N θ_t(φ) < M t^{-N} W_t(φ) on [0, π/2].

    With item="auto" the smallest multiplier among the estimates admitting t is
    returned.
    """
    if N < 0:
        raise DomainError("N must be >= 0")
    _check_t(t)
    items = THETA_ITEMS if item == "auto" else (item,)
    admitted = {}
    for name in items:
        horizon = theta_item_horizon(name, N, eps, delta)
        if horizon is not None and t <= horizon * (1 + 1e-12):
            admitted[name] = _theta_item_multiplier(name, N, t, eps, delta)
    if not admitted:
        raise DomainError(f"no derivative estimate ({', '.join(items)}) admits N={N}, t={t:.6g}")
    best = min(admitted, key=admitted.get)
    return admitted[best], best


def theta_derivative_bounds(N, t, phi, item="auto", eps=EPSILON_STAR, delta=1.0):
    """(lower, upper) for (-D)^N θ_t(φ), φ ∈ [0, π/2]."""
    _check_angle("phi", phi, HALF_PI)
    scale = t ** -N * gauss_kernel(t, phi)
    upper, _ = theta_upper_multiplier(N, t, item, eps, delta)
    return theta_lower_multiplier(N, t) * scale, upper * scale


def odd_sphere_bounds(lam, t, phi, variant=Variant.AUTO):
    """(lower, upper) for G_t^λ(cos φ, 1) with λ ∈ ℕ - 1/2 and φ ∈ [0, π/2]."""
    _check_angle("phi", phi, HALF_PI)
    pipeline = ConstantPipeline(variant)
    lower, upper = pipeline.step_a(lam, t)
    shape = t ** (-lam - 1) * math.exp(-phi * phi / (4 * t))
    return lower * shape, upper * shape


# -- sphere and CROSS ---------------------------------------------------------------

def manifold_envelope(space, T=None, variant=Variant.AUTO):
    """Explicit constants for the heat kernel of `space`, valid for κ²t ≤ T.

    Real projective spaces get the upper side from refinement H in even
    dimension and G in odd dimension; their lower side is the Gaussian.
    Variant "general" yields the lower constant alone, valid for every t.
    """
    if not isinstance(space, CrossSpace):
        raise DomainError("manifold bounds need a CrossSpace")
    variant = Variant(variant)
    params, d, k = space.params, space.dim, space.kappa
    scale = h0_of(params.alpha, params.beta) / space.volume * k ** -d * (4 * math.pi) ** (d / 2)
    real_projective = space.family == CrossFamily.REAL_PROJECTIVE
    if variant == Variant.GENERAL:
        if real_projective:
            raise ConfigurationError("real projective spaces have no explicit lower constant; "
                                     "their lower bound is the Gaussian for every t")
        pipeline = ConstantPipeline()
        c_ref, _ = pipeline.refined_g(params, T, upper=False)
        return ManifoldBound(space, None, variant, c_ref * scale, None, math.inf, ledger=pipeline.ledger)
    if T is None or not T > 0:
        raise DomainError(f"manifold bounds need a horizon T > 0 (got {T})")
    pipeline = ConstantPipeline(variant)
    if real_projective and d % 2 == 0:
        c_ref, big_c_ref = pipeline.refined_h(params.alpha, T)
    else:
        c_ref, big_c_ref = pipeline.refined_g(params, T)
    bound = ManifoldBound(
        space=space,
        T=T,
        variant=variant,
        lower_constant=None if real_projective else c_ref * scale,
        upper_constant=big_c_ref * scale,
        horizon=T / k ** 2,
        gaussian_lower=real_projective,
        ledger=pipeline.ledger,
    )
    logger.debug(f"{space.family.value} d={d}, T={T}: lower={bound.lower_constant}, upper={bound.upper_constant}")
    return bound


def envelope_values(bound, t, dist):
    """(lower, upper) of a ManifoldBound at time t and distance dist; upper is None for lower-only bounds."""
    _check_t(t)
    space = bound.space
    _check_angle("distance", dist, space.diameter)
    if bound.upper_constant is not None and t > bound.horizon * (1 + 1e-12):
        raise DomainError(f"t={t:.6g} exceeds the horizon {bound.horizon:.6g} of the {space.family.value} bound")
    k, d = space.kappa, space.dim
    beta = space.params.beta
    gauss = (4 * math.pi * t) ** (-d / 2) * math.exp(-dist * dist / (4 * t))
    s, angle = k * k * t, max(0.0, math.pi - k * dist)
    upper = None
    if bound.upper_constant is not None:
        upper = bound.upper_constant * psi_envelope(beta, B_SMALL, s, angle, math.pi) * gauss
    if bound.gaussian_lower:
        lower = gauss
    else:
        lower = bound.lower_constant * psi_envelope(beta, B_LARGE, s, angle, math.pi) * gauss
    return lower, upper


def sphere_bounds(d, T, t, phi, variant=Variant.AUTO):
    """(lower, upper) for the heat kernel of S^d at distance φ, for t ≤ T."""
    return envelope_values(manifold_envelope(CrossSpace(CrossFamily.SPHERE, d), T, variant), t, phi)


def cross_bounds(space, T, t, dist, variant=Variant.AUTO):
    """(lower, upper) for a CROSS heat kernel, for κ²t ≤ T; real projective lowers are Gaussian."""
    return envelope_values(manifold_envelope(space, T, variant), t, dist)


# -- medium and large time --------------------------------------------------------

def large_time_threshold(params):
    """Time after which h_0 G_t stays within [1/2, 3/2]."""
    a, b = params.alpha, params.beta
    if max(a, b) >= -0.5:
        numerator = 4 / (min(a, b) + 1)
    else:
        numerator = 5.4 / ((a + 1) * (b + 1))
    return 1 + math.log(numerator) / (a + b + 2)


def large_time_bounds(params, t):
    if t < LARGE_TIME * (1 - 1e-12):
        raise DomainError(f"large-time bounds need t >= 2 log 2 (got {t})")
    h0 = h0_of(params.alpha, params.beta)
    bound = large_time_bound(params, t)
    threshold = large_time_threshold(params)
    return LargeTimeBound(
        params=params,
        t=t,
        bound=bound,
        absolute=bound / h0,
        threshold=threshold,
        sandwich=t >= max(threshold, LARGE_TIME) * (1 - 1e-12),
        lower=0.5 / h0,
        upper=1.5 / h0,
    )


def medium_time_bounds(params, t0, base=None, variant=Variant.AUTO):
    """Constants (c, C) with c ≤ G_t(x, y) ≤ C for every t ≥ t0 and x, y ∈ [-1, 1].

    `base` is the (c, C) pair of the sandwich at time t0; it defaults to the
    pipeline constants for T = t0.
    """
    _check_t(t0)
    if not isinstance(params, JacobiParams):
        raise DomainError("medium-time bounds need JacobiParams")
    c, big_c = base if base is not None else final_constants(params, t0, variant)
    a, b = params.alpha, params.beta
    norm = 1 / (t0 ** (a + b + 1.5) * gamma_fn(a + 1.5) * gamma_fn(b + 1.5))

    def top(p):
        return max(1.0, max(1.0, 2 / (d_alpha(p) * t0)) ** (-p - 0.5))

    def bottom(p):
        return min(1.0, max(1.0, PI2 / (2 * d_alpha(p) * t0)) ** (-p - 0.5))

    upper = big_c * top(a) * top(b) * norm
    lower = c * bottom(a) * bottom(b) * math.exp(-PI2 / (4 * t0)) * norm
    return lower, upper
