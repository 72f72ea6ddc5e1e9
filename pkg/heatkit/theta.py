"""Periodized Gauss-Weierstrass kernel θ_t and its iterated D-derivatives (odd spheres)."""
import math

from scipy import special as sp

from .comtet import HALF_PI, coeff_table, eval_apoly, hgw_sequences, l_pow_psi, partitions
from .errors import AccuracyError, DomainError
from .logger import get_logger
from .models import DerivativeRoute, ThetaEvalMethod
from .summation import KahanSummation

TWO_PI = 2 * math.pi
REL_STOP = 1e-18
# below this distance from π the g_j of the Faà di Bruno route are 0/0-like
ANTIPODE_ZONE = 1e-3

logger = get_logger("theta")


def _check_t(t):
    if not t > 0:
        raise DomainError(f"t must be > 0 (got {t})")


def gauss_kernel(t, x):
    _check_t(t)
    return math.exp(-x * x / (4 * t)) / math.sqrt(4 * math.pi * t)


def _reduce(z):
    z = math.fmod(z, TWO_PI)
    if z > math.pi:
        z -= TWO_PI
    elif z < -math.pi:
        z += TWO_PI
    return abs(z)


def _resolve(method, t):
    method = ThetaEvalMethod(method)
    if method == ThetaEvalMethod.AUTO:
        return ThetaEvalMethod.SPATIAL if t <= 1 else ThetaEvalMethod.SPECTRAL
    return method


def theta(t, z, method=ThetaEvalMethod.AUTO, max_terms=100000):
    """θ_t(z) = Σ_n W_t(z + 2πn)."""
    _check_t(t)
    z = _reduce(z)
    if _resolve(method, t) == ThetaEvalMethod.SPATIAL:
        acc = KahanSummation()
        acc.add(gauss_kernel(t, z))
        for n in range(1, max_terms):
            left = gauss_kernel(t, z - TWO_PI * n)
            right = gauss_kernel(t, z + TWO_PI * n)
            acc.add(left + right)
            if left < REL_STOP * acc.sum:
                return acc.sum
        raise AccuracyError(f"spatial theta sum did not converge at t={t}")
    acc = KahanSummation()
    acc.add(1.0)
    for k in range(1, max_terms):
        decay = math.exp(-t * k * k)
        acc.add(2 * decay * math.cos(k * z))
        if 2 * decay < REL_STOP * max(abs(acc.sum), 1e-300) or decay == 0.0:
            return acc.sum / TWO_PI
    raise AccuracyError(f"spectral theta sum did not converge at t={t}")


def scaled_l_pow_cosh(i, w):
    """e^{-w} (L^i cosh)(w) for w >= 0."""
    if w > 20:
        if i == 0:
            return 0.5 * (1 + math.exp(-2 * w))
        return math.sqrt(math.pi / (2 * w)) * float(sp.ive(i - 0.5, w)) / w ** (i - 1)
    acc = KahanSummation()
    w2 = w * w
    # Σ_{m>=i} 2^i m!/((m-i)!(2m)!) w^{2(m-i)}
    term = 2 ** i * math.factorial(i) / math.factorial(2 * i)
    m = i
    while True:
        acc.add(term)
        m += 1
        term *= w2 * m / ((m - i) * (2 * m) * (2 * m - 1))
        if term < REL_STOP * acc.sum:
            break
    return acc.sum * math.exp(-w)


def l_pow_cos(j, w):
    """(L^j cos)(w)."""
    if w < 2 + j:
        acc = KahanSummation()
        w2 = w * w
        term = (-1) ** j * 2 ** j * math.factorial(j) / math.factorial(2 * j)
        m = j
        while True:
            acc.add(term)
            m += 1
            term *= -w2 * m / ((m - j) * (2 * m) * (2 * m - 1))
            if abs(term) < REL_STOP * max(abs(acc.sum), 1e-300):
                break
        return acc.sum
    if j == 0:
        return math.cos(w)
    return (-1) ** j * float(sp.spherical_jn(j - 1, w)) / w ** (j - 1)


def _l_pow_spatial(j, t, z, antipodal):
    # pairs of Gaussians centred at ±c; c = 2πn (n >= 1) or (2m+1)π
    inv = -1.0 / (2 * t)
    acc = KahanSummation()
    if not antipodal:
        acc.add(inv ** j * gauss_kernel(t, z))
    n_max = math.ceil(3 + 6 * math.sqrt(t) * (j + 1) / math.pi)
    norm = 1 / math.sqrt(4 * math.pi * t)
    for n in range(0 if antipodal else 1, n_max + 1):
        c = (2 * n + 1) * math.pi if antipodal else TWO_PI * n
        a = c / (2 * t)
        envelope = math.exp(-(z - c) ** 2 / (4 * t)) * norm
        if envelope == 0.0:
            break
        inner = KahanSummation()
        for i in range(j + 1):
            inner.add(math.comb(j, i) * inv ** (j - i) * a ** (2 * i) * scaled_l_pow_cosh(i, a * z))
        acc.add(2 * envelope * inner.sum)
    return acc.sum


def _l_pow_spectral(j, t, z, antipodal, max_terms=100000):
    acc = KahanSummation()
    if j == 0:
        acc.add(1.0)
    k_peak = math.sqrt(j / t) if j else 0.0
    for k in range(1, max_terms):
        decay = math.exp(-t * k * k)
        sign = (-1) ** k if antipodal else 1
        acc.add(2 * sign * decay * k ** (2 * j) * l_pow_cos(j, k * z))
        bound = 2 * decay * k ** (2 * j)
        if k > k_peak and (bound < REL_STOP * max(abs(acc.sum), 1e-300) or decay == 0.0):
            return acc.sum / TWO_PI
    raise AccuracyError(f"spectral L^{j} theta did not converge at t={t}")


def l_pow_theta(j, t, z, method=ThetaEvalMethod.AUTO, antipodal=False):
    """(L^j θ_t)(z) for z in [0, π]; antipodal=True gives L^j of ψ -> θ_t(π - ψ)."""
    _check_t(t)
    if j < 0:
        raise DomainError("j must be >= 0")
    if not 0 <= z <= math.pi:
        raise DomainError(f"z must lie in [0, pi] (got {z})")
    if _resolve(method, t) == ThetaEvalMethod.SPATIAL:
        return _l_pow_spatial(j, t, z, antipodal)
    return _l_pow_spectral(j, t, z, antipodal)


def theta_derivative(t, z, order=0, method=ThetaEvalMethod.AUTO):
    """θ_t, θ_t' or θ_t'' at any real z, through θ' = zLθ and θ'' = Lθ + z²L²θ."""
    if order not in (0, 1, 2):
        raise DomainError(f"order must be 0, 1 or 2 (got {order})")
    if order == 0:
        return theta(t, z, method)
    w = math.fmod(z, TWO_PI)
    if w > math.pi:
        w -= TWO_PI
    elif w < -math.pi:
        w += TWO_PI
    a = abs(w)
    if order == 1:
        return math.copysign(a * l_pow_theta(1, t, a, method), w)
    return l_pow_theta(1, t, a, method) + a * a * l_pow_theta(2, t, a, method)


def _comtet_d_pow(N, t, phi, table, method, antipodal=False):
    lpsi = [l_pow_psi(i, phi) for i in range(N)]
    acc = KahanSummation()
    for j in range(1, N + 1):
        acc.add(eval_apoly(N, j, lpsi[:N - j + 1], table) * l_pow_theta(j, t, phi, method, antipodal))
    return acc.sum


def _faa_di_bruno_d_pow(N, t, phi, method):
    _, g, _ = hgw_sequences(N, phi)
    l_theta = [l_pow_theta(m, t, phi, method) for m in range(N + 1)]
    acc = KahanSummation()
    for k in partitions(N):
        coeff = math.factorial(N)
        prod = 1.0
        for j, kj in enumerate(k, start=1):
            if kj:
                coeff //= math.factorial(kj)
                prod *= (g[j - 1] / math.factorial(j)) ** kj
        acc.add(coeff * prod * l_theta[sum(k)])
    return acc.sum


def neg_d_pow_theta(N, t, phi, table=None, route=DerivativeRoute.AUTO, method=ThetaEvalMethod.AUTO):
    """(-D)^N θ_t(φ) with D = (1/sin φ) d/dφ."""
    _check_t(t)
    if N < 0:
        raise DomainError("N must be >= 0")
    if not 0 <= phi <= math.pi:
        raise DomainError(f"phi must lie in [0, pi] (got {phi})")
    if N == 0:
        return theta(t, phi, method)
    route = DerivativeRoute(route)
    if table is None:
        table = coeff_table(max(N, 20))
    if route == DerivativeRoute.COMTET:
        if phi > HALF_PI:
            raise DomainError("the Comtet route is restricted to phi in [0, pi/2]")
        return (-1) ** N * _comtet_d_pow(N, t, phi, table, method)
    if route == DerivativeRoute.FAA_DI_BRUNO:
        if not 0 < phi < math.pi:
            raise DomainError("the Faa di Bruno route needs phi in (0, pi)")
        return (-1) ** N * _faa_di_bruno_d_pow(N, t, phi, method)
    if phi <= HALF_PI:
        return (-1) ** N * _comtet_d_pow(N, t, phi, table, method)
    if math.pi - phi < ANTIPODE_ZONE:
        # D_φ = -D_ψ with ψ = π - φ, so (-D_φ)^N θ = D_ψ^N [θ_t(π - ψ)]
        return _comtet_d_pow(N, t, math.pi - phi, table, method, antipodal=True)
    return (-1) ** N * _faa_di_bruno_d_pow(N, t, phi, method)


def sphere_kernel_odd(N, t, phi, **kwargs):
    """Heat kernel on S^{2N+1} at geodesic distance φ."""
    if N == 0:
        return theta(t, phi, kwargs.get("method", ThetaEvalMethod.AUTO))
    return math.exp(t * N * N) / TWO_PI ** N * neg_d_pow_theta(N, t, phi, **kwargs)


def g_ultra_half_int(lam, t, phi, **kwargs):
    """G_t^{λ}(cos φ, 1) for λ = N - 1/2."""
    N = lam + 0.5
    if not (N >= 0 and float(N).is_integer()):
        raise DomainError(f"lambda must be a half-integer >= -1/2 (got {lam})")
    N = int(N)
    return (math.sqrt(4 * math.pi) / (2 ** N * math.gamma(N + 0.5)) * math.exp(t * N * N)
            * neg_d_pow_theta(N, t, phi, **kwargs))
