"""Tabulated constants of the explicit bounds.

Three tables feed the constant pipeline:

* ``num``  numerical constants (γ, 𝔟, 𝔅, 𝔴₀, 𝔴₀′, 𝔴₁);
* ``par``  constants depending on one parameter (k_α, K_α, l_α, L_α, n_α, N_α,
  m_ω, M_ω, 𝔇_α, 𝔼_α, b_α, B_α, λ̌);
* ``fun``  auxiliary functions of time (ω_λ, Ω_λ, q_λ, q̃_λ).

Functions whose lower/upper pair differs only in case use a ``big_`` prefix
for the capital letter, e.g. ``b_alpha`` / ``big_b_alpha``.
"""
import math

from scipy import special as sp

from .errors import DomainError
from .models import JacobiParams
from .special import EULER_GAMMA, SQRT_PI, d_alpha, e_alpha, gamma_fn, h0, h0_ultra
from .summation import KahanSummation

PI2 = math.pi ** 2

B_SMALL = 2 / PI2  # 𝔟, κ of upper envelopes
B_LARGE = 0.5  # 𝔅, κ of lower envelopes
EPSILON_STAR = 256 / (27 * math.pi ** 3)
W0 = (1 + 21 / 500) / (1 + EPSILON_STAR)
W0_PRIME = (1 + 1 / 1000) * math.e
W1 = math.pi / 4 * (1 + EPSILON_STAR)

SNAP_TOL = 1e-12


def tag(symbol, *args):
    """Ledger key such as ``C^A[1.5, 0.25]``."""
    if not args:
        return symbol
    return f"{symbol}[{', '.join(f'{a:.12g}' for a in args)}]"


def snap(x, tol=SNAP_TOL):
    """x rounded to the nearest integer when it is within tol of it."""
    r = round(x)
    return float(r) if abs(x - r) <= tol else x


def is_integer(x, tol=SNAP_TOL):
    return abs(x - round(x)) <= tol


def is_half_integer(x, tol=SNAP_TOL):
    """x ∈ ℕ - 1/2, i.e. x ∈ {-1/2, 1/2, 3/2, ...}."""
    return x >= -0.5 - tol and is_integer(x + 0.5, tol)


def numerical_constants():
    return {
        "gamma": EULER_GAMMA,
        "b_small": B_SMALL,
        "B_large": B_LARGE,
        "w0": W0,
        "w0_prime": W0_PRIME,
        "w1": W1,
    }


# -- direct parametric constants ----------------------------------------------

def _check_above(name, x, bound):
    if not x > bound:
        raise DomainError(f"{name} needs its parameter > {bound:g} (got {x})")


def k_alpha(alpha):
    _check_above("k_alpha", alpha, -1)
    return 2 ** (alpha - 0.5) * abs(alpha + 0.5) * gamma_fn(alpha + 1) / (SQRT_PI * gamma_fn(alpha + 1.5))


def big_k_alpha(alpha):
    _check_above("K_alpha", alpha, -1)
    return gamma_fn(alpha + 1) / (SQRT_PI * gamma_fn(alpha + 1.5))


def l_alpha(alpha):
    _check_above("l_alpha", alpha, -1)
    return abs(alpha + 0.5) / (4 * (alpha + 1) * (alpha + 2))


def big_l_alpha(alpha):
    _check_above("L_alpha", alpha, -1)
    return 1 / ((alpha + 1) * (alpha + 2))


def n_alpha(alpha):
    _check_above("n_alpha", alpha, -0.5)
    return min(1.0, 2 ** (0.5 - alpha)) * SQRT_PI * gamma_fn(alpha + 0.5) / gamma_fn(alpha + 1)


def big_n_alpha(alpha):
    _check_above("N_alpha", alpha, -0.5)
    return max(1.0, 2 ** (0.5 - alpha)) * SQRT_PI * gamma_fn(alpha + 0.5) / gamma_fn(alpha + 1)


def m_omega(omega):
    _check_above("m_omega", omega, 0)
    return (1 - 2 ** (-omega)) / (math.e * omega)


def big_m_omega(omega):
    _check_above("M_omega", omega, 0)
    return 2 / ((1 - 1 / math.e) ** 2 * omega)


def b_alpha(alpha):
    """b_α; b_{-1/2} = 1/2."""
    if alpha == -0.5:
        return 0.5
    _check_above("b_alpha", alpha, -0.5)
    return min(1.0, 2 ** (alpha - 0.5)) * gamma_fn(alpha + 1) / SQRT_PI * math.exp(-d_alpha(alpha))


def big_b_alpha(alpha):
    """B_α; B_{-1/2} = 1/2."""
    if alpha == -0.5:
        return 0.5
    _check_above("B_alpha", alpha, -0.5)
    return max(1.0, 2 ** (alpha - 0.5)) * gamma_fn(alpha + 1) / SQRT_PI


def lam_check(lam):
    """λ̌ = ⌈2λ⌉ - λ."""
    return math.ceil(snap(2 * lam)) - lam


def h0_lambda(alpha, beta):
    """h_0^{α+β+1/2} = √π Γ(α+β+3/2)/Γ(α+β+2)."""
    return h0_ultra(alpha + beta + 0.5)


# -- auxiliary functions -------------------------------------------------------

def _half_ceil(lam):
    return math.ceil(snap(2 * lam)) / 2


def omega_fn(lam, t):
    """ω_λ(t) for λ > 0."""
    _check_above("omega", lam, 0)
    h = _half_ceil(lam)
    return 2 ** (h - lam) * math.exp((lam - h) * (lam + h + 1) * t)


def big_omega_fn(lam, t):
    """Ω_λ(t) for λ > 0."""
    _check_above("Omega", lam, 0)
    h = _half_ceil(lam)
    return 2 ** (h - lam - 0.5) * math.exp((lam - h + 0.5) * (lam + h + 0.5) * t)


def q_fn(lam, t):
    _check_above("q", lam, -1)
    return 2 * (lam + 1) * (lam + 2) * math.exp(-t * (lam + 1.5))


def q_tilde_fn(lam, t):
    _check_above("q~", lam, -1.5)
    return 2 * (lam + 2) * math.exp(-t * (lam + 1.5))


def upper_gamma(omega, xi):
    """∫_ξ^∞ u^{ω-1} e^{-u} du."""
    return float(sp.gammaincc(omega, xi) * sp.gamma(omega))


# -- recording -----------------------------------------------------------------

def record_num(ledger):
    for name, value in numerical_constants().items():
        ledger.record(name, value, "num", "numerical constants")


def record_par(ledger, alpha, source="parametric constants"):
    """Record every par-table entry defined at alpha."""
    entries = [("k", k_alpha, -1), ("K", big_k_alpha, -1), ("l", l_alpha, -1), ("L", big_l_alpha, -1),
               ("n", n_alpha, -0.5), ("N", big_n_alpha, -0.5), ("m", m_omega, 0), ("M", big_m_omega, 0),
               ("D", d_alpha, -1.5), ("E", e_alpha, -0.5 - SNAP_TOL)]
    for symbol, fn, above in entries:
        if alpha > above:
            ledger.record(tag(symbol, alpha), fn(alpha), "par", source)
    if alpha >= -0.5:
        ledger.record(tag("b", alpha), b_alpha(alpha), "par", source)
        ledger.record(tag("B", alpha), big_b_alpha(alpha), "par", source)
    ledger.record(tag("lam_check", alpha), lam_check(alpha), "par", source)


def record_fun(ledger, lam, t, source="auxiliary functions"):
    if lam > 0:
        ledger.record(tag("omega", lam, t), omega_fn(lam, t), "fun", source)
        ledger.record(tag("Omega", lam, t), big_omega_fn(lam, t), "fun", source)
    if lam > -1:
        ledger.record(tag("q", lam, t), q_fn(lam, t), "fun", source)
    if lam > -1.5:
        ledger.record(tag("q~", lam, t), q_tilde_fn(lam, t), "fun", source)


def record_tables(ledger, alpha, beta, T):
    """Fill num/par/fun with the entries relevant to (α, β, T)."""
    lam = alpha + beta + 0.5
    record_num(ledger)
    ledger.record("Lambda", lam, "par", "Lambda = alpha + beta + 1/2")
    ledger.record(tag("h0", alpha, beta), h0_of(alpha, beta), "par", "Jacobi norm")
    if lam > -1:
        ledger.record(tag("h0_lambda", lam), h0_ultra(lam), "par", "ultraspherical norm")
    for a in sorted({alpha, beta}):
        record_par(ledger, a)
        if a < -0.5:
            record_par(ledger, a + 2)
    record_par(ledger, lam)
    for t in (T, T / 4):
        record_fun(ledger, lam, t)


def h0_of(alpha, beta):
    return h0(JacobiParams(alpha, beta))


# -- footnote and error-term constants -----------------------------------------

def theta_sum_4pi():
    """Σ_{n≥1} e^{-4πn²} in closed form."""
    return 0.5 * ((2 ** 0.25 + 1) / gamma_fn(0.75) * (math.pi / 32) ** 0.25 - 1)


def theta_sum_5pi():
    """Σ_{n≠0} e^{-5πn²} in closed form."""
    return math.pi ** 0.25 * math.sqrt(5 + 2 * math.sqrt(5)) / (gamma_fn(0.75) * 5 ** 0.75) - 1


def theta_sum_direct(a, two_sided=False, n_max=50):
    acc = KahanSummation()
    for n in range(1, n_max):
        acc.add(math.exp(-a * math.pi * n * n))
    return 2 * acc.sum if two_sided else acc.sum


def error_term_constants():
    """Constants bounding the remainders of the odd-sphere upper estimates."""
    return {
        "sum_exp_-4pi_n2": theta_sum_4pi(),
        "sum_exp_-5pi_n2": theta_sum_5pi(),
        "I1_peak_row1": 24 * math.sqrt(2) * math.exp(1 / 12 - 64 / (3 * math.pi)),
        "I2_peak_row1": 3 * math.sqrt(3) * math.pi * math.exp(-512 / (3 * math.pi)),
        "row1_horizon_scale": 27 * math.pi ** 3 / 512,
        "e_pi_over_4": math.e * math.pi / 4,
    }


def large_time_constant():
    """ℭ of the large-time remainder estimate."""
    return (7 * math.sqrt(6) * math.exp(1 / 30) / (3 * math.sqrt(5))
            * (1 + (math.sqrt(2 * math.pi) * math.exp(1 / 12) + 1) / (128 * math.log(2))))


def footnote_constants():
    """Every decimal approximation quoted alongside the explicit bounds, keyed by expression."""
    e, pi, g = math.e, math.pi, EULER_GAMMA
    eg = math.exp(-g)
    w0, w0p, w1 = W0, W0_PRIME, W1
    q4 = e ** 0.25
    out = {
        "gamma": g,
        "2/pi^2": B_SMALL,
        "epsilon": EPSILON_STAR,
        "w0": w0,
        "w0'": w0p,
        "w1": w1,
        "pi/4": pi / 4,
        "pi/2": pi / 2,
        "2*sqrt(e)*w1": 2 * math.sqrt(e) * w1,
        "e^(1/4)*w0'": q4 * w0p,
        "e^(gamma-1)": math.exp(g - 1),
        "e^(1-gamma)": math.exp(1 - g),
        "e^(1-gamma)+1/2": math.exp(1 - g) + 0.5,
        "2/pi": 2 / pi,
        "2/pi-8/pi^3": 2 / pi - 8 / pi ** 3,
        "96/pi^5": 96 / pi ** 5,
        "1+2e^(-pi^2/2)": 1 + 2 * math.exp(-pi ** 2 / 2),
        "1+2e^(-pi)": 1 + 2 * math.exp(-pi),
        "2*log(2)": 2 * math.log(2),
        "1+log(8)": 1 + math.log(8),
        "frak_C": large_time_constant(),
        "large_time_bracket": 4 / e + large_time_constant() * math.exp(13 / 12) / (
            16 * math.sqrt(2 * pi) * (2 * math.log(2) - 1)),
        "large_time_bracket_below": 0.5 + 81 * pi / 128 * (
            1 + (2 * math.sqrt(pi) * math.exp(-23 / 24) + 1) / (32 * math.log(2))),
        "sphere2_ratio_T1": 2 * pi * e ** 0.25 / (math.sqrt(2) * math.exp(-pi / 4)),
        "2*w0": 2 * w0,
        "2*sqrt(2e)*w1": 2 * math.sqrt(2 * e) * w1,
        "2*exp(-e^-gamma)": 2 * math.exp(-eg),
        "exp(-e^-gamma/2)": math.exp(-eg / 2),
        "2*e^(1/4)*w0'": 2 * q4 * w0p,
        "pi/sqrt(2)": pi / math.sqrt(2),
        "4*w0": 4 * w0,
        "8e*w1^2": 8 * e * w1 ** 2,
        "4*e^(1/4)*w0'": 4 * q4 * w0p,
        "pi^2/2": pi ** 2 / 2,
        "sqrt(2)*e^(-pi/4)": math.sqrt(2) * math.exp(-pi / 4),
        "D_1": d_alpha(1),
        "2*exp(-D_1)": 2 * math.exp(-d_alpha(1)),
        "4*sqrt(2)*w0": 4 * math.sqrt(2) * w0,
        "4*sqrt(2)*e^(1/4)*w0'": 4 * math.sqrt(2) * q4 * w0p,
        "D_3": d_alpha(3),
        "2*exp(-D_3)": 2 * math.exp(-d_alpha(3)),
        "16*sqrt(2)*w0": 16 * math.sqrt(2) * w0,
        "16*sqrt(2)*e^(1/4)*w0'": 16 * math.sqrt(2) * q4 * w0p,
        "2*sqrt(pi)*exp(2e^-gamma)": 2 * math.sqrt(pi) * math.exp(2 * eg),
        "2*exp(e^-gamma)": 2 * math.exp(eg),
        "8/sqrt(pi)*w0": 8 / math.sqrt(pi) * w0,
        "8/sqrt(pi)*e^(1/4)*w0'": 8 / math.sqrt(pi) * q4 * w0p,
        "16*w0*exp(2e^-gamma)": 16 * w0 * math.exp(2 * eg),
        "4*sqrt(e)*w1*exp(e^-gamma)": 4 * math.sqrt(e) * w1 * math.exp(eg),
        "16*e^(1/4)*w0'*exp(2e^-gamma)": 16 * q4 * w0p * math.exp(2 * eg),
        "pi*exp(e^-gamma)": pi * math.exp(eg),
        "sqrt(2pi)*exp(3e^-gamma)": math.sqrt(2 * pi) * math.exp(3 * eg),
        "pi^2*exp(2e^-gamma)": pi ** 2 * math.exp(2 * eg),
        "16*sqrt(2)/sqrt(pi)*w0": 16 * math.sqrt(2) / math.sqrt(pi) * w0,
        "16*sqrt(2)/sqrt(pi)*e^(1/4)*w0'": 16 * math.sqrt(2) / math.sqrt(pi) * q4 * w0p,
        "32*w0*exp(3e^-gamma)": 32 * w0 * math.exp(3 * eg),
        "8pi^2*w1^2*exp(2e^-gamma+1)": 8 * pi ** 2 * w1 ** 2 * math.exp(2 * eg + 1),
        "32*w0'*exp(3e^-gamma+1/4)": 32 * w0p * math.exp(3 * eg + 0.25),
        "pi^4/2*exp(2e^-gamma)": pi ** 4 / 2 * math.exp(2 * eg),
        "pi^(5/2)/sqrt(2)*exp(4e^-gamma+1)": pi ** 2.5 / math.sqrt(2) * math.exp(4 * eg + 1),
        "16*sqrt(2)/sqrt(pi)*e*w0": 16 * math.sqrt(2) / math.sqrt(pi) * e * w0,
        "128*sqrt(2)/pi^(3/2)*e^(1/3)*w0'": 128 * math.sqrt(2) / pi ** 1.5 * e ** (1 / 3) * w0p,
        "16pi^2*exp(4e^-gamma+2)*w0": 16 * pi ** 2 * math.exp(4 * eg + 2) * w0,
        "128pi*w0'*exp(4e^-gamma+9/20)": 128 * pi * w0p * math.exp(4 * eg + 9 / 20),
        "pi^(17/2)/4*exp(6e^-gamma+46/11)": pi ** 8.5 / 4 * math.exp(6 * eg + 46 / 11),
        "case_iv_upper_row1": (2 ** 14 / (3 * pi ** 2.5) * (64 / (11 * pi ** 2) + 1) * e ** (32 / 11)
                               / (1 - 1 / e) ** 2 * w0 * w1 ** 4),
        "case_iv_upper_row2": (64 * pi ** 1.5 / 3 * (64 / (121 * pi ** 2) + 1) * e ** (161 / 484)
                               / (1 - 1 / e) ** 2 * w0p),
        "case_iv_ratio_row1": (2 ** 9 * pi ** 6 / (1 - 2 ** -1.5) * (e / (1 - 1 / e)) ** 2
                               * (64 / (11 * pi ** 2) + 1) * math.exp(6 * eg + 56 / 11) * w0 * w1 ** 4),
        "case_iv_ratio_row2": (2 * pi ** 10 / (1 - 2 ** -1.5) / (1 - 1 / e) ** 2 * (64 / (121 * pi ** 2) + 1)
                               * math.exp(6 * eg + 785 / 484) * w0p),
    }
    out.update(error_term_constants())
    return out


def record_footnotes(ledger):
    for name, value in footnote_constants().items():
        ledger.record(name, value, "num", "quoted decimal")
