"""Comtet A-polynomials for iterated D = (1/sin φ) d/dφ, L^iΨ, and the h/g/w sequences.

D^N[F(vφ)] = Σ_j v^{2j} (L^j F)(vφ) Φ_{N,j}(φ) with L = (1/z) d/dz and
Φ_{N,j} = 𝒜_{N,j}(Ψ, LΨ, ..., L^{N-j}Ψ), Ψ(φ) = φ/sin φ.
"""
import json
import math
from functools import lru_cache

import numpy as np
from scipy import special as sp

from .errors import AccuracyError, CapacityError, DomainError
from .logger import get_logger
from .special import scaled_bessel_k_half_int
from .summation import KahanSummation

TABLE_CAP = 25
HALF_PI = math.pi / 2

logger = get_logger("comtet")


class AposCoeffTable:
    """Positive integer coefficients a_{N,j}(k) for 1 <= j <= N <= n_max."""

    def __init__(self, n_max, coeffs):
        self.n_max = n_max
        self._coeffs = coeffs

    def entries(self, N, j):
        if not 1 <= j <= N <= self.n_max:
            raise CapacityError(f"(N={N}, j={j}) outside table built for N <= {self.n_max}")
        return self._coeffs[(N, j)]

    def coefficient(self, N, j, k):
        return self.entries(N, j).get(tuple(k), 0)

    def __len__(self):
        return sum(len(v) for v in self._coeffs.values())

    def to_json_dict(self):
        out = {}
        for (N, j), row in sorted(self._coeffs.items()):
            for k, a in sorted(row.items()):
                out[f"{N}/{j}/{','.join(str(x) for x in k)}"] = a
        return out

    def dump(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)


def build_coeff_table(n_max, cap=TABLE_CAP):
    """Build a_{N,j}(k) from a_{1,1}(e_0) = 1 by differentiating each monomial once more."""
    if n_max < 1:
        raise DomainError("N_max must be >= 1")
    if n_max > cap:
        raise CapacityError(f"N_max={n_max} exceeds the supported cap {cap}")
    coeffs = {(1, 1): {(1,): 1}}
    for N in range(1, n_max):
        for j in range(1, N + 2):
            coeffs[(N + 1, j)] = {}
        for j in range(1, N + 1):
            for k, a in coeffs[(N, j)].items():
                # D hits L^j F: one more Ψ factor, j -> j+1
                up = (k[0] + 1,) + k[1:]
                row = coeffs[(N + 1, j + 1)]
                row[up] = row.get(up, 0) + a
                # D hits (L^i Ψ)^{k_i}: k_i L^iΨ -> Ψ L^{i+1}Ψ
                padded = list(k) + [0]
                row = coeffs[(N + 1, j)]
                for i, ki in enumerate(k):
                    if ki == 0:
                        continue
                    nk = list(padded)
                    nk[0] += 1
                    nk[i] -= 1
                    nk[i + 1] += 1
                    nk = tuple(nk)
                    row[nk] = row.get(nk, 0) + a * ki
    logger.debug(f"built Comtet table up to N={n_max}")
    return AposCoeffTable(n_max, coeffs)


@lru_cache(maxsize=8)
def coeff_table(n_max=20):
    return build_coeff_table(n_max)


def eval_apoly(N, j, lam, table):
    lam = list(lam)
    if len(lam) != N - j + 1:
        raise DomainError(f"A_{{{N},{j}}} takes {N - j + 1} arguments (got {len(lam)})")
    acc = KahanSummation()
    for k, a in table.entries(N, j).items():
        term = float(a)
        for x, e in zip(lam, k):
            if e:
                term *= x ** e
        acc.add(term)
    return acc.sum


@lru_cache(maxsize=None)
def psi_coeff(n):
    """Taylor coefficient of φ^{2n} in φ/sin φ: 4(2^{2n-1}-1)ζ(2n)/(2π)^{2n}."""
    if n == 0:
        return 1.0
    return 2.0 * float(sp.zeta(2 * n)) * (1.0 - 2.0 ** (1 - 2 * n)) / math.pi ** (2 * n)


def l_pow_psi(i, phi, rel_tol=1e-18, max_terms=5000):
    """(L^i Ψ)(φ) by termwise differentiation of the even series of Ψ."""
    if i < 0:
        raise DomainError("i must be >= 0")
    if not 0 <= phi <= HALF_PI:
        raise DomainError(f"L^i Psi is evaluated on [0, pi/2] (got phi={phi})")
    if phi == 0:
        return psi_coeff(i) * 2 ** i * math.factorial(i)
    log_phi2 = 2 * math.log(phi)
    acc = KahanSummation()
    prev = math.inf
    for n in range(i, i + max_terms):
        log_term = (math.log(psi_coeff(n)) + i * math.log(2) + math.lgamma(n + 1) - math.lgamma(n - i + 1)
                    + (n - i) * log_phi2)
        term = math.exp(log_term)
        acc.add(term)
        if n > i + 10 and term < prev and term < rel_tol * acc.sum:
            return acc.sum
        prev = term
    raise AccuracyError(f"L^{i} Psi series did not converge at phi={phi}")


def l_pow_psi_bound(i):
    return 8 ** (i + 1) * math.factorial(i) / (3 ** (i + 1) * math.pi ** (2 * i))


def phi_nj(N, j, phi, table):
    lam = [l_pow_psi(i, phi) for i in range(N - j + 1)]
    return eval_apoly(N, j, lam, table)


def phi_nj_bound(N, j):
    return ((8 / 3) ** N * (4 / (3 * math.pi ** 2)) ** (N - j) * (3 * math.pi / 16) ** j
            * math.factorial(2 * N - j - 1) / (math.factorial(N - j) * math.factorial(j - 1)))


def bessel_poly_coeff(N, j):
    """(2N-j-1)!/((N-j)!(j-1)!)."""
    return math.factorial(2 * N - j - 1) // (math.factorial(N - j) * math.factorial(j - 1))


def apoly_factorial_closed_form(N, j):
    """𝒜_{N,j}(0!, 1!, ..., (N-j)!) in closed form."""
    return bessel_poly_coeff(N, j) / (2 ** (N - j))


def bessel_sum_identity_lhs(N, x):
    if N < 1:
        raise DomainError("N must be >= 1")
    acc = KahanSummation()
    for j in range(1, N + 1):
        acc.add(bessel_poly_coeff(N, j) * x ** j)
    return acc.sum


def bessel_sum_identity_rhs(N, x):
    """x^N √(x/π) e^{x/2} K_{N-1/2}(x/2), written through the scaled Bessel polynomial."""
    if not x > 0:
        raise DomainError("x must be > 0")
    return x ** N * scaled_bessel_k_half_int(N - 0.5, x / 2)


def partitions(n):
    """Multiplicity vectors (k_1, ..., k_n) with Σ j k_j = n."""
    def rec(remaining, largest):
        if remaining == 0:
            yield []
            return
        for part in range(min(remaining, largest), 0, -1):
            for rest in rec(remaining - part, part):
                yield [part] + rest

    for parts in rec(n, n):
        k = [0] * n
        for p in parts:
            k[p - 1] += 1
        yield tuple(k)


def partition_count(n):
    return sum(1 for _ in partitions(n)) if n > 0 else 1


def lah_sum(N, s):
    if N < 1:
        raise DomainError("N must be >= 1")
    acc = KahanSummation()
    for n in range(1, N + 1):
        acc.add(math.comb(N, n) * math.factorial(N - 1) / math.factorial(n - 1) * s ** n)
    return acc.sum


def lah_partition_sum(N, s):
    """Σ over Σ j k_j = N of N!/Π k_j! s^{Σ k_j}, by enumeration."""
    acc = KahanSummation()
    for k in partitions(N):
        denom = 1
        for kj in k:
            denom *= math.factorial(kj)
        acc.add(math.factorial(N) / denom * s ** sum(k))
    return acc.sum


def _g_by_expansion(j_max, phi):
    table = coeff_table(max(j_max - 1, 1))
    lpsi = [l_pow_psi(i, phi) for i in range(j_max)]
    g = [lpsi[0]]
    for j in range(2, j_max + 1):
        N = j - 1
        acc = KahanSummation()
        for i in range(1, N + 1):
            acc.add(eval_apoly(N, i, lpsi[:N - i + 1], table) * lpsi[i])
        g.append(acc.sum)
    return g


def hgw_sequences(j_max, phi, small_phi=0.5):
    """h_j, g_j = D^{j-1}Ψ and w_j for j = 1..j_max at φ in (0, π)."""
    if j_max < 1:
        raise DomainError("j_max must be >= 1")
    if not 0 < phi < math.pi:
        raise DomainError(f"h/g/w sequences need phi in (0, pi) (got {phi})")
    s, c = math.sin(phi), math.cos(phi)
    if phi < small_phi:
        # the two-step recurrence cancels badly near 0; expand g_j instead
        if j_max - 1 > TABLE_CAP:
            raise CapacityError(f"j_max={j_max} needs a table beyond N={TABLE_CAP} for phi < {small_phi}")
        g = _g_by_expansion(j_max, phi)
        h = [gj * s ** (2 * j - 1) for j, gj in enumerate(g, start=1)]
    else:
        h = [phi, s - phi * c]
        for j in range(1, j_max - 1):
            h.append(-(2 * j + 1) * c * h[j] + j * j * s * s * h[j - 1])
        h = h[:j_max]
        g = [hj / s ** (2 * j - 1) for j, hj in enumerate(h, start=1)]
    w = [hj * (math.pi - phi) ** (j - 1) / (math.factorial(j) * phi ** j * s ** (j - 1))
         for j, hj in enumerate(h, start=1)]
    return np.array(h), np.array(g), np.array(w)
