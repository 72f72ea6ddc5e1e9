"""Steps A-F of the constant pipeline, the G/H refinements and the closed-form case rows.

Every step returns a ``(lower, upper)`` pair and records both values in the
pipeline's ``ConstantLedger`` under keys such as ``c^B[1, 0, 0.25]``.
"""
import math

from .constants import (
    B_LARGE, B_SMALL, PI2, SNAP_TOL, W0, W0_PRIME, W1,
    b_alpha, big_b_alpha, big_l_alpha, big_m_omega, big_omega_fn, h0_of, is_half_integer, is_integer,
    l_alpha, lam_check, m_omega, omega_fn, q_fn, q_tilde_fn, record_footnotes, record_tables, tag,
)
from .errors import ConfigurationError, DomainError
from .logger import get_logger
from .models import ConstantLedger, JacobiParams, Step, Variant
from .special import SQRT_PI, d_alpha, gamma_fn, h0_ultra

# classification of Λ closer than this to a case boundary is reported, not trusted
NEAR_BOUNDARY = 1e-6
ROW_VARIANTS = (Variant.ROW1, Variant.ROW2, Variant.SPECIAL)

logger = get_logger("pipeline")


def half_snap(x, tol=SNAP_TOL):
    """x moved onto ℤ/2 when it lies within tol of it."""
    r = round(2 * x) / 2
    return r if abs(x - r) <= tol else x


def _within(T, horizon):
    return T <= horizon * (1 + 1e-12)


class ConstantPipeline:
    """Evaluates Steps A-F for one choice of the odd-sphere row, sharing a ledger."""

    def __init__(self, variant=Variant.AUTO, ledger=None):
        self.variant = Variant(variant)
        if self.variant == Variant.GENERAL:
            raise ConfigurationError("variant 'general' only applies to sphere lower bounds")
        self.ledger = ledger if ledger is not None else ConstantLedger(variant=self.variant)
        self._memo = {}

    def _warn(self, message):
        if message not in self.ledger.warnings:
            self.ledger.warnings.append(message)
            logger.warning(message)

    def _keep(self, key, lower, upper, source):
        symbol, args = key[0], key[1:]
        self.ledger.record(tag(f"c^{symbol}", *args), lower, source=source)
        self.ledger.record(tag(f"C^{symbol}", *args), upper, source=source)
        self._memo[key] = (lower, upper)
        logger.debug(f"{source} at {args}: lower={lower:.6g}, upper={upper:.6g}")
        return lower, upper

    # -- Step A ----------------------------------------------------------------

    @staticmethod
    def row_horizon(variant, lam):
        """Largest T_A admitted by a row at λ, or None when the row does not apply."""
        variant = Variant(variant)
        if variant == Variant.ROW1:
            return None if lam == -0.5 else 1 / (2 * lam + 2)
        if variant == Variant.ROW2:
            return 1 / (2 * lam + 2) ** 2
        if variant == Variant.SPECIAL:
            return PI2 / 2 if abs(lam) == 0.5 else None
        return None

    @staticmethod
    def row_upper(variant, lam, T):
        """C^A_{λ,T} for one row, assuming the row admits T."""
        variant = Variant(variant)
        g = gamma_fn(lam + 1)
        if variant == Variant.ROW1:
            return W0 * (math.sqrt(math.e) * W1 / 2) ** (lam + 0.5) / g
        if variant == Variant.ROW2:
            return math.e ** 0.25 * W0_PRIME * (math.pi / 8) ** (lam + 0.5) / g
        if lam == -0.5:
            return (1 + 2 * math.exp(-PI2 / (2 * T))) / g
        return math.pi * math.exp(T) / 8 / g

    def step_a(self, lam, T):
        lam = half_snap(lam)
        if not is_half_integer(lam):
            raise DomainError(f"Step A needs lambda in N - 1/2 (got {lam})")
        if not T > 0:
            raise DomainError(f"Step A needs T > 0 (got {T})")
        key = ("A", lam, T)
        if key in self._memo:
            return self._memo[key]
        lower = self.a_lower(lam)
        if self.variant != Variant.AUTO:
            horizon = self.row_horizon(self.variant, lam)
            if horizon is None or not _within(T, horizon):
                raise ConfigurationError(
                    f"variant {self.variant.value} does not admit T_A={T:.6g} at lambda={lam}"
                    + ("" if horizon is None else f" (needs T_A <= {horizon:.6g})"))
            chosen = self.variant
        else:
            admitted = {}
            for v in ROW_VARIANTS:
                horizon = self.row_horizon(v, lam)
                if horizon is not None and _within(T, horizon):
                    admitted[v] = self.row_upper(v, lam, T)
            if not admitted:
                raise ConfigurationError(
                    f"no odd-sphere row admits T_A={T:.6g} at lambda={lam} "
                    f"(row1 needs <= {1 / (2 * lam + 2):.6g}, row2 needs <= {1 / (2 * lam + 2) ** 2:.6g})")
            chosen = min(admitted, key=admitted.get)
        upper = self.row_upper(chosen, lam, T)
        return self._keep(key, lower, upper, f"Step A ({chosen.value})")

    # -- Steps B-E ---------------------------------------------------------------

    def step_b(self, alpha, beta, T):
        alpha, beta = half_snap(alpha), half_snap(beta)
        if not (alpha >= -0.5 - SNAP_TOL and beta >= -0.5 - SNAP_TOL):
            raise DomainError(f"Step B needs alpha, beta >= -1/2 (got {alpha}, {beta})")
        if not (is_integer(alpha + beta) and alpha + beta > -SNAP_TOL):
            raise DomainError(f"Step B needs alpha + beta in N (got {alpha + beta})")
        key = ("B", alpha, beta, T)
        if key in self._memo:
            return self._memo[key]
        lam_a = round(alpha + beta) + 0.5
        c_a, big_c_a = self.step_a(lam_a, T / 4)
        ratio = h0_ultra(lam_a) / h0_of(alpha, beta)
        lower = (c_a * 4 ** (alpha + beta + 1.5) * b_alpha(beta)
                 / max(d_alpha(beta) * T, B_LARGE * PI2) ** (beta + 0.5) * ratio)
        upper = big_c_a * 4 ** (alpha + beta + 2) * big_b_alpha(beta) / (B_SMALL * PI2 / 2) ** (beta + 0.5) * ratio
        return self._keep(key, lower, upper, "Step B")

    def step_c(self, lam, T):
        lam = half_snap(lam)
        if not lam > 0:
            raise DomainError(f"Step C needs lambda > 0 (got {lam})")
        key = ("C", lam, T)
        if key in self._memo:
            return self._memo[key]
        check = lam_check(lam)
        lower = self.step_b(lam, check, T)[0] * omega_fn(lam, T)
        upper = self.step_b(lam, check - 1, T)[1] * big_omega_fn(lam, T)
        return self._keep(key, lower, upper, "Step C")

    def step_d(self, lam, T):
        lam = half_snap(lam)
        if not -1 < lam < 0:
            raise DomainError(f"Step D needs lambda in (-1, 0) (got {lam})")
        key = ("D", lam, T)
        if key in self._memo:
            return self._memo[key]
        limit = 1 / (2 * lam + 2 * lam_check(lam) + 7)
        if T / 4 > limit * (1 + 1e-12):
            self._warn(f"Step D at lambda={lam:.6g}: T/4={T / 4:.6g} exceeds {limit:.6g}, "
                       f"the simplified minimum/maximum no longer resolve to the second branch")
        c1, big_c1 = self.step_c(lam + 1, T)
        c2, big_c2 = self.step_c(lam + 2, T)
        lower = (8 * (lam + 1) / math.pi * math.exp(-(2 * lam + 2) * T)
                 * min(c1, c2 * m_omega(lam + 2) * 8 * (lam + 2) / math.pi * math.exp(-(2 * lam + 4) * T)))
        upper = 4 * (lam + 1) * max(
            big_c1, big_c2 * big_m_omega(lam + 2) * 16 * (lam + 2) / PI2 * (16 * T / PI2 + 1) ** (lam + 1))
        return self._keep(key, lower, upper, "Step D")

    def diamond(self, lam, T):
        """Step B at λ = 1, Step C otherwise."""
        if half_snap(lam) == 1:
            return self.step_b(1.0, 1.0, T)
        return self.step_c(lam, T)

    def step_e(self, lam, T):
        lam = half_snap(lam)
        if not -1.5 < lam <= -1:
            raise DomainError(f"Step E needs lambda in (-3/2, -1] (got {lam})")
        key = ("E", lam, T)
        if key in self._memo:
            return self._memo[key]
        c2, big_c2 = self.diamond(lam + 2, T)
        lower = (32 * (1 - 1 / math.e) / PI2 * (lam + 2) * math.exp(-(4 * lam + 6) * T) * c2
                 * min(2 * m_omega(lam + 2) * (16 * T / PI2 + 1) ** (lam + 1), 1.0))
        upper = 16 * (lam + 2) * big_c2 * max(4 / PI2 * big_m_omega(lam + 2), 1.0)
        return self._keep(key, lower, upper, "Step E")

    def star_step(self, lam):
        lam = half_snap(lam)
        if is_half_integer(lam):
            return Step.A
        if is_integer(lam) and lam >= 0:
            return Step.B
        if lam > 0:
            return Step.C
        if -1 < lam < 0:
            return Step.D
        if -1.5 < lam <= -1:
            return Step.E
        raise DomainError(f"no step covers lambda={lam}")

    def star(self, lam, T):
        step = self.star_step(lam)
        lam = half_snap(lam)
        if step == Step.B:
            return self.step_b(lam, lam, T)
        return {Step.A: self.step_a, Step.C: self.step_c, Step.D: self.step_d, Step.E: self.step_e}[step](lam, T)

    def step(self, step, param, T):
        step = Step(step)
        if step == Step.B:
            alpha, beta = (param.alpha, param.beta) if isinstance(param, JacobiParams) else param
            return self.step_b(alpha, beta, T)
        return {Step.A: self.step_a, Step.C: self.step_c, Step.D: self.step_d, Step.E: self.step_e}[step](param, T)

    # -- Step F and refinements -------------------------------------------------

    def final(self, params, T):
        if not T > 0:
            raise DomainError(f"T must be > 0 (got {T})")
        alpha, beta = half_snap(params.alpha), half_snap(params.beta)
        lam = half_snap(alpha + beta + 0.5)
        h0 = h0_of(alpha, beta)
        quarter = T / 4
        if alpha >= -0.5 and beta >= -0.5:
            ratio = h0_ultra(lam) / h0
            c_s, big_c_s = self.star(lam, quarter)
            lower = c_s * 4 ** (lam + 1) * b_alpha(alpha) * b_alpha(beta) * ratio
            upper = big_c_s * 4 ** (lam + 2) * big_b_alpha(alpha) * big_b_alpha(beta) * ratio
            source = "Step F (alpha, beta >= -1/2)"
        elif alpha >= -0.5 or beta >= -0.5:
            a, s = (alpha, beta) if alpha >= -0.5 else (beta, alpha)
            ratio = h0_ultra(lam) / h0
            c_s, big_c_s = self.star(lam, quarter)
            c_s2, big_c_s2 = self.star(lam + 2, quarter)
            ds, ds2 = d_alpha(s), d_alpha(s + 2)
            dpow = ds ** (s + 0.5)
            lower = 4 ** (lam + 0.5) * b_alpha(a) * min(
                c_s2 * q_fn(lam, T) * (4 * ds / (PI2 * ds2)) ** 2 * 4 / B_LARGE ** 2 * l_alpha(s) * b_alpha(s + 2),
                c_s * dpow) * ratio
            upper = 4 ** (lam + 1.5) * big_b_alpha(a) * (
                big_c_s2 * q_fn(lam, 0) * 4 / B_SMALL ** 2 * big_l_alpha(s) * big_b_alpha(s + 2)
                + big_c_s * dpow) * ratio
            source = "Step F (one parameter below -1/2)"
        else:
            above = lam > -1
            q = q_fn if above else q_tilde_fn
            ratio = (h0_ultra(lam) if above else SQRT_PI * gamma_fn(lam + 2) / gamma_fn(lam + 1.5)) / h0
            c_s, big_c_s = self.star(lam, quarter)
            c_s2, big_c_s2 = self.star(lam + 2, quarter)
            c_s4, big_c_s4 = self.star(lam + 4, quarter)
            da, db = d_alpha(alpha), d_alpha(beta)
            da2, db2 = d_alpha(alpha + 2), d_alpha(beta + 2)
            pa, pb = da ** (alpha + 0.5), db ** (beta + 0.5)
            first = (c_s4 * q_fn(lam + 2, T) * q(lam, T) * (2 / math.pi) ** 8
                     * l_alpha(alpha) * l_alpha(beta) * b_alpha(alpha + 2) * b_alpha(beta + 2)
                     * (2 * da * db / (da2 * db2 * B_LARGE ** 2)) ** 2)
            second = c_s2 * q(lam, T) * (2 / math.pi) ** 4 / B_LARGE ** 2 * min(
                (da / da2) ** 2 * pb * l_alpha(alpha) * b_alpha(alpha + 2),
                (db / db2) ** 2 * pa * l_alpha(beta) * b_alpha(beta + 2))
            third = c_s * (0.25 if above else 0.5) * pa * pb
            lower = 4 ** (lam + 1) * min(first, second, third) * ratio
            upper = 4 ** (lam + 2) * (
                big_c_s4 * q_fn(lam + 2, 0) * q(lam, 0) * 4 / B_SMALL ** 4
                * big_l_alpha(alpha) * big_l_alpha(beta) * big_b_alpha(alpha + 2) * big_b_alpha(beta + 2)
                + big_c_s2 * q(lam, 0) / B_SMALL ** 2
                * (big_l_alpha(alpha) * big_b_alpha(alpha + 2) * pb + big_l_alpha(beta) * big_b_alpha(beta + 2) * pa)
                + big_c_s * 0.25 * pa * pb) * ratio
            source = f"Step F (both parameters below -1/2, Lambda {'>' if above else '<='} -1)"
        self.ledger.record(tag("c", alpha, beta, T), lower, source=source)
        self.ledger.record(tag("C", alpha, beta, T), upper, source=source)
        return lower, upper

    @staticmethod
    def a_lower(lam):
        """c^A_λ, valid for every t."""
        return 1 / (4 ** (lam + 0.5) * gamma_fn(lam + 1))

    def refined_g(self, params, T, upper=True):
        """c^ref/C^ref of refinement G; with upper=False the lower constant alone, valid for every t."""
        alpha, beta = half_snap(params.alpha), half_snap(params.beta)
        if not (alpha >= -0.5 and beta >= -0.5):
            raise DomainError(f"refinement G needs alpha, beta >= -1/2 (got {alpha}, {beta})")
        if not (is_integer(alpha + beta) and alpha + beta >= -1 - SNAP_TOL):
            raise DomainError(f"refinement G needs alpha + beta in N - 1 (got {alpha + beta})")
        lam_a = round(alpha + beta + 1) - 0.5
        ratio = h0_ultra(lam_a) / h0_of(alpha, beta)
        lower = self.a_lower(lam_a) * 4 ** (alpha + beta + 1.5) * b_alpha(beta) * ratio
        self.ledger.record(tag("c^ref", alpha, beta), lower, source="refinement G")
        if not upper:
            return lower, None
        big_c_a = self.step_a(lam_a, T / 4)[1]
        result = big_c_a * 4 ** (alpha + beta + 2) * big_b_alpha(beta) * ratio
        self.ledger.record(tag("C^ref", alpha, beta, T), result, source="refinement G")
        return lower, result

    def refined_h(self, alpha, T):
        alpha = half_snap(alpha)
        if not (is_integer(alpha) and alpha >= 0):
            raise DomainError(f"refinement H needs an integer alpha >= 0 (got {alpha})")
        lam_a = 2 * alpha + 0.5
        c_a, big_c_a = self.step_a(lam_a, T / 16)
        ratio = h0_ultra(lam_a) / h0_ultra(alpha)
        lower = (c_a * 2 * (32 / max(d_alpha(alpha) * T / 4, B_LARGE * PI2)) ** (alpha + 0.5)
                 * b_alpha(alpha) * ratio)
        upper = big_c_a * 8 * (64 / (B_SMALL * PI2)) ** (alpha + 0.5) * big_b_alpha(alpha) * ratio
        self.ledger.record(tag("c^ref", alpha, -0.5, T), lower, source="refinement H")
        self.ledger.record(tag("C^ref", alpha, -0.5, T), upper, source="refinement H")
        return lower, upper


# -- module-level entry points -------------------------------------------------

def step_constants(step, param, T, variant=Variant.AUTO):
    return ConstantPipeline(variant).step(step, param, T)


def final_constants(params, T, variant=Variant.AUTO):
    return ConstantPipeline(variant).final(params, T)


def refined_constants_g(params, T, variant=Variant.AUTO):
    return ConstantPipeline(variant).refined_g(params, T)


def refined_constants_h(alpha, T, variant=Variant.AUTO):
    return ConstantPipeline(variant).refined_h(alpha, T)


def boundary_distance(lam):
    """Distance from Λ to the nearest point of ℤ/2."""
    return abs(lam - round(2 * lam) / 2)


def theorem_case(params):
    """Closed-form case "i".."iv" for α, β >= -1/2, plus any near-boundary warning."""
    alpha, beta = half_snap(params.alpha), half_snap(params.beta)
    warnings = []
    if alpha < -0.5 or beta < -0.5:
        return None, warnings
    lam = half_snap(alpha + beta + 0.5)
    gap = boundary_distance(lam)
    if SNAP_TOL < gap <= NEAR_BOUNDARY:
        warnings.append(f"Lambda={lam!r} lies {gap:.3g} from the case boundary {round(2 * lam) / 2}; "
                        f"the classification may flip under rounding")
    s = alpha + beta + 1
    if is_integer(s):
        return "i", warnings
    if is_integer(lam):
        return "ii", warnings
    if alpha + beta > -0.5:
        return "iii", warnings
    return "iv", warnings


def case_horizons(case, params):
    """(T1, T2) at which the printed rows of a case are stated."""
    s = params.alpha + params.beta
    if case == "i":
        return 2 / (s + 1.5), 1 / (s + 1.5) ** 2
    if case == "ii":
        return 4 / (s + 1.25), 1 / (s + 1.25) ** 2
    if case == "iii":
        return 4 / (s + 1.75), 1 / (s + 1.75) ** 2
    if case == "iv":
        return 16 / 11, 16 / 121
    raise DomainError(f"unknown case {case!r}")


def printed_bounds(case, params):
    """Rounded numbers printed for a case: lower at T1, uppers and ratios at (T1, T2)."""
    s = params.alpha + params.beta + 1
    if case == "i":
        return {"lower": 1 / (11 * 3.6 ** s), "upper": (11 / 3 * 3.4 ** s, 16 * 1.6 ** s),
                "ratio": (40 * 12 ** s, 172 * 5.6 ** s)}
    if case == "ii":
        return {"lower": 1 / (14 * 31 ** s), "upper": (11 * 23 ** s, 45 * 5 ** s),
                "ratio": (138 * 694 ** s, 603 * 150 ** s)}
    if case == "iii":
        return {"lower": 1 / (318 * 31 ** s), "upper": (28 * 23 ** s, 124 * 5 ** s),
                "ratio": (8798 * 694 ** s, 16214 * 150 ** s)}
    if case == "iv":
        return {"lower": 1 / 8e6, "upper": (20107.0, 1189.0), "ratio": (28 / 3 * 1e10, 31e7)}
    raise DomainError(f"unknown case {case!r}")


def proposition_rows(params, case=None):
    """Compare the pipeline's exact constants with the printed rows of the case."""
    if case is None:
        case, _ = theorem_case(params)
    if case is None:
        return []
    printed = printed_bounds(case, params)
    rows = []
    for label, T, index in (("T1", case_horizons(case, params)[0], 0), ("T2", case_horizons(case, params)[1], 1)):
        lower, upper = final_constants(params, T)
        if index == 0:
            rows.append({"quantity": "lower", "horizon": label, "T": T, "computed": lower,
                         "printed": printed["lower"], "holds": lower >= printed["lower"]})
        rows.append({"quantity": "upper", "horizon": label, "T": T, "computed": upper,
                     "printed": printed["upper"][index], "holds": upper <= printed["upper"][index]})
        rows.append({"quantity": "ratio", "horizon": label, "T": T, "computed": upper / lower,
                     "printed": printed["ratio"][index], "holds": upper / lower <= printed["ratio"][index]})
    return rows


def build_ledger(params, T, variant=Variant.AUTO, footnotes=True, alternatives=True):
    """Full ledger for (α, β, T): tables, every step on the way, the final pair and the case rows."""
    ledger = ConstantLedger(params=params, T=T, variant=Variant(variant))
    record_tables(ledger, params.alpha, params.beta, T)
    if footnotes:
        record_footnotes(ledger)
    pipeline = ConstantPipeline(variant, ledger)
    ledger.lower, ledger.upper = pipeline.final(params, T)
    case, warnings = theorem_case(params)
    for message in warnings:
        pipeline._warn(message)
    ledger.theorem_case = case
    if case is not None:
        ledger.rows = proposition_rows(params, case)
    lam = params.alpha + params.beta + 0.5
    gap = boundary_distance(lam)
    if case is None and SNAP_TOL < gap <= NEAR_BOUNDARY:
        pipeline._warn(f"Lambda={lam!r} lies {gap:.3g} from {round(2 * lam) / 2}; "
                       f"the step dispatch may flip under rounding")
    if alternatives and SNAP_TOL < gap <= NEAR_BOUNDARY:
        shifted = params.beta + (round(2 * lam) / 2 - lam)
        if shifted > -1:
            logger.info(f"building the alternative ledger at beta={shifted!r}")
            ledger.alternatives.append(
                build_ledger(JacobiParams(params.alpha, shifted), T, variant, footnotes=False, alternatives=False))
    return ledger
