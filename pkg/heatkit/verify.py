"""Grid certification of kernels against their explicit envelopes.

Points are evaluated in batches: batches run one after another, the points
of a batch run concurrently in worker threads, and results are merged back
by grid index so a report never depends on completion order.
"""
import asyncio
import csv
import io
import json
import math
import time
from dataclasses import asdict

import numpy as np

from .bounds import envelope_values, manifold_envelope, sandwich_envelopes, xi_envelope
from .config import threads_from_env
from .constants import B_LARGE, B_SMALL
from .errors import ConfigurationError, HeatkitError
from .kernels import cross_kernel, jacobi_kernel, sphere_kernel, uses_series
from .logger import get_logger
from .models import (
    ConstantLedger, CrossFamily, CrossSpace, EvalPolicy, GridSpec, JacobiParams, Variant, VerificationReport,
)
from .pipeline import final_constants

DEFAULT_SLACK = 1e-6
DEFAULT_BATCH_SIZE = 256
NEAR_DIAGONAL_SHIFT = 1e-3
SMALL_TIME_FLOOR = 1e-3  # closed forms and the odd-sphere route
SERIES_EXPONENT_CAP = 20.0  # beyond e^{-20} the series value is lost in binary64 cancellation
UNDERFLOW_EXPONENT_CAP = 600.0
PROFILE_FIELDS = ("t", "theta", "varphi", "kernel", "lower_envelope", "upper_envelope",
                  "ratio_lower", "ratio_upper")


def _closed_form(params):
    return params.alpha in (-0.5, 0.5) and params.beta in (-0.5, 0.5)


def time_grid(T, floor, count=12):
    """`count` log-spaced times in [floor, T]; just [T] when T does not exceed the floor."""
    if count < 1:
        raise ConfigurationError("time count must be >= 1")
    if T <= floor or count == 1:
        return [float(T)]
    times = np.geomspace(floor, T, count)
    times[-1] = T
    return [float(t) for t in times]


def default_grid(params, T, angles=33, times=12, policy=None):
    """33x33 angles x 12 times, never below the series floor unless a closed form applies."""
    policy = policy or EvalPolicy()
    floor = SMALL_TIME_FLOOR if _closed_form(params) else policy.t_floor
    return GridSpec(params=params, T=T, t_values=time_grid(T, floor, times),
                    theta_nodes=angles, varphi_nodes=angles)


def grid_points(grid):
    """(t, θ, φ) in grid order: times outermost, then θ, then φ, then the near-diagonal pairs."""
    thetas = [float(v) for v in np.linspace(0.0, math.pi, grid.theta_nodes)]
    varphis = [float(v) for v in np.linspace(0.0, math.pi, grid.varphi_nodes)]
    pairs = [(a, b) for a in thetas for b in varphis]
    if grid.near_diagonal:
        pairs += [(a, a + NEAR_DIAGONAL_SHIFT) for a in thetas if a + NEAR_DIAGONAL_SHIFT <= math.pi]
    return [(float(t), a, b) for t in grid.t_values for a, b in pairs]


def grid_to_dict(grid):
    return {
        "alpha": grid.params.alpha,
        "beta": grid.params.beta,
        "T": grid.T,
        "t_values": list(grid.t_values),
        "theta_nodes": grid.theta_nodes,
        "varphi_nodes": grid.varphi_nodes,
        "near_diagonal": grid.near_diagonal,
    }


def constants_from_ledger(ledger):
    """(c, C) stored in a ledger, e.g. one re-read from `constants --format json`."""
    if isinstance(ledger, dict):
        ledger = ConstantLedger.from_dict(ledger)
    if ledger.lower is None or ledger.upper is None:
        raise ConfigurationError("ledger carries no final constants (lower/upper)")
    return ledger.lower, ledger.upper


def _resolvable(series, t, gap):
    exponent = gap * gap / (4 * t)
    return exponent <= (SERIES_EXPONENT_CAP if series else UNDERFLOW_EXPONENT_CAP)


def _sandwich_point(params, envelopes, policy, t, theta, varphi):
    """(G, c·Ξ_𝔅, C·Ξ_𝔟) at one grid point, or None when binary64 cannot resolve it."""
    if not _resolvable(uses_series(params, t, policy), t, theta - varphi):
        return None
    low, up = envelopes
    g = jacobi_kernel(params, t, math.cos(theta), math.cos(varphi), policy)
    return (g, low.constant * xi_envelope(params, low.kappa, t, theta, varphi),
            up.constant * xi_envelope(params, up.kappa, t, theta, varphi))


def _manifold_point(bound, policy, t, dist):
    space = bound.space
    odd_sphere = space.family == CrossFamily.SPHERE and space.dim % 2 == 1
    series = not odd_sphere and uses_series(space.params, space.kappa ** 2 * t, policy)
    if not _resolvable(series, t, dist):
        return None
    if space.family == CrossFamily.SPHERE:
        g = sphere_kernel(space.dim, t, min(dist, math.pi), policy)
    else:
        g = cross_kernel(space, t, dist, policy)
    lower, upper = envelope_values(bound, t, dist)
    return g, lower, upper


def _ratio(value, envelope):
    if envelope > 0:
        return value / envelope
    return math.inf if value > 0 else None


def _finite(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


class VerificationEngine:
    """Batched evaluation of grid points and their reduction into reports"""

    def __init__(self, policy=None, batch_size=None, slack=DEFAULT_SLACK):
        self.policy = policy or EvalPolicy()
        self.batch_size = batch_size or threads_from_env() or DEFAULT_BATCH_SIZE
        self.slack = slack
        self.history = []
        self.logger = get_logger("verify")

    @staticmethod
    def plan_batches(items, batch_size):
        if batch_size <= 0:
            raise ValueError("batch_size must be > 0")
        return [items[i:i + batch_size] for i in range(0, len(items), batch_size)]

    async def _evaluate_point(self, index, fn, args):
        try:
            return index, await asyncio.to_thread(fn, *args), None
        except (HeatkitError, ArithmeticError) as e:
            return index, None, f"{type(e).__name__}: {e}"

    async def evaluate(self, fn, points):
        """Run fn(*point) for every point; returns (values, errors) indexed like `points`"""
        values = [None] * len(points)
        errors = {}
        batches = self.plan_batches(list(enumerate(points)), self.batch_size)
        for batch_idx, batch in enumerate(batches, start=1):
            self.logger.info(f"Starting batch {batch_idx}/{len(batches)} with {len(batch)} points")
            self.history.append({"event": "batch_start", "batch": batch_idx, "points": len(batch)})
            outcomes = await asyncio.gather(*[self._evaluate_point(i, fn, point) for i, point in batch])
            failed = 0
            for index, value, error in outcomes:
                if error is not None:
                    errors[index] = error
                    failed += 1
                else:
                    values[index] = value
            self.history.append({"event": "batch_completed", "batch": batch_idx,
                                 "evaluated": len(batch) - failed, "errors": failed})
            self.logger.info(f"Batch {batch_idx} completed: {len(batch) - failed} evaluated, {failed} errors")
        return values, errors

    def _reduce(self, report, points, values, errors):
        """Fold per-point triples into the report, strictly in grid order"""
        for index, point in enumerate(points):
            if index in errors:
                report.errors.append({"index": index, "point": list(point), "error": errors[index]})
                continue
            triple = values[index]
            if triple is None:
                report.skipped += 1
                continue
            g, lower, upper = triple
            report.points += 1
            if lower is not None:
                ratio = _ratio(g, lower)
                if ratio is not None:
                    report.min_ratio_lower = min(report.min_ratio_lower, ratio)
                    if ratio < 1 - report.slack:
                        report.violations.append({"index": index, "point": list(point),
                                                  "side": "lower", "margin": 1 - ratio})
            if upper is not None:
                ratio = _ratio(g, upper)
                if ratio is not None:
                    report.max_ratio_upper = max(report.max_ratio_upper, ratio)
                    if ratio > 1 + report.slack:
                        report.violations.append({"index": index, "point": list(point),
                                                  "side": "upper", "margin": ratio - 1})
        report.passed = report.points > 0 and not report.violations and not report.errors
        if report.skipped:
            report.notes.append(f"{report.skipped} points below binary64 resolution were skipped")
        report.history = list(self.history)
        if report.passed:
            self.logger.info(f"{report.kind} certification passed on {report.points} points")
        else:
            self.logger.error(f"{report.kind} certification failed: {len(report.violations)} violations, "
                              f"{len(report.errors)} errors, {report.points} points assessed")
        return report

    async def certify_sandwich(self, grid, constants=None, variant=Variant.AUTO):
        """c·Ξ_𝔅 ≤ G ≤ C·Ξ_𝔟 on every grid point"""
        started = time.perf_counter()
        self.history = []
        low, up = sandwich_envelopes(grid.params, grid.T, variant, constants)
        report = VerificationReport(
            kind="sandwich",
            grid=grid_to_dict(grid),
            constants={"lower": low.constant, "upper": up.constant, "ratio": up.constant / low.constant,
                       "kappa_lower": B_LARGE, "kappa_upper": B_SMALL},
            slack=self.slack,
        )
        points = grid_points(grid)
        values, errors = await self.evaluate(
            lambda t, a, b: _sandwich_point(grid.params, (low, up), self.policy, t, a, b), points)
        self._reduce(report, points, values, errors)
        report.runtime = time.perf_counter() - started
        return report

    async def certify_manifold(self, bound, t_values, nodes=33):
        """Sphere/CROSS kernel against a ManifoldBound on t_values x `nodes` distances"""
        started = time.perf_counter()
        self.history = []
        space = bound.space
        kind = "sphere" if space.family == CrossFamily.SPHERE else "cross"
        report = VerificationReport(
            kind=kind,
            grid={"family": space.family.value, "dim": space.dim, "T": bound.T, "horizon": bound.horizon,
                  "t_values": list(t_values), "nodes": nodes},
            constants={"lower": bound.lower_constant, "upper": bound.upper_constant, "ratio": bound.ratio,
                       "variant": bound.variant.value, "gaussian_lower": bound.gaussian_lower},
            slack=self.slack,
        )
        if bound.gaussian_lower:
            report.notes.append("no explicit lower constant: the lower side is the Gaussian (4πt)^{-d/2}e^{-r²/4t}")
        if bound.upper_constant is None:
            report.notes.append("lower-only bound, valid for every t")
        dists = [float(v) for v in np.linspace(0.0, space.diameter, nodes)]
        points = [(float(t), r) for t in t_values for r in dists]
        values, errors = await self.evaluate(lambda t, r: _manifold_point(bound, self.policy, t, r), points)
        self._reduce(report, points, values, errors)
        report.runtime = time.perf_counter() - started
        return report

    async def profile(self, grid, constants=None, variant=Variant.AUTO, points=None):
        """Per-point rows of kernel, envelopes and ratios"""
        self.history = []
        envelopes = sandwich_envelopes(grid.params, grid.T, variant, constants)
        points = grid_points(grid) if points is None else [tuple(p) for p in points]
        values, errors = await self.evaluate(
            lambda t, a, b: _sandwich_point(grid.params, envelopes, self.policy, t, a, b), points)
        rows = []
        for index, (t, theta, varphi) in enumerate(points):
            triple = values[index]
            if index in errors or triple is None:
                continue
            g, lower, upper = triple
            rows.append({"t": t, "theta": theta, "varphi": varphi, "kernel": g,
                         "lower_envelope": lower, "upper_envelope": upper,
                         "ratio_lower": _ratio(g, lower), "ratio_upper": _ratio(g, upper)})
        if len(rows) < len(points):
            self.logger.warning(f"profile left out {len(points) - len(rows)} unresolved or failed points")
        return rows


def _ratio_table(rows, constants):
    c, big_c = constants
    table = []
    for t in sorted({row["t"] for row in rows}):
        at_t = [row for row in rows if row["t"] == t]
        # row ratios already carry the constants; undo them to compare G/Ξ with c and C
        lows = [row["ratio_lower"] * c for row in at_t if row["ratio_lower"] is not None]
        ups = [row["ratio_upper"] * big_c for row in at_t if row["ratio_upper"] is not None]
        low, up = min(lows, default=math.nan), max(ups, default=math.nan)
        table.append({"t": t, "min_g_over_xi_lower": low, "max_g_over_xi_upper": up, "c": c, "C": big_c,
                      "within": bool(low >= c * (1 - DEFAULT_SLACK) and up <= big_c * (1 + DEFAULT_SLACK))})
    return table


def certify_sandwich(grid, constants=None, variant=Variant.AUTO, policy=None, slack=DEFAULT_SLACK,
                     batch_size=None):
    """Certify the two-sided Jacobi bound on `grid`; constants default to the pipeline's (c, C)."""
    engine = VerificationEngine(policy, batch_size, slack)
    return asyncio.run(engine.certify_sandwich(grid, constants, variant))


def profile_rows(grid, constants=None, variant=Variant.AUTO, policy=None, points=None, batch_size=None):
    engine = VerificationEngine(policy, batch_size)
    return asyncio.run(engine.profile(grid, constants, variant, points))


def ratio_profile(grid, constants=None, variant=Variant.AUTO, policy=None, batch_size=None):
    """Per-t min of G/Ξ_𝔅 and max of G/Ξ_𝔟, next to c and C."""
    if constants is None:
        constants = final_constants(grid.params, grid.T, variant)
    rows = profile_rows(grid, constants, variant, policy, batch_size=batch_size)
    return _ratio_table(rows, constants)


def manifold_times(bound, T, count, policy=None):
    policy = policy or EvalPolicy()
    space = bound.space
    k2 = space.kappa ** 2
    odd_sphere = space.family == CrossFamily.SPHERE and space.dim % 2 == 1
    floor = SMALL_TIME_FLOOR if odd_sphere or _closed_form(space.params) else policy.t_floor
    span = bound.horizon if math.isfinite(bound.horizon) else T / k2
    return time_grid(span, floor / k2, count)


def certify_space(space, T, variant=Variant.AUTO, t_values=None, times=12, nodes=33, policy=None,
                  slack=DEFAULT_SLACK, batch_size=None):
    bound = manifold_envelope(space, T, variant)
    if t_values is None:
        t_values = manifold_times(bound, T, times, policy)
    engine = VerificationEngine(policy, batch_size, slack)
    return asyncio.run(engine.certify_manifold(bound, t_values, nodes))


def certify_sphere(d, T, variant=Variant.AUTO, **kwargs):
    """Heat kernel of S^d against its explicit sandwich for t ≤ T."""
    return certify_space(CrossSpace(CrossFamily.SPHERE, d), T, variant, **kwargs)


def certify_cross(space, T, variant=Variant.AUTO, **kwargs):
    """CROSS heat kernel against its bounds; real projective spaces are checked against the Gaussian below."""
    return certify_space(space, T, variant, **kwargs)


def report_to_dict(report, timing=False):
    """JSON-ready dict; infinities become null and the wall time is left out unless asked for."""
    data = asdict(report)
    if not timing:
        data.pop("runtime", None)
    return _finite(data)


def write_json(obj, path=None):
    """Serialise with stable key order; writes to `path` when given and returns the text."""
    text = json.dumps(_finite(obj), indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    return text


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def write_csv(rows, path=None, fields=None):
    """Header row plus one line per row, floats to 17 significant digits, LF endings."""
    fields = list(fields or (rows[0].keys() if rows else PROFILE_FIELDS))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([_cell(row.get(name)) for name in fields])
    text = buf.getvalue()
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text


def jacobi_grid(alpha, beta, T, t_values=None, angles=33, times=12, near_diagonal=True, policy=None):
    """GridSpec from plain numbers; explicit t_values win over the default log-spaced times."""
    params = JacobiParams(alpha, beta)
    if t_values is None:
        grid = default_grid(params, T, angles, times, policy)
        grid.near_diagonal = near_diagonal
        return grid
    return GridSpec(params=params, T=T, t_values=list(t_values), theta_nodes=angles, varphi_nodes=angles,
                    near_diagonal=near_diagonal)
