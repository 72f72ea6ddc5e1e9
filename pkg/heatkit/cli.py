import argparse
import asyncio
import json
import math
import sys

from .bounds import manifold_envelope
from .config import parse_number, parse_number_list, resolve_run_config
from .errors import HeatkitError
from .kernels import auto_method, cross_kernel, jacobi_kernel, sphere_kernel
from .logger import get_logger, setup_logging
from .models import CrossFamily, CrossSpace, EvalPolicy, JacobiParams, KernelMethod, Variant
from .pipeline import build_ledger
from .suites import SUITES, run_property_suite
from .verify import (
    VerificationEngine, constants_from_ledger, jacobi_grid, manifold_times, report_to_dict, write_csv, write_json,
)

DEFAULTS = {
    "eval": {"kind": "jacobi", "method": "auto"},
    "constants": {"variant": "auto"},
    "verify": {"variant": "auto", "angles": "33", "time_count": "12", "slack": "1e-6"},
    "profile": {"variant": "auto", "angles": "33", "time_count": "12"},
    "suites": {},
}


class _Options:
    """Typed access to merged flag/file values; a missing key is a usage error"""

    def __init__(self, parser, options):
        self.parser = parser
        self.values = options

    def has(self, key):
        return self.values.get(key) is not None

    def raw(self, key):
        if not self.has(key):
            self.parser.error(f"the following arguments are required: --{key.replace('_', '-')}")
        return self.values[key]

    def num(self, key):
        return parse_number(self.raw(key))

    def int(self, key):
        value = parse_number(self.raw(key))
        if not float(value).is_integer():
            raise ValueError(f"--{key.replace('_', '-')} must be an integer (got {self.values[key]})")
        return int(value)

    def nums(self, key):
        return parse_number_list(self.raw(key))

    def flag(self, key):
        value = self.values.get(key)
        if isinstance(value, str):
            return value.strip().lower() in ("1", "true", "yes", "on")
        return bool(value)


def _policy(opts):
    policy = EvalPolicy()
    if opts.has("policy_tol"):
        policy.tol = opts.num("policy_tol")
    return policy


def _space(opts):
    return CrossSpace(CrossFamily(opts.raw("family")), opts.int("dim"))


def _params(opts):
    return JacobiParams(opts.num("alpha"), opts.num("beta"))


def _constants(opts):
    """(c, C) from --ledger, from --lower/--upper, or None for the pipeline's own"""
    if opts.has("ledger"):
        with open(opts.raw("ledger")) as fh:
            return constants_from_ledger(json.load(fh))
    if opts.has("lower") or opts.has("upper"):
        return opts.num("lower"), opts.num("upper")
    return None


def _grid(opts):
    times = opts.nums("times") if opts.has("times") else None
    return jacobi_grid(opts.num("alpha"), opts.num("beta"), opts.num("T"), t_values=times,
                       angles=opts.int("angles"), times=opts.int("time_count"),
                       near_diagonal=not opts.flag("no_near_diagonal"), policy=_policy(opts))


def _emit(text, path=None):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_eval(opts):
    kind = opts.raw("kind")
    policy = _policy(opts)
    t = opts.num("t")
    if kind == "sphere":
        d = opts.int("dim")
        value = sphere_kernel(d, t, opts.num("phi"), policy)
        if d % 2:
            method = "odd-sphere"
        else:
            method = auto_method(JacobiParams(d / 2 - 1, d / 2 - 1), t, 1.0, policy).value
        out = {"kind": kind, "dim": d, "t": t, "phi": opts.num("phi"), "value": value, "method": method}
    elif kind == "cross":
        space = _space(opts)
        dist = opts.num("dist")
        value = cross_kernel(space, t, dist, policy)
        out = {"kind": kind, "family": space.family.value, "dim": space.dim, "t": t, "dist": dist,
               "value": value, "method": auto_method(space.params, space.kappa ** 2 * t, 1.0, policy).value}
    elif kind == "jacobi":
        params = _params(opts)
        x = math.cos(opts.num("theta")) if opts.has("theta") else opts.num("x")
        y = math.cos(opts.num("varphi")) if opts.has("varphi") else opts.num("y")
        method = KernelMethod(opts.raw("method"))
        value = jacobi_kernel(params, t, x, y, policy, method)
        if method == KernelMethod.AUTO:
            method = auto_method(params, t, y, policy)
        out = {"kind": kind, "alpha": params.alpha, "beta": params.beta, "t": t, "x": x, "y": y,
               "value": value, "method": method.value}
    else:
        raise ValueError(f"unknown kernel kind {kind!r}")
    return out


def _human_ledger(ledger):
    lines = [f"alpha={ledger.params.alpha} beta={ledger.params.beta} T={ledger.T} variant={ledger.variant.value}"]
    if ledger.theorem_case:
        lines.append(f"case ({ledger.theorem_case})")
    lines.append(f"c = {ledger.lower:.10g}")
    lines.append(f"C = {ledger.upper:.10g}")
    for row in ledger.rows:
        mark = "ok" if row["holds"] else "FAILS"
        lines.append(f"  {row['quantity']:<5} at {row['horizon']} (T={row['T']:.6g}): "
                     f"computed {row['computed']:.6g}, printed {row['printed']:.6g} [{mark}]")
    for entry in ledger.entries.values():
        lines.append(f"  [{entry.table}] {entry.name} = {entry.value:.12g}  ({entry.source})")
    for message in ledger.warnings:
        lines.append(f"warning: {message}")
    for alt in ledger.alternatives:
        lines.append(f"alternative beta={alt.params.beta}: c = {alt.lower:.10g}, C = {alt.upper:.10g}")
    return "\n".join(lines) + "\n"


def cmd_constants(opts, output_format):
    params = _params(opts)
    ledger = build_ledger(params, opts.num("T"), Variant(opts.raw("variant")))
    if output_format == "json":
        return write_json(ledger.to_dict())
    if output_format == "csv":
        rows = [{"table": e.table, "name": e.name, "value": e.value, "source": e.source}
                for e in ledger.entries.values()]
        return write_csv(rows, fields=("table", "name", "value", "source"))
    return _human_ledger(ledger)


def _human_report(report):
    data = report_to_dict(report)
    status = "PASSED" if report.passed else "FAILED"
    lines = [f"{report.kind}: {status} on {report.points} points ({report.skipped} skipped)",
             f"min G/lower = {data['min_ratio_lower']}", f"max G/upper = {data['max_ratio_upper']}"]
    lines += [f"note: {note}" for note in report.notes]
    lines += [f"violation at {v['point']}: {v['side']} margin {v['margin']:.3g}" for v in report.violations[:20]]
    lines += [f"error at {e['point']}: {e['error']}" for e in report.errors[:20]]
    return "\n".join(lines) + "\n"


def _human_suite(report):
    lines = [f"suite {report.name}: {report.passed} passed, {report.failed} failed, "
             f"{report.experimental} experimental"]
    for check in report.checks:
        flag = "experimental" if check["experimental"] else ("FAIL" if check["failed"] else "ok")
        lines.append(f"  {check['name']}: {check['count']} checks, worst margin {check['worst_margin']:.3g} [{flag}]")
    return "\n".join(lines) + "\n"


def _suite_dict(report):
    from dataclasses import asdict
    return asdict(report)


def cmd_verify(opts, output_format, threads):
    """Run one certification; returns (text, passed)"""
    target = opts.raw("target")
    if target == "suite":
        report = run_property_suite(opts.raw("name"))
        text = write_json(_suite_dict(report)) if output_format == "json" else _human_suite(report)
        return text, report.ok

    engine = VerificationEngine(_policy(opts), threads, opts.num("slack"))
    variant = Variant(opts.raw("variant"))

    async def run():
        if target == "sandwich":
            return await engine.certify_sandwich(_grid(opts), _constants(opts), variant)
        if target == "sphere":
            space = CrossSpace(CrossFamily.SPHERE, opts.int("dim"))
        elif target == "cross":
            space = _space(opts)
        else:
            raise ValueError(f"unknown verify target {target!r}")
        T = opts.num("T")
        bound = manifold_envelope(space, T, variant)
        times = opts.nums("times") if opts.has("times") else manifold_times(bound, T, opts.int("time_count"),
                                                                           engine.policy)
        nodes = opts.int("nodes") if opts.has("nodes") else opts.int("angles")
        return await engine.certify_manifold(bound, times, nodes)

    report = asyncio.run(run())
    text = write_json(report_to_dict(report)) if output_format == "json" else _human_report(report)
    return text, report.passed


def cmd_profile(opts, threads):
    grid = _grid(opts)
    engine = VerificationEngine(_policy(opts), threads)
    rows = asyncio.run(engine.profile(grid, _constants(opts), Variant(opts.raw("variant"))))
    return write_csv(rows)


def cmd_suites(opts, output_format):
    names = [n.strip() for n in opts.raw("names").split(",")] if opts.has("names") else list(SUITES)
    reports = [run_property_suite(name) for name in names]
    if output_format == "json":
        text = write_json({r.name: _suite_dict(r) for r in reports})
    else:
        text = "".join(_human_suite(r) for r in reports)
    return text, all(r.ok for r in reports)


def _grid_flags(p):
    p.add_argument("--alpha")
    p.add_argument("--beta")
    p.add_argument("--T")
    p.add_argument("--angles")
    p.add_argument("--times", help="comma-separated time values")
    p.add_argument("--time-count", help="number of log-spaced times when --times is absent")
    p.add_argument("--no-near-diagonal", action="store_true", default=None)
    p.add_argument("--variant", choices=[v.value for v in Variant])
    p.add_argument("--ledger", help="ledger JSON written by `constants --format json`")
    p.add_argument("--lower")
    p.add_argument("--upper")
    p.add_argument("--policy-tol")


def build_parser():
    parser = argparse.ArgumentParser(description="Jacobi heat kernel evaluation and bound certification")
    parser.add_argument("--log-level", default="INFO")
    parser.add_argument("--config", help="flat key=value file; flags override it")
    sub = parser.add_subparsers(dest="cmd", required=True)

    ev = sub.add_parser("eval")
    ev.add_argument("--kind", choices=["jacobi", "sphere", "cross"])
    for name in ("alpha", "beta", "t", "x", "y", "theta", "varphi", "phi", "dist", "dim", "policy-tol"):
        ev.add_argument(f"--{name}")
    ev.add_argument("--family", choices=[f.value for f in CrossFamily])
    ev.add_argument("--method", choices=[m.value for m in KernelMethod])
    ev.add_argument("--format", choices=["json", "human"])

    const = sub.add_parser("constants")
    const.add_argument("--alpha")
    const.add_argument("--beta")
    const.add_argument("--T")
    const.add_argument("--variant", choices=[v.value for v in Variant if v != Variant.GENERAL])
    const.add_argument("--format", choices=["json", "csv", "human"])
    const.add_argument("--output")

    ver = sub.add_parser("verify")
    ver.add_argument("target", choices=["sandwich", "suite", "sphere", "cross"])
    _grid_flags(ver)
    ver.add_argument("--name", choices=list(SUITES))
    ver.add_argument("--dim")
    ver.add_argument("--family", choices=[f.value for f in CrossFamily])
    ver.add_argument("--nodes", help="distance nodes for sphere/cross grids (default: --angles)")
    ver.add_argument("--slack")
    ver.add_argument("--format", choices=["json", "human"])
    ver.add_argument("--output")

    prof = sub.add_parser("profile")
    _grid_flags(prof)
    prof.add_argument("--output")

    suites = sub.add_parser("suites")
    suites.add_argument("--names", help="comma-separated suite names (default: all)")
    suites.add_argument("--format", choices=["json", "human"])
    suites.add_argument("--output")
    return parser


def main():
    parser = build_parser()
    args = parser.parse_args()
    setup_logging(args.log_level)
    logger = get_logger("cli")

    flags = {k: v for k, v in vars(args).items() if k not in ("cmd", "config", "log_level")}
    try:
        config = resolve_run_config(args.cmd, flags, DEFAULTS[args.cmd], args.config)
    except (HeatkitError, ValueError) as e:
        print(f"Error: {e}")
        sys.exit(1)
    opts = _Options(parser, config.options)
    output = config.options.get("output")
    passed = True

    try:
        if args.cmd == "eval":
            out = cmd_eval(opts)
            if config.output_format == "human":
                text = f"{out['value']:.17g} ({out['method']})\n"
            else:
                text = write_json(out)
        elif args.cmd == "constants":
            text = cmd_constants(opts, config.output_format)
        elif args.cmd == "verify":
            text, passed = cmd_verify(opts, config.output_format, config.threads)
        elif args.cmd == "profile":
            text = cmd_profile(opts, config.threads)
        else:
            text, passed = cmd_suites(opts, config.output_format)
        _emit(text, output)
    except (HeatkitError, ValueError, OSError) as e:
        print(f"Error: {e}")
        sys.exit(1)

    if not passed:
        logger.error(f"{args.cmd} failed")
        sys.exit(1)


if __name__ == "__main__":
    main()
