"""Config files, exact-rational numbers and the HEATKIT_THREADS cap."""
import os
from fractions import Fraction

from .errors import ConfigurationError
from .logger import get_logger
from .models import RunConfig

THREADS_ENV = "HEATKIT_THREADS"
OUTPUT_FORMATS = ("json", "csv", "human")

logger = get_logger("config")


def parse_number(text):
    """Float from "0.8", "16/11", "-1/2" or "4/2.25"; Fraction keeps rationals exact until the conversion."""
    if isinstance(text, (int, float)):
        return float(text)
    num, sep, den = str(text).strip().partition("/")
    try:
        return float(Fraction(num.strip()) / Fraction(den.strip()) if sep else Fraction(num))
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigurationError(f"not a number: {text!r}") from e


def parse_number_list(text):
    """Comma-separated numbers, e.g. "0.05,0.1,1/4"."""
    if isinstance(text, (list, tuple)):
        return [parse_number(v) for v in text]
    items = [part for part in str(text).split(",") if part.strip()]
    if not items:
        raise ConfigurationError(f"empty number list: {text!r}")
    return [parse_number(v) for v in items]


def load_config_file(path):
    """Flat key=value file; '#' starts a comment, keys use the flag spelling without dashes."""
    values = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as e:
        raise ConfigurationError(f"cannot read config file {path}: {e}") from e
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigurationError(f"{path}:{lineno}: empty key")
        values[key.lstrip("-").replace("-", "_")] = value
    logger.debug(f"loaded {len(values)} settings from {path}")
    return values


def threads_from_env(environ=None):
    """Positive batch cap from HEATKIT_THREADS, or None when unset."""
    environ = os.environ if environ is None else environ
    raw = environ.get(THREADS_ENV)
    if raw is None or not raw.strip():
        return None
    try:
        threads = int(raw)
    except ValueError as e:
        raise ConfigurationError(f"{THREADS_ENV} must be a positive integer (got {raw!r})") from e
    if threads <= 0:
        raise ConfigurationError(f"{THREADS_ENV} must be a positive integer (got {raw!r})")
    return threads


def resolve_run_config(command, flags, defaults=None, config_path=None, environ=None):
    """Merge defaults, config file and flags, in increasing priority.

    `flags` holds the parsed command-line values; None means "not given" so
    that the file value survives.
    """
    options = dict(defaults or {})
    if config_path:
        options.update(load_config_file(config_path))
    options.update({k: v for k, v in flags.items() if v is not None})
    output_format = str(options.pop("format", "json"))
    if output_format not in OUTPUT_FORMATS:
        raise ConfigurationError(f"format must be one of {', '.join(OUTPUT_FORMATS)} (got {output_format!r})")
    return RunConfig(command=command, options=options, output_format=output_format,
                     threads=threads_from_env(environ))
