"""Python access to the cantorpack analyses.

Configs may be passed as dicts, JSON strings or paths; reports come back as dicts.
"""

import json
import os
from pathlib import Path

from . import _core
from ._core import CantorpackError, ConfigError, PreconditionError, ValidationError

__all__ = [
    "CantorpackError",
    "ConfigError",
    "PreconditionError",
    "ValidationError",
    "run",
    "check_config",
    "condition_ratios",
    "theoretical_bounds",
    "theoretical_bounds_exact",
    "schema_dir",
]

COMMANDS = ("faithful", "dim", "tstar", "billingsley", "proptest")


def _config_text(config):
    if config is None:
        return "{}"
    if isinstance(config, dict):
        return json.dumps(config)
    if isinstance(config, os.PathLike) or (isinstance(config, str) and not config.lstrip().startswith("{")):
        return Path(config).read_text()
    return config


def run(command, config=None, *, seed=None, depth=None, timestamp=""):
    """Run one subcommand; returns (report dict, exit code)."""
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command}")
    text, code = _core.run(command, _config_text(config), seed, depth, timestamp)
    return json.loads(text), code


def check_config(config):
    _core.check_config(_config_text(config))


def condition_ratios(base, K, tolerance=0.05):
    return json.loads(_core.condition_ratios(json.dumps(base), K, tolerance))


def theoretical_bounds(C):
    """(C/(C+2), C/(2C+2)) as floats."""
    return _core.theoretical_bounds(C)


def theoretical_bounds_exact(C):
    """Same bounds as exact "p/q" strings; C is a rational string."""
    return _core.theoretical_bounds_exact(str(C))


def schema_dir():
    here = Path(__file__).resolve().parent
    for cand in (here / "schemas", here.parents[1] / "schemas"):
        if cand.is_dir():
            return cand
    raise FileNotFoundError("schemas directory not found")
