"""Python access to the multi-time-scale admission simulator."""

import json

from ._core import (
    ConfigError,
    __version__,
    channel_gain,
    complexity,
    default_config,
    emit,
    los_probability,
    normalize_config,
    selftest,
    solve_compute,
)
from ._core import run as _run


def config(**overrides):
    """Default scenario with keyword overrides, as a dict."""
    return json.loads(normalize_config("", overrides))


def run(cfg=None, **overrides):
    """Run one simulation. `cfg` may be a dict, a JSON string or None."""
    text = json.dumps(cfg) if isinstance(cfg, dict) else (cfg or "")
    return _run(text, overrides)


__all__ = [
    "ConfigError",
    "__version__",
    "channel_gain",
    "complexity",
    "config",
    "default_config",
    "emit",
    "los_probability",
    "normalize_config",
    "run",
    "selftest",
    "solve_compute",
]
