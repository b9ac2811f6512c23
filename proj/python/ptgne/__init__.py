"""Prescribed-time distributed generalized Nash equilibrium seeking."""

from ._core import (
    TRACE_COLUMNS,
    CommGraph,
    ConfigError,
    ConvergenceFailure,
    Error,
    GainSchedule,
    Game,
    PreconditionError,
    config_keys,
    fb,
    fb_partials,
    read_trace,
    run,
)

__all__ = [
    "TRACE_COLUMNS",
    "CommGraph",
    "ConfigError",
    "ConvergenceFailure",
    "Error",
    "GainSchedule",
    "Game",
    "PreconditionError",
    "config_keys",
    "fb",
    "fb_partials",
    "read_trace",
    "run",
]
