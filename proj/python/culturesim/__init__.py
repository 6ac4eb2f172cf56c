"""Lattice simulations of creation, imitation and social regulation."""

import json

from ._core import (
    ConfigError,
    Network,
    ParameterError,
    ParseError,
    default_templates,
    discount_rate,
    fitness_single,
    fitness_template,
    format_subaction,
    npv,
    parse_subaction,
    piv,
    time_to_threshold,
    validate_templates,
)
from . import _core

__all__ = [
    "ConfigError",
    "Network",
    "ParameterError",
    "ParseError",
    "default_templates",
    "discount_rate",
    "effective_config",
    "fitness_single",
    "fitness_template",
    "format_subaction",
    "npv",
    "parse_subaction",
    "piv",
    "preset",
    "run",
    "run_experiment",
    "time_to_threshold",
    "validate_templates",
]


def run(run_index=0, **world):
    """One run. Keyword arguments are world settings, e.g. creator_fraction=0.4."""
    return _core.run_world(json.dumps({"world": world}), run_index)


def preset(name):
    """Effective config of a preset ("exp1", "exp2", "exp3", "custom") as a dict."""
    return json.loads(_core.preset_config(name))


def effective_config(config):
    return json.loads(_core.effective_config(json.dumps(config)))


def run_experiment(config, workers=0, write=True):
    """Runs a full experiment config (dict). With write=False nothing touches disk."""
    return _core.execute(json.dumps(config), workers, write)
