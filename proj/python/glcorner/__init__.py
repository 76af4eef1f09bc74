"""Surface superconductivity in domains with corners.

Thin wrapper over the C++ core. Commands take the same parameters as the
``glcorner`` command-line tool and return run records as dictionaries.
"""

import json

from ._glcorner import (
    GeometryError,
    GlcornerError,
    NumericalError,
    UsageError,
    command_names,
    command_summary,
    corners,
    gauss_bonnet_defect,
    surface_constants,
    theta0,
    version,
)
from . import _glcorner

__all__ = [
    "GeometryError",
    "GlcornerError",
    "NumericalError",
    "UsageError",
    "command_names",
    "command_summary",
    "corners",
    "defaults",
    "gauss_bonnet_defect",
    "merge_params",
    "run",
    "surface_constants",
    "sweep",
    "theta0",
    "version",
]


def defaults(command):
    """Parameter table of a command: {name: {"default": value, "help": text}}."""
    return json.loads(_glcorner.command_defaults_json(command))


def merge_params(command, config=None, **overrides):
    """Defaults, then ``config``, then keyword overrides; unknown names raise UsageError."""
    return json.loads(_glcorner.merge_params_json(command, json.dumps(config or {}), json.dumps(overrides)))


def run(command, params=None, *, cache_dir=".glcorner-cache", use_cache=True, **overrides):
    """Run one command and return its run record."""
    merged = merge_params(command, params, **overrides)
    return json.loads(_glcorner.run_json(command, json.dumps(merged), cache_dir, use_cache))


def sweep(spec, *, cache_dir=".glcorner-cache", use_cache=True):
    """Run a sweep described by a dict (same layout as a sweep file)."""
    return json.loads(_glcorner.sweep_json(json.dumps(spec), cache_dir, use_cache))
