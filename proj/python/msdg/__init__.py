"""Multi-symplectic DG solver for 1D Hamiltonian PDEs.

Configs are plain dicts with the JSON schema documented in README.md, or the
name of a built-in preset.
"""

import json

from . import _core
from ._core import BlowUpError, ConfigError, SingularMatrixError, compute_order, preset_names

__all__ = [
    "BlowUpError",
    "ConfigError",
    "Scheme",
    "SingularMatrixError",
    "compute_order",
    "load_config",
    "preset",
    "preset_names",
    "run_convergence",
    "run_simulation",
    "run_verification",
]


def preset(name):
    return json.loads(_core.preset_json(name))


def load_config(config):
    """Validated config dict (defaults filled in) from a dict or a preset name."""
    if isinstance(config, str):
        return preset(config)
    return json.loads(_core.normalize_config(json.dumps(config)))


def _text(config):
    return json.dumps(load_config(config))


def run_convergence(config):
    return _core.run_convergence(_text(config))


def run_simulation(config, out_dir=""):
    return _core.run_simulation(_text(config), str(out_dir))


def run_verification(models=(), draws=20, tol=1e-10):
    return _core.run_verification(list(models), draws, tol)


class Scheme(_core.Scheme):
    def __init__(self, config, N):
        super().__init__(_text(config), N)
