"""Exact spectral and mixing-time analysis of random-update and
alternating-scan Gibbs samplers on bipartite Markov random fields."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import Error, NumericalError, run_experiment as _run_experiment


def run(config):
    """Run an experiment from a dict (same keys as manifest.json)."""
    return [str(p) for p in _run_experiment(_json.dumps(config))]


def kernels(model, lazy=True, cap=4096):
    """Enumerate the state space and build P_RU and P_AS in one call."""
    space = enumerate_state_space(model, cap)  # noqa: F405
    return space, random_update_kernel(model, space, lazy), scan_kernels(model, space)["alternating"]  # noqa: F405
