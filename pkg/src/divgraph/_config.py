"""Numerical tolerances shared by every module.

Tolerances are relative: the length tolerance scales with the total edge
length of the graph, the value tolerance with the magnitude of the function
being inspected.  Defaults can be overridden with the environment variables
``DIVGRAPH_TOL_LEN`` / ``DIVGRAPH_TOL_VAL`` or locally with
:func:`use_tolerances`.
"""

from __future__ import annotations

import contextlib
import contextvars
import os
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    rel_len: float = 1e-12
    rel_val: float = 1e-9
    # slack for comparing closed subsets produced by different computations
    rel_set: float = 1e-6
    # breakpoints closer than cluster_factor * tau_len share one Laplacian mass
    cluster_factor: float = 1e3
    # negative masses this small (relative) are round-off when extracting path divisors
    rel_mass: float = 1e-6


def _from_env() -> Tolerances:
    tol = Tolerances()
    if "DIVGRAPH_TOL_LEN" in os.environ:
        tol = replace(tol, rel_len=float(os.environ["DIVGRAPH_TOL_LEN"]))
    if "DIVGRAPH_TOL_VAL" in os.environ:
        tol = replace(tol, rel_val=float(os.environ["DIVGRAPH_TOL_VAL"]))
    return tol


_current: contextvars.ContextVar[Tolerances | None] = contextvars.ContextVar(
    "divgraph_tolerances", default=None
)


def get_tolerances() -> Tolerances:
    tol = _current.get()
    if tol is None:
        tol = _from_env()
        _current.set(tol)
    return tol


@contextlib.contextmanager
def use_tolerances(**overrides):
    """Temporarily override tolerance fields, e.g. ``use_tolerances(rel_val=1e-8)``."""
    token = _current.set(replace(get_tolerances(), **overrides))
    try:
        yield get_tolerances()
    finally:
        _current.reset(token)


def value_tolerance(scale: float) -> float:
    return get_tolerances().rel_val * max(1.0, abs(scale))
