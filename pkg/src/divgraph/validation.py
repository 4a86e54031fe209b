"""Input validation helpers shared by the estimator and the command line."""

from __future__ import annotations

from typing import Sequence

from sklearn.utils.validation import check_is_fitted

from .divisors import RDivisor, SignedDivisor
from .exceptions import NonEffectiveDivisor
from .graph import MetricGraph

__all__ = ["check_divisor", "check_divisors", "check_fitted"]


def check_divisor(d, graph: MetricGraph, effective: bool = True) -> SignedDivisor:
    """Ensure ``d`` is a divisor on ``graph``; with ``effective`` also that it is an :class:`RDivisor`."""
    if not isinstance(d, SignedDivisor):
        raise TypeError(f"expected a divisor, got {type(d).__name__}")
    graph.check_same(d.graph)
    if effective and not isinstance(d, RDivisor):
        if not d.is_effective():
            raise NonEffectiveDivisor("divisor has a non-positive coefficient")
        d = RDivisor(graph, d.items)
    return d


def check_divisors(X: Sequence, graph: MetricGraph) -> list[RDivisor]:
    """Validate a non-empty sequence of effective divisors on ``graph`` and return them as a list."""
    X = list(X)
    if not X:
        raise ValueError("expected at least one divisor")
    return [check_divisor(d, graph) for d in X]


def check_fitted(estimator, attribute: str):
    check_is_fitted(estimator, attribute)
