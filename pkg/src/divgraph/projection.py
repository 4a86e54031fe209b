"""Canonical projections onto compact tropical convex sets and the homotopies built from them."""

from __future__ import annotations

from typing import Sequence, Union

from sklearn.base import BaseEstimator, TransformerMixin

from .divisors import RDivisor, SignedDivisor
from .exceptions import KappaTooSmall, NotInHull, ParameterOutOfRange, ZeroDegreeInput
from .graph import MetricGraph
from .reduced import TConvexHull, hull_contains, reduced_on_hull, reduced_on_segment
from .space import TSegment, check_degree, rho
from .validation import check_divisor, check_divisors, check_fitted

__all__ = [
    "canonical_project",
    "retraction_sample",
    "contraction_sample",
    "TropicalProjection",
]

Target = Union[TSegment, TConvexHull]

# slack when comparing a caller-supplied kappa with a computed distance
_KAPPA_SLACK = 1e-12


def _target_degree(target: Target) -> float:
    return target.degree


def canonical_project(
    g: MetricGraph,
    target: Target,
    e: SignedDivisor,
    segment_method: str = "golden",
    strict: bool = False,
) -> RDivisor:
    """Rescale ``e`` to the target degree and return its reduced divisor in the target."""
    g.check_same(target.graph)
    if not e.items or e.degree <= 0:
        raise ZeroDegreeInput("cannot project a divisor of non-positive degree")
    e = RDivisor(g, e.items).scaled(_target_degree(target))
    if isinstance(target, TSegment):
        return reduced_on_segment(g, target, e, method=segment_method, strict=strict).divisor
    return reduced_on_hull(g, target, e, strict=strict).divisor


def _check_t(t: float) -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ParameterOutOfRange(f"t={t!r} is outside [0, 1]")
    return t


def _walk_towards(g: MetricGraph, start: RDivisor, stop: RDivisor, distance: float) -> RDivisor:
    """Point of the segment from ``start`` to ``stop`` at ``distance`` from ``start``."""
    seg = TSegment(g, start, stop)
    if seg.is_degenerate:
        return start
    return seg(min(1.0, max(0.0, distance / seg.length)))


def retraction_sample(
    g: MetricGraph, target: Target, d: RDivisor, t: float, kappa: float
) -> RDivisor:
    """Value at time ``t`` of the retraction homotopy onto ``target``.

    Divisors farther than ``kappa (1 - t)`` from their projection move
    along the segment towards it until that distance remains; closer ones
    stay put.
    """
    t = _check_t(t)
    check_degree(d, _target_degree(target))
    proj = canonical_project(g, target, d)
    r = rho(g, d, proj)
    if kappa < r - _KAPPA_SLACK * max(1.0, r):
        raise KappaTooSmall(f"kappa={kappa!r} is below the distance {r!r} to the target")
    radius = kappa * (1.0 - t)
    if r < radius or r == 0.0:
        return d
    return _walk_towards(g, d, proj, r - radius)


def contraction_sample(
    g: MetricGraph, hull: TConvexHull, base: RDivisor, d: RDivisor, t: float, kappa: float
) -> RDivisor:
    """Value at time ``t`` of the contraction of ``hull`` onto ``base``."""
    t = _check_t(t)
    for x, name in ((base, "base"), (d, "d")):
        if not hull_contains(g, hull, x):
            raise NotInHull(f"{name} is not in the hull")
    r = rho(g, base, d)
    if kappa < r - _KAPPA_SLACK * max(1.0, r):
        raise KappaTooSmall(f"kappa={kappa!r} is below rho(base, d)={r!r}")
    radius = kappa * (1.0 - t)
    if r < radius:
        return d
    return _walk_towards(g, base, d, radius)


class TropicalProjection(TransformerMixin, BaseEstimator):
    """Projection onto the tropical convex hull of a set of divisors.

    ``fit`` takes the generators and ``transform`` maps divisors of any
    positive degree to their canonical projections.

    Parameters
    ----------
    graph : MetricGraph, optional
        Ambient graph.  Taken from the first generator when omitted.
    segment_method : {"golden", "exact"}
        Minimizer used when the hull is a single segment.
    strict : bool
        Raise :class:`CertificateFailed` instead of returning best-effort results.
    """

    def __init__(self, graph: MetricGraph | None = None, segment_method: str = "golden", strict: bool = False):
        self.graph = graph
        self.segment_method = segment_method
        self.strict = strict

    def fit(self, X: Sequence[RDivisor], y=None):
        if self.segment_method not in ("golden", "exact"):
            raise ValueError(f"unknown segment_method {self.segment_method!r}")
        graph = self.graph
        if graph is None:
            if not len(X):
                raise ValueError("no generators given")
            graph = X[0].graph
        gens = check_divisors(X, graph)
        self.graph_ = graph
        self.hull_ = TConvexHull(graph, gens)
        self.degree_ = self.hull_.degree
        self.n_generators_ = len(gens)
        return self

    def _target(self) -> Target:
        gens = self.hull_.generators
        if len(gens) == 2:
            return TSegment(self.graph_, gens[0], gens[1])
        return self.hull_

    def transform(self, X: Sequence[SignedDivisor]) -> list[RDivisor]:
        check_fitted(self, "hull_")
        target = self._target()
        return [
            canonical_project(
                self.graph_,
                target,
                check_divisor(x, self.graph_, effective=False),
                segment_method=self.segment_method,
                strict=self.strict,
            )
            for x in X
        ]

    def distance(self, X: Sequence[RDivisor]) -> list[float]:
        """Distance of each divisor (rescaled to the hull degree) to its projection."""
        check_fitted(self, "hull_")
        out = []
        for x, p in zip(X, self.transform(X)):
            x = RDivisor(self.graph_, x.items).scaled(self.degree_)
            out.append(rho(self.graph_, x, p))
        return out

    def contains(self, X: Sequence[RDivisor]) -> list[bool]:
        check_fitted(self, "hull_")
        return [hull_contains(self.graph_, self.hull_, x) for x in check_divisors(X, self.graph_)]
