"""The space of effective divisors of fixed degree with the metric ``rho``.

Tropical paths, segments, the Phi-function and segment intersection live
here.  Throughout, ``associated_function(g, a, b)`` is the normalized
potential with Laplacian ``b - a``; its maximum is ``rho(a, b)`` and its
integral is ``Phi(b - a)``.
"""

from __future__ import annotations

import numpy as np

from ._config import get_tolerances
from .divisors import RDivisor, SignedDivisor
from .exceptions import DegreeMismatch, ParameterOutOfRange
from .graph import MetricGraph, subset_covers_gamma, subset_union
from .potential import _check_pair, associated_function
from .pwl import PwlFunction, gmin, pwl_clip, pwl_divisor, pwl_integral

__all__ = [
    "TSegment",
    "tconv",
    "rho",
    "s_func",
    "t_path_eval",
    "segment_contains",
    "segment_intersection",
    "same_divisor",
    "check_degree",
]

# parameter tolerance of the membership bisection
PARAM_TOL = 1e-10


def check_degree(a: SignedDivisor, degree: float):
    tol = get_tolerances().rel_val * max(1.0, abs(degree))
    if abs(a.degree - degree) > tol:
        raise DegreeMismatch(f"expected degree {degree!r}, got {a.degree!r}")


def rho(g: MetricGraph, d1: RDivisor, d2: RDivisor) -> float:
    """Distance between two effective divisors of equal degree."""
    return associated_function(g, d1, d2).max()


def s_func(g: MetricGraph, d1: RDivisor, d2: RDivisor) -> float:
    """``Phi(d2 - d1)``: the integral of the normalized potential with Laplacian ``d2 - d1``."""
    return pwl_integral(associated_function(g, d1, d2))


def same_divisor(g: MetricGraph, a: RDivisor, b: RDivisor, scale: float = 1.0) -> bool:
    """Equality up to the value tolerance, measured with ``rho``."""
    return rho(g, a, b) < get_tolerances().rel_val * max(1.0, scale)


def _clip_path(g: MetricGraph, d1: RDivisor, f: PwlFunction, level: float) -> RDivisor:
    moved = pwl_divisor(pwl_clip(f, level, "min"))
    # Laplacian masses are resolved only up to the clustering scale
    tol = get_tolerances().cluster_factor * g.tol_len
    return RDivisor.from_signed((moved + d1).clustered(tol), degree=d1.degree)


class TSegment:
    """The tropical segment from ``d1`` to ``d2``.

    The normalized potential ``f`` (Laplacian ``d2 - d1``) and the length
    ``rho(d1, d2) = max f`` are computed once at construction.  Calling the
    segment with ``t`` in ``[0, 1]`` evaluates the tropical path.
    """

    __slots__ = ("graph", "d1", "d2", "f", "length")

    def __init__(self, graph: MetricGraph, d1: RDivisor, d2: RDivisor):
        _check_pair(graph, d1, d2)
        self.graph = graph
        self.d1 = d1
        self.d2 = d2
        self.f = associated_function(graph, d1, d2)
        self.length = self.f.max()

    @property
    def degree(self) -> float:
        return self.d1.degree

    @property
    def is_degenerate(self) -> bool:
        return self.length <= get_tolerances().rel_val

    def __call__(self, t: float) -> RDivisor:
        t = float(t)
        if not 0.0 <= t <= 1.0:
            raise ParameterOutOfRange(f"t={t!r} is outside [0, 1]")
        if t == 1.0:
            return self.d2
        if t == 0.0 or self.is_degenerate:
            return self.d1
        return _clip_path(self.graph, self.d1, self.f, t * self.length)

    def parameter_of(self, d: RDivisor) -> float:
        """Path parameter of a divisor lying on the segment."""
        if self.is_degenerate:
            return 0.0
        return min(1.0, rho(self.graph, self.d1, d) / self.length)

    def reversed(self) -> "TSegment":
        return TSegment(self.graph, self.d2, self.d1)

    def __repr__(self):
        return f"TSegment({self.d1!r} -> {self.d2!r}, length={self.length:.6g})"


def tconv(g: MetricGraph, d1: RDivisor, d2: RDivisor) -> TSegment:
    return TSegment(g, d1, d2)


def t_path_eval(g: MetricGraph, d1: RDivisor, d2: RDivisor, t: float) -> RDivisor:
    """Point at parameter ``t`` of the tropical path from ``d1`` to ``d2``."""
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ParameterOutOfRange(f"t={t!r} is outside [0, 1]")
    return TSegment(g, d1, d2)(t)


def segment_contains(g: MetricGraph, seg: TSegment, d: RDivisor) -> bool:
    """Membership via: the minimum loci of the potentials ``d1 - d`` and ``d2 - d`` cover the graph."""
    g.check_same(seg.graph)
    check_degree(d, seg.degree)
    a = gmin(associated_function(g, d, seg.d1))
    if subset_covers_gamma(a):
        return True
    b = gmin(associated_function(g, d, seg.d2))
    return subset_covers_gamma(subset_union(a, b))


def _bisect(member, inside: float, outside: float) -> float:
    """Boundary of a membership interval between a member and a non-member parameter."""
    while abs(inside - outside) > PARAM_TOL:
        mid = 0.5 * (inside + outside)
        if member(mid):
            inside = mid
        else:
            outside = mid
    return inside


def segment_intersection(g: MetricGraph, s1: TSegment, s2: TSegment) -> TSegment | None:
    """The intersection of two tropical segments, or ``None`` when they are disjoint.

    The parameters ``t`` with ``s1(t)`` on ``s2`` form a closed interval.  A
    member parameter is located by probing, then both interval ends are found
    by bisection.
    """
    g.check_same(s1.graph)
    g.check_same(s2.graph)
    check_degree(s2.d1, s1.degree)
    cache: dict[float, bool] = {}

    def member(t: float) -> bool:
        if t not in cache:
            cache[t] = segment_contains(g, s2, s1(t))
        return cache[t]

    if s1.is_degenerate:
        return TSegment(g, s1.d1, s1.d1) if member(0.0) else None

    probes = []
    # endpoints of s2 lying on s1, keyed by their parameter on s1
    anchors: dict[float, RDivisor] = {}
    for d in (s2.d1, s2.d2):
        if segment_contains(g, s1, d):
            t = s1.parameter_of(d)
            anchors[t] = d
            probes.append(t)
    probes += [0.0, 1.0, 0.5]
    # the closest points of s1 to the endpoints of s2 are natural candidates
    from .reduced import segment_argmin

    for d in (s2.d1, s2.d2):
        probes.append(segment_argmin(s1, d))
    probes += list(np.linspace(0.0, 1.0, 33))

    found = next((t for t in probes if member(t)), None)
    if found is None:
        return None
    if member(0.0):
        t_lo = 0.0
    else:
        t_lo = _bisect(member, found, 0.0)
    if member(1.0):
        t_hi = 1.0
    else:
        t_hi = _bisect(member, found, 1.0)
    # membership is decided up to the set tolerance: shorter pieces are
    # points, and ends that close to a known divisor are snapped to it
    slack = get_tolerances().rel_set * g.total_length / s1.length
    if t_hi - t_lo <= slack:
        d = s1(0.5 * (t_lo + t_hi))
        return TSegment(g, d, d)

    def end(t: float) -> RDivisor:
        for ta, d in anchors.items():
            if abs(ta - t) <= slack:
                return d
        return s1(t)

    return TSegment(g, end(t_lo), end(t_hi))
