"""Reduced divisors in tropical segments and finitely generated hulls.

The reduced divisor of a compact tropically convex set ``T`` with respect to
``E`` is the unique minimizer of ``D -> Phi(D - E)`` over ``T``.  Along a
segment the objective first decreases strictly and then increases strictly,
so a grid scan followed by golden-section refinement finds it.  For hulls
with three or more generators the search runs over nested segments: every
member of ``tconv(D1, ..., Dn)`` lies on a segment from a member of
``tconv(D1, ..., Dn-1)`` to ``Dn``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ._config import get_tolerances
from .divisors import RDivisor
from .exceptions import CertificateFailed
from .graph import MetricGraph, subset_covers_gamma, subset_union, subsets_meet
from .potential import associated_function
from .pwl import gmin, pwl_clip, pwl_combine, pwl_integral
from .space import TSegment, check_degree, rho, s_func, segment_contains

__all__ = [
    "TConvexHull",
    "ReducedResult",
    "CertificateReport",
    "GeneratorCheck",
    "segment_argmin",
    "segment_objective",
    "reduced_on_segment",
    "hull_contains",
    "reduced_on_hull",
    "extremals",
    "reduced_certificate",
]

PARAM_TOL = 1e-10
# golden tolerance below the outermost level of the nested hull search
INNER_TOL = 1e-7
# evaluation noise of Phi along a path, from extracting the path divisors
OBJECTIVE_SLACK = 1e-8
SEGMENT_GRID = 33
HULL_GRID = 17
HULL_ROUNDS = 3
HULL_SHRINK = 4.0
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class TConvexHull:
    """Tropical convex hull of finitely many effective divisors of equal degree."""

    __slots__ = ("graph", "generators")

    def __init__(self, graph: MetricGraph, generators: Sequence[RDivisor]):
        generators = tuple(generators)
        if not generators:
            raise ValueError("a hull needs at least one generator")
        for d in generators:
            graph.check_same(d.graph)
            check_degree(d, generators[0].degree)
        self.graph = graph
        self.generators = generators

    @classmethod
    def from_segment(cls, seg: TSegment) -> "TConvexHull":
        return cls(seg.graph, [seg.d1, seg.d2])

    @property
    def degree(self) -> float:
        return self.generators[0].degree

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __repr__(self):
        return f"TConvexHull({len(self.generators)} generators, degree {self.degree:g})"


@dataclass(frozen=True)
class GeneratorCheck:
    """Reducedness criteria of a candidate evaluated against one divisor ``D`` of the set."""

    meets: bool
    gmin_identity: bool
    phi_residual: float


@dataclass(frozen=True)
class CertificateReport:
    generators: tuple[GeneratorCheck, ...]
    union_identity: bool

    @property
    def all_meet(self) -> bool:
        return all(c.meets for c in self.generators)

    @property
    def max_phi_residual(self) -> float:
        return max((c.phi_residual for c in self.generators), default=0.0)

    def to_dict(self) -> dict:
        return {
            "generators": [
                {
                    "meets": c.meets,
                    "gmin_identity": c.gmin_identity,
                    "phi_residual": c.phi_residual,
                }
                for c in self.generators
            ],
            "union_identity": self.union_identity,
        }


@dataclass(frozen=True)
class ReducedResult:
    divisor: RDivisor
    objective: float
    status: str
    certificate: CertificateReport
    evaluations: int = 0
    parameter: float | None = field(default=None)

    @property
    def certified(self) -> bool:
        return self.status == "certified"


# ---------------------------------------------------------------------------
# one-dimensional search


def _golden(func: Callable[[float], float], a: float, b: float, tol: float = PARAM_TOL):
    """Golden-section minimization of a unimodal function on ``[a, b]``."""
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = func(c), func(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = func(d)
    return (c, fc) if fc <= fd else (d, fd)


def _grid_then_golden(
    func: Callable[[float], float],
    points: int,
    rounds: int = 0,
    shrink: float = HULL_SHRINK,
    tol: float = PARAM_TOL,
) -> tuple[float, float]:
    """Scan a grid on ``[0, 1]``, optionally zoom in, then polish the best bracket."""
    lo, hi = 0.0, 1.0
    best_t, best_v = 0.0, math.inf
    ts = np.linspace(lo, hi, points)
    for r in range(rounds + 1):
        vals = [func(float(t)) for t in ts]
        k = int(np.argmin(vals))
        if vals[k] < best_v:
            best_t, best_v = float(ts[k]), vals[k]
        step = ts[1] - ts[0]
        if r == rounds:
            lo, hi = max(0.0, best_t - step), min(1.0, best_t + step)
            break
        half = (hi - lo) / shrink / 2.0
        lo, hi = max(0.0, best_t - half), min(1.0, best_t + half)
        ts = np.linspace(lo, hi, points)
    t, v = _golden(func, lo, hi, tol)
    if v <= best_v:
        return t, v
    return best_t, best_v


# ---------------------------------------------------------------------------
# segments


def segment_objective(seg: TSegment, e: RDivisor) -> Callable[[float], float]:
    """``t -> Phi(seg(t) - E)`` evaluated by potential solves at the path points."""
    g = seg.graph

    def phi(t: float) -> float:
        return s_func(g, e, seg(t))

    return phi


def _segment_closed_form(seg: TSegment, e: RDivisor) -> tuple[float, float]:
    """Exact minimizer and minimum of ``Phi(seg(t) - E)``.

    With ``f`` the normalized potential of ``d2 - d1``, ``l = max f`` and
    ``h`` the normalized potential of ``d1 - E``, the potential of
    ``seg(t) - E`` is ``min(t l, f) + h`` up to a constant and its minimum
    is ``min(t l, m)`` with ``m = min(f + h)``.  The objective decreases
    while ``t l < m`` and is non-decreasing afterwards.
    """
    g = seg.graph
    h = associated_function(g, e, seg.d1)
    if seg.is_degenerate:
        return 0.0, pwl_integral(h)
    m = pwl_combine(seg.f, h, "add").min()
    t = min(1.0, max(0.0, m / seg.length))
    level = t * seg.length
    value = pwl_integral(pwl_clip(seg.f, level, "min")) + pwl_integral(h)
    value -= g.total_length * min(level, m)
    return t, max(0.0, value)


def segment_argmin(seg: TSegment, e: RDivisor) -> float:
    """Path parameter of the ``E``-reduced divisor of the segment."""
    return _segment_closed_form(seg, e)[0]


def reduced_on_segment(
    g: MetricGraph,
    seg: TSegment,
    e: RDivisor,
    method: str = "golden",
    strict: bool = False,
) -> ReducedResult:
    """The ``E``-reduced divisor of a tropical segment.

    ``method="golden"`` scans 33 parameters, refines the best bracket by
    golden section and then tries the closed-form minimizer as a final
    candidate; ``method="exact"`` uses the closed-form minimizer alone.
    """
    g.check_same(seg.graph)
    check_degree(e, seg.degree)
    if method not in ("golden", "exact"):
        raise ValueError(f"unknown method {method!r}")
    evaluations = 0
    if seg.is_degenerate:
        t, d0 = 0.0, seg.d1
    elif segment_contains(g, seg, e):
        t, d0 = seg.parameter_of(e), e
    elif method == "exact":
        t = segment_argmin(seg, e)
        d0 = seg(t)
        evaluations = 1
    else:
        phi = segment_objective(seg, e)
        cache: dict[float, float] = {}

        def counted(x: float) -> float:
            if x not in cache:
                cache[x] = phi(x)
            return cache[x]

        t, v = _grid_then_golden(counted, SEGMENT_GRID)
        # the objective can be nearly flat on one side of the minimizer, so
        # the closed-form candidate is accepted when it is at least as good
        exact = segment_argmin(seg, e)
        if counted(exact) <= v + OBJECTIVE_SLACK * max(1.0, v):
            t = exact
        d0 = seg(t)
        evaluations = len(cache)
    report = reduced_certificate(g, TConvexHull.from_segment(seg), d0, e, union=False)
    status = "certified" if report.all_meet else "best-effort"
    result = ReducedResult(d0, s_func(g, e, d0), status, report, evaluations, t)
    if strict and not result.certified:
        raise CertificateFailed("segment certificate does not hold", result)
    return result


# ---------------------------------------------------------------------------
# hulls


def hull_contains(g: MetricGraph, hull: TConvexHull, e: RDivisor) -> bool:
    """Membership: the minimum loci of the potentials ``Di - E`` cover the graph."""
    g.check_same(hull.graph)
    check_degree(e, hull.degree)
    covered = None
    for d in hull.generators:
        locus = gmin(associated_function(g, e, d))
        covered = locus if covered is None else subset_union(covered, locus)
        if subset_covers_gamma(covered):
            return True
    return False


def _nested_search(
    g: MetricGraph, gens: Sequence[RDivisor], e: RDivisor, counter: list[int], tol: float = PARAM_TOL
):
    """Minimize ``Phi(. - E)`` over the hull of ``gens`` (at least two) by nested segment searches.

    The outermost parameter ``s`` walks the segment from ``gens[0]`` to
    ``gens[1]``; the point there replaces both and the search recurses on
    the shorter list.  Returns ``(objective, anchor, t)``: the minimizer is
    the point at ``t`` on the segment from ``anchor`` to the last generator.
    """
    if len(gens) == 2:
        counter[0] += 1
        t, v = _segment_closed_form(TSegment(g, gens[0], gens[1]), e)
        return v, gens[0], t
    seg = TSegment(g, gens[0], gens[1])
    rest = list(gens[2:])

    def value(s: float) -> float:
        return _nested_search(g, [seg(s), *rest], e, counter, INNER_TOL)[0]

    s, _ = _grid_then_golden(value, HULL_GRID, HULL_ROUNDS, HULL_SHRINK, tol)
    return _nested_search(g, [seg(s), *rest], e, counter, INNER_TOL)


def _descend(g: MetricGraph, gens: Sequence[RDivisor], e: RDivisor, d: RDivisor, counter):
    """Polish a hull member by exact reductions on segments towards each generator."""
    value = s_func(g, e, d)
    for _ in range(100):
        improved = False
        for gen in gens:
            seg = TSegment(g, d, gen)
            if seg.is_degenerate:
                continue
            counter[0] += 1
            t, v = _segment_closed_form(seg, e)
            if t > 0.0 and v < value - 1e-15 * max(1.0, value):
                d, value = seg(t), s_func(g, e, seg(t))
                improved = True
        if not improved:
            break
    return d, value


def reduced_on_hull(
    g: MetricGraph, hull: TConvexHull, e: RDivisor, strict: bool = False
) -> ReducedResult:
    """The ``E``-reduced divisor of a finitely generated hull.

    Generators are processed in input order and the last one is peeled off
    first.  The result carries a certificate; its status is ``"certified"``
    when the minimum locus identity and the meeting criterion against every
    generator hold, and ``"best-effort"`` otherwise.
    """
    g.check_same(hull.graph)
    check_degree(e, hull.degree)
    gens = hull.generators
    counter = [0]
    if len(gens) == 1 or all(rho(g, gens[0], d) <= get_tolerances().rel_val for d in gens[1:]):
        d0 = gens[0]
    elif hull_contains(g, hull, e):
        d0 = e
    elif len(gens) == 2:
        return reduced_on_segment(g, TSegment(g, gens[0], gens[1]), e, strict=strict)
    else:
        _, anchor, t = _nested_search(g, gens, e, counter)
        d0 = TSegment(g, anchor, gens[-1])(t)
        d0, _ = _descend(g, gens, e, d0, counter)
    report = reduced_certificate(g, hull, d0, e)
    status = "certified" if report.all_meet and report.union_identity else "best-effort"
    result = ReducedResult(d0, s_func(g, e, d0), status, report, counter[0])
    if strict and not result.certified:
        raise CertificateFailed("hull certificate does not hold", result)
    return result


def extremals(g: MetricGraph, hull: TConvexHull) -> TConvexHull:
    """Minimal generating subset, found by dropping generators contained in the hull of the rest."""
    gens = list(hull.generators)
    changed = True
    while changed and len(gens) > 1:
        changed = False
        for i, d in enumerate(gens):
            rest = gens[:i] + gens[i + 1 :]
            if hull_contains(g, TConvexHull(g, rest), d):
                del gens[i]
                changed = True
                break
    return TConvexHull(g, gens)


def reduced_certificate(
    g: MetricGraph, hull: TConvexHull, d0: RDivisor, e: RDivisor, union: bool = True
) -> CertificateReport:
    """Evaluate reducedness criteria of ``d0`` against every generator.

    For each generator ``D`` the report records whether the minimum loci of
    the potentials ``D - d0`` and ``d0 - E`` meet, whether their
    intersection equals the minimum locus of ``D - E``, and the residual of
    ``Phi(D - E) = Phi(D - d0) + Phi(d0 - E)``.  With ``union=True`` it also
    checks that the minimum locus of ``d0 - E`` is the union of those of
    ``Di - E``.
    """
    g.check_same(hull.graph)
    check_degree(d0, hull.degree)
    check_degree(e, hull.degree)
    slack = get_tolerances().rel_set * g.total_length
    base_f = associated_function(g, e, d0)
    base = gmin(base_f)
    base_phi = pwl_integral(base_f)
    checks = []
    loci = []
    for d in hull.generators:
        to_d = associated_function(g, d0, d)
        from_e = associated_function(g, e, d)
        near = gmin(to_d)
        target = gmin(from_e)
        loci.append(target)
        meets = subsets_meet(near.dilate(slack), base)
        identity = target.approx_equal(near & base.dilate(slack))
        residual = abs(pwl_integral(from_e) - pwl_integral(to_d) - base_phi)
        checks.append(GeneratorCheck(meets, identity, residual))
    union_ok = True
    if union:
        covered = loci[0]
        for locus in loci[1:]:
            covered = subset_union(covered, locus)
        union_ok = covered.approx_equal(base)
    return CertificateReport(tuple(checks), union_ok)
