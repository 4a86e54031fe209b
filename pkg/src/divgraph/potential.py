"""Electrical potentials on a metric graph.

Every potential here comes from one grounded Laplacian solve over the
vertices, with each edge a resistor of conductance ``1 / length``.  A mass
inside an edge is split between the two ends of the edge and its local
tent-shaped correction is added back exactly, so points may lie
arbitrarily close to each other without hurting the conditioning.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from ._config import get_tolerances
from .divisors import SignedDivisor
from .exceptions import DegreeMismatch, NonEffectiveDivisor
from .graph import MetricGraph, Point
from .pwl import PwlFunction, pwl_eval, pwl_normalize

__all__ = [
    "LaplacianSystem",
    "solve_potential",
    "j_function",
    "effective_resistance",
    "associated_function",
]


class LaplacianSystem:
    """Grounded conductance Laplacian over the vertices of ``graph``.

    The ground is vertex 0.  The factorization depends only on the graph,
    so one instance serves any number of right-hand sides; use
    :meth:`of` to share it between calls.
    """

    def __init__(self, graph: MetricGraph):
        self.graph = graph
        n = graph.n_vertices
        u = np.asarray(graph.edge_u, dtype=int)
        v = np.asarray(graph.edge_v, dtype=int)
        c = 1.0 / np.asarray(graph.lengths, dtype=float)
        L = np.zeros((n, n))
        np.add.at(L, (u, v), -c)
        np.add.at(L, (v, u), -c)
        np.add.at(L, (u, u), c)
        np.add.at(L, (v, v), c)
        self.matrix = L
        self.ground = 0
        self._factor = cho_factor(L[1:, 1:]) if n > 1 else None

    @classmethod
    def of(cls, graph: MetricGraph) -> "LaplacianSystem":
        system = graph.__dict__.get("_laplacian")
        if system is None:
            system = graph.__dict__["_laplacian"] = cls(graph)
        return system

    def solve(self, masses: Iterable[tuple[Point, float]]) -> PwlFunction:
        """Potential ``v`` with Laplacian ``sum m_p (p)`` and ``v`` zero at the ground."""
        g = self.graph
        rhs = np.zeros(g.n_vertices)
        inner: list[list[tuple[float, float]]] = [[] for _ in g.edges]
        for p, m in masses:
            vi, ei, x = g.resolve(p)
            if vi >= 0:
                rhs[vi] += m
                continue
            length = float(g.lengths[ei])
            rhs[g.edge_u[ei]] += m * (length - x) / length
            rhs[g.edge_v[ei]] += m * x / length
            inner[ei].append((x, m))
        values = np.zeros(g.n_vertices)
        if self._factor is not None:
            values[1:] = cho_solve(self._factor, rhs[1:])
        xs, ys = [], []
        for ei, here in enumerate(inner):
            length = float(g.lengths[ei])
            a, b = values[g.edge_u[ei]], values[g.edge_v[ei]]
            if not here:
                xs.append(np.array([0.0, length]))
                ys.append(np.array([a, b]))
                continue
            at = np.array([x for x, _ in here])
            m = np.array([m for _, m in here])
            x = np.unique(np.concatenate(([0.0, length], at)))
            # Green's function of the edge with both ends held at zero
            green = np.minimum.outer(x, at) * (length - np.maximum.outer(x, at)) / length
            y = a + (b - a) * x / length + green @ m
            x, y = _drop_collinear(x, y)
            xs.append(x)
            ys.append(y)
        return PwlFunction(g, xs, ys)


def _drop_collinear(x: np.ndarray, y: np.ndarray):
    if len(x) <= 2:
        return x, y
    slopes = np.diff(y) / np.diff(x)
    scale = max(1.0, float(np.abs(slopes).max()))
    bend = np.abs(np.diff(slopes)) > 1e-13 * scale
    keep = np.concatenate(([True], bend, [True]))
    return x[keep], y[keep]


def solve_potential(g: MetricGraph, masses: Iterable[tuple[Point, float]]) -> PwlFunction:
    """Potential with Laplacian ``sum m_p (p)`` (total mass must be zero), grounded at vertex 0."""
    return LaplacianSystem.of(g).solve(masses)


def j_function(g: MetricGraph, q: Point, p: Point) -> PwlFunction:
    """Potential of a unit current entering at ``p`` and leaving at the grounded ``q``."""
    p, q = g.canonical(p), g.canonical(q)
    f = solve_potential(g, [(p, 1.0), (q, -1.0)])
    return f - pwl_eval(f, q)


def effective_resistance(g: MetricGraph, p: Point, q: Point) -> float:
    return pwl_eval(j_function(g, q, p), p)


def _check_pair(g: MetricGraph, d1: SignedDivisor, d2: SignedDivisor):
    g.check_same(d1.graph)
    g.check_same(d2.graph)
    for d in (d1, d2):
        if not d.is_effective():
            raise NonEffectiveDivisor("divisor has a non-positive coefficient")
    deg1, deg2 = d1.degree, d2.degree
    if abs(deg1 - deg2) > get_tolerances().rel_val * max(1.0, abs(deg1), abs(deg2)):
        raise DegreeMismatch(f"degrees differ: {deg1!r} vs {deg2!r}")


def associated_function(g: MetricGraph, d1: SignedDivisor, d2: SignedDivisor) -> PwlFunction:
    """The normalized potential whose Laplacian is ``d2 - d1`` (minimum exactly 0)."""
    _check_pair(g, d1, d2)
    # coincident points cancel exactly before the solve
    return pwl_normalize(solve_potential(g, (d2 - d1).items))
