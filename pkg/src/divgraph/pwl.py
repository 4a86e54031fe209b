"""Continuous piecewise-linear functions on a metric graph.

A :class:`PwlFunction` stores, for each internal edge, strictly increasing
breakpoint offsets (including ``0`` and the edge length) and the function
values there; the function is affine in between.
"""

from __future__ import annotations

from typing import Callable, Mapping, NamedTuple

import numpy as np

from ._config import get_tolerances, value_tolerance
from .divisors import SignedDivisor
from .exceptions import InvalidRange
from .graph import ClosedSubset, MetricGraph, Point

__all__ = [
    "PwlFunction",
    "Extrema",
    "pwl_eval",
    "pwl_combine",
    "pwl_clip",
    "pwl_extrema",
    "pwl_normalize",
    "pwl_level_set",
    "pwl_integral",
    "pwl_divisor",
]


def _dedupe(x: np.ndarray, y: np.ndarray, L: float, tol: float):
    """Merge breakpoints closer than ``tol``; values of a merged group are averaged."""
    if len(x) > 1 and np.all(np.diff(x) > tol):
        return x, y
    group = np.concatenate(([0], np.cumsum(np.diff(x) > tol)))
    counts = np.bincount(group)
    gx = np.bincount(group, weights=x) / counts
    gy = np.bincount(group, weights=y) / counts
    gx[0] = 0.0
    if len(gx) == 1:
        gx = np.array([0.0, L])
        gy = np.array([gy[0], gy[0]])
    gx[-1] = L
    return gx, gy


class PwlFunction:
    """Continuous piecewise-linear function on ``graph``."""

    __slots__ = ("graph", "xs", "ys")

    def __init__(self, graph: MetricGraph, xs, ys, clean: bool = True):
        self.graph = graph
        tol = graph.tol_len
        out_x, out_y = [], []
        for ei, (x, y) in enumerate(zip(xs, ys)):
            x = np.asarray(x, dtype=float)
            y = np.asarray(y, dtype=float)
            if clean:
                L = float(graph.lengths[ei])
                order = np.argsort(x, kind="stable")
                x, y = _dedupe(x[order], y[order], L, tol)
            x.flags.writeable = False
            y.flags.writeable = False
            out_x.append(x)
            out_y.append(y)
        self.xs: tuple[np.ndarray, ...] = tuple(out_x)
        self.ys: tuple[np.ndarray, ...] = tuple(out_y)

    # ------------------------------------------------------------ constructors
    @classmethod
    def constant(cls, graph: MetricGraph, c: float = 0.0) -> "PwlFunction":
        return cls(
            graph,
            [np.array([0.0, L]) for L in graph.lengths],
            [np.array([c, c]) for _ in graph.lengths],
        )

    @classmethod
    def from_vertex_values(cls, graph: MetricGraph, values) -> "PwlFunction":
        values = np.asarray(values, dtype=float)
        return cls(
            graph,
            [np.array([0.0, L]) for L in graph.lengths],
            [np.array([values[u], values[v]]) for u, v in zip(graph.edge_u, graph.edge_v)],
        )

    @classmethod
    def from_callable(
        cls, graph: MetricGraph, fn: Callable[[str, np.ndarray], np.ndarray], samples: int = 2
    ) -> "PwlFunction":
        """Sample ``fn(internal edge id, offsets)`` at ``samples`` evenly spaced offsets per edge."""
        xs, ys = [], []
        for e in graph.edges:
            x = np.linspace(0.0, e.length, samples)
            xs.append(x)
            ys.append(np.asarray(fn(e.id, x), dtype=float))
        return cls(graph, xs, ys)

    @classmethod
    def from_breakpoints(
        cls, graph: MetricGraph, spec: Mapping[str, list[tuple[float, float]]]
    ) -> "PwlFunction":
        """Build from ``{internal edge id: [(offset, value), ...]}``; every edge must be given."""
        xs, ys = [], []
        for e in graph.edges:
            pts = sorted(spec[e.id])
            xs.append([p[0] for p in pts])
            ys.append([p[1] for p in pts])
        return cls(graph, xs, ys)

    # ------------------------------------------------------------------ basics
    def vertex_values(self) -> np.ndarray:
        out = np.zeros(self.graph.n_vertices)
        for vi, inc in enumerate(self.graph.incident):
            if inc:
                ei, end = inc[0]
                out[vi] = self.ys[ei][0] if end == 0 else self.ys[ei][-1]
        return out

    def continuity_defect(self) -> float:
        """Largest disagreement of vertex values across incident edges."""
        worst = 0.0
        for inc in self.graph.incident:
            vals = [self.ys[ei][0] if end == 0 else self.ys[ei][-1] for ei, end in inc]
            if vals:
                worst = max(worst, max(vals) - min(vals))
        return worst

    @property
    def n_breakpoints(self) -> int:
        return sum(len(x) for x in self.xs)

    def min(self) -> float:
        return float(min(y.min() for y in self.ys))

    def max(self) -> float:
        return float(max(y.max() for y in self.ys))

    def max_abs(self) -> float:
        return float(max(np.abs(y).max() for y in self.ys))

    def __call__(self, p: Point) -> float:
        return pwl_eval(self, p)

    def __add__(self, other):
        if isinstance(other, PwlFunction):
            return pwl_combine(self, other, "add")
        return PwlFunction(self.graph, self.xs, [y + other for y in self.ys], clean=False)

    def __sub__(self, other):
        if isinstance(other, PwlFunction):
            return pwl_combine(self, other, "sub")
        return PwlFunction(self.graph, self.xs, [y - other for y in self.ys], clean=False)

    def __neg__(self):
        return PwlFunction(self.graph, self.xs, [-y for y in self.ys], clean=False)

    def __mul__(self, c: float):
        return PwlFunction(self.graph, self.xs, [c * y for y in self.ys], clean=False)

    __rmul__ = __mul__

    def sup_distance(self, other: "PwlFunction") -> float:
        return (self - other).max_abs()

    def samples(self, per_edge: int = 16) -> list[tuple[str, float, float]]:
        """Rows ``(user edge id, user offset, value)`` at all breakpoints plus uniform samples."""
        g = self.graph
        rows = []
        for ei, (x, y) in enumerate(zip(self.xs, self.ys)):
            L = float(g.lengths[ei])
            grid = np.union1d(x, np.linspace(0.0, L, per_edge + 1))
            vals = np.interp(grid, x, y)
            eid = g.edges[ei].id
            shift = 0.0
            if eid in g._halves:
                eid, shift = g._halves[eid]
            rows.extend((eid, float(xx) + shift, float(vv)) for xx, vv in zip(grid, vals))
        rank = g._user_edge_rank
        rows.sort(key=lambda r: (rank[r[0]], r[1]))
        out = []
        for r in rows:
            if out and out[-1][0] == r[0] and abs(out[-1][1] - r[1]) <= g.tol_len:
                continue
            out.append(r)
        return out

    def __repr__(self):
        return f"PwlFunction({self.n_breakpoints} breakpoints, min={self.min():.6g}, max={self.max():.6g})"


class Extrema(NamedTuple):
    min: float
    max: float
    gmin: ClosedSubset
    gmax: ClosedSubset


def pwl_eval(f: PwlFunction, p: Point) -> float:
    vi, ei, x = f.graph.resolve(p)
    if vi >= 0:
        ei, end = f.graph.incident[vi][0]
        return float(f.ys[ei][0] if end == 0 else f.ys[ei][-1])
    return float(np.interp(x, f.xs[ei], f.ys[ei]))


def pwl_combine(f: PwlFunction, g: PwlFunction, mode: str = "add") -> PwlFunction:
    """Pointwise ``f + g`` (``mode="add"``) or ``f - g`` (``mode="sub"``)."""
    f.graph.check_same(g.graph)
    if mode not in ("add", "sub"):
        raise ValueError(f"unknown mode {mode!r}")
    sign = 1.0 if mode == "add" else -1.0
    xs, ys = [], []
    for xf, yf, xg, yg in zip(f.xs, f.ys, g.xs, g.ys):
        x = np.union1d(xf, xg)
        xs.append(x)
        ys.append(np.interp(x, xf, yf) + sign * np.interp(x, xg, yg))
    return PwlFunction(f.graph, xs, ys)


def pwl_clip(f: PwlFunction, c: float, mode: str = "min") -> PwlFunction:
    """Pointwise ``min(c, f)`` or ``max(c, f)`` with breakpoints inserted at level crossings."""
    if mode not in ("min", "max"):
        raise ValueError(f"unknown mode {mode!r}")
    op = np.minimum if mode == "min" else np.maximum
    xs, ys = [], []
    for x, y in zip(f.xs, f.ys):
        d = y - c
        cross = d[:-1] * d[1:] < 0
        if cross.any():
            i = np.nonzero(cross)[0]
            xc = x[i] + (c - y[i]) * (x[i + 1] - x[i]) / (y[i + 1] - y[i])
            # crossings are kept however close to a breakpoint they are:
            # merging would average values and bend the neighbouring slopes
            inside = (xc > x[i]) & (xc < x[i + 1])
            x_new = np.concatenate((x, xc[inside]))
            y_new = np.concatenate((y, np.full(int(inside.sum()), c)))
            order = np.argsort(x_new, kind="stable")
            x, y = x_new[order], y_new[order]
        xs.append(x)
        ys.append(op(y, c))
    return PwlFunction(f.graph, xs, ys, clean=False)


def pwl_level_set(f: PwlFunction, lo: float, hi: float) -> ClosedSubset:
    """The closed preimage ``f^{-1}([lo, hi])``."""
    if not lo <= hi:
        raise InvalidRange(f"empty range [{lo}, {hi}]")
    per_edge = []
    for x, y in zip(f.xs, f.ys):
        x0, x1, y0, y1 = x[:-1], x[1:], y[:-1], y[1:]
        dy = y1 - y0
        flat = dy == 0
        with np.errstate(divide="ignore", invalid="ignore"):
            sa = np.where(flat, 0.0, (lo - y0) / dy)
            sb = np.where(flat, 1.0, (hi - y0) / dy)
        s0 = np.clip(np.minimum(sa, sb), 0.0, 1.0)
        s1 = np.clip(np.maximum(sa, sb), 0.0, 1.0)
        ok = np.where(flat, (lo <= y0) & (y0 <= hi), np.minimum(sa, sb) <= 1.0)
        ok &= np.maximum(sa, sb) >= 0.0
        # keep exact breakpoint membership so touching segments join at vertices
        a = x0 + s0 * (x1 - x0)
        b = x0 + s1 * (x1 - x0)
        ivs = [(float(p), float(q)) for p, q, k in zip(a, b, ok) if k]
        ivs += [(float(xx), float(xx)) for xx, yy in zip(x, y) if lo <= yy <= hi]
        per_edge.append(ivs)
    return ClosedSubset(f.graph, per_edge)


def pwl_extrema(f: PwlFunction) -> Extrema:
    """Minimum, maximum and their loci, widened by the value tolerance."""
    lo, hi = f.min(), f.max()
    tol = value_tolerance(f.max_abs())
    return Extrema(lo, hi, pwl_level_set(f, lo, lo + tol), pwl_level_set(f, hi - tol, hi))


def gmin(f: PwlFunction) -> ClosedSubset:
    lo = f.min()
    return pwl_level_set(f, lo, lo + value_tolerance(f.max_abs()))


def gmax(f: PwlFunction) -> ClosedSubset:
    hi = f.max()
    return pwl_level_set(f, hi - value_tolerance(f.max_abs()), hi)


def pwl_normalize(f: PwlFunction) -> PwlFunction:
    """``f - min f``."""
    return f - f.min()


def pwl_integral(f: PwlFunction) -> float:
    return float(sum(np.dot(np.diff(x), (y[:-1] + y[1:]) * 0.5) for x, y in zip(f.xs, f.ys)))


def pwl_divisor(f: PwlFunction) -> SignedDivisor:
    """The Laplacian of ``f`` as a signed divisor.

    The coefficient at ``p`` is minus the sum of the outgoing slopes of ``f``
    at ``p``.  Breakpoints closer together than the cluster tolerance are
    treated as one point so that slopes over tiny segments do not produce
    spurious masses; such a cluster touching an edge end is attributed to
    the vertex.
    """
    g = f.graph
    tols = get_tolerances()
    ctol = tols.cluster_factor * g.tol_len
    outgoing = np.zeros(g.n_vertices)
    pairs = []
    for ei, (x, y) in enumerate(zip(f.xs, f.ys)):
        L = float(g.lengths[ei])
        gaps = np.diff(x)
        slopes = np.diff(y) / gaps
        long = np.nonzero(gaps > ctol)[0]
        u, v = g.edge_u[ei], g.edge_v[ei]
        if len(long) == 0:
            s = (y[-1] - y[0]) / L
            outgoing[u] += s
            outgoing[v] -= s
            continue
        outgoing[u] += slopes[long[0]]
        outgoing[v] -= slopes[long[-1]]
        eid = g.edges[ei].id
        for left, right in zip(long[:-1], long[1:]):
            # breakpoints left+1 .. right form one cluster between two long segments
            sigma = slopes[left] - slopes[right]
            where = 0.5 * (x[left + 1] + x[right])
            pairs.append((g.locate(eid, where), sigma))
    for vi in range(g.n_vertices):
        if g.incident[vi]:
            pairs.append((Point(vertex=g.vertices[vi]), -outgoing[vi]))
    return SignedDivisor(g, pairs, drop_below=value_tolerance(f.max_abs()))
