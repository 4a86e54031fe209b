"""Fixtures, random instance generators and brute-force oracles shared by the tests."""

from __future__ import annotations

import numpy as np

from divgraph import (
    Edge,
    MetricGraph,
    Point,
    RDivisor,
    TSegment,
    associated_function,
    build_graph,
)

PATH_SPEC = {"vertices": ["v0", "v1"], "edges": [{"id": "e", "u": "v0", "v": "v1", "length": 1.0}]}
CIRCLE_SPEC = {
    "vertices": ["v0", "v1"],
    "edges": [
        {"id": "e0", "u": "v0", "v": "v1", "length": 0.5},
        {"id": "e1", "u": "v0", "v": "v1", "length": 0.5},
    ],
}


def path_graph() -> MetricGraph:
    return build_graph(PATH_SPEC)


def circle_graph() -> MetricGraph:
    return build_graph(CIRCLE_SPEC)


def at(g: MetricGraph, where: str, mass: float = 1.0) -> RDivisor:
    """Point mass written as ``"v0"`` or ``"e0:0.25"``."""
    return RDivisor(g, [(point(g, where), mass)])


def point(g: MetricGraph, where: str) -> Point:
    if ":" in where:
        edge, offset = where.split(":")
        return g.locate(edge, float(offset))
    return g.vertex(where)


# ---------------------------------------------------------------- random data


def random_graph(rng: np.random.Generator, max_vertices: int = 6, max_edges: int = 9) -> MetricGraph:
    """Connected graph with lengths in [0.3, 1.5]; may contain parallel edges and loops."""
    n = int(rng.integers(1, max_vertices + 1))
    vertices = [f"v{i}" for i in range(n)]
    pairs = [(f"v{i}", f"v{int(rng.integers(0, i))}") for i in range(1, n)]
    target = int(rng.integers(max(len(pairs), 1), max_edges + 1))
    while len(pairs) < target:
        a, b = rng.integers(0, n, size=2)
        if a == b and rng.random() > 0.3:
            continue
        pairs.append((f"v{a}", f"v{b}"))
    edges = [
        Edge(f"e{k}", u, v, float(rng.uniform(0.3, 1.5))) for k, (u, v) in enumerate(pairs)
    ]
    return MetricGraph(vertices, edges)


def random_point(rng: np.random.Generator, g: MetricGraph) -> Point:
    if rng.random() < 0.2:
        return g.vertex(g.user_vertices[int(rng.integers(len(g.user_vertices)))])
    e = g.user_edges[int(rng.integers(len(g.user_edges)))]
    return g.locate(e.id, float(rng.uniform(0.0, e.length)))


def random_divisor(
    rng: np.random.Generator, g: MetricGraph, degree: float = 1.0, max_points: int = 3
) -> RDivisor:
    k = int(rng.integers(1, max_points + 1))
    masses = rng.dirichlet(np.ones(k)) * degree
    masses = np.maximum(masses, 1e-3 * degree)
    masses *= degree / masses.sum()
    return RDivisor(g, [(random_point(rng, g), float(m)) for m in masses])


# -------------------------------------------------------------------- oracles


def _common_grid(f, h):
    xs, fs, hs = [], [], []
    for xf, yf, xh, yh in zip(f.xs, f.ys, h.xs, h.ys):
        x = np.union1d(xf, xh)
        xs.append(x)
        fs.append(np.interp(x, xf, yf))
        hs.append(np.interp(x, xh, yh))
    return xs, fs, hs


def phi_along_segment(seg: TSegment, e: RDivisor, ts) -> np.ndarray:
    """``Phi(seg(t) - E)`` for many ``t`` at once.

    The potential of ``seg(t) - E`` is ``min(t l, f) + h`` up to a constant,
    with ``f`` the segment potential and ``h`` the normalized potential of
    ``d1 - E``.  Integrals of the clipped pieces are taken segment by
    segment and the minimum is searched over all nodes and level crossings.
    """
    g = seg.graph
    h = associated_function(g, e, seg.d1)
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    c = ts[:, None] * seg.length
    xs, fs, hs = _common_grid(seg.f, h)
    w = np.concatenate([np.diff(x) for x in xs])
    f0 = np.concatenate([y[:-1] for y in fs])
    f1 = np.concatenate([y[1:] for y in fs])
    h0 = np.concatenate([y[:-1] for y in hs])
    h1 = np.concatenate([y[1:] for y in hs])
    lo, hi = np.minimum(f0, f1), np.maximum(f0, f1)
    span = np.where(hi > lo, hi - lo, 1.0)
    below = np.clip((c - lo) / span, 0.0, 1.0)
    partial = w * (below * (lo + np.minimum(c, hi)) / 2.0 + (1.0 - below) * c)
    clipped = np.where(c >= hi, w * (f0 + f1) / 2.0, np.where(c <= lo, w * c, partial))
    integral = clipped.sum(axis=1) + float(sum(np.dot(np.diff(x), (y[:-1] + y[1:]) / 2) for x, y in zip(xs, hs)))
    # minimum of min(c, f) + h over nodes and over points where f crosses c
    node_vals = np.concatenate([np.minimum(c, f0) + h0, np.minimum(c, f1) + h1], axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(f1 != f0, (c - f0) / (f1 - f0), -1.0)
    inside = (s > 0) & (s < 1)
    cross_vals = np.where(inside, c + h0 + s * (h1 - h0), np.inf)
    low = np.minimum(node_vals.min(axis=1), cross_vals.min(axis=1))
    return integral - g.total_length * low


def segment_grid_oracle(seg: TSegment, e: RDivisor, step: float = 1e-3):
    """Brute-force minimizer of ``Phi(seg(t) - E)`` on a uniform parameter grid."""
    ts = np.linspace(0.0, 1.0, int(round(1.0 / step)) + 1)
    vals = phi_along_segment(seg, e, ts)
    k = int(np.argmin(vals))
    return float(ts[k]), float(vals[k])


def triangle_grid_oracle(g: MetricGraph, gens, e: RDivisor, n: int = 64):
    """Minimum of ``Phi(. - E)`` over a 3-generator hull on a ``(n+1) x (n+1)`` grid.

    The hull of ``A, B, C`` is the union of the segments from ``A`` to the
    points of the segment from ``B`` to ``C``.
    """
    a, b, c = gens
    base = TSegment(g, b, c)
    grid = np.linspace(0.0, 1.0, n + 1)
    best = (np.inf, None, None)
    for s in grid:
        seg = TSegment(g, a, base(float(s)))
        vals = phi_along_segment(seg, e, grid)
        k = int(np.argmin(vals))
        if vals[k] < best[0]:
            best = (float(vals[k]), float(s), float(grid[k]))
    return best


def triangle_sample(rng: np.random.Generator, g: MetricGraph, gens) -> RDivisor:
    """Random member of the hull of three generators via the union-of-segments description."""
    a, b, c = gens
    inner = TSegment(g, b, c)(float(rng.uniform()))
    return TSegment(g, a, inner)(float(rng.uniform()))
