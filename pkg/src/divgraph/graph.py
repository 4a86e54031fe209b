"""Compact metric graphs, points on them, and closed subsets of the graph."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np
from scipy.sparse import csgraph

from ._config import get_tolerances
from .exceptions import (
    DisconnectedGraph,
    DuplicateEdgeId,
    GraphMismatch,
    InvalidGraphSpec,
    NonPositiveEdgeLength,
    PointNotOnGraph,
)

__all__ = [
    "Point",
    "Edge",
    "MetricGraph",
    "ClosedSubset",
    "build_graph",
    "dist",
    "subset_intersect",
    "subset_union",
    "subset_covers_gamma",
    "subsets_meet",
]


@dataclass(frozen=True)
class Point:
    """A location on a metric graph: a vertex, or an offset along an edge.

    Points obtained from :meth:`MetricGraph.locate` are canonical: offsets at
    an edge end are replaced by the vertex, so every vertex has exactly one
    encoding.
    """

    vertex: str | None = None
    edge: str | None = None
    offset: float = 0.0

    @classmethod
    def at_vertex(cls, vertex: str) -> "Point":
        return cls(vertex=vertex)

    @classmethod
    def on_edge(cls, edge: str, offset: float) -> "Point":
        return cls(edge=edge, offset=float(offset))

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def __repr__(self):
        if self.is_vertex:
            return f"Point({self.vertex!r})"
        return f"Point({self.edge!r}, {self.offset!r})"


@dataclass(frozen=True)
class Edge:
    id: str
    u: str
    v: str
    length: float


class MetricGraph:
    """A connected graph whose edges carry positive finite lengths.

    Self-loops are split at construction by an auto-generated midpoint vertex
    (``<edge>#mid``) into the two halves ``<edge>#0`` and ``<edge>#1``.
    :meth:`locate` and :meth:`external` translate between user coordinates on
    the loop and the internal halves.
    """

    def __init__(self, vertices: Iterable[str], edges: Iterable[Edge]):
        vertices = [str(v) for v in vertices]
        edges = list(edges)
        if len(set(vertices)) != len(vertices):
            raise InvalidGraphSpec("duplicate vertex id")
        if not vertices:
            raise InvalidGraphSpec("graph has no vertices")
        known = set(vertices)
        seen: set[str] = set()
        for e in edges:
            if e.id in seen:
                raise DuplicateEdgeId(f"duplicate edge id {e.id!r}")
            seen.add(e.id)
            if e.u not in known or e.v not in known:
                raise InvalidGraphSpec(f"edge {e.id!r} references an unknown vertex")
            if not (np.isfinite(e.length) and e.length > 0):
                raise NonPositiveEdgeLength(
                    f"edge {e.id!r} has non-positive or infinite length {e.length!r}"
                )
        self.user_vertices = tuple(vertices)
        self.user_edges = tuple(edges)

        internal_vertices = list(vertices)
        internal_edges = []
        # user edge id -> (first half id, second half id, user length)
        self._loops: dict[str, tuple[str, str, float]] = {}
        # internal half id -> (user edge id, offset shift)
        self._halves: dict[str, tuple[str, float]] = {}
        self._mids: dict[str, tuple[str, float]] = {}
        for e in edges:
            if e.u != e.v:
                internal_edges.append(e)
                continue
            mid = f"{e.id}#mid"
            while mid in known:
                mid += "_"
            known.add(mid)
            internal_vertices.append(mid)
            half = e.length / 2.0
            a, b = f"{e.id}#0", f"{e.id}#1"
            internal_edges.append(Edge(a, e.u, mid, half))
            internal_edges.append(Edge(b, mid, e.u, half))
            self._loops[e.id] = (a, b, e.length)
            self._mids[mid] = (e.id, half)
            self._halves[a] = (e.id, 0.0)
            self._halves[b] = (e.id, half)
        self.vertices = tuple(internal_vertices)
        self.edges = tuple(internal_edges)
        self.vindex = {v: i for i, v in enumerate(self.vertices)}
        self.eindex = {e.id: i for i, e in enumerate(self.edges)}
        self.edge_u = np.array([self.vindex[e.u] for e in self.edges], dtype=int)
        self.edge_v = np.array([self.vindex[e.v] for e in self.edges], dtype=int)
        self.lengths = np.array([e.length for e in self.edges], dtype=float)
        self.total_length = float(self.lengths.sum())
        # incident[v] = [(edge index, end)], end 0 at offset 0, end 1 at offset length
        self.incident: list[list[tuple[int, int]]] = [[] for _ in self.vertices]
        for i, e in enumerate(self.edges):
            self.incident[self.vindex[e.u]].append((i, 0))
            self.incident[self.vindex[e.v]].append((i, 1))
        if len(self.vertices) > 1:
            n_comp, _ = csgraph.connected_components(self._adjacency(), directed=False)
            if n_comp != 1:
                raise DisconnectedGraph(f"graph has {n_comp} connected components")
        self._user_edge_rank = {e.id: i for i, e in enumerate(self.user_edges)}

    # ------------------------------------------------------------------ basics
    def __repr__(self):
        return (
            f"MetricGraph({len(self.user_vertices)} vertices, "
            f"{len(self.user_edges)} edges, total length {self.total_length:g})"
        )

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, MetricGraph):
            return NotImplemented
        return (
            self.user_vertices == other.user_vertices
            and self.user_edges == other.user_edges
        )

    def __hash__(self):
        return hash((self.user_vertices, self.user_edges))

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def tol_len(self) -> float:
        return get_tolerances().rel_len * self.total_length

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.user_vertices),
            "edges": [
                {"id": e.id, "u": e.u, "v": e.v, "length": e.length}
                for e in self.user_edges
            ],
        }

    def _adjacency(self) -> np.ndarray:
        n = self.n_vertices
        adj = np.full((n, n), np.inf)
        for u, v, length in zip(self.edge_u, self.edge_v, self.lengths):
            if length < adj[u, v]:
                adj[u, v] = adj[v, u] = length
        np.fill_diagonal(adj, 0.0)
        return adj

    @cached_property
    def vertex_distances(self) -> np.ndarray:
        return csgraph.shortest_path(self._adjacency(), directed=False)

    # ------------------------------------------------------------------ points
    def locate(self, edge: str, offset: float) -> Point:
        """Canonical point at ``offset`` along user edge ``edge``."""
        offset = float(offset)
        if edge in self._loops:
            a, b, length = self._loops[edge]
            if offset < -self.tol_len or offset > length + self.tol_len:
                raise PointNotOnGraph(f"offset {offset} outside edge {edge!r}")
            if offset <= length / 2.0:
                return self.locate(a, offset)
            return self.locate(b, offset - length / 2.0)
        if edge not in self.eindex:
            raise PointNotOnGraph(f"unknown edge {edge!r}")
        e = self.edges[self.eindex[edge]]
        tol = self.tol_len
        if offset < -tol or offset > e.length + tol:
            raise PointNotOnGraph(f"offset {offset} outside edge {edge!r}")
        if offset <= tol:
            return Point(vertex=e.u)
        if offset >= e.length - tol:
            return Point(vertex=e.v)
        return Point(edge=edge, offset=offset)

    def vertex(self, v: str) -> Point:
        if v not in self.vindex:
            raise PointNotOnGraph(f"unknown vertex {v!r}")
        return Point(vertex=v)

    def canonical(self, p: Point) -> Point:
        if p.is_vertex:
            return self.vertex(p.vertex)
        if p.edge is None:
            raise PointNotOnGraph("point has neither a vertex nor an edge")
        return self.locate(p.edge, p.offset)

    def resolve(self, p: Point) -> tuple[int, int, float]:
        """Internal coordinates ``(vertex index, edge index, offset)``.

        Exactly one of the indices is ``-1``.
        """
        p = self.canonical(p)
        if p.is_vertex:
            return self.vindex[p.vertex], -1, 0.0
        return -1, self.eindex[p.edge], p.offset

    def external(self, p: Point) -> tuple[str, str, float]:
        """User-facing encoding: ``("vertex", id, 0.0)`` or ``("edge", id, offset)``."""
        p = self.canonical(p)
        if p.is_vertex:
            if p.vertex in self._mids:
                eid, half = self._mids[p.vertex]
                return "edge", eid, half
            return "vertex", p.vertex, 0.0
        if p.edge in self._halves:
            eid, shift = self._halves[p.edge]
            return "edge", eid, p.offset + shift
        return "edge", p.edge, p.offset

    def sort_key(self, p: Point):
        kind, name, offset = self.external(p)
        if kind == "vertex":
            return (0, self.user_vertices.index(name), 0.0)
        return (1, self._user_edge_rank[name], offset)

    def ends(self, p: Point) -> list[tuple[int, float]]:
        """Vertices reachable from ``p`` without crossing another vertex, with distances."""
        vi, ei, x = self.resolve(p)
        if vi >= 0:
            return [(vi, 0.0)]
        return [
            (int(self.edge_u[ei]), x),
            (int(self.edge_v[ei]), float(self.lengths[ei]) - x),
        ]

    def check_same(self, other: "MetricGraph"):
        if other is not self and other != self:
            raise GraphMismatch("objects live on different graphs")


def build_graph(spec: Mapping) -> MetricGraph:
    """Build a validated graph from the JSON-style description.

    ``spec`` looks like ``{"vertices": ["v0", "v1"], "edges": [{"id": "e0",
    "u": "v0", "v": "v1", "length": 0.5}]}``.
    """
    try:
        vertices = [str(v) for v in spec["vertices"]]
        edges = [
            Edge(str(e["id"]), str(e["u"]), str(e["v"]), float(e["length"]))
            for e in spec["edges"]
        ]
    except (KeyError, TypeError) as exc:
        raise InvalidGraphSpec(f"malformed graph description: {exc!r}") from exc
    return MetricGraph(vertices, edges)


def dist(g: MetricGraph, p: Point, q: Point) -> float:
    """Shortest-path distance between two points of ``g``."""
    D = g.vertex_distances
    best = np.inf
    for a, da in g.ends(p):
        for b, db in g.ends(q):
            best = min(best, da + D[a, b] + db)
    _, ep, xp = g.resolve(p)
    _, eq, xq = g.resolve(q)
    if ep >= 0 and ep == eq:
        best = min(best, abs(xp - xq))
    return float(best)


# ---------------------------------------------------------------------------
# closed subsets


def _merge(intervals, gap):
    out = []
    for a, b in sorted(intervals):
        if out and a <= out[-1][1] + gap:
            if b > out[-1][1]:
                out[-1][1] = b
        else:
            out.append([a, b])
    return out


class ClosedSubset:
    """Finite union of closed intervals and points of a metric graph.

    Stored per internal edge as sorted disjoint ``(a, b)`` offset pairs;
    ``a == b`` is an isolated point.  Vertex membership is kept consistent:
    a member vertex appears as an endpoint on every incident edge.
    """

    __slots__ = ("graph", "intervals")

    def __init__(self, graph: MetricGraph, intervals, vertices: Iterable[int] = ()):
        self.graph = graph
        self.intervals = _normalize(graph, intervals, vertices)

    @classmethod
    def empty(cls, graph: MetricGraph) -> "ClosedSubset":
        return cls(graph, [[] for _ in graph.edges])

    @classmethod
    def whole(cls, graph: MetricGraph) -> "ClosedSubset":
        return cls(graph, [[(0.0, float(L))] for L in graph.lengths])

    @classmethod
    def from_points(cls, graph: MetricGraph, points: Iterable[Point]) -> "ClosedSubset":
        per_edge = [[] for _ in graph.edges]
        verts = []
        for p in points:
            vi, ei, x = graph.resolve(p)
            if vi >= 0:
                verts.append(vi)
            else:
                per_edge[ei].append((x, x))
        return cls(graph, per_edge, verts)

    @classmethod
    def from_intervals(cls, graph: MetricGraph, spec: Mapping[str, Iterable]) -> "ClosedSubset":
        """Build from ``{edge id: [(a, b), ...]}`` in user coordinates."""
        per_edge = [[] for _ in graph.edges]
        for edge, ivs in spec.items():
            for a, b in ivs:
                a, b = float(a), float(b)
                if a > b:
                    raise ValueError(f"empty interval ({a}, {b}) on {edge!r}")
                if edge in graph._loops:
                    h0, h1, length = graph._loops[edge]
                    half = length / 2.0
                    if a <= half:
                        per_edge[graph.eindex[h0]].append((a, min(b, half)))
                    if b >= half:
                        per_edge[graph.eindex[h1]].append((max(a, half) - half, b - half))
                elif edge in graph.eindex:
                    per_edge[graph.eindex[edge]].append((a, b))
                else:
                    raise PointNotOnGraph(f"unknown edge {edge!r}")
        return cls(graph, per_edge)

    # -------------------------------------------------------------- queries
    @property
    def vertex_members(self) -> frozenset[int]:
        g = self.graph
        out = set()
        for ei, ivs in enumerate(self.intervals):
            if ivs:
                if ivs[0][0] == 0.0:
                    out.add(int(g.edge_u[ei]))
                if ivs[-1][1] == g.lengths[ei]:
                    out.add(int(g.edge_v[ei]))
        return frozenset(out)

    def is_empty(self) -> bool:
        return not any(self.intervals)

    def measure(self) -> float:
        return float(sum(b - a for ivs in self.intervals for a, b in ivs))

    def contains_point(self, p: Point) -> bool:
        vi, ei, x = self.graph.resolve(p)
        if vi >= 0:
            return vi in self.vertex_members
        tol = self.graph.tol_len
        return any(a - tol <= x <= b + tol for a, b in self.intervals[ei])

    def issubset(self, other: "ClosedSubset", slack: float = 0.0) -> bool:
        self.graph.check_same(other.graph)
        tol = self.graph.tol_len + slack
        for mine, theirs in zip(self.intervals, other.intervals):
            for a, b in mine:
                if not any(c - tol <= a and b <= d + tol for c, d in theirs):
                    return False
        return True

    def dilate(self, r: float) -> "ClosedSubset":
        """Grow every interval by ``r`` along its edge and around member vertices."""
        g = self.graph
        per_edge = []
        for ei, ivs in enumerate(self.intervals):
            L = g.lengths[ei]
            per_edge.append([(max(0.0, a - r), min(L, b + r)) for a, b in ivs])
        grown = ClosedSubset(g, per_edge)
        for vi in grown.vertex_members:
            for ei, end in g.incident[vi]:
                L = g.lengths[ei]
                per_edge[ei].append((0.0, min(L, r)) if end == 0 else (max(0.0, L - r), L))
        return ClosedSubset(g, per_edge)

    def approx_equal(self, other: "ClosedSubset", slack: float | None = None) -> bool:
        """Set equality up to ``slack`` (defaults to the shared set tolerance)."""
        if slack is None:
            slack = get_tolerances().rel_set * self.graph.total_length
        return self.issubset(other.dilate(slack)) and other.issubset(self.dilate(slack))

    def __eq__(self, other):
        if not isinstance(other, ClosedSubset):
            return NotImplemented
        return self.graph == other.graph and self.approx_equal(other, 0.0)

    __hash__ = None

    def __and__(self, other):
        return subset_intersect(self, other)

    def __or__(self, other):
        return subset_union(self, other)

    def to_external(self) -> dict[str, list[tuple[float, float]]]:
        """Intervals keyed by user edge id, in user coordinates."""
        out: dict[str, list[tuple[float, float]]] = {}
        g = self.graph
        for ei, ivs in enumerate(self.intervals):
            eid = g.edges[ei].id
            shift = 0.0
            if eid in g._halves:
                eid, shift = g._halves[eid]
            out.setdefault(eid, []).extend((a + shift, b + shift) for a, b in ivs)
        return {k: [tuple(x) for x in _merge(v, g.tol_len)] for k, v in out.items()}

    def __repr__(self):
        parts = []
        for eid, ivs in self.to_external().items():
            if ivs:
                parts.append(f"{eid}:" + ",".join(f"[{a:.6g},{b:.6g}]" for a, b in ivs))
        return "ClosedSubset(" + "; ".join(parts) + ")"


def _normalize(graph: MetricGraph, intervals, vertices=()):
    tol = graph.tol_len
    lengths = graph.lengths
    work = []
    for ei, ivs in enumerate(intervals):
        L = float(lengths[ei])
        clean = []
        for a, b in ivs:
            a, b = max(0.0, float(a)), min(L, float(b))
            if a > b + tol:
                continue
            if a <= tol:
                a = 0.0
            if b >= L - tol:
                b = L
            clean.append((a, max(a, b)))
        work.append(_merge(clean, tol))
    members = set(int(v) for v in vertices)
    for ei, ivs in enumerate(work):
        if ivs:
            if ivs[0][0] == 0.0:
                members.add(int(graph.edge_u[ei]))
            if ivs[-1][1] == lengths[ei]:
                members.add(int(graph.edge_v[ei]))
    for vi in members:
        for ei, end in graph.incident[vi]:
            L = float(lengths[ei])
            ivs = work[ei]
            if end == 0 and not (ivs and ivs[0][0] == 0.0):
                work[ei] = _merge(ivs + [[0.0, 0.0]], tol)
            elif end == 1 and not (ivs and ivs[-1][1] == L):
                work[ei] = _merge(ivs + [[L, L]], tol)
    return tuple(tuple((a, b) for a, b in ivs) for ivs in work)


def subset_intersect(a: ClosedSubset, b: ClosedSubset) -> ClosedSubset:
    a.graph.check_same(b.graph)
    tol = a.graph.tol_len
    per_edge = []
    for ia, ib in zip(a.intervals, b.intervals):
        out = []
        i = j = 0
        while i < len(ia) and j < len(ib):
            lo = max(ia[i][0], ib[j][0])
            hi = min(ia[i][1], ib[j][1])
            if lo <= hi + tol:
                out.append((lo, max(lo, hi)))
            if ia[i][1] < ib[j][1]:
                i += 1
            else:
                j += 1
        per_edge.append(out)
    return ClosedSubset(a.graph, per_edge)


def subset_union(a: ClosedSubset, b: ClosedSubset) -> ClosedSubset:
    a.graph.check_same(b.graph)
    return ClosedSubset(a.graph, [ia + ib for ia, ib in zip(a.intervals, b.intervals)])


def subset_covers_gamma(a: ClosedSubset) -> bool:
    return all(
        len(ivs) == 1 and ivs[0][0] == 0.0 and ivs[0][1] == L
        for ivs, L in zip(a.intervals, a.graph.lengths)
    )


def subsets_meet(a: ClosedSubset, b: ClosedSubset) -> bool:
    return not subset_intersect(a, b).is_empty()
