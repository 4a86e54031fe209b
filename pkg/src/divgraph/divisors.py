"""Finitely supported real divisors on a metric graph."""

from __future__ import annotations

from typing import Iterable, Mapping

from ._config import get_tolerances
from .exceptions import NonEffectiveDivisor, ZeroDegreeInput
from .graph import MetricGraph, Point

__all__ = ["SignedDivisor", "RDivisor", "point_mass"]


class SignedDivisor:
    """A finite formal sum ``sum m_p (p)`` with real coefficients of any sign.

    Points are canonicalized on construction, coefficients at points closer
    than the length tolerance are merged, and coefficients whose magnitude is
    at most ``drop_below`` are dropped.
    """

    __slots__ = ("graph", "items")

    def __init__(
        self,
        graph: MetricGraph,
        masses: Mapping[Point, float] | Iterable[tuple[Point, float]],
        drop_below: float = 0.0,
    ):
        self.graph = graph
        pairs = masses.items() if isinstance(masses, Mapping) else masses
        keyed = []
        for p, m in pairs:
            p = graph.canonical(p)
            keyed.append((graph.sort_key(p), p, float(m)))
        keyed.sort(key=lambda t: t[0])
        tol = graph.tol_len
        merged: list[list] = []
        for key, p, m in keyed:
            if merged:
                pkey = merged[-1][0]
                same = pkey == key or (
                    key[0] == 1 and pkey[0] == 1 and pkey[1] == key[1] and key[2] - pkey[2] <= tol
                )
                if same:
                    merged[-1][2] += m
                    continue
            merged.append([key, p, m])
        self.items: tuple[tuple[Point, float], ...] = tuple(
            (p, m) for _, p, m in merged if abs(m) > drop_below
        )

    # ----------------------------------------------------------------- access
    @property
    def degree(self) -> float:
        return float(sum(m for _, m in self.items))

    @property
    def support(self) -> tuple[Point, ...]:
        return tuple(p for p, _ in self.items)

    def as_dict(self) -> dict[Point, float]:
        return dict(self.items)

    def coefficient(self, p: Point) -> float:
        p = self.graph.canonical(p)
        key = self.graph.sort_key(p)
        tol = self.graph.tol_len
        total = 0.0
        for q, m in self.items:
            k = self.graph.sort_key(q)
            if k == key or (k[:2] == key[:2] and k[0] == 1 and abs(k[2] - key[2]) <= tol):
                total += m
        return total

    def is_effective(self) -> bool:
        return all(m > 0 for _, m in self.items)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __repr__(self):
        body = " + ".join(f"{m:.6g}*{p!r}" for p, m in self.items) or "0"
        return f"{type(self).__name__}({body})"

    # ------------------------------------------------------------- arithmetic
    def _combine(self, other: "SignedDivisor", sign: float) -> "SignedDivisor":
        self.graph.check_same(other.graph)
        pairs = list(self.items) + [(p, sign * m) for p, m in other.items]
        return SignedDivisor(self.graph, pairs)

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __neg__(self):
        return SignedDivisor(self.graph, [(p, -m) for p, m in self.items])

    def __mul__(self, c: float):
        return SignedDivisor(self.graph, [(p, c * m) for p, m in self.items])

    __rmul__ = __mul__

    def pruned(self, tol: float) -> "SignedDivisor":
        return SignedDivisor(self.graph, self.items, drop_below=tol)

    def clustered(self, tol: float) -> "SignedDivisor":
        """Merge points closer than ``tol`` along an edge, and points within ``tol`` of a vertex into it.

        A merged group sits at the member with the largest mass magnitude.
        """
        g = self.graph
        groups: dict[tuple, list] = {}
        order = []
        for p, m in self.items:
            vi, ei, x = g.resolve(p)
            if vi < 0:
                L = float(g.lengths[ei])
                if x <= tol:
                    p, vi = g.vertex(g.edges[ei].u), int(g.edge_u[ei])
                elif x >= L - tol:
                    p, vi = g.vertex(g.edges[ei].v), int(g.edge_v[ei])
            key = ("v", vi) if vi >= 0 else ("e", ei)
            if key not in groups:
                groups[key] = []
                order.append(key)
            groups[key].append((x, p, m))
        pairs = []
        for key in order:
            members = groups[key]
            if key[0] == "v":
                pairs.append((members[0][1], sum(m for _, _, m in members)))
                continue
            members.sort(key=lambda t: t[0])
            run = [members[0]]
            for item in members[1:]:
                if item[0] - run[-1][0] <= tol:
                    run.append(item)
                else:
                    pairs.append(_collapse(run))
                    run = [item]
            pairs.append(_collapse(run))
        return SignedDivisor(g, pairs)

    def max_abs_difference(self, other: "SignedDivisor") -> float:
        """Largest coefficientwise difference, used by round-trip checks."""
        diff = self - other
        return max((abs(m) for _, m in diff.items), default=0.0)


def _collapse(run):
    anchor = max(run, key=lambda t: abs(t[2]))[1]
    return anchor, sum(m for _, _, m in run)


class RDivisor(SignedDivisor):
    """An effective real divisor: positive masses, positive degree."""

    __slots__ = ()

    def __init__(self, graph, masses, drop_below: float | None = None):
        if drop_below is None:
            drop_below = 0.0
        super().__init__(graph, masses, drop_below=drop_below)
        for p, m in self.items:
            if not m > 0:
                raise NonEffectiveDivisor(f"mass {m!r} at {p!r} is not positive")
        if not self.items:
            raise ZeroDegreeInput("an effective divisor needs positive degree")

    @classmethod
    def from_signed(cls, d: SignedDivisor, degree: float | None = None) -> "RDivisor":
        """Drop round-off masses of ``d`` and rescale to ``degree``.

        Positive masses up to the value tolerance and negative masses up to
        the mass tolerance are treated as round-off; larger negative masses
        raise :class:`NonEffectiveDivisor`.
        """
        scale = max(1.0, max((abs(m) for _, m in d.items), default=1.0))
        tols = get_tolerances()
        tol = tols.rel_val * scale
        for p, m in d.items:
            if m < -tols.rel_mass * scale:
                raise NonEffectiveDivisor(f"mass {m!r} at {p!r} is negative")
        kept = [(p, m) for p, m in d.items if m > tol]
        if degree is not None and kept:
            total = sum(m for _, m in kept)
            kept = [(p, m * degree / total) for p, m in kept]
        return cls(d.graph, kept)

    def scaled(self, degree: float) -> "RDivisor":
        return RDivisor(self.graph, [(p, m * degree / self.degree) for p, m in self.items])


def point_mass(graph: MetricGraph, p: Point, mass: float = 1.0) -> RDivisor:
    return RDivisor(graph, [(p, mass)])
