"""JSON and CSV serialization with deterministic ordering and float formatting."""

from __future__ import annotations

import csv
import io as _io
import json
import math
from pathlib import Path
from typing import Any, Mapping

from .divisors import RDivisor, SignedDivisor
from .exceptions import InvalidDivisorSpec, InvalidGraphSpec, PointNotOnGraph
from .graph import MetricGraph, Point, build_graph
from .pwl import PwlFunction

__all__ = [
    "format_float",
    "clean_float",
    "dumps",
    "graph_to_json",
    "graph_from_json",
    "divisor_to_json",
    "divisor_from_json",
    "parse_point",
    "load_graph",
    "load_divisor",
    "function_csv",
]

SIGNIFICANT_DIGITS = 12


def clean_float(x: float) -> float:
    """Round to 12 significant digits; negative zero becomes zero."""
    x = float(f"{float(x):.{SIGNIFICANT_DIGITS}g}")
    return 0.0 if x == 0.0 else x


def format_float(x: float) -> str:
    return repr(clean_float(x))


def _clean(obj: Any) -> Any:
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"cannot serialize {obj!r}")
        return clean_float(obj)
    if isinstance(obj, Mapping):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def dumps(obj: Any) -> str:
    """Deterministic JSON text with a trailing newline."""
    return json.dumps(_clean(obj), indent=2) + "\n"


def graph_to_json(g: MetricGraph) -> dict:
    return g.to_dict()


def graph_from_json(obj: Mapping) -> MetricGraph:
    if not isinstance(obj, Mapping):
        raise InvalidGraphSpec("graph description must be a JSON object")
    return build_graph(obj)


def divisor_to_json(d: SignedDivisor) -> dict:
    points = []
    for p, m in d.items:
        kind, name, offset = d.graph.external(p)
        if kind == "vertex":
            points.append({"vertex": name, "mass": m})
        else:
            points.append({"edge": name, "offset": offset, "mass": m})
    return {"points": points}


def divisor_from_json(g: MetricGraph, obj: Mapping) -> RDivisor:
    try:
        entries = obj["points"]
        pairs = []
        for entry in entries:
            mass = float(entry["mass"])
            if "vertex" in entry:
                p = g.vertex(str(entry["vertex"]))
            else:
                p = g.locate(str(entry["edge"]), float(entry["offset"]))
            pairs.append((p, mass))
    except PointNotOnGraph:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidDivisorSpec(f"malformed divisor description: {exc!r}") from exc
    return RDivisor(g, pairs)


def parse_point(g: MetricGraph, text: str) -> Point:
    """Parse ``"v0"`` (a vertex) or ``"e0:0.25"`` (an edge offset)."""
    if ":" in text:
        edge, _, offset = text.rpartition(":")
        try:
            value = float(offset)
        except ValueError as exc:
            raise PointNotOnGraph(f"bad offset in point {text!r}") from exc
        return g.locate(edge, value)
    return g.vertex(text)


def _read_json(path: str | Path) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_graph(path: str | Path) -> MetricGraph:
    return graph_from_json(_read_json(path))


def load_divisor(g: MetricGraph, path: str | Path) -> RDivisor:
    return divisor_from_json(g, _read_json(path))


def function_csv(f: PwlFunction, per_edge: int = 16) -> str:
    """CSV text with columns ``edge_id, offset, value``."""
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["edge_id", "offset", "value"])
    for eid, x, y in f.samples(per_edge):
        writer.writerow([eid, format_float(x), format_float(y)])
    return buf.getvalue()
