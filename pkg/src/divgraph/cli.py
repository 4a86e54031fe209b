"""Command-line interface: ``divgraph <command> GRAPH.json ...``.

Exit codes: 0 success (or a "true" answer), 1 a "false" answer, 2 invalid
input, 3 a failed certificate under ``--strict``.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from ._config import use_tolerances
from .exceptions import CertificateFailed, DivGraphError
from .io import (
    divisor_to_json,
    dumps,
    format_float,
    function_csv,
    load_divisor,
    load_graph,
    parse_point,
)
from .potential import associated_function, effective_resistance, j_function
from .projection import canonical_project, retraction_sample
from .reduced import TConvexHull, extremals, hull_contains, reduced_on_hull
from .space import TSegment, rho, s_func, segment_contains, segment_intersection

__all__ = ["main", "build_parser"]


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        # "--t" must not be read as an abbreviation of "--tol-len"
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _emit(text: str, out):
    out.write(text if text.endswith("\n") else text + "\n")


def _hull(g, paths) -> TConvexHull:
    return TConvexHull(g, [load_divisor(g, p) for p in paths])


# residuals below this are round-off and printed as zero for stable output
_RESIDUAL_FLOOR = 1e-12


def _result_json(result) -> dict:
    certificate = result.certificate.to_dict()
    for check in certificate["generators"]:
        if check["phi_residual"] < _RESIDUAL_FLOOR:
            check["phi_residual"] = 0.0
    return {
        "divisor": divisor_to_json(result.divisor),
        "objective": result.objective,
        "status": result.status,
        "certificate": certificate,
    }


# ---------------------------------------------------------------- commands


def _cmd_rho(args, g, out):
    _emit(format_float(rho(g, load_divisor(g, args.d1), load_divisor(g, args.d2))), out)


def _cmd_sfunc(args, g, out):
    _emit(format_float(s_func(g, load_divisor(g, args.d1), load_divisor(g, args.d2))), out)


def _cmd_resistance(args, g, out):
    p, q = parse_point(g, args.p), parse_point(g, args.q)
    _emit(format_float(effective_resistance(g, p, q)), out)


def _cmd_jfun(args, g, out):
    f = j_function(g, parse_point(g, args.q), parse_point(g, args.p))
    _write_csv(function_csv(f, args.samples), args.csv, out)


def _write_csv(text, path, out):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)


def _cmd_tpath(args, g, out):
    seg = TSegment(g, load_divisor(g, args.d1), load_divisor(g, args.d2))
    _emit(dumps(divisor_to_json(seg(args.t))), out)


def _cmd_segment_contains(args, g, out):
    seg = TSegment(g, load_divisor(g, args.d1), load_divisor(g, args.d2))
    answer = segment_contains(g, seg, load_divisor(g, args.d))
    _emit("true" if answer else "false", out)
    return 0 if answer else 1


def _cmd_segment_intersect(args, g, out):
    a1, a2, b1, b2 = (load_divisor(g, p) for p in args.divisors)
    seg = segment_intersection(g, TSegment(g, a1, a2), TSegment(g, b1, b2))
    if seg is None:
        _emit("empty", out)
    else:
        _emit(dumps({"d1": divisor_to_json(seg.d1), "d2": divisor_to_json(seg.d2)}), out)


def _cmd_reduce(args, g, out):
    hull = _hull(g, args.hull)
    e = load_divisor(g, args.e)
    try:
        result = reduced_on_hull(g, hull, e, strict=args.strict)
    except CertificateFailed as exc:
        if exc.result is not None:
            _emit(dumps(_result_json(exc.result)), out)
        raise
    _emit(dumps(_result_json(result)), out)


def _cmd_member(args, g, out):
    answer = hull_contains(g, _hull(g, args.hull), load_divisor(g, args.e))
    _emit("true" if answer else "false", out)
    return 0 if answer else 1


def _cmd_extremals(args, g, out):
    hull = _hull(g, args.hull)
    kept = extremals(g, hull).generators
    remaining = list(kept)
    indices = []
    for i, d in enumerate(hull.generators):
        if remaining and d is remaining[0]:
            indices.append(i)
            remaining.pop(0)
    _emit(dumps({"indices": indices, "generators": [divisor_to_json(d) for d in kept]}), out)


def _cmd_project(args, g, out):
    d = canonical_project(g, _hull(g, args.hull), load_divisor(g, args.e), strict=args.strict)
    _emit(dumps(divisor_to_json(d)), out)


def _cmd_retract(args, g, out):
    hull = _hull(g, args.hull)
    d = load_divisor(g, args.d)
    kappa = args.kappa
    if kappa is None:
        sample = [d] + [load_divisor(g, p) for p in args.sample]
        kappa = max(rho(g, x, canonical_project(g, hull, x)) for x in sample)
    _emit(dumps(divisor_to_json(retraction_sample(g, hull, d, args.t, kappa))), out)


def _cmd_plot(args, g, out):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    f = associated_function(g, load_divisor(g, args.d1), load_divisor(g, args.d2))
    rows = f.samples(args.samples)
    edges = [e.id for e in g.user_edges]
    fig, axes = plt.subplots(len(edges), 1, figsize=(6, 1.8 * len(edges)), squeeze=False)
    for ax, eid in zip(axes[:, 0], edges):
        xs = [r[1] for r in rows if r[0] == eid]
        ys = [r[2] for r in rows if r[0] == eid]
        ax.plot(xs, ys, color="tab:blue")
        ax.set_ylabel(eid)
    axes[-1, 0].set_xlabel("offset")
    fig.tight_layout()
    fig.savefig(args.svg, format="svg")
    plt.close(fig)
    if args.csv:
        _write_csv(function_csv(f, args.samples), args.csv, out)


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="divgraph", description=__doc__.splitlines()[0])
    parser.add_argument("--tol-len", type=float, help="relative length tolerance")
    parser.add_argument("--tol-val", type=float, help="relative value tolerance")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, func, help_text, pair=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("graph")
        if pair:
            p.add_argument("d1")
            p.add_argument("d2")
        p.set_defaults(func=func)
        return p

    command("rho", _cmd_rho, "distance between two divisors", pair=True)
    command("sfunc", _cmd_sfunc, "Phi(D2 - D1)", pair=True)
    p = command("resistance", _cmd_resistance, "effective resistance between two points")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p = command("jfun", _cmd_jfun, "samples of the unit-current potential as CSV")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--csv", help="output file (default: stdout)")
    p.add_argument("--samples", type=int, default=16, help="uniform samples per edge")
    p = command("tpath", _cmd_tpath, "point of the tropical path", pair=True)
    p.add_argument("--t", type=float, required=True)
    p = command("segment-contains", _cmd_segment_contains, "segment membership", pair=True)
    p.add_argument("d")
    p = command("segment-intersect", _cmd_segment_intersect, "intersection of two segments")
    p.add_argument("divisors", nargs=4, metavar="D", help="endpoints A1 A2 B1 B2")
    for name, func, text in (
        ("reduce", _cmd_reduce, "reduced divisor in a hull"),
        ("member", _cmd_member, "hull membership"),
        ("project", _cmd_project, "canonical projection onto a hull"),
    ):
        p = command(name, func, text)
        p.add_argument("e")
        p.add_argument("--hull", nargs="+", required=True)
        if name != "member":
            p.add_argument("--strict", action="store_true")
    p = command("extremals", _cmd_extremals, "minimal generating subset of a hull")
    p.add_argument("--hull", nargs="+", required=True)
    p = command("retract", _cmd_retract, "sample of the retraction onto a hull")
    p.add_argument("d")
    p.add_argument("--hull", nargs="+", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--kappa", type=float, help="distance bound (default: from the sample)")
    p.add_argument("--sample", nargs="*", default=[], help="extra divisors for the default kappa")
    p = command("plot", _cmd_plot, "plot the normalized potential of D2 - D1", pair=True)
    p.add_argument("--svg", required=True)
    p.add_argument("--csv")
    p.add_argument("--samples", type=int, default=64)
    return parser


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        err.write(f"divgraph: error: {exc}\n")
        return 2
    overrides = {}
    if args.tol_len is not None:
        overrides["rel_len"] = args.tol_len
    if args.tol_val is not None:
        overrides["rel_val"] = args.tol_val
    try:
        with use_tolerances(**overrides):
            g = load_graph(args.graph)
            code = args.func(args, g, out)
    except CertificateFailed as exc:
        err.write(f"divgraph: certificate failed: {exc}\n")
        return 3
    except (DivGraphError, OSError, json.JSONDecodeError) as exc:
        err.write(f"divgraph: error: {type(exc).__name__}: {exc}\n")
        return 2
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
