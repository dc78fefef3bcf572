"""Command-line interface.

Every subcommand is a thin wrapper over one library call; graph-producing
commands print the canonical document for the result.  Exit codes: 0 on
success, 1 for domain errors (validation or bad parameters), 2 when a
search gave up before deciding, 3 for I/O problems.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import generators, graphio, metrics
from .errors import DocumentError, ReebflowError
from .graphs import (
    ReebGraph,
    component_images,
    components,
    forks,
    image,
    validate,
)
from .iso import are_isomorphic
from .parallel import component_map, merge_graphs, thread_count
from .properties import UNBOUNDED, tail_report
from .render import render as render_graph
from .smoothing import FlowParams, smooth, truncate, truncated_smooth

EXIT_OK, EXIT_DOMAIN, EXIT_EXHAUSTED, EXIT_IO = 0, 1, 2, 3


def _read_graph(path: str) -> ReebGraph:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as err:
        raise _IOFailure(str(err)) from err
    return graphio.parse(data)


class _IOFailure(Exception):
    pass


def _emit_bytes(data: bytes, out: str | None):
    if out:
        try:
            with open(out, "wb") as fh:
                fh.write(data)
        except OSError as err:
            raise _IOFailure(str(err)) from err
    else:
        sys.stdout.buffer.write(data)


def _emit_graph(g: ReebGraph, args):
    # the canonical document is already the machine-readable form
    _emit_bytes(graphio.serialize(g), getattr(args, "output", None))


def _frac(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as err:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from err


def _componentwise(op, g: ReebGraph, threads: int | None) -> ReebGraph:
    if thread_count(threads) <= 1:
        return op(g)
    return merge_graphs(component_map(op, g, threads))


def _height_str(h) -> str:
    if h == UNBOUNDED:
        return "unbounded"
    return str(h)


# -- subcommand implementations ---------------------------------------------


def cmd_validate(args) -> int:
    g = _read_graph(args.graph)
    violations = validate(g)
    if args.json:
        print(json.dumps({"ok": not violations, "violations": [str(v) for v in violations]}))
    elif violations:
        for v in violations:
            print(str(v))
    else:
        print("ok")
    return EXIT_OK if not violations else EXIT_DOMAIN


def cmd_smooth(args) -> int:
    g = _read_graph(args.graph)
    out = _componentwise(lambda p: smooth(p, args.eps).graph, g, args.threads)
    _emit_graph(out, args)
    return EXIT_OK


def cmd_truncate(args) -> int:
    g = _read_graph(args.graph)
    out = _componentwise(lambda p: truncate(p, args.tau).graph, g, args.threads)
    _emit_graph(out, args)
    return EXIT_OK


def cmd_flow(args) -> int:
    g = _read_graph(args.graph)
    params = FlowParams.slope(args.eps, args.m)
    out = _componentwise(lambda p: truncated_smooth(p, params), g, args.threads)
    _emit_graph(out, args)
    return EXIT_OK


def cmd_check(args) -> int:
    g = _read_graph(args.graph)
    violations = validate(g)
    if violations:
        if args.json:
            print(json.dumps({"ok": False, "violations": [str(v) for v in violations]}))
        else:
            for v in violations:
                print(str(v))
        return EXIT_DOMAIN
    report = tail_report(g)
    ups, downs = forks(g)
    payload = {
        "ok": True,
        "vertices": len(g.vertex_rows),
        "edges": len(g.edge_rows),
        "components": len(components(g)),
        "image": str(image(g)),
        "component_images": [str(i) for i in component_images(g)],
        "up_forks": sorted(ups),
        "down_forks": sorted(downs),
        "max_tailed": _height_str(report.max_tailed),
        "max_weak_safe": _height_str(report.max_weak_safe),
        "max_safe": _height_str(report.max_safe),
    }
    if args.json:
        print(json.dumps(payload))
    else:
        for key, value in payload.items():
            print(f"{key}: {value}")
    return EXIT_OK


def cmd_iso(args) -> int:
    a = _read_graph(args.a)
    b = _read_graph(args.b)
    result = are_isomorphic(a, b, node_budget=args.budget)
    if args.json:
        print(
            json.dumps(
                {
                    "isomorphic": result.isomorphic,
                    "exhausted": result.exhausted,
                    "witness_vertices": len(result.forward.vertex_rows) if result.forward else None,
                }
            )
        )
    else:
        if result.exhausted:
            print("exhausted")
        else:
            print("isomorphic" if result.isomorphic else "not isomorphic")
    return EXIT_EXHAUSTED if result.exhausted else EXIT_OK


def cmd_dist(args) -> int:
    a = _read_graph(args.a)
    b = _read_graph(args.b)
    bracket = metrics.estimate_distance(
        a, b, args.m, args.tol, search_budget=args.budget
    )

    def _side(x):
        return "infinite" if x == metrics.INFINITE else str(x)

    payload = {
        "lo": _side(bracket.lo),
        "hi": _side(bracket.hi),
        "certificate": bracket.certificate.kind,
        "certificate_detail": bracket.certificate.detail,
        "witness_eps": str(bracket.witness.eps) if bracket.witness else None,
    }
    if args.json:
        print(json.dumps(payload))
    else:
        print(f"distance in [{payload['lo']}, {payload['hi']}]")
        print(f"certificate: {payload['certificate']} {payload['certificate_detail']}".rstrip())
        if bracket.witness:
            print(f"witness at eps = {bracket.witness.eps}")
    return EXIT_EXHAUSTED if bracket.certificate.kind == "exhausted" else EXIT_OK


def cmd_gen(args) -> int:
    if args.family == "random":
        graph, retries = generators.random_graph_with_stats(
            int(args.params[0]), int(args.params[1]), args.seed
        )
    else:
        graph = generators.generate(args.family, args.params, args.seed)
        retries = 0
    if args.json and not args.output:
        print(
            json.dumps(
                {
                    "family": args.family,
                    "retries": retries,
                    "graph": json.loads(graphio.serialize(graph)),
                }
            )
        )
    else:
        _emit_bytes(graphio.serialize(graph), args.output)
    return EXIT_OK


def cmd_render(args) -> int:
    g = _read_graph(args.graph)
    _emit_bytes(render_graph(g, args.format), args.output)
    return EXIT_OK


# -- wiring -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reebflow",
        description="Reeb graphs with exact heights: smoothing, truncation, and interleaving distances.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, graph_args=("graph",)):
        for name in graph_args:
            p.add_argument(name, help="graph document path")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--threads", type=int, default=None, help="componentwise worker threads")
        p.add_argument("-o", "--output", default=None, help="write output to a file")

    p = sub.add_parser("validate", help="check the graph invariants")
    common(p)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("smooth", help="smooth by eps")
    p.add_argument("--eps", type=_frac, required=True)
    common(p)
    p.set_defaults(fn=cmd_smooth)

    p = sub.add_parser("truncate", help="truncate by tau")
    p.add_argument("--tau", type=_frac, required=True)
    common(p)
    p.set_defaults(fn=cmd_truncate)

    p = sub.add_parser("flow", help="truncated smoothing at slope m")
    p.add_argument("--eps", type=_frac, required=True)
    p.add_argument("--m", type=_frac, required=True)
    common(p)
    p.set_defaults(fn=cmd_flow)

    p = sub.add_parser("check", help="validate plus a structural report")
    common(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("iso", help="decide function-preserving isomorphism")
    p.add_argument("--budget", type=int, default=500_000)
    common(p, graph_args=("a", "b"))
    p.set_defaults(fn=cmd_iso)

    p = sub.add_parser("dist", help="bracket the slope-m interleaving distance")
    p.add_argument("--m", type=_frac, required=True)
    p.add_argument("--tol", type=_frac, required=True)
    p.add_argument("--budget", type=int, default=200_000)
    common(p, graph_args=("a", "b"))
    p.set_defaults(fn=cmd_dist)

    p = sub.add_parser("gen", help="generate a fixture graph")
    p.add_argument("family", choices=generators.FAMILIES)
    p.add_argument("params", nargs="*", help="family parameters (rationals)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("render", help="render to dot or svg")
    p.add_argument("--format", choices=("dot", "svg"), default="dot")
    common(p)
    p.set_defaults(fn=cmd_render)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except _IOFailure as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return EXIT_IO
    except DocumentError as err:
        print(f"document error: {err}", file=sys.stderr)
        return EXIT_IO
    except ReebflowError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
