"""Command line front end.

Subcommands: analyze, enumerate, classify, construct, export-dot.
Exit codes: 0 ok, 2 usage or parse error, 3 invalid input graph,
4 construction precondition failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .constructions import InvalidPyramidalError, apply_recipe
from .enumeration import classify, generate_face_graphs, verify_theorems
from .faces import (
    CapExceededError,
    f_vector,
    facets,
    has_triangle,
    is_cube,
    is_product,
    is_pyramid,
)
from .graphs import (
    BipartiteMultiGraph,
    FaceGraph,
    NotElementaryError,
    components,
    dimension,
    ear_count,
    graph_from_json,
    graph_to_json,
)
from .reduction import is_irreducible, minimal_nodes, partners
from .types import fingerprint

EXIT_USAGE = 2
EXIT_BAD_GRAPH = 3
EXIT_BAD_CONSTRUCTION = 4


def _read_graph(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
        return graph_from_json(text, validate=False)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: cannot parse graph from {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _require_face_graph(g) -> FaceGraph:
    if isinstance(g, BipartiteMultiGraph):
        print("error: expected a simple face graph, got a multigraph", file=sys.stderr)
        raise SystemExit(EXIT_BAD_GRAPH)
    try:
        g.require_elementary()
    except NotElementaryError as exc:
        where = f" (edge {exc.edge})" if exc.edge else ""
        print(f"error: graph is not elementary: {exc}{where}", file=sys.stderr)
        raise SystemExit(EXIT_BAD_GRAPH)
    return g


def _write_out(out: str | None, text: str) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def cmd_analyze(args) -> int:
    g = _require_face_graph(_read_graph(args.path))
    comps = components(g)
    d = dimension(g)
    fp = fingerprint(g, with_fvec=False)
    lines = [
        f"n: {g.n}",
        f"m: {g.m}",
        f"components: {len(comps)}",
        f"dimension: {d}",
        f"ears: {ear_count(g)}",
        f"irreducible: {is_irreducible(g)}",
    ]
    mins = minimal_nodes(g)
    lines.append(f"minimal nodes: {len(mins)}")
    for v in mins:
        ps = sorted(
            (p.layer, p.index) for p in partners(g, v).partners
        )
        lines.append(f"  {v.layer}[{v.index}] partners: {ps}")
    if d >= 1:
        lines.append(f"facets: {len(facets(g))}")
        try:
            lines.append(f"f-vector: {f_vector(g, cap=args.cap)}")
        except CapExceededError:
            lines.append(f"f-vector: skipped (lattice cap {args.cap} exceeded)")
    apex = is_pyramid(g) if d >= 1 else None
    lines.append(f"is_pyramid: {apex is not None}")
    if apex is not None:
        lines.append(f"  apex matching: {list(apex)}")
    lines.append(f"is_product: {is_product(g)}")
    lines.append(f"is_cube: {is_cube(g)}")
    lines.append(f"has_triangle: {has_triangle(g)}")
    lines.append(f"fingerprint: {fp.digest()}")
    lines.append("graph: " + graph_to_json(g).rstrip("\n"))
    _write_out(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_enumerate(args) -> int:
    if args.n > 2 * args.d:
        print("error: n must be at most 2d", file=sys.stderr)
        return EXIT_USAGE
    gs = generate_face_graphs(args.n, args.d)
    lines = []
    for g in gs:
        fp = fingerprint(g, with_fvec=False)
        doc = json.loads(graph_to_json(g))
        doc["fingerprint"] = fp.digest()
        doc["dim"] = fp.dim
        lines.append(json.dumps(doc, separators=(", ", ": ")))
    _write_out(args.out, "\n".join(lines) + ("\n" if lines else ""))
    print(f"{len(gs)} graphs for n={args.n} d={args.d}", file=sys.stderr)
    return 0


def cmd_classify(args) -> int:
    if args.d > 8:
        print("error: classification supports d <= 8", file=sys.stderr)
        return EXIT_USAGE
    if args.d >= 7 and not args.extended:
        print("error: d >= 7 needs --extended", file=sys.stderr)
        return EXIT_USAGE
    progress = (lambda msg: print(msg, file=sys.stderr)) if args.verbose else None
    cat, report = classify(
        args.d,
        jobs=args.jobs,
        extended=args.extended,
        cap=args.cap,
        progress=progress,
    )
    if args.verify:
        verdicts = verify_theorems(cat, args.d, wedge_check_dmax=min(args.d, 5))
        for v in verdicts:
            status = "pass" if v["passed"] else "FAIL"
            print(
                f"[{status}] d={v['dim']} ({v['entries']} entries) {v['claim']}",
                file=sys.stderr,
            )
    _write_out(args.out, cat.to_jsonl())
    report_text = report.to_json()
    if args.report:
        _write_out(args.report, report_text)
    else:
        sys.stderr.write(report_text)
    return 0


def cmd_construct(args) -> int:
    try:
        with open(args.recipe) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read recipe: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        g = apply_recipe(doc)
    except InvalidPyramidalError as exc:
        print(f"error: invalid pyramidal choice: {exc}", file=sys.stderr)
        return EXIT_BAD_CONSTRUCTION
    except (ValueError, KeyError, NotElementaryError) as exc:
        print(f"error: construction failed: {exc}", file=sys.stderr)
        return EXIT_BAD_CONSTRUCTION
    summary = {
        "kind": doc["kind"],
        "n": g.n,
        "m": g.m,
        "dim": dimension(g),
        "fingerprint": fingerprint(g, with_fvec=False).digest(),
    }
    _write_out(args.out, graph_to_json(g))
    print(json.dumps(summary, separators=(", ", ": ")), file=sys.stderr)
    return 0


def cmd_export_dot(args) -> int:
    g = _read_graph(args.path)
    n = g.n
    lines = ["graph face_graph {", "  rankdir=TB;"]
    uppers = " ".join(f"u{i};" for i in range(n))
    lowers = " ".join(f"v{i};" for i in range(n))
    lines.append("  { rank=same; %s }" % uppers)
    lines.append("  { rank=same; %s }" % lowers)
    if isinstance(g, BipartiteMultiGraph):
        for u in range(n):
            for v in range(n):
                for _ in range(g.mult[u][v]):
                    lines.append(f"  u{u} -- v{v};")
    else:
        for u, v in sorted(g.edges()):
            lines.append(f"  u{u} -- v{v};")
    lines.append("}")
    _write_out(args.out, "\n".join(lines) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="birkfaces",
        description="Faces of Birkhoff polytopes as elementary bipartite graphs: "
        "analysis, constructions, and exhaustive classification by dimension.",
        epilog="exit codes: 0 ok, 2 usage/parse error, 3 invalid input graph, "
        "4 construction precondition failure",
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    default_jobs = int(os.environ.get("BFK_JOBS", "0")) or (os.cpu_count() or 1)

    def add_common(sp):
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument(
            "--cap",
            type=int,
            default=10**7,
            help="face lattice size cap (default 1e7)",
        )

    sp = sub.add_parser("analyze", help="report the structure of one face graph")
    sp.add_argument("path", help="graph JSON file")
    add_common(sp)
    sp.set_defaults(fn=cmd_analyze)

    sp = sub.add_parser(
        "enumerate", help="connected irreducible face graphs for fixed (n, d)"
    )
    sp.add_argument("-n", type=int, required=True, help="nodes per layer")
    sp.add_argument("-d", type=int, required=True, help="face dimension")
    add_common(sp)
    sp.set_defaults(fn=cmd_enumerate)

    sp = sub.add_parser("classify", help="classify all types up to a dimension")
    sp.add_argument("-d", type=int, required=True, help="maximum dimension")
    sp.add_argument(
        "--jobs", type=int, default=default_jobs, help="worker processes"
    )
    sp.add_argument(
        "--extended", action="store_true", help="allow the d=7,8 runs"
    )
    sp.add_argument("--report", default=None, help="write the report JSON here")
    sp.add_argument(
        "--verify", action="store_true", help="check the classification theorems"
    )
    sp.add_argument("--verbose", action="store_true")
    add_common(sp)
    sp.set_defaults(fn=cmd_classify)

    sp = sub.add_parser("construct", help="apply a construction recipe")
    sp.add_argument("recipe", help="recipe JSON file")
    add_common(sp)
    sp.set_defaults(fn=cmd_construct)

    sp = sub.add_parser("export-dot", help="write a two-layer DOT drawing")
    sp.add_argument("path", help="graph JSON file")
    add_common(sp)
    sp.set_defaults(fn=cmd_export_dot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
