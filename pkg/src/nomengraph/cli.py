"""Command-line interface.

Exit codes: 0 success, 1 data errors (bad records, bad directives,
validation violations), 2 usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .graph import CatalogError, Graph, Iri
from .ingest import ReconciliationPlan, parse_directives, parse_records, promote
from .model import Vocabulary, validate
from .resolve import render_record_view, resolve_label, search_nomens
from .serialize import export_ntriples, export_turtle, import_ntriples


class UsageError(Exception):
    pass


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CatalogError(f"cannot read {path}: {exc}")


def _namespace(args) -> str:
    if getattr(args, "namespace", None):
        return args.namespace
    from .service import namespace_from_env

    return namespace_from_env()


def _default_lang(args) -> str:
    if getattr(args, "default_lang", None):
        return args.default_lang
    from .service import default_lang_from_env

    return default_lang_from_env()


def _load_graph(args) -> tuple[Graph, Vocabulary]:
    """Build the graph from --records/--directives, or re-load a
    previously exported N-Triples file given with --in."""
    namespace = _namespace(args)
    vocab = Vocabulary(namespace)
    if getattr(args, "graph_in", None):
        if getattr(args, "records", None):
            raise UsageError("give either --records or --in, not both")
        try:
            data = Path(args.graph_in).read_bytes()
        except OSError as exc:
            raise CatalogError(f"cannot read {args.graph_in}: {exc}")
        return import_ntriples(data).freeze(), vocab
    if not getattr(args, "records", None):
        raise UsageError("one of --records or --in is required")
    records = parse_records(_read_text(args.records))
    plan = ReconciliationPlan.empty()
    if getattr(args, "directives", None):
        plan = parse_directives(_read_text(args.directives))
    result = promote(records, plan, namespace=namespace, vocab=vocab)
    for warning in result.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return result.graph, vocab


def _write_graph(graph: Graph, args, vocab: Vocabulary):
    if args.format == "turtle":
        data = export_turtle(graph, namespace=vocab.namespace)
    else:
        data = export_ntriples(graph)
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()


def _print_json(obj):
    print(json.dumps(obj, ensure_ascii=False, indent=2))


def _source_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--records", type=Path, help="JSON Lines record file")
    p.add_argument("--directives", type=Path, help="reconciliation directives (JSON)")
    p.add_argument("--in", dest="graph_in", type=Path, help="previously exported N-Triples file")
    p.add_argument("--namespace", help="IRI namespace (default: CATALOG_NAMESPACE or built-in)")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nomengraph", description="bibliographic graph catalog tools")
    sub = parser.add_subparsers(dest="command", required=True)
    source = _source_parent()

    p = sub.add_parser("ingest", parents=[source], help="promote records and export the graph")
    p.add_argument("--format", choices=["ntriples", "turtle"], default="ntriples")
    p.add_argument("--out", type=Path, help="output file (default: stdout)")

    p = sub.add_parser("export", parents=[source], help="serialize the graph canonically")
    p.add_argument("--format", choices=["ntriples", "turtle"], default="ntriples")
    p.add_argument("--out", type=Path)

    p = sub.add_parser("validate", parents=[source], help="report structural violations")

    p = sub.add_parser("label", parents=[source], help="resolve an entity's display label")
    p.add_argument("--entity", required=True, help="entity IRI")
    p.add_argument("--lang", help="preferred language tag")
    p.add_argument("--default-lang", dest="default_lang")

    p = sub.add_parser("view", parents=[source], help="render a manifestation record view")
    p.add_argument("--entity", required=True, help="manifestation IRI")
    p.add_argument("--lang")
    p.add_argument("--default-lang", dest="default_lang")

    p = sub.add_parser("search", parents=[source], help="search nomens by string")
    p.add_argument("--q", required=True, help="query string")
    p.add_argument("--mode", choices=["exact", "substring"], default="substring")
    p.add_argument("--default-lang", dest="default_lang")

    p = sub.add_parser("serve", parents=[source], help="run the HTTP service")
    p.add_argument("--addr", default="127.0.0.1:8011", help="host:port to bind")
    p.add_argument("--default-lang", dest="default_lang")
    p.add_argument("--max-depth", type=int, default=3)

    p = sub.add_parser("report", parents=[source], help="write entities.tsv and a node-link figure")
    p.add_argument("--entity", help="focus the figure on this entity's neighborhood")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--lang")
    p.add_argument("--default-lang", dest="default_lang")
    p.add_argument("--out-dir", dest="out_dir", type=Path, default=Path("report"))

    return parser


def _cmd_ingest(args) -> int:
    graph, vocab = _load_graph(args)
    _write_graph(graph, args, vocab)
    return 0


def _cmd_validate(args) -> int:
    graph, vocab = _load_graph(args)
    violations = validate(graph, vocab)
    _print_json(
        {
            "count": len(violations),
            "violations": [{"code": v.code, "node": v.node.value, "message": v.message} for v in violations],
        }
    )
    return 1 if violations else 0


def _cmd_label(args) -> int:
    graph, vocab = _load_graph(args)
    res = resolve_label(graph, Iri(args.entity), args.lang, _default_lang(args), vocab)
    _print_json({"iri": args.entity, "label": res.label, "lang": res.lang, "rule": res.rule, "nomen": res.nomen.value})
    return 0


def _cmd_view(args) -> int:
    graph, vocab = _load_graph(args)
    rows = render_record_view(graph, Iri(args.entity), args.lang, _default_lang(args), vocab)
    _print_json(
        [
            {"slot": r.slot, "value": r.value, "lang": r.lang, "source": r.source.value, "source_kind": r.source_kind}
            for r in rows
        ]
    )
    return 0


def _cmd_search(args) -> int:
    graph, vocab = _load_graph(args)
    hits = search_nomens(graph, args.q, args.mode, _default_lang(args), vocab)
    _print_json(
        [
            {
                "nomen": h.nomen.value,
                "value": h.value,
                "lang": h.lang,
                "exact": h.exact,
                "owners": [{"iri": o.iri.value, "kind": o.kind, "label": o.label} for o in h.owners],
            }
            for h in hits
        ]
    )
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import CatalogConfig, create_app

    config = CatalogConfig(namespace=_namespace(args), default_lang=_default_lang(args), max_depth=args.max_depth)
    app = create_app(config)
    if args.records:
        records = parse_records(_read_text(args.records))
        plan = parse_directives(_read_text(args.directives)) if args.directives else ReconciliationPlan.empty()
        app.state.catalog.replace(tuple(records), plan)
        print(f"preloaded {len(records)} records", file=sys.stderr)
    host, sep, port = args.addr.rpartition(":")
    if not sep or not port.isdigit():
        raise UsageError(f"bad --addr {args.addr!r}, expected host:port")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return 0


def _cmd_report(args) -> int:
    from .report import write_report

    graph, vocab = _load_graph(args)
    root = Iri(args.entity) if args.entity else None
    if root is not None and not graph.has_node(root):
        raise CatalogError(f"no such node: {args.entity}")
    paths = write_report(
        graph,
        args.out_dir,
        root=root,
        depth=args.depth,
        lang=args.lang,
        default_lang=_default_lang(args),
        vocab=vocab,
    )
    for path in paths:
        print(str(path))
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "export": _cmd_ingest,
    "validate": _cmd_validate,
    "label": _cmd_label,
    "view": _cmd_view,
    "search": _cmd_search,
    "serve": _cmd_serve,
    "report": _cmd_report,
}


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except CatalogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
