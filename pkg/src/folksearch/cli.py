"""Command-line entry points: ingest, serve, query, eval, stats."""

from __future__ import annotations

import argparse
import json
import sys

from .errors import FolksearchError
from .meaning import load_ontology
from .service import SearchService, parse_judgments, parse_query_log, stats


def _make_service(args) -> SearchService:
    ontology = load_ontology(args.taxonomy) if args.taxonomy else None
    service = SearchService(ontology=ontology)
    if getattr(args, "corpus", None):
        service.ingest(args.corpus)
    return service


def _print_results(response: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(response, indent=2, default=str))
        return
    if response["status"] == "collapse_required":
        print("collapse required; options:")
        for option in response["options"]:
            who = ", ".join(option["distinct_speakers"]) or ", ".join(option["speakers"])
            print(f"  [{option['option']}] facet={option['facet']} ({who}) score={option['score']:.3f}")
        return
    print(f"query: {response['query']!r}  tags: {response['tags']}")
    if response.get("facet_filter"):
        print(f"facet filter: {response['facet_filter']}")
    for rank, result in enumerate(response["results"], start=1):
        body = result["body"] or f"{result['facet']} / {result['tag']} / {result['incidence']}"
        print(f"  {rank}. [{result['id']}] {body}  (score={result['score']:.4f})")
    if response["refinements"]:
        print(f"refinements: {', '.join(response['refinements'])}")


def cmd_ingest(args) -> int:
    service = _make_service(args)
    snapshot = service.snapshot()
    print(f"snapshot {snapshot.snapshot_id}")
    print(f"contributions {len(snapshot.contributions)}")
    print(f"speakers {len(snapshot.collection.members)}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app

    service = _make_service(args)
    uvicorn.run(create_app(service), host=args.host, port=args.port)
    return 0


def cmd_query(args) -> int:
    service = _make_service(args)
    session_id = service.create_session(reader_id=args.reader)
    scripted = list(args.collapse or [])
    response = service.query(session_id, args.text)
    while response["status"] == "collapse_required":
        if scripted:
            response = service.choose_collapse(session_id, scripted.pop(0))
        elif args.auto_collapse:
            response = service.choose_collapse(session_id, "auto")
        else:
            _print_results(response, args.json)
            return 2
    _print_results(response, args.json)
    for facet in args.refine or []:
        response = service.refine(session_id, facet)
        while response["status"] == "collapse_required":
            if scripted:
                response = service.choose_collapse(session_id, scripted.pop(0))
            elif args.auto_collapse:
                response = service.choose_collapse(session_id, "auto")
            else:
                _print_results(response, args.json)
                return 2
        print(f"--- refined to facet {facet!r} ---")
        _print_results(response, args.json)
    return 0


def cmd_eval(args) -> int:
    service = _make_service(args)
    with open(args.judgments, encoding="utf-8") as handle:
        judgments = parse_judgments(handle.read())
    report = service.evaluate(judgments)
    if args.json:
        print(json.dumps(report, indent=2))
        return 0
    for row in report["queries"]:
        print(f"{row['query']}\tP={row['precision']:.3f}\tR={row['recall']:.3f}")
    print(f"macro precision\t{report['macro_precision']:.3f}")
    print(f"macro recall\t{report['macro_recall']:.3f}")
    return 0


def cmd_stats(args) -> int:
    with open(args.log, encoding="utf-8") as handle:
        entries = parse_query_log(handle.read())
    snapshot = None
    if args.corpus:
        service = _make_service(args)
        snapshot = service.snapshot()
    result = stats(entries, snapshot)
    if args.json:
        print(json.dumps(result.as_dict(), indent=2))
    else:
        print(result.text_summary())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="folksearch")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, need_corpus=True):
        p.add_argument("--corpus", required=need_corpus, help="contributions TSV file")
        p.add_argument("--taxonomy", help="taxonomy TSV file (default: bundled)")

    p = sub.add_parser("ingest", help="build and describe a snapshot")
    add_common(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("serve", help="run the HTTP API")
    add_common(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("query", help="one-shot headless dialogue")
    add_common(p)
    p.add_argument("text", help="query text")
    p.add_argument("--reader", default="reader")
    p.add_argument("--refine", action="append", metavar="FACET",
                   help="facet refinement applied after the query (repeatable)")
    p.add_argument("--auto-collapse", action="store_true",
                   help="resolve collapse choices by top score")
    p.add_argument("--collapse", action="append", metavar="OPTION",
                   help="scripted collapse choice (repeatable, consumed in order)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("eval", help="precision/recall against a judgments file")
    add_common(p)
    p.add_argument("--judgments", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("stats", help="aggregates over a JSONL query log")
    p.add_argument("--log", required=True)
    p.add_argument("--corpus", help="optional corpus for lattice-size stats")
    p.add_argument("--taxonomy", help="taxonomy TSV file (default: bundled)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FolksearchError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
