"""Command-line interface.

Subcommands: embed (generate an embedding file), query (answer a composite
query against an embedding), validate (parse-check an ontology), serve (run
the HTTP API). Exit codes: 0 ok, 1 usage, 2 parse/validation, 3 runtime.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algebra import FuzzyConfig
from .embedding import AlphaParams, generate
from .errors import FuzzyvisError
from .ontology import compute_metadata, parse_json, parse_obo
from .query import answer, parse_expression
from .store import build_index, export_embedding, import_embedding

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_RUNTIME = 3


class _ArgumentParser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; this tool reserves 2 for data errors.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load_graph(path: str, fmt: str | None):
    text = Path(path).read_text(encoding="utf-8")
    if fmt is None:
        fmt = "json" if path.endswith(".json") else "obo"
    return parse_json(text) if fmt == "json" else parse_obo(text)


def _cmd_embed(args) -> int:
    graph = _load_graph(args.ontology, args.format)
    config = FuzzyConfig.from_name(args.family)
    params = AlphaParams(alpha=args.alpha, dim=args.dim, seed=args.seed)
    matrix = generate(graph, params, config, workers=args.workers)
    Path(args.out).write_text(export_embedding(matrix), encoding="utf-8")
    print(f"wrote {len(matrix)} vectors of dim {matrix.dim} to {args.out}")
    return EXIT_OK


def _cmd_query(args) -> int:
    graph = _load_graph(args.ontology, args.format)
    matrix = import_embedding(Path(args.embedding).read_text(encoding="utf-8"), graph)
    family = args.family or matrix.provenance.family
    config = FuzzyConfig.from_name(family)
    index = build_index(matrix)
    node = parse_expression(args.expr, graph)
    result = answer(node, index, matrix, config, args.k, graph)
    if args.json:
        payload = {
            "echo": result.echo,
            "zero_query": result.zero_query,
            "family": config.family.value,
            "hits": [{"id": h.concept, "score": h.score} for h in result.hits],
        }
        print(json.dumps(payload, indent=2))
    else:
        print(f"query: {result.echo}")
        if result.zero_query:
            print("note: query vector is all zeros; every score is 0 by convention")
        for rank, hit in enumerate(result.hits, start=1):
            label = graph.concepts[hit.concept].label
            print(f"{rank:3d}. {hit.score:.6f}  {hit.concept}  {label}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    graph = _load_graph(args.ontology, args.format)
    metadata = compute_metadata(graph)
    max_depth = max((m.depth for m in metadata.values()), default=0)
    print(
        f"ok: {len(graph)} concepts, {len(graph.roots)} roots, "
        f"{len(graph.leaves)} leaves, max depth {max_depth}"
    )
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app()
    if args.preload:
        _preload(app.state.registry, args.preload)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def _preload(registry, spec: str) -> None:
    from dataclasses import replace

    from .ontology import compute_metadata as _meta
    from .service import OntologyInstance

    parts = spec.split(":")
    if len(parts) != 3:
        raise FuzzyvisError(f"--preload expects ONTOLOGY:EMBEDDING:FAMILY, got {spec!r}")
    onto_path, emb_path, family = parts
    graph = _load_graph(onto_path, None)
    inst = OntologyInstance(
        instance_id=registry.next_token("inst"),
        name=Path(onto_path).stem,
        graph=graph,
        metadata=_meta(graph),
        config=FuzzyConfig.from_name(family),
    )
    if emb_path:
        matrix = import_embedding(Path(emb_path).read_text(encoding="utf-8"), graph)
        inst = replace(inst, matrix=matrix, index=build_index(matrix))
    registry.publish(inst)
    print(f"preloaded {inst.instance_id}: {len(graph)} concepts from {onto_path}")


def _build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="fuzzyvis", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    fmt_kwargs = dict(choices=["obo", "json"], default=None, help="ontology format (default: by extension)")

    p_embed = sub.add_parser("embed", help="generate an embedding file for an ontology")
    p_embed.add_argument("--ontology", required=True)
    p_embed.add_argument("--format", **fmt_kwargs)
    p_embed.add_argument("--alpha", type=float, required=True)
    p_embed.add_argument("--dim", type=int, required=True)
    p_embed.add_argument("--seed", type=int, required=True)
    p_embed.add_argument("--family", default="product", help="product|goedel|lukasiewicz")
    p_embed.add_argument("--workers", type=int, default=None)
    p_embed.add_argument("--out", required=True)
    p_embed.set_defaults(func=_cmd_embed)

    p_query = sub.add_parser("query", help="answer a composite-concept query")
    p_query.add_argument("--ontology", required=True)
    p_query.add_argument("--format", **fmt_kwargs)
    p_query.add_argument("--embedding", required=True)
    p_query.add_argument("--family", default=None, help="default: family recorded in the embedding file")
    p_query.add_argument("--expr", required=True)
    p_query.add_argument("--k", type=int, default=10)
    p_query.add_argument("--json", action="store_true")
    p_query.set_defaults(func=_cmd_query)

    p_validate = sub.add_parser("validate", help="parse and validate an ontology file")
    p_validate.add_argument("--ontology", required=True)
    p_validate.add_argument("--format", **fmt_kwargs)
    p_validate.set_defaults(func=_cmd_validate)

    p_serve = sub.add_parser("serve", help="run the HTTP API")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--preload", default=None, metavar="ONTOLOGY:EMBEDDING:FAMILY")
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FuzzyvisError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
