"""Command-line front end.

Subcommands mirror the pipeline stages (ingest, tokenize, freq, matrix,
graph, compare, layout, export) plus ``run`` for the config-driven
end-to-end workflow. Exit codes: 0 success, 1 runtime error, 2
usage/config error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import export as export_mod
from .cluster import cluster
from .corpus import filter_corpus, load_corpus, parse_point, write_corpus
from .errors import ActantNetError, ConfigError, SchemaError
from .freq import AUTHOR, CLASS_ORDER, count_frequencies, select_vocabulary, write_wordfrq
from .graph import bipartite_graph, compare_modes, largest_component, to_graph
from .layout import layout_components
from .matrix import build_incidence, cooccurrence, dump_cooccurrence, extract_block
from .pipeline import (
    MODES,
    PipelineConfig,
    config_from_mapping,
    parse_delimiter,
    parse_kv_file,
    run_pipeline,
)
from .tokenizer import HASHTAG, MENTION, tokenize


def _input_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("input", help="delimited input file")
    p.add_argument("--config", help="key-value config file")
    p.add_argument("--delimiter", help="field delimiter (default ,; 'tab' for TSV)")
    p.add_argument("--no-header", action="store_const", const=True, dest="no_header")
    p.add_argument("--encoding")
    p.add_argument("--text-col")
    p.add_argument("--id-col")
    p.add_argument("--timestamp-col")
    p.add_argument("--timestamp-format")
    p.add_argument("--author-col")
    p.add_argument("--language-col")
    p.add_argument("--lang", help="comma-separated language filter")
    p.add_argument("--from", dest="date_from", help="inclusive start date (YYYY-MM-DD)")
    p.add_argument("--to", dest="date_to", help="inclusive end date (YYYY-MM-DD)")
    p.add_argument("--authors", help="comma-separated author filter")
    p.add_argument("--query", help="substring text filter")
    p.add_argument("--threads", type=int)
    return p


def _tokenizer_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument(
        "--no-rt-mentions",
        action="store_const",
        const=True,
        help="do not count mentions inside RT @user: headers",
    )
    p.add_argument(
        "--keep-location-at",
        action="store_const",
        const=True,
        help="keep a bare @ (location 'at') as a word token",
    )
    p.add_argument(
        "--keep-urls", action="store_const", const=True, help="emit URL tokens"
    )
    return p


def _threshold_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--classes", help="comma-separated actant classes (default hashtag,mention)")
    p.add_argument("--min-hashtag", type=int)
    p.add_argument("--min-mention", type=int)
    p.add_argument("--min-author", type=int)
    p.add_argument("--min-word", type=int)
    return p


def _graph_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--min-edge-weight", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--resolution", type=float)
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="actantnet",
        description="Extract actor-topic networks from tweet corpora.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    inp = _input_parent()
    tok = _tokenizer_parent()
    thr = _threshold_parent()
    gra = _graph_parent()

    p = sub.add_parser("ingest", parents=[inp], help="normalize a corpus file")
    p.add_argument("--out", help="write canonical CSV here (default stdout)")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("tokenize", parents=[inp, tok], help="print typed tokens")
    p.add_argument("--show-spans", action="store_true", help="include byte spans")
    p.set_defaults(func=cmd_tokenize)

    p = sub.add_parser("freq", parents=[inp, tok, thr], help="frequency listing")
    p.add_argument("--out", help="write the wordfrq listing here (default stdout)")
    p.add_argument("--vocab-out", help="also write the thresholded vocabulary here")
    p.set_defaults(func=cmd_freq)

    p = sub.add_parser("matrix", parents=[inp, tok, thr], help="dump the co-occurrence matrix")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--out", help="write the coordinate-list dump here (default stdout)")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("graph", parents=[inp, tok, thr, gra], help="graph summary")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser(
        "compare", parents=[inp, tok, thr, gra], help="whole vs 2-mode comparison"
    )
    p.add_argument("--kv", action="store_true", help="machine-readable key-value output")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("layout", parents=[inp, tok, thr, gra], help="node coordinates")
    p.add_argument("--iterations", type=int)
    p.add_argument("--tolerance", type=float)
    p.set_defaults(func=cmd_layout)

    p = sub.add_parser("export", parents=[inp, tok, thr, gra], help="write network files")
    p.add_argument("--format", action="append", dest="formats", help="pajek|vos|csv|svg")
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("run", parents=[inp, tok, thr, gra], help="full pipeline")
    p.add_argument("--out", help="output path prefix")
    p.add_argument("--format", action="append", dest="formats")
    p.set_defaults(func=cmd_run)

    return parser


def _config_from_args(args) -> PipelineConfig:
    """Config file first, explicit CLI flags override."""
    mapping = parse_kv_file(args.config) if getattr(args, "config", None) else {}
    config = config_from_mapping(mapping)

    schema = config.schema
    if args.delimiter is not None:
        schema = replace(schema, delimiter=parse_delimiter(args.delimiter))
    if getattr(args, "no_header", None):
        schema = replace(schema, header=False)
    for field_name, flag in (
        ("text", "text_col"),
        ("id", "id_col"),
        ("timestamp", "timestamp_col"),
        ("author", "author_col"),
        ("language", "language_col"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            schema = replace(
                schema, **{field_name: int(value) if value.lstrip("-").isdigit() else value}
            )
    if getattr(args, "timestamp_format", None):
        schema = replace(schema, timestamp_format=args.timestamp_format)
    config.schema = schema

    flt = config.corpus_filter
    try:
        if args.lang is not None:
            flt = replace(flt, languages=frozenset(v.strip().lower() for v in args.lang.split(",")))
        if args.date_from is not None:
            flt = replace(flt, date_from=parse_point(args.date_from))
        if args.date_to is not None:
            flt = replace(flt, date_to=parse_point(args.date_to, end_of_day=True))
        if args.authors is not None:
            flt = replace(flt, authors=frozenset(v.strip() for v in args.authors.split(",")))
        if args.query is not None:
            flt = replace(flt, query=args.query)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    config.corpus_filter = flt

    tok = config.tokenizer
    if getattr(args, "no_rt_mentions", None):
        tok = replace(tok, treat_rt_mention_as_address=False)
    if getattr(args, "keep_location_at", None):
        tok = replace(tok, strip_location_at=False)
    if getattr(args, "keep_urls", None):
        tok = replace(tok, keep_urls=True)
    config.tokenizer = tok

    if getattr(args, "classes", None):
        config.classes = tuple(v.strip() for v in args.classes.split(","))
    for cls in CLASS_ORDER:
        value = getattr(args, f"min_{cls}", None)
        if value is not None:
            config.thresholds[cls] = value
    for attr in ("mode", "min_edge_weight", "seed", "resolution", "threads", "out"):
        value = getattr(args, attr, None)
        if value is not None:
            setattr(config, attr, value)
    if getattr(args, "formats", None):
        formats: list[str] = []
        for chunk in args.formats:
            formats.extend(v.strip() for v in chunk.split(","))
        config.formats = tuple(formats)
    if getattr(args, "encoding", None):
        config.encoding = args.encoding
    config.validate()
    return config


def _load_filtered(args, config: PipelineConfig):
    corpus = load_corpus(args.input, config.schema, encoding=config.encoding)
    return filter_corpus(corpus, config.corpus_filter)


def _build_vocab(config: PipelineConfig, corpus):
    classes = tuple(config.classes)
    if config.mode == "three-mode" and AUTHOR not in classes:
        classes = classes + (AUTHOR,)
    table = count_frequencies(corpus, config.tokenizer, classes=classes, threads=config.threads)
    thresholds = {cls: config.thresholds.get(cls, 1) for cls in classes}
    return table, select_vocabulary(table, thresholds)


def _build_graph(config: PipelineConfig, corpus):
    table, vocab = _build_vocab(config, corpus)
    if len(vocab) == 0:
        return table, None, None
    inc = build_incidence(
        corpus,
        vocab,
        config.tokenizer,
        include_authors=(config.mode == "three-mode"),
        threads=config.threads,
    )
    C = cooccurrence(inc, threads=config.threads)
    return table, vocab, C


def _out_stream(path: str | None):
    if path and path != "-":
        return open(path, "w", encoding="utf-8", newline="\n")
    return sys.stdout


def cmd_ingest(args) -> int:
    config = _config_from_args(args)
    corpus = _load_filtered(args, config)
    sink = _out_stream(getattr(args, "out", None))
    try:
        write_corpus(corpus, sink)
    finally:
        if sink is not sys.stdout:
            sink.close()
    print(
        f"loaded={corpus.n} malformed={corpus.malformed} bad_timestamps={corpus.bad_timestamps}",
        file=sys.stderr,
    )
    return 0


def cmd_tokenize(args) -> int:
    config = _config_from_args(args)
    corpus = _load_filtered(args, config)
    for tweet in corpus:
        for token in tokenize(tweet.text, config.tokenizer):
            if args.show_spans:
                print(f"{token.cls}\t{token.canonical}\t{token.span[0]}\t{token.span[1]}")
            else:
                print(f"{token.cls}\t{token.canonical}")
    return 0


def cmd_freq(args) -> int:
    config = _config_from_args(args)
    corpus = _load_filtered(args, config)
    table, vocab = _build_vocab(config, corpus)
    sink = _out_stream(getattr(args, "out", None))
    try:
        write_wordfrq(table, sink)
    finally:
        if sink is not sys.stdout:
            sink.close()
    if args.vocab_out:
        with open(args.vocab_out, "w", encoding="utf-8", newline="\n") as f:
            for e in vocab:
                f.write(f"{e.cls}\t{e.canonical}\t{e.display}\t{e.doc_frequency}\n")
    return 0


def cmd_matrix(args) -> int:
    config = _config_from_args(args)
    corpus = _load_filtered(args, config)
    _table, _vocab, C = _build_graph(config, corpus)
    sink = _out_stream(getattr(args, "out", None))
    try:
        if C is not None:
            dump_cooccurrence(C, sink)
    finally:
        if sink is not sys.stdout:
            sink.close()
    return 0


def _graph_from_args(args, config: PipelineConfig):
    corpus = _load_filtered(args, config)
    _table, _vocab, C = _build_graph(config, corpus)
    if C is None:
        return None
    whole = to_graph(C, config.min_edge_weight)
    if config.mode == "two-mode":
        block = extract_block(C, HASHTAG, MENTION)
        return bipartite_graph(block, config.min_edge_weight)
    return whole


def cmd_graph(args) -> int:
    config = _config_from_args(args)
    g = _graph_from_args(args, config)
    if g is None:
        print("nodes=0\nedges=0\nlcc=0")
        return 0
    print(f"nodes={g.n_nodes}")
    print(f"edges={g.n_edges}")
    print(f"lcc={largest_component(g).n_nodes}")
    return 0


def cmd_compare(args) -> int:
    config = _config_from_args(args)
    corpus = _load_filtered(args, config)
    _table, _vocab, C = _build_graph(config, corpus)
    if C is None:
        raise ActantNetError("empty vocabulary: nothing to compare")
    whole = to_graph(C, config.min_edge_weight, classes=(HASHTAG, MENTION))
    block = extract_block(C, HASHTAG, MENTION)
    two_mode = bipartite_graph(block, config.min_edge_weight)
    report = compare_modes(whole, two_mode)
    sys.stdout.write(report.to_kv() if args.kv else report.to_text())
    return 0


def cmd_layout(args) -> int:
    config = _config_from_args(args)
    g = _graph_from_args(args, config)
    if g is None:
        return 0
    g.partition = cluster(g, config.resolution, config.seed)
    coords = layout_components(
        g,
        iterations=args.iterations if args.iterations is not None else config.layout_iterations,
        tolerance=args.tolerance if args.tolerance is not None else config.layout_tolerance,
        seed=config.seed,
        max_kk_nodes=config.layout_max_nodes,
    )
    for i, node in enumerate(g.nodes):
        x, y = coords[i]
        print(f"{node.display}\t{x:.6f}\t{y:.6f}\t{g.partition[i]}")
    return 0


def cmd_export(args) -> int:
    config = _config_from_args(args)
    g = _graph_from_args(args, config)
    if g is None:
        raise ActantNetError("empty vocabulary: nothing to export")
    parent = Path(args.out).parent
    if str(parent):
        parent.mkdir(parents=True, exist_ok=True)
    g.partition = cluster(g, config.resolution, config.seed)
    g.coords = layout_components(
        g,
        iterations=config.layout_iterations,
        tolerance=config.layout_tolerance,
        seed=config.seed,
        max_kk_nodes=config.layout_max_nodes,
    )
    base = args.out
    if "pajek" in config.formats:
        with open(base + ".net", "w", encoding="utf-8", newline="\n") as f:
            export_mod.write_pajek(g, f)
    if "vos" in config.formats:
        with open(base + ".vos-map.txt", "w", encoding="utf-8", newline="\n") as m, open(
            base + ".vos-network.txt", "w", encoding="utf-8", newline="\n"
        ) as n:
            export_mod.write_vos(g, m, n)
    if "csv" in config.formats:
        with open(base + ".edges.csv", "w", encoding="utf-8", newline="\n") as f:
            export_mod.write_edgelist_csv(g, f)
    if "svg" in config.formats:
        max_df = max(node.doc_frequency for node in g.nodes)
        style = export_mod.SvgStyle(
            node_scale=24.0 / max(max_df, 1),
            label_min_frequency=config.label_min_frequency,
        )
        with open(base + ".svg", "w", encoding="utf-8", newline="\n") as f:
            f.write(export_mod.render_svg(g, style))
    return 0


def cmd_run(args) -> int:
    config = _config_from_args(args)
    report = run_pipeline(config, args.input)
    sys.stdout.write(report.to_text())
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except (ConfigError, SchemaError) as exc:
        print(f"actantnet: {exc}", file=sys.stderr)
        return 2
    except (ActantNetError, OSError, ValueError) as exc:
        print(f"actantnet: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
