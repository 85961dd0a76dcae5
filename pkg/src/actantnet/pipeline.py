"""End-to-end pipeline: corpus -> tokens -> frequencies -> matrices ->
graph -> clustering/layout -> export, plus the key-value config format
the CLI reads. Identical config and input produce byte-identical
outputs and report.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import export
from .cluster import cluster
from .corpus import (
    Corpus,
    CorpusFilter,
    SchemaMap,
    filter_corpus,
    load_corpus,
    parse_point,
)
from .errors import ConfigError
from .freq import (
    AUTHOR,
    CLASS_ORDER,
    count_frequencies,
    select_vocabulary,
    write_wordfrq,
)
from .graph import bipartite_graph, compare_modes, largest_component, to_graph
from .layout import layout_components
from .matrix import build_incidence, cooccurrence, extract_block
from .tokenizer import HASHTAG, MENTION, TokenizerOptions

MODES = ("whole", "two-mode", "three-mode")
FORMATS = ("pajek", "vos", "csv", "svg")


@dataclass
class PipelineConfig:
    schema: SchemaMap = field(default_factory=lambda: SchemaMap(text="text"))
    encoding: str = "utf-8"
    corpus_filter: CorpusFilter = field(default_factory=CorpusFilter)
    tokenizer: TokenizerOptions = field(default_factory=TokenizerOptions)
    classes: tuple[str, ...] = (HASHTAG, MENTION)
    thresholds: dict[str, int] = field(default_factory=dict)  # filled per classes
    mode: str = "whole"
    merge_groups: dict[str, frozenset[str]] = field(default_factory=dict)
    restrict_to_groups: bool | None = None  # None: restrict only in three-mode
    min_edge_weight: int = 1
    seed: int = 0
    resolution: float = 1.0
    layout_iterations: int = 150
    layout_tolerance: float = 1e-6
    layout_max_nodes: int = 150
    label_min_frequency: int = 1
    formats: tuple[str, ...] = FORMATS
    out: str | None = None
    threads: int = 1

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        for cls in self.classes:
            if cls not in CLASS_ORDER:
                raise ConfigError(f"unknown class {cls!r}")
        for fmt in self.formats:
            if fmt not in FORMATS:
                raise ConfigError(f"unknown output format {fmt!r}")
        if self.min_edge_weight < 1:
            raise ConfigError("min_edge_weight must be >= 1")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        for cls, t in self.thresholds.items():
            if t < 1:
                raise ConfigError(f"threshold for {cls} must be >= 1")
        seen: set[str] = set()
        for label, handles in self.merge_groups.items():
            overlap = seen & set(handles)
            if overlap:
                raise ConfigError(
                    f"merge groups overlap on {sorted(overlap)} (group {label!r})"
                )
            seen |= set(handles)


def author_subset(
    corpus: Corpus,
    merge_groups: dict[str, frozenset[str]],
    restrict: bool = False,
) -> Corpus:
    """Rewrite the author of tweets whose handle is in a merge group to
    the group label; optionally drop all non-grouped tweets. Groups must
    be disjoint."""
    handle_to_group: dict[str, str] = {}
    for label, handles in merge_groups.items():
        for h in handles:
            h = h.lower().lstrip("@")
            if h in handle_to_group:
                raise ConfigError(f"handle {h!r} appears in more than one merge group")
            handle_to_group[h] = label.lower()
    tweets = []
    for t in corpus:
        group = handle_to_group.get(t.author)
        if group is not None:
            tweets.append(replace(t, author=group))
        elif not restrict:
            tweets.append(t)
    return Corpus(
        tweets,
        provenance=corpus.provenance + "|authors",
        malformed=corpus.malformed,
        bad_timestamps=corpus.bad_timestamps,
    )


@dataclass
class RunReport:
    """Per-stage counts of one pipeline run (no timings: the report is
    part of the deterministic output)."""

    n_loaded: int = 0
    malformed: int = 0
    n_filtered: int = 0
    unique: dict[str, int] = field(default_factory=dict)
    vocab: dict[str, int] = field(default_factory=dict)
    nodes: int = 0
    edges: int = 0
    lcc: int = 0
    two_mode_lcc: int | None = None
    lost_count: int | None = None
    clusters: int = 0
    outputs: list[str] = field(default_factory=list)

    def to_kv(self) -> str:
        lines = [
            f"n_loaded={self.n_loaded}",
            f"malformed={self.malformed}",
            f"n_filtered={self.n_filtered}",
        ]
        for cls in CLASS_ORDER:
            if cls in self.unique:
                lines.append(f"unique_{cls}={self.unique[cls]}")
        for cls in CLASS_ORDER:
            if cls in self.vocab:
                lines.append(f"vocab_{cls}={self.vocab[cls]}")
        lines += [f"nodes={self.nodes}", f"edges={self.edges}", f"lcc={self.lcc}"]
        if self.two_mode_lcc is not None:
            lines.append(f"two_mode_lcc={self.two_mode_lcc}")
        if self.lost_count is not None:
            lines.append(f"lost_count={self.lost_count}")
        lines.append(f"clusters={self.clusters}")
        lines.append("outputs=" + ";".join(self.outputs))
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        lines = [
            f"tweets loaded:     {self.n_loaded} ({self.malformed} malformed rows)",
            f"tweets after filters: {self.n_filtered}",
        ]
        for cls in CLASS_ORDER:
            if cls in self.unique:
                lines.append(
                    f"unique {cls}s: {self.unique[cls]}"
                    + (
                        f" ({self.vocab.get(cls, 0)} after threshold)"
                        if cls in self.vocab
                        else ""
                    )
                )
        lines.append(f"graph: {self.nodes} nodes, {self.edges} edges")
        lines.append(f"largest component: {self.lcc} actants")
        if self.two_mode_lcc is not None:
            lines.append(f"largest 2-mode component: {self.two_mode_lcc} actants")
        if self.lost_count is not None:
            lines.append(f"actants lost by the 2-mode view: {self.lost_count}")
        lines.append(f"clusters: {self.clusters}")
        if self.outputs:
            lines.append("outputs:")
            lines.extend(f"  {p}" for p in self.outputs)
        return "\n".join(lines) + "\n"


def _thresholds_for(config: PipelineConfig, classes: tuple[str, ...]) -> dict[str, int]:
    return {cls: config.thresholds.get(cls, 1) for cls in classes}


@contextmanager
def _stage(name: str):
    """Prefix escaping errors with the pipeline stage they came from,
    preserving the exception type (exit codes depend on it)."""
    try:
        yield
    except Exception as exc:
        if exc.args and isinstance(exc.args[0], str):
            exc.args = (f"[{name}] {exc.args[0]}",) + exc.args[1:]
        else:
            exc.args = (f"[{name}]",) + exc.args
        raise


def run_pipeline(config: PipelineConfig, source) -> RunReport:
    """Execute corpus -> tokenizer -> freq -> matrix -> graph -> export.

    Returns the run report; when ``config.out`` is set, writes the
    report files and (for non-empty graphs) the requested formats.
    Errors propagate with the failing stage prefixed to the message.
    """
    config.validate()
    report = RunReport()

    with _stage("corpus"):
        corpus = load_corpus(source, config.schema, encoding=config.encoding)
        report.n_loaded = corpus.n
        report.malformed = corpus.malformed

        corpus = filter_corpus(corpus, config.corpus_filter)
        if config.merge_groups:
            restrict = config.restrict_to_groups
            if restrict is None:
                restrict = config.mode == "three-mode"
            corpus = author_subset(corpus, config.merge_groups, restrict=restrict)
        report.n_filtered = corpus.n

    classes = tuple(config.classes)
    if config.mode == "three-mode" and AUTHOR not in classes:
        classes = classes + (AUTHOR,)

    with _stage("freq"):
        table = count_frequencies(
            corpus, config.tokenizer, classes=classes, threads=config.threads
        )
        for cls in classes:
            report.unique[cls] = table.class_size(cls)

        vocab = select_vocabulary(table, _thresholds_for(config, classes))
        for cls in classes:
            report.vocab[cls] = sum(1 for e in vocab if e.cls == cls)

    out_paths: list[str] = []

    def finish() -> RunReport:
        with _stage("export"):
            if config.out:
                _write_report_files(config.out, report, out_paths)
        report.outputs = out_paths
        return report

    if len(vocab) == 0:
        return finish()

    with _stage("matrix"):
        inc = build_incidence(
            corpus,
            vocab,
            config.tokenizer,
            include_authors=(config.mode == "three-mode"),
            threads=config.threads,
        )
        C = cooccurrence(inc, threads=config.threads)

    with _stage("graph"):
        whole = to_graph(C, config.min_edge_weight)
        if config.mode == "two-mode":
            if HASHTAG not in C.block_map or MENTION not in C.block_map:
                raise ConfigError("two-mode requires both hashtag and mention classes")
            block = extract_block(C, HASHTAG, MENTION)
            two_mode = bipartite_graph(block, config.min_edge_weight)
            # compare on the shared hashtag/mention universe
            whole_hm = to_graph(C, config.min_edge_weight, classes=(HASHTAG, MENTION))
            comparison = compare_modes(whole_hm, two_mode)
            report.two_mode_lcc = comparison.two_mode_lcc_size
            report.lost_count = comparison.lost_count
            graph = two_mode
        else:
            graph = whole

        report.nodes = graph.n_nodes
        report.edges = graph.n_edges
        report.lcc = largest_component(whole).n_nodes

    if graph.n_nodes:
        with _stage("cluster"):
            graph.partition = cluster(graph, config.resolution, config.seed)
            report.clusters = max(graph.partition.values())
        with _stage("layout"):
            graph.coords = layout_components(
                graph,
                iterations=config.layout_iterations,
                tolerance=config.layout_tolerance,
                seed=config.seed,
                max_kk_nodes=config.layout_max_nodes,
            )

    if config.out and graph.n_nodes:
        with _stage("export"):
            out_paths.extend(_write_outputs(config, table, graph))
    return finish()


def _write_report_files(out: str, report: RunReport, out_paths: list[str]) -> None:
    base = Path(out)
    base.parent.mkdir(parents=True, exist_ok=True)
    txt = base.with_name(base.name + ".report.txt")
    kv = base.with_name(base.name + ".report.kv")
    out_paths.append(str(txt))
    out_paths.append(str(kv))
    report.outputs = out_paths
    txt.write_text(report.to_text(), encoding="utf-8", newline="\n")
    kv.write_text(report.to_kv(), encoding="utf-8", newline="\n")


def _write_outputs(config: PipelineConfig, table, graph) -> list[str]:
    base = Path(config.out)
    base.parent.mkdir(parents=True, exist_ok=True)
    paths: list[str] = []

    def out_file(suffix: str) -> Path:
        p = base.with_name(base.name + suffix)
        paths.append(str(p))
        return p

    with out_file(".wordfrq.txt").open("w", encoding="utf-8", newline="\n") as f:
        write_wordfrq(table, f)
    if "pajek" in config.formats:
        with out_file(".net").open("w", encoding="utf-8", newline="\n") as f:
            export.write_pajek(graph, f)
    if "vos" in config.formats:
        with out_file(".vos-map.txt").open("w", encoding="utf-8", newline="\n") as m, \
                out_file(".vos-network.txt").open("w", encoding="utf-8", newline="\n") as n:
            export.write_vos(graph, m, n)
    if "csv" in config.formats:
        with out_file(".edges.csv").open("w", encoding="utf-8", newline="\n") as f:
            export.write_edgelist_csv(graph, f)
    if "svg" in config.formats:
        max_df = max(node.doc_frequency for node in graph.nodes)
        style = export.SvgStyle(
            node_scale=24.0 / max(max_df, 1),
            label_min_frequency=config.label_min_frequency,
        )
        out_file(".svg").write_text(
            export.render_svg(graph, style), encoding="utf-8", newline="\n"
        )
    return paths


# --- config file -----------------------------------------------------------
#
# Plain ``key = value`` lines, ``#`` comments. Author merge groups use
# ``group.<label> = handle1, handle2``. All keys are documented in the
# README; CLI flags override file values.

_BOOL = {"true": True, "1": True, "yes": True, "false": False, "0": False, "no": False}


def parse_kv_file(path) -> dict[str, str]:
    mapping: dict[str, str] = {}
    for lineno, raw in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        mapping[key.strip()] = value.strip()
    return mapping


def _parse_bool(key: str, value: str) -> bool:
    if value.lower() not in _BOOL:
        raise ConfigError(f"{key}: expected true/false, got {value!r}")
    return _BOOL[value.lower()]


def _parse_col(value: str) -> str | int:
    return int(value) if value.lstrip("-").isdigit() else value


def _parse_list(value: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in value.split(",") if v.strip())


def parse_delimiter(value: str) -> str:
    delim = {"tab": "\t", "\\t": "\t"}.get(value, value)
    if len(delim) != 1:
        raise ConfigError(f"delimiter must be one character, got {value!r}")
    return delim


def config_from_mapping(mapping: dict[str, str]) -> PipelineConfig:
    """Build a PipelineConfig from config-file keys (all optional)."""
    m = dict(mapping)
    groups: dict[str, frozenset[str]] = {}
    for key in list(m):
        if key.startswith("group."):
            label = key[len("group.") :]
            if not label:
                raise ConfigError("empty merge-group label")
            groups[label] = frozenset(h.lower().lstrip("@") for h in _parse_list(m.pop(key)))

    def take(key: str, default=None):
        return m.pop(key, default)

    def take_col(key: str):
        value = take(key)
        return _parse_col(value) if value is not None else None

    schema = SchemaMap(
        text=_parse_col(take("text_col", "text")),
        id=take_col("id_col"),
        timestamp=take_col("timestamp_col"),
        author=take_col("author_col"),
        language=take_col("language_col"),
        delimiter=parse_delimiter(take("delimiter", ",")),
        timestamp_format=take("timestamp_format", "%Y-%m-%d %H:%M:%S"),
        header=_parse_bool("header", take("header", "true")),
    )

    try:
        flt = CorpusFilter(
            languages=(
                frozenset(_parse_list(m.pop("languages"))) if "languages" in m else None
            ),
            date_from=parse_point(m.pop("from")) if "from" in m else None,
            date_to=parse_point(m.pop("to"), end_of_day=True) if "to" in m else None,
            authors=frozenset(_parse_list(m.pop("authors"))) if "authors" in m else None,
            query=m.pop("query", None),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    tok = TokenizerOptions(
        treat_rt_mention_as_address=_parse_bool(
            "rt_mentions", take("rt_mentions", "true")
        ),
        strip_location_at=_parse_bool(
            "strip_location_at", take("strip_location_at", "true")
        ),
        keep_urls=_parse_bool("keep_urls", take("keep_urls", "false")),
    )

    thresholds: dict[str, int] = {}
    for cls in CLASS_ORDER:
        key = f"min_{cls}"
        if key in m:
            try:
                thresholds[cls] = int(m.pop(key))
            except ValueError as exc:
                raise ConfigError(f"{key} must be an integer") from exc

    def take_int(key: str, default: int) -> int:
        value = take(key)
        if value is None:
            return default
        try:
            return int(value)
        except ValueError as exc:
            raise ConfigError(f"{key} must be an integer") from exc

    def take_float(key: str, default: float) -> float:
        value = take(key)
        if value is None:
            return default
        try:
            return float(value)
        except ValueError as exc:
            raise ConfigError(f"{key} must be a number") from exc

    restrict = take("restrict_to_groups")
    config = PipelineConfig(
        schema=schema,
        encoding=take("encoding", "utf-8"),
        corpus_filter=flt,
        tokenizer=tok,
        classes=_parse_list(take("classes", "hashtag,mention")),
        thresholds=thresholds,
        mode=take("mode", "whole"),
        merge_groups=groups,
        restrict_to_groups=(
            None if restrict is None else _parse_bool("restrict_to_groups", restrict)
        ),
        min_edge_weight=take_int("min_edge_weight", 1),
        seed=take_int("seed", 0),
        resolution=take_float("resolution", 1.0),
        layout_iterations=take_int("layout_iterations", 150),
        layout_tolerance=take_float("layout_tolerance", 1e-6),
        layout_max_nodes=take_int("layout_max_nodes", 150),
        label_min_frequency=take_int("label_min_frequency", 1),
        formats=_parse_list(take("formats", ",".join(FORMATS))),
        out=take("out"),
        threads=take_int("threads", 1),
    )
    if m:
        raise ConfigError(f"unknown config keys: {sorted(m)}")
    config.validate()
    return config
