"""actantnet: actor-topic network extraction from tweet corpora.

Pipeline: load a delimited tweet export, tokenize into typed actants
(hashtags, mentions, words), count document frequencies, build the
binary incidence matrix and its whole co-occurrence matrix, derive
weighted actant graphs (whole-matrix, 2-mode, or 3-mode with authors),
cluster, lay out, and export to Pajek / VOSviewer / CSV / SVG.
"""

from .cluster import cluster, modularity
from .corpus import (
    Corpus,
    CorpusFilter,
    SchemaMap,
    Tweet,
    concat_corpora,
    filter_corpus,
    load_corpus,
    write_corpus,
)
from .errors import (
    ActantNetError,
    ConfigError,
    CorpusError,
    DomainError,
    SchemaError,
)
from .export import (
    SvgStyle,
    parse_pajek,
    render_svg,
    write_edgelist_csv,
    write_pajek,
    write_vos,
)
from .freq import (
    AUTHOR,
    FrequencyTable,
    Vocabulary,
    VocabEntry,
    count_frequencies,
    select_vocabulary,
    write_wordfrq,
)
from .graph import (
    ActantGraph,
    ComparisonReport,
    GraphNode,
    bipartite_graph,
    compare_modes,
    connected_components,
    largest_component,
    to_graph,
)
from .layout import compute_stress, layout, layout_components
from .matrix import (
    Block,
    CooccurrenceMatrix,
    IncidenceMatrix,
    build_incidence,
    cooccurrence,
    dump_cooccurrence,
    extract_block,
)
from .pipeline import PipelineConfig, RunReport, author_subset, run_pipeline
from .tokenizer import (
    HASHTAG,
    MENTION,
    URL,
    WORD,
    Token,
    TokenizerOptions,
    extract_actants,
    tokenize,
)

__version__ = "0.1.0"
