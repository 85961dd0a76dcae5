"""Per-class document-frequency tables and thresholded vocabularies.

The table plays the role of the classic word-frequency listing: one
entry per ``(class, canonical)`` actant with the number of tweets
containing it (document frequency), the raw token count, and an elected
display label (the most frequent surface form, ties broken
lexicographically). Because the listing keeps the ``#``/``@`` markers
on the surface forms, a plain byte sort puts all hashtags first,
followed by all usernames, then ordinary words.

Counting is shard-parallelizable: shards merge by integer addition, so
the result is independent of tweet processing order.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Mapping

from . import tokenizer
from .corpus import Corpus
from .tokenizer import DEFAULT_OPTIONS, TokenizerOptions

AUTHOR = "author"

#: class-major ordering used for vocabularies and matrix blocks
CLASS_ORDER = (tokenizer.HASHTAG, tokenizer.MENTION, AUTHOR, tokenizer.WORD)
_CLASS_RANK = {c: i for i, c in enumerate(CLASS_ORDER)}

#: display-label markers per class (authors get ``&``: no Twitter meaning)
MARKERS = {tokenizer.HASHTAG: "#", tokenizer.MENTION: "@", AUTHOR: "&", tokenizer.WORD: ""}

Key = tuple[str, str]


def class_rank(cls: str) -> int:
    if cls not in _CLASS_RANK:
        raise ValueError(f"unknown actant class {cls!r}")
    return _CLASS_RANK[cls]


@dataclass(frozen=True, slots=True)
class FreqEntry:
    doc_frequency: int
    occurrence_total: int
    display: str


class FrequencyTable:
    """Mapping ``(class, canonical) -> FreqEntry`` plus merge support."""

    def __init__(self, n_docs: int = 0):
        self.n_docs = n_docs
        self.doc_freq: dict[Key, int] = {}
        self.occurrences: dict[Key, int] = {}
        self.surface_counts: dict[Key, Counter] = {}

    def __len__(self) -> int:
        return len(self.doc_freq)

    def __contains__(self, key: Key) -> bool:
        return key in self.doc_freq

    def keys(self):
        return self.doc_freq.keys()

    def display(self, key: Key) -> str:
        """Elected label: most frequent surface form, ties broken by the
        lexicographically smallest surface."""
        counts = self.surface_counts[key]
        return min(counts, key=lambda s: (-counts[s], s))

    def entry(self, key: Key) -> FreqEntry:
        return FreqEntry(self.doc_freq[key], self.occurrences[key], self.display(key))

    def items(self):
        for key in self.doc_freq:
            yield key, self.entry(key)

    def class_size(self, cls: str) -> int:
        return sum(1 for c, _ in self.doc_freq if c == cls)

    def merge(self, other: "FrequencyTable") -> "FrequencyTable":
        """Combine two shard tables; counts add, labels re-elected."""
        out = FrequencyTable(self.n_docs + other.n_docs)
        for src in (self, other):
            for key, df in src.doc_freq.items():
                out.doc_freq[key] = out.doc_freq.get(key, 0) + df
                out.occurrences[key] = out.occurrences.get(key, 0) + src.occurrences[key]
                if key in out.surface_counts:
                    out.surface_counts[key].update(src.surface_counts[key])
                else:
                    out.surface_counts[key] = Counter(src.surface_counts[key])
        return out


def _count_shard(tweets, opts: TokenizerOptions, token_classes, count_authors: bool):
    table = FrequencyTable(len(tweets))
    doc_freq = table.doc_freq
    occurrences = table.occurrences
    surface_counts = table.surface_counts
    for tweet in tweets:
        seen = set()
        if token_classes:
            for cls, canonical, surface, _s, _e in tokenizer.iter_tokens(tweet.text, opts):
                if cls not in token_classes:
                    continue
                key = (cls, canonical)
                occurrences[key] = occurrences.get(key, 0) + 1
                try:
                    surface_counts[key][surface] += 1
                except KeyError:
                    surface_counts[key] = Counter((surface,))
                seen.add(key)
        if count_authors and tweet.author:
            key = (AUTHOR, tweet.author)
            occurrences[key] = occurrences.get(key, 0) + 1
            if key not in surface_counts:
                surface_counts[key] = Counter(("&" + tweet.author,))
            else:
                surface_counts[key]["&" + tweet.author] += 1
            seen.add(key)
        for key in seen:
            doc_freq[key] = doc_freq.get(key, 0) + 1
    return table


def count_frequencies(
    corpus: Corpus,
    opts: TokenizerOptions = DEFAULT_OPTIONS,
    classes: Iterable[str] = (tokenizer.HASHTAG, tokenizer.MENTION),
    threads: int = 1,
) -> FrequencyTable:
    """Count document frequencies for the requested actant classes.

    ``author`` counts come from the tweet author field, everything else
    from the token stream. The result is independent of ``threads``.
    """
    wanted = frozenset(classes)
    for cls in wanted:
        class_rank(cls)
    token_classes = wanted - {AUTHOR}
    count_authors = AUTHOR in wanted

    if threads <= 1 or corpus.n < 2:
        return _count_shard(corpus.tweets, opts, token_classes, count_authors)

    n = corpus.n
    bounds = [n * k // threads for k in range(threads + 1)]
    shards = [corpus.tweets[bounds[k] : bounds[k + 1]] for k in range(threads)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        partials = list(
            pool.map(lambda sh: _count_shard(sh, opts, token_classes, count_authors), shards)
        )
    table = partials[0]
    for part in partials[1:]:
        table = table.merge(part)
    return table


def write_wordfrq(table: FrequencyTable, sink) -> int:
    """Write the frequency listing: ``surface<TAB>doc_frequency`` lines
    sorted by the raw byte order of the marker-bearing surface form, so
    ``#...`` entries come first, then ``@...``, then plain words.
    Returns the number of lines written."""
    rows = [(table.display(key), df) for key, df in table.doc_freq.items()]
    rows.sort(key=lambda r: r[0].encode("utf-8"))
    for surface, df in rows:
        sink.write(f"{surface}\t{df}\n")
    return len(rows)


@dataclass(frozen=True, slots=True)
class VocabEntry:
    cls: str
    canonical: str
    display: str
    doc_frequency: int


class Vocabulary:
    """Thresholded actant list in class-major order (hashtag, mention,
    author, word), descending document frequency, then canonical."""

    def __init__(self, entries: Iterable[VocabEntry], thresholds: Mapping[str, int]):
        self.entries: list[VocabEntry] = list(entries)
        self.thresholds = dict(thresholds)
        self._index: dict[Key, int] = {
            (e.cls, e.canonical): i for i, e in enumerate(self.entries)
        }
        if len(self._index) != len(self.entries):
            raise ValueError("duplicate (class, canonical) in vocabulary")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i: int) -> VocabEntry:
        return self.entries[i]

    def index_of(self, cls: str, canonical: str) -> int | None:
        return self._index.get((cls, canonical))

    def class_ranges(self) -> dict[str, tuple[int, int]]:
        """Contiguous [start, stop) index range per class present."""
        ranges: dict[str, tuple[int, int]] = {}
        for i, e in enumerate(self.entries):
            if e.cls not in ranges:
                ranges[e.cls] = (i, i + 1)
            else:
                start, _ = ranges[e.cls]
                ranges[e.cls] = (start, i + 1)
        return ranges


def select_vocabulary(table: FrequencyTable, thresholds: Mapping[str, int]) -> Vocabulary:
    """Keep the entries meeting their class threshold.

    Only classes listed in ``thresholds`` are selected; thresholds must
    be >= 1. Raising a threshold never adds members.
    """
    for cls, t in thresholds.items():
        class_rank(cls)
        if t < 1:
            raise ValueError(f"threshold for {cls} must be >= 1, got {t}")
    picked = [
        (key, df)
        for key, df in table.doc_freq.items()
        if key[0] in thresholds and df >= thresholds[key[0]]
    ]
    picked.sort(key=lambda kd: (_CLASS_RANK[kd[0][0]], -kd[1], kd[0][1]))
    entries = [
        VocabEntry(cls, canonical, table.display((cls, canonical)), df)
        for (cls, canonical), df in picked
    ]
    return Vocabulary(entries, thresholds)
