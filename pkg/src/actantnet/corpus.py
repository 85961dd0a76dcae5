"""Loading and filtering of delimited tweet exports.

A corpus is an ordered, immutable sequence of tweets read from an
RFC-4180-style delimited file (quoted fields may contain the delimiter
and newlines). The column layout is user-declared through a
:class:`SchemaMap`; only the text column is mandatory. Missing columns
are synthesized: id = data row number, empty author/language, epoch
timestamp.
"""

from __future__ import annotations

import csv
import io
import logging
import re
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Iterable, Iterator

from .errors import CorpusError, SchemaError

log = logging.getLogger(__name__)

EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)

# control characters other than tab/newline are stripped from text at load
_CONTROL_RE = re.compile("[\x00-\x08\x0b-\x1f\x7f-\x9f]")

_FIELDS = ("id", "timestamp", "author", "language", "text")


@dataclass(frozen=True, slots=True)
class Tweet:
    """One corpus record. ``author`` is stored lowercase without the
    leading ``@``; ``language`` lowercase or empty; ``timestamp`` UTC."""

    id: str
    timestamp: datetime
    author: str
    language: str
    text: str


@dataclass(frozen=True)
class SchemaMap:
    """Column map for a delimited export.

    Each field holds a header name (str), a zero-based index (int), or
    None when the column is absent. Only ``text`` is required.
    """

    text: str | int
    id: str | int | None = None
    timestamp: str | int | None = None
    author: str | int | None = None
    language: str | int | None = None
    delimiter: str = ","
    timestamp_format: str = "%Y-%m-%d %H:%M:%S"
    header: bool = True


CANONICAL_SCHEMA = SchemaMap(
    text="text", id="id", timestamp="timestamp", author="author", language="language"
)


class Corpus:
    """Ordered, immutable-after-construction sequence of tweets."""

    def __init__(
        self,
        tweets: Iterable[Tweet],
        provenance: str = "",
        malformed: int = 0,
        bad_timestamps: int = 0,
    ):
        self.tweets: list[Tweet] = list(tweets)
        self.provenance = provenance
        self.malformed = malformed
        self.bad_timestamps = bad_timestamps

    @property
    def n(self) -> int:
        return len(self.tweets)

    def __len__(self) -> int:
        return len(self.tweets)

    def __iter__(self) -> Iterator[Tweet]:
        return iter(self.tweets)

    def __getitem__(self, i):
        return self.tweets[i]

    def __repr__(self) -> str:
        return f"Corpus(n={self.n}, provenance={self.provenance!r})"


@dataclass(frozen=True)
class CorpusFilter:
    """Conjunction of record-level criteria; None means "no constraint".

    The date range is inclusive on both ends. Tweets with an empty
    language never match a language filter. The text query is a
    case-insensitive substring match.
    """

    languages: frozenset[str] | None = None
    date_from: datetime | None = None
    date_to: datetime | None = None
    authors: frozenset[str] | None = None
    query: str | None = None


def _clean_text(raw: str) -> str:
    return _CONTROL_RE.sub("", raw)


def _clean_author(raw: str) -> str:
    return raw.strip().lstrip("@").lower()


def _resolve(field, header_index: dict[str, int] | None, name: str):
    """Turn a SchemaMap entry into a column index (or None)."""
    if field is None:
        return None
    if isinstance(field, int):
        if field < 0:
            raise SchemaError(f"{name} column index must be >= 0, got {field}")
        return field
    if header_index is None:
        raise SchemaError(
            f"{name} column given by name {field!r} but the input has no header"
        )
    if field not in header_index:
        raise SchemaError(f"{name} column {field!r} not found in header")
    return header_index[field]


def _open_text(source, encoding: str):
    """Accept a path, bytes, binary stream, or text stream."""
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding=encoding, newline=""), str(source)
    if isinstance(source, (bytes, bytearray)):
        return io.TextIOWrapper(io.BytesIO(source), encoding=encoding, newline=""), "<bytes>"
    if hasattr(source, "read"):
        probe = source.read(0)
        if isinstance(probe, bytes):
            return io.TextIOWrapper(source, encoding=encoding, newline=""), "<stream>"
        return source, "<stream>"
    raise SchemaError(f"unsupported corpus source: {type(source).__name__}")


def load_corpus(
    source,
    schema: SchemaMap,
    encoding: str = "utf-8",
    provenance: str | None = None,
) -> Corpus:
    """Load a delimited export into a :class:`Corpus`.

    One tweet per data row, in input order. Malformed rows (no text
    cell, or an empty id cell in a declared id column) are counted on
    the result and logged, never silently dropped. An unparseable
    timestamp is a record-level warning: the epoch is substituted and
    the row kept. Duplicate ids abort the load with :class:`CorpusError`.
    """
    stream, default_prov = _open_text(source, encoding)
    reader = csv.reader(stream, delimiter=schema.delimiter)

    header_index = None
    if schema.header:
        try:
            header_row = next(reader)
        except StopIteration:
            return Corpus([], provenance or default_prov)
        header_index = {name: i for i, name in enumerate(header_row)}

    col = {name: _resolve(getattr(schema, name), header_index, name) for name in _FIELDS}
    if col["text"] is None:
        raise SchemaError("text column is mandatory")

    tweets: list[Tweet] = []
    seen_ids: set[str] = set()
    malformed = 0
    bad_timestamps = 0
    row_no = 0
    for row in reader:
        if not row:
            continue
        row_no += 1

        def cell(idx):
            return row[idx] if idx is not None and idx < len(row) else None

        text = cell(col["text"])
        if text is None:
            malformed += 1
            log.warning("row %d: text cell missing, row skipped", row_no)
            continue

        if col["id"] is None:
            tid = str(row_no)
        else:
            tid = (cell(col["id"]) or "").strip()
            if not tid:
                malformed += 1
                log.warning("row %d: empty id cell, row skipped", row_no)
                continue
        if tid in seen_ids:
            raise CorpusError(f"duplicate tweet id {tid!r} at data row {row_no}")
        seen_ids.add(tid)

        ts = EPOCH
        raw_ts = cell(col["timestamp"])
        if raw_ts:
            try:
                ts = datetime.strptime(raw_ts, schema.timestamp_format)
                if ts.tzinfo is None:
                    ts = ts.replace(tzinfo=timezone.utc)
            except ValueError:
                bad_timestamps += 1
                log.warning(
                    "row %d: timestamp %r does not match %r, epoch substituted",
                    row_no,
                    raw_ts,
                    schema.timestamp_format,
                )

        tweets.append(
            Tweet(
                id=tid,
                timestamp=ts,
                author=_clean_author(cell(col["author"]) or ""),
                language=(cell(col["language"]) or "").strip().lower(),
                text=_clean_text(text),
            )
        )

    return Corpus(
        tweets,
        provenance=provenance or default_prov,
        malformed=malformed,
        bad_timestamps=bad_timestamps,
    )


def write_corpus(corpus: Corpus, sink, schema: SchemaMap = CANONICAL_SCHEMA) -> int:
    """Serialize a corpus back to the given schema; returns row count.

    Fields are emitted in canonical order (id, timestamp, author,
    language, text), restricted to the columns the schema declares.
    Round-trips byte-for-byte with :func:`load_corpus` for well-formed,
    already-canonical inputs written with minimal RFC-4180 quoting.
    """
    fields = [f for f in _FIELDS if getattr(schema, f) is not None]
    writer = csv.writer(sink, delimiter=schema.delimiter, lineterminator="\n")
    if schema.header:
        names = []
        for f in fields:
            spec = getattr(schema, f)
            names.append(spec if isinstance(spec, str) else f)
        writer.writerow(names)
    rows = 0
    for t in corpus:
        record = []
        for f in fields:
            if f == "timestamp":
                record.append(t.timestamp.strftime(schema.timestamp_format))
            else:
                record.append(getattr(t, f))
        writer.writerow(record)
        rows += 1
    return rows


def filter_corpus(corpus: Corpus, flt: CorpusFilter) -> Corpus:
    """Return the tweets satisfying every provided criterion, in order.

    Idempotent; an empty result is legal.
    """
    if flt.date_from and flt.date_to and flt.date_from > flt.date_to:
        raise ValueError("date range is not well-ordered")
    languages = frozenset(v.lower() for v in flt.languages) if flt.languages else None
    authors = frozenset(_clean_author(a) for a in flt.authors) if flt.authors else None
    query = flt.query.lower() if flt.query else None

    kept = []
    for t in corpus:
        if languages is not None and t.language not in languages:
            continue
        if flt.date_from is not None and t.timestamp < flt.date_from:
            continue
        if flt.date_to is not None and t.timestamp > flt.date_to:
            continue
        if authors is not None and t.author not in authors:
            continue
        if query is not None and query not in t.text.lower():
            continue
        kept.append(t)
    return Corpus(
        kept,
        provenance=corpus.provenance + "|filtered",
        malformed=corpus.malformed,
        bad_timestamps=corpus.bad_timestamps,
    )


def concat_corpora(parts: Iterable[Corpus]) -> Corpus:
    """Concatenate chunk-loaded corpora, re-checking id uniqueness."""
    tweets: list[Tweet] = []
    seen: set[str] = set()
    malformed = 0
    bad_ts = 0
    provs = []
    for part in parts:
        for t in part:
            if t.id in seen:
                raise CorpusError(f"duplicate tweet id {t.id!r} across chunks")
            seen.add(t.id)
            tweets.append(t)
        malformed += part.malformed
        bad_ts += part.bad_timestamps
        provs.append(part.provenance)
    return Corpus(tweets, "+".join(provs), malformed, bad_ts)


def parse_point(value: str, *, end_of_day: bool = False) -> datetime:
    """Parse a CLI date bound: ``YYYY-MM-DD`` or ``YYYY-MM-DD[ T]HH:MM:SS``.

    A date-only upper bound extends to 23:59:59 so inclusive day ranges
    ("20 to 22 June") cover the whole last day.
    """
    value = value.strip()
    for fmt in ("%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S"):
        try:
            return datetime.strptime(value, fmt).replace(tzinfo=timezone.utc)
        except ValueError:
            pass
    try:
        d = datetime.strptime(value, "%Y-%m-%d").replace(tzinfo=timezone.utc)
    except ValueError as exc:
        raise ValueError(f"cannot parse date {value!r}") from exc
    if end_of_day:
        d += timedelta(hours=23, minutes=59, seconds=59)
    return d
