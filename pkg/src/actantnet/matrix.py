"""Incidence and whole co-occurrence matrices.

The incidence matrix is the binary documents x actants table: one row
per tweet, one column per vocabulary entry in class-major order, cell
1 iff the tweet contains the actant (set semantics; for author columns,
iff the tweet's author is that actant). Multiplying it with its
transpose yields the square co-occurrence matrix whose diagonal equals
document frequency; the cross-class blocks off the diagonal are the
classic 2-mode matrices, the same-class blocks the co-word / co-actor
matrices.

All counting is exact integer arithmetic. Storage is sparse: only the
upper triangle (i <= j) of nonzero cells, sorted row-major.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .corpus import Corpus
from .errors import DomainError
from .freq import AUTHOR, MARKERS, Vocabulary, VocabEntry
from .tokenizer import DEFAULT_OPTIONS, TokenizerOptions, extract_actants


@dataclass
class IncidenceMatrix:
    """Sparse binary documents x actants matrix (CSR-like)."""

    row_ids: list[str]
    cols: list[VocabEntry]
    indptr: np.ndarray  # int64, len n_rows + 1
    indices: np.ndarray  # int64, sorted within each row
    block_map: dict[str, tuple[int, int]]

    @property
    def n_rows(self) -> int:
        return len(self.row_ids)

    @property
    def n_cols(self) -> int:
        return len(self.cols)

    def row(self, d: int) -> np.ndarray:
        return self.indices[self.indptr[d] : self.indptr[d + 1]]

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.n_rows, self.n_cols), dtype=np.int64)
        for d in range(self.n_rows):
            dense[d, self.row(d)] = 1
        return dense


def build_incidence(
    corpus: Corpus,
    vocab: Vocabulary,
    opts: TokenizerOptions = DEFAULT_OPTIONS,
    include_authors: bool = False,
    threads: int = 1,
) -> IncidenceMatrix:
    """Build the binary incidence matrix over the vocabulary.

    Author columns are used only when ``include_authors`` is set. Rows
    without any vocabulary actant are retained (all-zero), preserving
    row indexing. The result is independent of ``threads``.
    """
    if len(vocab) == 0:
        raise ValueError("vocabulary must be non-empty")
    cols = [e for e in vocab if include_authors or e.cls != AUTHOR]
    index = {(e.cls, e.canonical): j for j, e in enumerate(cols)}
    token_classes = frozenset(e.cls for e in cols if e.cls != AUTHOR)
    use_authors = include_authors and any(e.cls == AUTHOR for e in cols)

    def scan(tweets) -> list[list[int]]:
        rows = []
        for t in tweets:
            js: list[int] = []
            if token_classes:
                for key in extract_actants(t, opts, token_classes):
                    j = index.get(key)
                    if j is not None:
                        js.append(j)
            if use_authors and t.author:
                j = index.get((AUTHOR, t.author))
                if j is not None:
                    js.append(j)
            js.sort()
            rows.append(js)
        return rows

    if threads <= 1 or corpus.n < 2:
        row_lists = scan(corpus.tweets)
    else:
        bounds = [corpus.n * k // threads for k in range(threads + 1)]
        shards = [corpus.tweets[bounds[k] : bounds[k + 1]] for k in range(threads)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(scan, shards))
        row_lists = [row for part in parts for row in part]

    indptr = np.zeros(len(row_lists) + 1, dtype=np.int64)
    for d, js in enumerate(row_lists):
        indptr[d + 1] = indptr[d] + len(js)
    indices = np.fromiter(
        (j for js in row_lists for j in js), dtype=np.int64, count=int(indptr[-1])
    )

    block_map: dict[str, tuple[int, int]] = {}
    for j, e in enumerate(cols):
        if e.cls not in block_map:
            block_map[e.cls] = (j, j + 1)
        else:
            start, _ = block_map[e.cls]
            block_map[e.cls] = (start, j + 1)

    return IncidenceMatrix([t.id for t in corpus], cols, indptr, indices, block_map)


@dataclass
class CooccurrenceMatrix:
    """Sparse symmetric co-occurrence counts; upper triangle stored."""

    cols: list[VocabEntry]
    block_map: dict[str, tuple[int, int]]
    ii: np.ndarray  # int64, i <= j
    jj: np.ndarray
    values: np.ndarray  # positive int64 counts
    _keys: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self._keys is None:
            self._keys = self.ii * len(self.cols) + self.jj

    @property
    def n(self) -> int:
        return len(self.cols)

    def value(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        key = i * self.n + j
        pos = int(np.searchsorted(self._keys, key))
        if pos < len(self._keys) and self._keys[pos] == key:
            return int(self.values[pos])
        return 0

    def diagonal(self) -> np.ndarray:
        diag = np.zeros(self.n, dtype=np.int64)
        on_diag = self.ii == self.jj
        diag[self.ii[on_diag]] = self.values[on_diag]
        return diag

    def to_dict(self) -> dict[tuple[int, int], int]:
        return {
            (int(i), int(j)): int(v)
            for i, j, v in zip(self.ii, self.jj, self.values)
        }

    @property
    def nnz(self) -> int:
        return len(self.values)


def cooccurrence(inc: IncidenceMatrix, threads: int = 1) -> CooccurrenceMatrix:
    """Compute C = A^T A over the binary incidence matrix A.

    Per document, every pair of present columns (i <= j, including the
    diagonal) contributes one count; documents accumulate by integer
    addition, so sharding over rows cannot change the result.
    """
    ncols = inc.n_cols
    row_counts = np.diff(inc.indptr)
    pair_counts = row_counts * (row_counts + 1) // 2
    total = int(pair_counts.sum())
    keys = np.empty(total, dtype=np.int64)

    if threads <= 1 or inc.n_rows < 2:
        n = kernels.emit_pair_keys(inc.indptr, inc.indices, ncols, keys)
        assert n == total
    else:
        offsets = np.zeros(inc.n_rows + 1, dtype=np.int64)
        np.cumsum(pair_counts, out=offsets[1:])
        bounds = [inc.n_rows * k // threads for k in range(threads + 1)]

        def work(k: int) -> None:
            lo, hi = bounds[k], bounds[k + 1]
            sub_ptr = (inc.indptr[lo : hi + 1] - inc.indptr[lo]).astype(np.int64)
            sub_idx = inc.indices[inc.indptr[lo] : inc.indptr[hi]]
            kernels.emit_pair_keys(
                sub_ptr, sub_idx, ncols, keys[offsets[lo] : offsets[hi]]
            )

        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, range(threads)))

    uniq, counts = np.unique(keys, return_counts=True)
    ii = uniq // ncols
    jj = uniq % ncols
    return CooccurrenceMatrix(
        inc.cols, dict(inc.block_map), ii, jj, counts.astype(np.int64), uniq
    )


@dataclass
class Block:
    """Rectangular class block of a co-occurrence matrix."""

    row_class: str
    col_class: str
    row_entries: list[VocabEntry]
    col_entries: list[VocabEntry]
    ri: np.ndarray  # local row indices, sorted row-major with ci
    ci: np.ndarray
    values: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.row_entries), len(self.col_entries))

    def to_dict(self) -> dict[tuple[int, int], int]:
        return {
            (int(r), int(c)): int(v)
            for r, c, v in zip(self.ri, self.ci, self.values)
        }


def extract_block(C: CooccurrenceMatrix, row_class: str, col_class: str) -> Block:
    """Exact submatrix of C for the two class index ranges.

    ``extract_block(C, hashtag, mention)`` is the 2-mode affiliation
    matrix; a class against itself yields the co-occurrence block
    including the document-frequency diagonal.
    """
    for cls in (row_class, col_class):
        if cls not in C.block_map:
            raise DomainError(f"class {cls!r} not present in the matrix")
    rs, re_ = C.block_map[row_class]
    cs, ce = C.block_map[col_class]

    in_rows = (C.ii >= rs) & (C.ii < re_)
    in_cols = (C.jj >= cs) & (C.jj < ce)
    fwd = in_rows & in_cols
    parts_r = [C.ii[fwd] - rs]
    parts_c = [C.jj[fwd] - cs]
    parts_v = [C.values[fwd]]
    # mirrored entries from the upper-triangular storage
    swapped = (C.jj >= rs) & (C.jj < re_) & (C.ii >= cs) & (C.ii < ce)
    if row_class == col_class:
        swapped &= C.ii != C.jj  # don't duplicate the diagonal
    parts_r.append(C.jj[swapped] - rs)
    parts_c.append(C.ii[swapped] - cs)
    parts_v.append(C.values[swapped])

    ri = np.concatenate(parts_r)
    ci = np.concatenate(parts_c)
    vv = np.concatenate(parts_v)
    order = np.argsort(ri * (ce - cs) + ci, kind="stable")
    return Block(
        row_class,
        col_class,
        C.cols[rs:re_],
        C.cols[cs:ce],
        ri[order],
        ci[order],
        vv[order],
    )


def _label(entry: VocabEntry) -> str:
    return MARKERS[entry.cls] + entry.canonical


def dump_cooccurrence(C: CooccurrenceMatrix, sink) -> int:
    """Coordinate-list dump ``row_label<TAB>col_label<TAB>count`` of the
    stored upper triangle, sorted row-major; for diffing against
    oracles. Labels are marker + canonical. Returns the line count."""
    lines = 0
    for i, j, v in zip(C.ii, C.jj, C.values):
        sink.write(f"{_label(C.cols[int(i)])}\t{_label(C.cols[int(j)])}\t{int(v)}\n")
        lines += 1
    return lines
