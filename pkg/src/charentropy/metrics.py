"""Character-level statistics: entropy ladder, bigram matrices, coverage.

All statistics are computed over a :class:`CharStream`: the document's words
joined by the boundary symbol ``#``, with one leading and one trailing ``#``.
That construction counts every word-initial bigram (``#x``) and word-final
bigram (``x#``) exactly once, and makes ``##`` structurally impossible.

Conventions, applied uniformly and worth stating once:

* Character tokens are counted with one boundary per word, i.e. over the
  ``len(stream) - 1`` adjacent-pair observations. Concretely this is the
  distribution of *successor* positions: every character of the stream
  except the leading ``#``. For ``#aab#`` that gives ``a:2 b:1 #:1``.
* ``h1`` is the entropy of that distribution (boundary included) and ``h2``
  is the entropy of the successor conditioned on the current character, so
  ``h2 <= h1`` holds exactly, not just asymptotically.
* ``charset_size`` counts the alphabet without the boundary; ``h0`` is the
  log2 of the alphabet size *plus one* for the boundary, so that
  ``h1 <= h0`` is likewise exact.
* Logs are base 2; empty cells contribute zero.
* Sums use ``math.fsum``, which is order-independent, so statistics are
  bit-for-bit invariant under any relabeling of the alphabet.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyStreamError
from .ingest import LongTable

BOUNDARY = "#"

HEATMAP_MODES = ("conditional", "weighted", "entropy_contribution")


@dataclass(frozen=True, slots=True)
class CharStream:
    """A boundary-delimited character sequence plus its letter alphabet."""

    symbols: str
    alphabet: frozenset[str]

    def __post_init__(self) -> None:
        s = self.symbols
        if len(s) < 2:
            raise ValueError("stream must hold at least one word")
        if s[0] != BOUNDARY or s[-1] != BOUNDARY:
            raise ValueError("stream must begin and end with the boundary")
        if BOUNDARY * 2 in s:
            raise ValueError("stream contains consecutive boundaries")
        if BOUNDARY in self.alphabet:
            raise ValueError("alphabet must not contain the boundary symbol")
        stray = set(s) - self.alphabet - {BOUNDARY}
        if stray:
            raise ValueError(
                f"stream symbols {sorted(stray)!r} missing from alphabet")

    def words(self) -> list[str]:
        return [w for w in self.symbols.split(BOUNDARY) if w]


def stream_from_words(words, alphabet=None) -> CharStream:
    """``[ab, c] -> '#ab#c#'``. Alphabet defaults to the characters seen."""
    words = list(words)
    if not words:
        raise EmptyStreamError("no words to stream")
    joined = BOUNDARY + BOUNDARY.join(words) + BOUNDARY
    if alphabet is None:
        alphabet = frozenset("".join(words))
    return CharStream(symbols=joined, alphabet=frozenset(alphabet))


def to_stream(table: LongTable) -> CharStream:
    if not table.records:
        raise EmptyStreamError(
            f"document {table.source_id!r} has no words")
    return stream_from_words(table.words())


@dataclass(frozen=True, slots=True)
class BigramMatrix:
    """Adjacent-pair statistics over a stream.

    ``symbols`` is the row/column order (codepoint-sorted; the boundary
    sorts first). ``counts[i, j]`` is the number of times symbol j follows
    symbol i. ``joint`` is counts normalized by the total pair count;
    ``conditional`` rows are counts normalized by row sums (all-zero rows
    stay zero); ``weighted`` is the elementwise product of the two.
    """

    symbols: tuple[str, ...]
    counts: np.ndarray
    joint: np.ndarray
    conditional: np.ndarray
    weighted: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def index(self, symbol: str) -> int:
        return self.symbols.index(symbol)

    def pair_count(self, x: str, y: str) -> int:
        return int(self.counts[self.index(x), self.index(y)])


def pair_counts(stream: CharStream) -> tuple[tuple[str, ...], np.ndarray]:
    """Count matrix over codepoint-sorted symbols (boundary included)."""
    if len(stream.symbols) < 2:
        raise ValueError("need at least two symbols to form a bigram")
    symbols = tuple(sorted(stream.alphabet | {BOUNDARY}))
    code_of = {c: i for i, c in enumerate(symbols)}
    k = len(symbols)
    codes = np.fromiter(
        (code_of[c] for c in stream.symbols), dtype=np.int64,
        count=len(stream.symbols))
    flat = np.bincount(codes[:-1] * k + codes[1:], minlength=k * k)
    return symbols, flat.reshape(k, k)


def bigram_matrix(stream: CharStream) -> BigramMatrix:
    symbols, counts = pair_counts(stream)
    total = counts.sum()
    joint = counts / total
    row_sums = counts.sum(axis=1, keepdims=True)
    conditional = np.divide(
        counts, row_sums, out=np.zeros_like(joint), where=row_sums > 0)
    for arr in (counts, joint, conditional):
        arr.setflags(write=False)
    weighted = joint * conditional
    weighted.setflags(write=False)
    return BigramMatrix(symbols=symbols, counts=counts, joint=joint,
                        conditional=conditional, weighted=weighted)


def h2_from_counts(counts: np.ndarray) -> float:
    """Conditional entropy of the successor given the current symbol.

    Each occupied cell contributes ``(c/T) * log2(rowsum/c)``; the terms
    depend only on the count values, never on which symbol owns them, and
    fsum is order-independent, so any bijective relabeling reproduces the
    result exactly.
    """
    total = counts.sum()
    if total <= 0:
        raise ValueError("empty count matrix")
    t = float(total)
    row_sums = counts.sum(axis=1)
    rows, cols = np.nonzero(counts)
    return math.fsum(
        (c / t) * math.log2(r / c)
        for c, r in zip(counts[rows, cols].tolist(),
                        row_sums[rows].tolist()))


def h1_from_counts(counts: np.ndarray) -> float:
    """Entropy of the successor marginal (column sums / total)."""
    total = counts.sum()
    if total <= 0:
        raise ValueError("empty count matrix")
    t = float(total)
    col_sums = counts.sum(axis=0)
    return math.fsum(
        (c / t) * math.log2(t / c)
        for c in col_sums[col_sums > 0].tolist())


@dataclass(frozen=True, slots=True)
class EntropyReport:
    """The entropy ladder and size census for one document."""

    charset_size: int
    h0: float
    h1: float
    h2: float
    token_count: int
    word_token_count: int
    word_type_count: int

    def as_dict(self) -> dict:
        return {
            "charset_size": self.charset_size,
            "h0": self.h0,
            "h1": self.h1,
            "h2": self.h2,
            "token_count": self.token_count,
            "word_token_count": self.word_token_count,
            "word_type_count": self.word_type_count,
        }


def entropy_report(stream: CharStream) -> EntropyReport:
    _, counts = pair_counts(stream)
    words = stream.words()
    charset = len(stream.alphabet)
    return EntropyReport(
        charset_size=charset,
        h0=math.log2(charset + 1),
        h1=h1_from_counts(counts),
        h2=h2_from_counts(counts),
        token_count=int(counts.sum()),
        word_token_count=len(words),
        word_type_count=len(set(words)),
    )


@dataclass(frozen=True, slots=True)
class CoverageReport:
    """Bigrams whose successor is near-forced, and how much text they cover.

    ``qualifying_bigrams`` lists ``(x, y, conditional_prob, token_share)``
    for every bigram type with conditional probability strictly above the
    threshold, ordered by descending conditional probability (ties by the
    pair's codepoints). ``token_share`` is the bigram's joint probability;
    ``word_final_share`` sums the shares of qualifying bigrams that end a
    word.
    """

    threshold: float
    qualifying_bigrams: tuple[tuple[str, str, float, float], ...]
    total_share: float
    word_final_share: float

    def as_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "qualifying_bigrams": [
                {"x": x, "y": y, "conditional": c, "token_share": s}
                for x, y, c, s in self.qualifying_bigrams
            ],
            "total_share": self.total_share,
            "word_final_share": self.word_final_share,
        }


def coverage_report(matrix: BigramMatrix, threshold: float = 0.5) -> CoverageReport:
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must be within [0, 1], got {threshold}")
    found = []
    rows, cols = np.nonzero(matrix.conditional > threshold)
    for i, j in zip(rows.tolist(), cols.tolist()):
        found.append((
            matrix.symbols[i], matrix.symbols[j],
            float(matrix.conditional[i, j]), float(matrix.joint[i, j]),
        ))
    found.sort(key=lambda t: (-t[2], t[0], t[1]))
    return CoverageReport(
        threshold=threshold,
        qualifying_bigrams=tuple(found),
        total_share=math.fsum(s for _, _, _, s in found),
        word_final_share=math.fsum(
            s for _, y, _, s in found if y == BOUNDARY),
    )


def entropy_contribution(matrix: BigramMatrix) -> np.ndarray:
    """Per-cell share of h2: ``p(xy) * -log2 p(y|x)``; the cells sum to h2."""
    out = np.zeros_like(matrix.joint)
    rows, cols = np.nonzero(matrix.counts)
    for i, j in zip(rows.tolist(), cols.tolist()):
        out[i, j] = matrix.joint[i, j] * -math.log2(matrix.conditional[i, j])
    return out


def heatmap_export(matrix: BigramMatrix, mode: str) -> str:
    """Render one matrix view as CSV with symbol headers on both axes."""
    if mode == "conditional":
        grid = matrix.conditional
    elif mode == "weighted":
        grid = matrix.weighted
    elif mode == "entropy_contribution":
        grid = entropy_contribution(matrix)
    else:
        raise ValueError(
            f"unknown heatmap mode {mode!r}; expected one of {HEATMAP_MODES}")
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([""] + list(matrix.symbols))
    for i, sym in enumerate(matrix.symbols):
        writer.writerow([sym] + [f"{v:.12g}" for v in grid[i]])
    return out.getvalue()
