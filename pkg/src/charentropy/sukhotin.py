"""Sukhotin's algorithm: split an alphabet into vowels and consonants.

The premise: in ordinary writing, vowels and consonants alternate far more
often than they cluster, so the symbol most often adjacent to others is
probably a vowel, and symbols frequently adjacent to *it* are probably not.

The classical procedure, run on a symmetric adjacency matrix with a forced
zero diagonal:

1. start each symbol's working sum at its adjacency row sum;
2. pick the symbol with the largest working sum, provided it is positive
   (ties break by first occurrence in the text) — call it a vowel;
3. for every remaining symbol c, subtract twice its adjacency count with
   the new vowel from c's working sum;
4. repeat until the largest remaining sum is not positive.

The boundary symbol can participate as an ordinary symbol
(``include_space=True``) — on alphabetic text it then tends to be picked
first, being adjacent to nearly everything — or be excluded, which drops
every word-edge adjacency.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ingest import LongTable
from .metrics import BOUNDARY, CharStream, to_stream


@dataclass(frozen=True, slots=True)
class AdjacencyMatrix:
    """Symmetric neighbour counts; symbols in first-occurrence order."""

    symbols: tuple[str, ...]
    counts: np.ndarray

    def __post_init__(self) -> None:
        c = self.counts
        if c.shape != (len(self.symbols), len(self.symbols)):
            raise ValueError("counts shape does not match symbols")
        if (np.diag(c) != 0).any():
            raise ValueError("adjacency diagonal must be zero")
        if (c != c.T).any():
            raise ValueError("adjacency matrix must be symmetric")


@dataclass(frozen=True, slots=True)
class SukhotinResult:
    vowels: tuple[str, ...]
    include_space: bool
    iterations: int
    final_sums: dict[str, int]

    def as_dict(self, *, diagnostics: bool = False) -> dict:
        out = {"include_space": self.include_space,
               "vowels": list(self.vowels)}
        if diagnostics:
            out["iterations"] = self.iterations
            out["final_sums"] = dict(self.final_sums)
        return out


def adjacency_matrix(stream: CharStream, include_space: bool) -> AdjacencyMatrix:
    """Count neighbour pairs; identical neighbours never hit the diagonal.

    With ``include_space=False``, pairs touching the boundary are dropped
    entirely, though letters appearing only at word edges keep a (zero)
    row so the symbol inventory still reflects the text.
    """
    symbols: list[str] = []
    index: dict[str, int] = {}
    for ch in stream.symbols:
        if ch == BOUNDARY and not include_space:
            continue
        if ch not in index:
            index[ch] = len(symbols)
            symbols.append(ch)
    counts = np.zeros((len(symbols), len(symbols)), dtype=np.int64)
    for a, b in zip(stream.symbols, stream.symbols[1:]):
        if a == b:
            continue
        if not include_space and BOUNDARY in (a, b):
            continue
        i, j = index[a], index[b]
        counts[i, j] += 1
        counts[j, i] += 1
    return AdjacencyMatrix(symbols=tuple(symbols), counts=counts)


def detect_from_adjacency(
    matrix: AdjacencyMatrix, include_space: bool) -> SukhotinResult:
    n = len(matrix.symbols)
    sums = matrix.counts.sum(axis=1).tolist()
    remaining = list(range(n))
    vowels: list[int] = []
    final: dict[int, int] = {}
    iterations = 0
    while remaining:
        iterations += 1
        best = max(remaining, key=lambda i: (sums[i], -i))
        if sums[best] <= 0:
            break
        vowels.append(best)
        remaining.remove(best)
        final[best] = sums[best]
        for i in remaining:
            sums[i] -= 2 * int(matrix.counts[best, i])
    for i in remaining:
        final[i] = sums[i]
    return SukhotinResult(
        vowels=tuple(matrix.symbols[i] for i in vowels),
        include_space=include_space,
        iterations=iterations,
        final_sums={matrix.symbols[i]: final[i] for i in range(n)},
    )


def detect_vowels(stream: CharStream, include_space: bool = False) -> SukhotinResult:
    return detect_from_adjacency(
        adjacency_matrix(stream, include_space), include_space)


def detect_on_document(
    table: LongTable, include_space: bool = False) -> SukhotinResult:
    return detect_vowels(to_stream(table), include_space)
