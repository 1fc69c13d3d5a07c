"""Independent brute-force reference implementations used by the tests.

Everything here is deliberately written with different machinery than the
library (dicts and plain loops instead of numpy; no shared helpers) so that
agreement between the two is meaningful.
"""

from __future__ import annotations

import math

BOUNDARY = "#"


def stream_of(words):
    return BOUNDARY + BOUNDARY.join(words) + BOUNDARY


def pair_tally(stream: str) -> dict[tuple[str, str], int]:
    tally: dict[tuple[str, str], int] = {}
    for a, b in zip(stream, stream[1:]):
        tally[(a, b)] = tally.get((a, b), 0) + 1
    return tally


def joint_probs(stream: str) -> dict[tuple[str, str], float]:
    tally = pair_tally(stream)
    total = len(stream) - 1
    return {pair: n / total for pair, n in tally.items()}


def successor_counts(stream: str) -> dict[str, int]:
    counts: dict[str, int] = {}
    for ch in stream[1:]:
        counts[ch] = counts.get(ch, 0) + 1
    return counts


def h1_oracle(stream: str) -> float:
    counts = successor_counts(stream)
    total = len(stream) - 1
    return -sum((n / total) * math.log2(n / total) for n in counts.values())


def h2_oracle(stream: str) -> float:
    tally = pair_tally(stream)
    total = len(stream) - 1
    row_totals: dict[str, int] = {}
    for (a, _), n in tally.items():
        row_totals[a] = row_totals.get(a, 0) + n
    h = 0.0
    for (a, _), n in tally.items():
        p_pair = n / total
        p_cond = n / row_totals[a]
        h -= p_pair * math.log2(p_cond)
    return h


def coverage_oracle(stream: str, threshold: float = 0.5):
    """(pairs above threshold, total joint share, word-final joint share)."""
    tally = pair_tally(stream)
    total = len(stream) - 1
    row_totals: dict[str, int] = {}
    for (a, _), n in tally.items():
        row_totals[a] = row_totals.get(a, 0) + n
    hits = []
    for (a, b), n in tally.items():
        if n / row_totals[a] > threshold:
            hits.append((a, b, n / row_totals[a], n / total))
    share = sum(s for _, _, _, s in hits)
    final = sum(s for _, b, _, s in hits if b == BOUNDARY)
    return hits, share, final


def sukhotin_oracle(stream: str, include_space: bool):
    """Classical vowel detection, implemented over nested dicts."""
    symbols: list[str] = []
    for ch in stream:
        if ch == BOUNDARY and not include_space:
            continue
        if ch not in symbols:
            symbols.append(ch)
    adj: dict[str, dict[str, int]] = {a: {b: 0 for b in symbols}
                                      for a in symbols}
    for a, b in zip(stream, stream[1:]):
        if a == b:
            continue
        if not include_space and BOUNDARY in (a, b):
            continue
        adj[a][b] += 1
        adj[b][a] += 1
    sums = {s: sum(adj[s].values()) for s in symbols}
    remaining = list(symbols)
    vowels = []
    while remaining:
        best = remaining[0]
        for s in remaining[1:]:
            if sums[s] > sums[best]:
                best = s
        if sums[best] <= 0:
            break
        vowels.append(best)
        remaining.remove(best)
        for s in remaining:
            sums[s] -= 2 * adj[best][s]
    return vowels
