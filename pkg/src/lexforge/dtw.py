"""Dynamic time warping of difference vectors, with path reconstruction."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numba import njit

from lexforge.errors import DimensionError, MissingVectorError
from lexforge.lexicon import PRIMARY, Candidate, LexiconEntry
from lexforge.posvec import DiffVector


@dataclass(frozen=True)
class DtwResult:
    """Outcome of one DTW match.

    ``path`` holds 1-based cells ``(i, j)``: cell ``i`` of the first vector
    is the gap ending at its ``i``-th occurrence (0-based position index
    ``i``), which is how path cells map back to token offsets.  ``scale``
    is the mean gap of the first vector; dividing by it makes costs of
    frequent and rare words comparable.
    """

    raw_cost: float
    path: tuple
    scale: float = 1.0

    @property
    def normalized_cost(self) -> float:
        return self.raw_cost / len(self.path)

    @property
    def relative_cost(self) -> float:
        return self.normalized_cost / self.scale


def _values(v) -> np.ndarray:
    vals = v.values if isinstance(v, DiffVector) else v
    return np.asarray(vals, dtype=np.float64)


def _band_limits(n, m, band):
    lo = np.zeros(n, dtype=np.int64)
    hi = np.full(n, m, dtype=np.int64)
    if band is None or n == 1:
        return lo, hi
    slope = (m - 1) / (n - 1)
    radius = max(band, slope, 1.0)
    for i in range(n):
        center = i * slope
        lo[i] = max(0, math.ceil(center - radius))
        hi[i] = min(m - 1, math.floor(center + radius)) + 1
    return lo, hi


@njit(cache=True, nogil=True)
def _dtw_core(a, b, lo, hi):
    n = a.shape[0]
    m = b.shape[0]
    acc = np.full((n, m), np.inf)
    back = np.zeros((n, m), dtype=np.uint8)
    for i in range(n):
        ai = a[i]
        for j in range(lo[i], hi[i]):
            cost = abs(ai - b[j])
            if i == 0:
                if j == 0:
                    acc[0, 0] = cost
                else:
                    acc[0, j] = cost + acc[0, j - 1]
                    back[0, j] = 2
                continue
            best = acc[i - 1, j]
            move = 1
            if j > 0:
                d = acc[i - 1, j - 1]
                if d <= best:
                    best = d
                    move = 0
                left = acc[i, j - 1]
                if left < best:
                    best = left
                    move = 2
            acc[i, j] = cost + best
            back[i, j] = move

    path = np.empty((n + m - 1, 2), dtype=np.int64)
    k = 0
    i = n - 1
    j = m - 1
    while True:
        path[k, 0] = i + 1
        path[k, 1] = j + 1
        k += 1
        if i == 0 and j == 0:
            break
        if i == 0:
            j -= 1
        elif back[i, j] == 0:
            i -= 1
            j -= 1
        elif back[i, j] == 1:
            i -= 1
        else:
            j -= 1
    return acc[n - 1, m - 1], path[:k][::-1]


def dtw_match(v1, v2, band: Optional[float] = None) -> DtwResult:
    """Minimum-cost monotone alignment of two gap sequences.

    The local cost of cell (i, j) is ``|v1[i] - v2[j]|``; each cell may be
    entered from its diagonal, upper or left neighbour at no extra charge,
    so insertions and deletions are free apart from the cells they visit.
    Ties prefer the diagonal, then advancing ``i``, then advancing ``j``.

    Args:
        v1, v2: :class:`DiffVector` or plain sequences of numbers.
        band: optional Sakoe-Chiba radius (cells) around the stretched
            diagonal. ``None`` searches the full matrix.
    """
    a = _values(v1)
    b = _values(v2)
    n, m = a.shape[0], b.shape[0]
    if n == 0 or m == 0:
        raise DimensionError(f"cannot warp empty vectors (dims {n}, {m})")
    lo, hi = _band_limits(n, m, band)
    raw, path = _dtw_core(a, b, lo, hi)
    if math.isinf(raw):
        raise DimensionError(f"band {band} leaves no path through a {n}x{m} matrix")
    return DtwResult(float(raw), tuple(map(tuple, path.tolist())), float(a.mean()))


def _match_chunk(args):
    jobs, band = args
    return [dtw_match(a, b, band) for a, b in jobs]


def score_pairs(
    pairs: Sequence[tuple],
    source: dict,
    target: dict,
    band: Optional[float] = None,
    workers: int = 1,
) -> list:
    """DTW-match every candidate pair, preserving input order.

    Raises:
        MissingVectorError: a pair names a word absent from its map.
    """
    jobs = []
    for s, t in pairs:
        if s not in source:
            raise MissingVectorError(s, "source")
        if t not in target:
            raise MissingVectorError(t, "target")
        jobs.append((source[s].values, target[t].values))

    if workers <= 1 or len(jobs) < 2 * workers:
        results = [dtw_match(a, b, band) for a, b in jobs]
    else:
        size = math.ceil(len(jobs) / (workers * 4))
        chunks = [(jobs[k : k + size], band) for k in range(0, len(jobs), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = [r for chunk in pool.map(_match_chunk, chunks) for r in chunk]
    return list(zip(pairs, results))


def select_primary(scored: Sequence[tuple], threshold: Optional[float] = None, top_n: int = 1,
                   relative_threshold: Optional[float] = None) -> list:
    """Threshold DTW scores into primary lexicon entries.

    For each source word keep up to ``top_n`` targets whose normalized cost
    is at most ``threshold`` (tokens per path cell) and whose relative cost
    is at most ``relative_threshold``, cheapest first by normalized cost
    (ties: raw cost, then target).  At least one bound must be given.
    Entries come back sorted by source word.
    """
    if threshold is None and relative_threshold is None:
        raise ValueError("give threshold or relative_threshold")
    for bound in (threshold, relative_threshold):
        if bound is not None and bound <= 0:
            raise ValueError("thresholds must be positive")
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    by_source = {}
    for (s, t), res in scored:
        if threshold is not None and res.normalized_cost > threshold:
            continue
        if relative_threshold is None or res.relative_cost <= relative_threshold:
            by_source.setdefault(s, []).append((res.normalized_cost, res.raw_cost, t))
    entries = []
    for s in sorted(by_source):
        ranked = sorted(by_source[s])[:top_n]
        cands = tuple(Candidate(t, cost, k) for k, (cost, _, t) in enumerate(ranked, 1))
        entries.append(LexiconEntry(s, cands, PRIMARY))
    return entries
