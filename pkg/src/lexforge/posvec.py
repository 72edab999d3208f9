"""Positional difference vectors and the cheap filters run before DTW."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from lexforge.corpus import PositionVector
from lexforge.errors import InsufficientFrequencyError


@dataclass(frozen=True)
class DiffVector:
    """Gaps between consecutive occurrences of a word.

    ``start`` (first occurrence) and ``text_length`` are kept so the
    original positions can be rebuilt and the start-point filter can
    compare relative offsets across texts of different length.
    """

    word: str
    values: tuple
    start: int = 0
    text_length: int = 0

    @property
    def dim(self) -> int:
        return len(self.values)

    @property
    def count(self) -> int:
        return len(self.values) + 1

    def positions(self) -> list:
        out = [self.start]
        for gap in self.values:
            out.append(out[-1] + gap)
        return out


@dataclass(frozen=True)
class VectorStats:
    mean: float
    std: float


@dataclass(frozen=True)
class PrefilterConfig:
    min_frequency: int = 10
    max_freq_ratio: float = 2.0
    max_start_offset_ratio: float = 0.3
    # absolute bound in tokens
    euclid_threshold: Optional[float] = None
    # bound as a fraction of the source word's mean gap
    euclid_relative: Optional[float] = None


def diff_vector(p: PositionVector, text_length: int = 0) -> DiffVector:
    if p.count < 2:
        raise InsufficientFrequencyError(
            f"{p.word!r} occurs {p.count} time(s); a difference vector needs at least 2"
        )
    pos = p.positions
    values = tuple(pos[k + 1] - pos[k] for k in range(len(pos) - 1))
    return DiffVector(p.word, values, pos[0], text_length)


def diff_vectors(vectors: dict, text_length: int, min_count: int = 2) -> dict:
    """Difference vectors for every word occurring at least ``min_count`` times."""
    min_count = max(min_count, 2)
    return {
        word: diff_vector(p, text_length)
        for word, p in vectors.items()
        if p.count >= min_count
    }


def stats(v: DiffVector) -> VectorStats:
    values = np.asarray(v.values, dtype=float)
    return VectorStats(float(values.mean()), float(values.std()))


def euclid_distance(a: VectorStats, b: VectorStats) -> float:
    return math.hypot(a.mean - b.mean, a.std - b.std)


def _columns(vectors: dict):
    words = sorted(vectors)
    vs = [vectors[w] for w in words]
    counts = np.array([v.count for v in vs], dtype=float)
    starts = np.array(
        [v.start / v.text_length if v.text_length else 0.0 for v in vs], dtype=float
    )
    st = [stats(v) for v in vs]
    means = np.array([s.mean for s in st], dtype=float)
    stds = np.array([s.std for s in st], dtype=float)
    return words, counts, starts, means, stds


def candidate_pairs(source: dict, target: dict, cfg: PrefilterConfig) -> list:
    """Word pairs that survive all four prefilter conditions.

    A pair is kept when both words occur at least ``min_frequency`` times,
    their counts differ by at most a factor ``max_freq_ratio``, their first
    occurrences (as fractions of text length) are within
    ``max_start_offset_ratio`` of each other, and the Euclidean distance of
    their (mean, std) gap statistics is at most ``euclid_threshold`` tokens
    and at most ``euclid_relative`` times the source word's mean gap
    (whichever of the two bounds are set).

    Returns:
        list of ``(source_word, target_word)`` in lexicographic order.
    """
    if cfg.euclid_threshold is None and cfg.euclid_relative is None:
        raise ValueError("set euclid_threshold or euclid_relative")
    if not source or not target:
        return []
    s_words, s_cnt, s_start, s_mean, s_std = _columns(source)
    t_words, t_cnt, t_start, t_mean, t_std = _columns(target)

    s_ok = s_cnt >= cfg.min_frequency
    t_ok = t_cnt >= cfg.min_frequency
    keep = s_ok[:, None] & t_ok[None, :]
    hi = np.maximum(s_cnt[:, None], t_cnt[None, :])
    lo = np.minimum(s_cnt[:, None], t_cnt[None, :])
    keep &= hi <= cfg.max_freq_ratio * lo
    keep &= np.abs(s_start[:, None] - t_start[None, :]) <= cfg.max_start_offset_ratio
    dist = np.hypot(s_mean[:, None] - t_mean[None, :], s_std[:, None] - t_std[None, :])
    if cfg.euclid_threshold is not None:
        keep &= dist <= cfg.euclid_threshold
    if cfg.euclid_relative is not None:
        keep &= dist <= cfg.euclid_relative * s_mean[:, None]

    rows, cols = np.nonzero(keep)
    return [(s_words[r], t_words[c]) for r, c in zip(rows.tolist(), cols.tolist())]
