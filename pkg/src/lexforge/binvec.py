"""Segment-occupancy bit vectors and their mutual-information scoring."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from lexforge.anchors import Segmentation
from lexforge.corpus import PositionVector
from lexforge.errors import DimensionError, UndefinedScoreError
from lexforge.lexicon import SECONDARY, Candidate, LexiconEntry


@dataclass(frozen=True, eq=False)
class BinaryVector:
    word: str
    bits: np.ndarray  # bool, one entry per segment

    @property
    def length(self) -> int:
        return int(self.bits.shape[0])

    @property
    def ones(self) -> int:
        return int(self.bits.sum())

    def segments(self) -> list:
        return np.flatnonzero(self.bits).tolist()

    def __eq__(self, other):
        return (
            isinstance(other, BinaryVector)
            and self.word == other.word
            and np.array_equal(self.bits, other.bits)
        )


@dataclass(frozen=True)
class PairScore:
    m: float
    t: float


def binary_vector(p: PositionVector, seg: Segmentation, side: str) -> BinaryVector:
    cuts = np.asarray(seg.cuts(side), dtype=np.int64)
    pos = np.asarray(p.positions, dtype=np.int64)
    if pos.size and (pos.min() < 0 or pos.max() >= seg.length(side)):
        raise IndexError(f"{p.word!r} has an offset outside the {side} text")
    bits = np.zeros(seg.segment_count, dtype=bool)
    bits[np.searchsorted(cuts, pos, side="left")] = True
    return BinaryVector(p.word, bits)


def _counts(a: BinaryVector, b: BinaryVector):
    if a.length != b.length:
        raise DimensionError(f"vector lengths differ: {a.length} vs {b.length}")
    overlap = int(np.count_nonzero(a.bits & b.bits))
    return overlap, a.ones, b.ones, a.length


def _mi(o, na, nb, L):
    if o == 0:
        return -math.inf
    return math.log2(o * L / (na * nb))


def _t(o, na, nb, L):
    if o == 0:
        raise UndefinedScoreError("t-score undefined for vectors with no shared segment")
    joint = o / L
    return (joint - (na / L) * (nb / L)) / math.sqrt(joint / L)


def mutual_info(a: BinaryVector, b: BinaryVector) -> float:
    """log2 of joint over independent segment-occupancy probability; -inf when disjoint."""
    return _mi(*_counts(a, b))


def t_score(a: BinaryVector, b: BinaryVector) -> float:
    return _t(*_counts(a, b))


def pair_score(a: BinaryVector, b: BinaryVector) -> PairScore:
    o, na, nb, L = _counts(a, b)
    return PairScore(_mi(o, na, nb, L), _t(o, na, nb, L) if o else math.nan)


def _stack(vectors: dict):
    words = sorted(vectors)
    if not words:
        return words, np.zeros((0, 0), dtype=np.float32)
    mat = np.vstack([vectors[w].bits for w in words]).astype(np.float32)
    return words, mat


def select_secondary(source_vectors: dict, target_vectors: dict, t_threshold: float = 1.65,
                     top_n: int = 1, exclude=()) -> list:
    """All-pairs MI ranking gated by the t-score.

    For each source word (except those in ``exclude``), keep up to
    ``top_n`` targets with ``t > t_threshold``, ordered by descending
    mutual information, then descending t, then target string.
    """
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    excluded = set(exclude)
    s_words, S = _stack({w: v for w, v in source_vectors.items() if w not in excluded})
    t_words, T = _stack(target_vectors)
    if not s_words or not t_words:
        return []
    if S.shape[1] != T.shape[1]:
        raise DimensionError(f"vector lengths differ: {S.shape[1]} vs {T.shape[1]}")
    L = S.shape[1]
    # float32 matmul of 0/1 is exact for counts below 2**24
    overlap = (S @ T.T).astype(np.int64)
    na = S.sum(axis=1).astype(np.int64)[:, None]
    nb = T.sum(axis=1).astype(np.int64)[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        joint = overlap / L
        t = (joint - (na / L) * (nb / L)) / np.sqrt(joint / L)
    # loose vector gate; the exact comparison happens on the scalar scores below
    passing = (overlap > 0) & (t > t_threshold - 1e-9)

    entries = []
    for r, s in enumerate(s_words):
        cols = np.flatnonzero(passing[r])
        if cols.size == 0:
            continue
        # recompute with the scalar path so stored scores match mutual_info/t_score exactly
        scored = []
        for c in cols.tolist():
            o, a, b = int(overlap[r, c]), int(na[r, 0]), int(nb[0, c])
            tv = _t(o, a, b, L)
            if tv > t_threshold:
                scored.append((-_mi(o, a, b, L), -tv, t_words[c]))
        if not scored:
            continue
        scored.sort()
        cands = tuple(
            Candidate(tw, -nm, k, -nt) for k, (nm, nt, tw) in enumerate(scored[:top_n], 1)
        )
        entries.append(LexiconEntry(s, cands, SECONDARY))
    return entries
