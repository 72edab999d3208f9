"""Seeded generator of noisy parallel texts with planted translation pairs.

The target text is a piecewise-linear warp of the source: aligned pieces
are stretched by a random factor, each planted source noun occurrence is
echoed by its planted translation at the warped offset plus uniform jitter,
and one-sided noise blocks are spliced into either text.  Everything else
is Zipfian filler, so planted words are the only consistent signal.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

ALIGNED = "aligned"
SOURCE_NOISE = "source_noise"
TARGET_NOISE = "target_noise"

HIGH = "high"
LOW = "low"

_ONSETS = ["b", "c", "d", "f", "g", "h", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z",
           "br", "ch", "cr", "dr", "gr", "pl", "sh", "st", "th", "tr"]
_VOWELS = ["a", "e", "i", "o", "u", "ai", "ea", "io", "ou"]
_CODAS = ["", "", "", "n", "r", "l", "m", "x", "nd", "st"]
_FILLER_TAGS = ["DT", "IN", "VB", "VBD", "VBZ", "JJ", "RB", "CC", "PRP", "TO", "MD", "CD"]
_CJK_FIRST, _CJK_LAST = 0x4E00, 0x9FA5


@dataclass(frozen=True)
class Piece:
    kind: str
    src_start: int
    src_len: int
    tgt_start: int
    tgt_len: int


@dataclass(frozen=True)
class PlantedPair:
    source: str
    target: str
    kind: str
    count: int
    tag: str


@dataclass
class Fixture:
    source: list  # "surface/TAG" strings
    target: list  # bare target tokens
    pairs: list   # PlantedPair
    pieces: list  # Piece
    params: dict = field(default_factory=dict)

    @property
    def gold(self) -> dict:
        return {p.source: {p.target} for p in self.pairs}

    def gold_of(self, kind: str) -> dict:
        return {p.source: {p.target} for p in self.pairs if p.kind == kind}

    def true_target_offset(self, i: float) -> float:
        """Target offset the warp sends source offset ``i`` to (flat inside source noise)."""
        for pc in self.pieces:
            if pc.src_len and pc.src_start <= i < pc.src_start + pc.src_len:
                if pc.kind == ALIGNED:
                    return pc.tgt_start + (i - pc.src_start) * pc.tgt_len / pc.src_len
                return float(pc.tgt_start)
        return float(len(self.target))

    def true_source_offset(self, j: float) -> float:
        for pc in self.pieces:
            if pc.tgt_len and pc.tgt_start <= j < pc.tgt_start + pc.tgt_len:
                if pc.kind == ALIGNED:
                    return pc.src_start + (j - pc.tgt_start) * pc.src_len / pc.tgt_len
                return float(pc.src_start)
        return float(len(self.source))

    def distance_to_alignment(self, i: float, j: float) -> float:
        """Distance from ``(i, j)`` to the true alignment curve, measured along
        whichever axis is shorter (the curve has flat and vertical parts)."""
        return min(abs(j - self.true_target_offset(i)), abs(i - self.true_source_offset(j)))

    def write(self, out_dir) -> dict:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {
            "source": out / "source.txt",
            "target": out / "target.txt",
            "gold": out / "gold.tsv",
            "truth": out / "truth.json",
        }
        paths["source"].write_text(_lines(self.source), encoding="utf-8")
        paths["target"].write_text(_lines(self.target), encoding="utf-8")
        with open(paths["gold"], "w", encoding="utf-8") as fh:
            fh.write("# source\ttarget\tkind\tcount\n")
            for p in self.pairs:
                fh.write(f"{p.source}\t{p.target}\t{p.kind}\t{p.count}\n")
        truth = {"params": self.params, "pieces": [asdict(pc) for pc in self.pieces]}
        paths["truth"].write_text(json.dumps(truth, indent=1, sort_keys=True), encoding="utf-8")
        return paths


def _lines(tokens, per_line=20):
    rows = (" ".join(tokens[k : k + per_line]) for k in range(0, len(tokens), per_line))
    return "\n".join(rows) + "\n"


class _Words:
    def __init__(self, rng):
        self.rng = rng
        self.seen = set()

    def latin(self):
        while True:
            n = int(self.rng.integers(2, 4))
            w = "".join(
                self.rng.choice(_ONSETS) + self.rng.choice(_VOWELS) for _ in range(n)
            ) + self.rng.choice(_CODAS)
            if w not in self.seen:
                self.seen.add(w)
                return w

    def cjk(self):
        while True:
            n = int(self.rng.choice([1, 2, 2, 2, 3]))
            w = "".join(
                chr(int(c)) for c in self.rng.integers(_CJK_FIRST, _CJK_LAST + 1, size=n)
            )
            if w not in self.seen:
                self.seen.add(w)
                return w


def _zipf(rng, n_types, size, s=1.0):
    ranks = np.arange(1, n_types + 1, dtype=float)
    p = 1.0 / (ranks + 2.7) ** s
    return rng.choice(n_types, size=size, p=p / p.sum())


def _pieces(rng, tokens, noise_rate, piece_len, noise_len, ratio):
    src_noise = []
    budget = int(round(noise_rate * tokens))
    while budget > 0:
        n = min(budget, int(rng.integers(noise_len[0], noise_len[1] + 1)))
        src_noise.append(n)
        budget -= n
    aligned_src = tokens - sum(src_noise)
    aligned = []
    left = aligned_src
    while left > 0:
        n = min(left, int(rng.integers(piece_len[0], piece_len[1] + 1)))
        aligned.append(n)
        left -= n
    tgt_lens = [max(1, int(round(n * rng.uniform(*ratio)))) for n in aligned]
    tgt_noise = []
    budget = int(round(noise_rate * sum(tgt_lens)))
    while budget > 0:
        n = min(budget, int(rng.integers(noise_len[0], noise_len[1] + 1)))
        tgt_noise.append(n)
        budget -= n

    # noise blocks go into the gaps between aligned pieces, never before the first
    slots = [[] for _ in aligned]
    blocks = [(SOURCE_NOISE, n) for n in src_noise] + [(TARGET_NOISE, n) for n in tgt_noise]
    for kind, n in blocks:
        slots[int(rng.integers(0, len(aligned)))].append((kind, n))

    pieces = []
    s = t = 0
    for k, (n_src, n_tgt) in enumerate(zip(aligned, tgt_lens)):
        pieces.append(Piece(ALIGNED, s, n_src, t, n_tgt))
        s += n_src
        t += n_tgt
        for kind, n in slots[k]:
            if kind == SOURCE_NOISE:
                pieces.append(Piece(kind, s, n, t, 0))
                s += n
            else:
                pieces.append(Piece(kind, s, 0, t, n))
                t += n
    return pieces, s, t


def generate_fixture(
    seed: int = 42,
    tokens: int = 100_000,
    pairs: int = 200,
    low_pairs=None,
    jitter: int = 15,
    noise_rate: float = 0.05,
    high_count=(10, 40),
    low_count=(3, 6),
    distractor_rate: float = 0.12,
    distractor_types: int = 1500,
    source_filler_types: int = 800,
    target_filler_types: int = 3000,
    noise_word_rate: float = 0.01,
    tag_error_rate: float = 0.01,
    capitalize_rate: float = 0.03,
    piece_len=(500, 2500),
    noise_len=(50, 300),
    ratio=(0.85, 1.15),
) -> Fixture:
    """Build a :class:`Fixture`.

    ``pairs`` planted translations are split into high-frequency ones
    (counts drawn log-uniformly from ``high_count``) and ``low_pairs``
    low-frequency ones (uniform over ``low_count``); ``low_pairs`` defaults
    to a quarter of ``pairs``.
    """
    rng = np.random.default_rng(seed)
    n_low = pairs // 4 if low_pairs is None else low_pairs
    n_high = pairs - n_low
    if n_high < 0:
        raise ValueError("low_pairs exceeds pairs")
    words = _Words(rng)

    planted = []
    for k in range(pairs):
        kind = HIGH if k < n_high else LOW
        if kind == HIGH:
            lo, hi = high_count
            count = int(round(math.exp(rng.uniform(math.log(lo), math.log(hi + 0.5)))))
            count = min(max(count, lo), hi)
        else:
            count = int(rng.integers(low_count[0], low_count[1] + 1))
        roll = rng.random()
        base = words.latin()
        if roll < 0.25:
            surface, tag = base.capitalize(), "NNP"
        elif roll < 0.4:
            surface, tag = base + "s", "NNS"
        else:
            surface, tag = base, "NN"
        planted.append(PlantedPair(surface, words.cjk(), kind, count, tag))

    pieces, src_len, tgt_len = _pieces(rng, tokens, noise_rate, piece_len, noise_len, ratio)

    # --- source text
    order = rng.permutation(src_len)
    cursor = 0
    src = [None] * src_len
    occurrences = []  # (source offset, pair index)
    for idx, p in enumerate(planted):
        for pos in order[cursor : cursor + p.count].tolist():
            occurrences.append((pos, idx))
            surface, tag = p.source, p.tag
            if tag != "NNP" and rng.random() < capitalize_rate:
                surface = surface.capitalize()
            if rng.random() < tag_error_rate:
                tag = "JJ"
            src[pos] = f"{surface}/{tag}"
        cursor += p.count

    distractors = []
    for _ in range(distractor_types):
        w = words.latin()
        roll = rng.random()
        if roll < 0.2:
            distractors.append(f"{w.capitalize()}/NNP")
        elif roll < 0.35:
            distractors.append(f"{w}s/NNS")
        else:
            distractors.append(f"{w}/NN")
    fillers = [f"{words.latin()}/{rng.choice(_FILLER_TAGS)}" for _ in range(source_filler_types)]

    free = order[cursor:]
    n_distract = int(round(distractor_rate * src_len))
    for pos, d in zip(free[:n_distract].tolist(), _zipf(rng, distractor_types, n_distract).tolist()):
        src[pos] = distractors[d]
    rest = free[n_distract:]
    for pos, f in zip(rest.tolist(), _zipf(rng, source_filler_types, rest.size).tolist()):
        src[pos] = fillers[f]

    # --- target text
    tgt = [None] * tgt_len
    aligned = [pc for pc in pieces if pc.kind == ALIGNED]
    starts = [pc.src_start for pc in aligned]
    occurrences.sort()
    for pos, idx in occurrences:
        k = int(np.searchsorted(starts, pos, side="right")) - 1
        pc = aligned[k]
        if pos >= pc.src_start + pc.src_len:
            continue  # fell in a source-only noise block
        mapped = pc.tgt_start + (pos - pc.src_start) * pc.tgt_len / pc.src_len
        j = int(round(mapped)) + int(rng.integers(-jitter, jitter + 1))
        j = _nearest_free(tgt, min(max(j, 0), tgt_len - 1))
        if j is not None:
            tgt[j] = planted[idx].target

    targets = [p.target for p in planted]
    for pc in pieces:
        if pc.kind != TARGET_NOISE:
            continue
        for j in range(pc.tgt_start, pc.tgt_start + pc.tgt_len):
            if tgt[j] is None and rng.random() < noise_word_rate:
                tgt[j] = targets[int(rng.integers(0, len(targets)))]

    t_fillers = [words.cjk() for _ in range(target_filler_types)]
    empty = [j for j, tok in enumerate(tgt) if tok is None]
    for j, f in zip(empty, _zipf(rng, target_filler_types, len(empty)).tolist()):
        tgt[j] = t_fillers[f]

    params = {
        "seed": seed, "tokens": tokens, "pairs": pairs, "low_pairs": n_low,
        "jitter": jitter, "noise_rate": noise_rate, "source_len": src_len,
        "target_len": tgt_len,
    }
    return Fixture(src, tgt, planted, pieces, params)


def _nearest_free(slots, j):
    n = len(slots)
    for d in range(n):
        for cand in (j - d, j + d):
            if 0 <= cand < n and slots[cand] is None:
                return cand
    return None
