"""Anchor points from pooled DTW paths, and the segmentation they induce."""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

from lexforge.errors import AnchorOrderError


class PathPoint(NamedTuple):
    i: int  # source token offset
    j: int  # target token offset


@dataclass(frozen=True)
class AnchorConfig:
    """Keep-scan constants. ``None`` fields scale with the texts, see :meth:`resolve`."""

    slope_band: float = 0.1
    min_gap_source: Optional[int] = None
    max_jump_target: Optional[int] = None
    # extra allowed deviation per source token since the last kept point
    jump_growth: float = 0.1

    def resolve(self, source_len: int, target_len: int) -> "AnchorConfig":
        gap = self.min_gap_source
        if gap is None:
            gap = max(5, source_len // 500)
        jump = self.max_jump_target
        if jump is None:
            jump = max(1, target_len // 200)
        return AnchorConfig(self.slope_band, gap, jump, self.jump_growth)


@dataclass(frozen=True)
class AnchorSet:
    points: tuple

    @property
    def count(self) -> int:
        return len(self.points)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


def _gaps_agree(src, tgt, a: int, b: int, tol: float) -> bool:
    """Do the gaps entering and leaving occurrence ``a`` / ``b`` match?"""
    for da in (0, 1):
        x, y = a + da, b + da
        if not (0 < x < len(src) and 0 < y < len(tgt)):
            continue
        g1 = src[x] - src[x - 1]
        g2 = tgt[y] - tgt[y - 1]
        if abs(g1 - g2) > tol * max(g1, g2):
            return False
    return True


def collect_path_points(primary, results: dict, source_positions: dict, target_positions: dict,
                        ranks: int = 1, cell_tolerance: Optional[float] = None) -> list:
    """Map the warp-path cells of primary pairs back to token offsets.

    Args:
        primary: lexicon entries; candidates ranked deeper than ``ranks``
            are skipped.
        results: ``(source_word, target_word) -> DtwResult``.
        source_positions, target_positions: word -> PositionVector.
        cell_tolerance: if set, a cell is kept only when the gaps on both
            sides of its two occurrences differ by at most this fraction of
            the larger gap. Cells where the path stalls over an unmatched
            occurrence fail this and would otherwise pull anchors off track.

    Returns:
        The concatenated points of every pair, duplicates kept.
    """
    points = []
    for entry in primary:
        src = source_positions[entry.source_word].positions
        for cand in entry.candidates[:ranks]:
            tgt = target_positions[cand.target_word].positions
            res = results[(entry.source_word, cand.target_word)]
            for a, b in res.path:
                if cell_tolerance is None or _gaps_agree(src, tgt, a, b, cell_tolerance):
                    points.append(PathPoint(src[a], tgt[b]))
    return points


def filter_anchor_points(points: Iterable[PathPoint], cfg: AnchorConfig,
                         source_len: int, target_len: int) -> AnchorSet:
    """Greedy left-to-right scan keeping only reliable points.

    Points are visited in ``(i, j)`` order. A point is kept iff

    * it lies within ``slope_band * target_len`` of the straight line from
      ``(0, 0)`` to ``(source_len, target_len)``,
    * ``i >= prev_i + min_gap_source``,
    * ``j > prev_j``,
    * ``|(j - prev_j) - slope * (i - prev_i)| <= max_jump_target +
      jump_growth * (i - prev_i)``, with ``slope = target_len / source_len``,

    where ``prev`` is the last kept point (the last three checks pass
    trivially for the first kept point).  The jump is measured against the
    advance the diagonal predicts, and the allowance widens with distance,
    so one-sided noise piling up between two points cannot lock the scan
    out of the rest of the text.
    """
    cfg = cfg.resolve(source_len, target_len)
    slope = target_len / source_len if source_len else 0.0
    band = cfg.slope_band * target_len
    kept = []
    prev = None
    for p in sorted(points):
        if abs(p.j - slope * p.i) > band:
            continue
        if prev is not None:
            if p.i < prev.i + cfg.min_gap_source:
                continue
            if p.j <= prev.j:
                continue
            di = p.i - prev.i
            if abs((p.j - prev.j) - slope * di) > cfg.max_jump_target + cfg.jump_growth * di:
                continue
        kept.append(PathPoint(*p))
        prev = p
    return AnchorSet(tuple(kept))


@dataclass(frozen=True)
class Segmentation:
    """Parallel cut points. Segment ``k`` of a text is ``(cut[k-1], cut[k]]``;
    segment 0 starts at offset 0 and the last segment runs to the text end."""

    source_cuts: tuple
    target_cuts: tuple
    source_len: int
    target_len: int

    @property
    def segment_count(self) -> int:
        return len(self.source_cuts) + 1

    def cuts(self, side: str) -> tuple:
        if side == "source":
            return self.source_cuts
        if side == "target":
            return self.target_cuts
        raise ValueError(f"side must be 'source' or 'target', not {side!r}")

    def length(self, side: str) -> int:
        return self.source_len if side == "source" else self.target_len

    def segment_of(self, offset: int, side: str) -> int:
        if not 0 <= offset < self.length(side):
            raise IndexError(f"offset {offset} outside the {side} text")
        return bisect.bisect_left(self.cuts(side), offset)

    def ranges(self, side: str) -> list:
        """Half-open ``[start, stop)`` token ranges of every segment."""
        cuts = self.cuts(side)
        bounds = [-1, *cuts, self.length(side) - 1]
        return [(bounds[k] + 1, bounds[k + 1] + 1) for k in range(len(bounds) - 1)]

    def noise_flags(self) -> list:
        """True where one side's segment is empty or a single token while the
        other side's is longer, i.e. text present in one language only."""
        flags = []
        for (s0, s1), (t0, t1) in zip(self.ranges("source"), self.ranges("target")):
            ws, wt = max(0, s1 - s0), max(0, t1 - t0)
            flags.append(min(ws, wt) <= 1 < max(ws, wt))
        return flags


def segment_texts(anchors, source_len: int, target_len: int) -> Segmentation:
    """Cut both texts at the anchor offsets.

    Raises:
        AnchorOrderError: anchors decrease in either coordinate or fall
            outside the texts.
    """
    pts = list(anchors)
    for k, p in enumerate(pts):
        if not (0 <= p.i < source_len and 0 <= p.j < target_len):
            raise AnchorOrderError(f"anchor {k} {tuple(p)} outside texts {source_len}x{target_len}")
        if k and (p.i < pts[k - 1].i or p.j < pts[k - 1].j):
            raise AnchorOrderError(f"anchor {k} {tuple(p)} precedes {tuple(pts[k - 1])}")
    return Segmentation(
        tuple(p.i for p in pts), tuple(p.j for p in pts), source_len, target_len
    )
