"""End-to-end lexicon compilation.

Stages, in order: load, noun filter, difference vectors, prefilter, DTW,
primary selection, path-point pooling, anchor filter, segmentation, binary
vectors, MI/t scoring, secondary selection.  Each stage group is a plain
function so runs can be split and resumed from serialized intermediates.
"""

from __future__ import annotations

import json
import logging
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from pathlib import Path

from lexforge.anchors import (
    AnchorSet,
    Segmentation,
    collect_path_points,
    filter_anchor_points,
    segment_texts,
)
from lexforge.binvec import binary_vector, select_secondary
from lexforge.config import PipelineConfig
from lexforge.corpus import CorpusSide, noun_positions, read_side
from lexforge.dtw import score_pairs, select_primary
from lexforge.errors import LexforgeError
from lexforge.lexicon import LexiconEntry
from lexforge.posvec import candidate_pairs, diff_vectors

log = logging.getLogger(__name__)


@dataclass
class RunReport:
    source_tokens: int = 0
    target_tokens: int = 0
    source_nouns: int = 0
    target_words: int = 0
    dtw_eligible_source: int = 0
    dtw_eligible_target: int = 0
    candidate_pairs: int = 0
    primary_entries: int = 0
    path_points: int = 0
    anchor_points: int = 0
    segments: int = 0
    noise_segments: int = 0
    secondary_candidates: int = 0
    secondary_targets: int = 0
    secondary_entries: int = 0
    total_entries: int = 0
    warnings: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    def counts(self) -> dict:
        out = asdict(self)
        out.pop("timings")
        return out

    def to_json(self) -> str:
        """Deterministic serialization; timings are excluded (see ``timings_json``)."""
        return json.dumps(self.counts(), indent=2, sort_keys=True) + "\n"

    def timings_json(self) -> str:
        return json.dumps(self.timings, indent=2, sort_keys=True) + "\n"

    def warn(self, message: str) -> None:
        log.warning(message)
        self.warnings.append(message)


@dataclass
class PipelineRun:
    """A finished run: the lexicon plus every intermediate, for dumps and tests."""

    config: PipelineConfig
    lexicon: list
    report: RunReport
    source_positions: dict
    target_positions: dict
    source_diffs: dict
    target_diffs: dict
    scored: list
    primary: list
    points: list
    anchors: AnchorSet
    segmentation: Segmentation
    secondary: list


@contextmanager
def _timed(report: RunReport, stage: str):
    t0 = time.perf_counter()
    yield
    report.timings[stage] = round(time.perf_counter() - t0, 6)


def primary_stage(cfg: PipelineConfig, source_positions: dict, target_positions: dict,
                  source_len: int, target_len: int, report: RunReport):
    """Difference vectors, prefilter, DTW and thresholding.

    Returns ``(source_diffs, target_diffs, scored, primary)``.
    """
    with _timed(report, "diff_vectors"):
        s_diffs = diff_vectors(source_positions, source_len, cfg.min_freq)
        t_diffs = diff_vectors(target_positions, target_len, cfg.min_freq)
    report.dtw_eligible_source = len(s_diffs)
    report.dtw_eligible_target = len(t_diffs)
    with _timed(report, "prefilter"):
        pairs = candidate_pairs(s_diffs, t_diffs, cfg.prefilter_config())
    report.candidate_pairs = len(pairs)
    with _timed(report, "dtw"):
        scored = score_pairs(pairs, s_diffs, t_diffs, band=cfg.dtw_band, workers=cfg.workers)
    with _timed(report, "primary_selection"):
        primary = select_primary(scored, cfg.dtw_threshold, cfg.top_n,
                                 relative_threshold=cfg.dtw_relative)
    report.primary_entries = len(primary)
    return s_diffs, t_diffs, scored, primary


def anchor_stage(cfg: PipelineConfig, primary: list, scored: list, source_positions: dict,
                 target_positions: dict, source_len: int, target_len: int, report: RunReport):
    """Pool warp paths, filter anchors, cut the texts.

    Returns ``(points, anchors, segmentation)``.
    """
    with _timed(report, "anchors"):
        results = dict(scored)
        points = collect_path_points(primary, results, source_positions, target_positions,
                                     ranks=cfg.anchor_ranks,
                                     cell_tolerance=cfg.cell_tolerance)
        anchors = filter_anchor_points(points, cfg.anchor_config(), source_len, target_len)
        seg = segment_texts(anchors, source_len, target_len)
    report.path_points = len(points)
    report.anchor_points = anchors.count
    report.segments = seg.segment_count
    report.noise_segments = sum(seg.noise_flags())
    if anchors.count == 0:
        report.warn("no anchor points survived; secondary matching sees a single segment")
    elif anchors.count < 2:
        report.warn(f"only {anchors.count} anchor point survived; secondary lexicon will be weak")
    return points, anchors, seg


def secondary_stage(cfg: PipelineConfig, seg: Segmentation, source_positions: dict,
                    target_positions: dict, primary_words, report: RunReport) -> list:
    """Binary segment vectors for the leftover nouns, scored against all target words."""
    primary_words = set(primary_words)
    with _timed(report, "binary_vectors"):
        s_bits = {
            w: binary_vector(p, seg, "source")
            for w, p in source_positions.items()
            if p.count >= cfg.min_secondary_freq and w not in primary_words
        }
        t_bits = {
            w: binary_vector(p, seg, "target")
            for w, p in target_positions.items()
            if p.count >= cfg.min_secondary_freq
        }
    report.secondary_candidates = len(s_bits)
    report.secondary_targets = len(t_bits)
    with _timed(report, "mutual_information"):
        secondary = select_secondary(s_bits, t_bits, cfg.t_threshold, cfg.top_n,
                                     exclude=primary_words)
    report.secondary_entries = len(secondary)
    return secondary


def relabel(entries, source_positions: dict) -> list:
    """Swap case-folded keys for the surface form seen in the text."""
    return [
        LexiconEntry(source_positions[e.source_word].surface, e.candidates, e.stage)
        for e in entries
    ]


def run_sides(cfg: PipelineConfig, source: CorpusSide, target: CorpusSide) -> PipelineRun:
    report = RunReport(source_tokens=source.length, target_tokens=target.length)
    if source.length == 0 or target.length == 0:
        raise LexforgeError("both texts must be non-empty")
    cfg = cfg.resolve(source.length, target.length)

    with _timed(report, "index"):
        s_pos = noun_positions(source, cfg.noun_tags, fold_case=True)
        t_pos = noun_positions(target, None, fold_case=False)
    if not s_pos:
        raise LexforgeError(f"no source nouns: no token carries one of the tags {list(cfg.noun_tags)}")
    report.source_nouns = len(s_pos)
    report.target_words = len(t_pos)

    s_diffs, t_diffs, scored, primary = primary_stage(
        cfg, s_pos, t_pos, source.length, target.length, report)
    points, anchors, seg = anchor_stage(
        cfg, primary, scored, s_pos, t_pos, source.length, target.length, report)
    secondary = secondary_stage(
        cfg, seg, s_pos, t_pos, [e.source_word for e in primary], report)

    lexicon = relabel(primary, s_pos) + relabel(secondary, s_pos)
    report.total_entries = len(lexicon)
    return PipelineRun(cfg, lexicon, report, s_pos, t_pos, s_diffs, t_diffs, scored,
                       primary, points, anchors, seg, secondary)


def run_files(cfg: PipelineConfig, source_path, target_path) -> PipelineRun:
    """:func:`run_sides` on a tagged source file and an untagged target file."""
    for path in (source_path, target_path):
        if not Path(path).is_file():
            raise LexforgeError(f"cannot read {path}")
    t0 = time.perf_counter()
    source = read_side(source_path, tagged=True)
    target = read_side(target_path, tagged=False)
    load_time = round(time.perf_counter() - t0, 6)
    run = run_sides(cfg, source, target)
    run.report.timings = {"load": load_time, **run.report.timings}
    return run


def run_pipeline(cfg: PipelineConfig, source_path, target_path):
    """Compile a lexicon from a tagged source file and an untagged target file.

    Returns:
        ``(lexicon, report)``; primary entries come first, each group sorted
        by source word.
    """
    run = run_files(cfg, source_path, target_path)
    return run.lexicon, run.report
