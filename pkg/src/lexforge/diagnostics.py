"""Writing a finished run to disk: the lexicon, the report and optional plots/dumps."""

from __future__ import annotations

import csv
import json
from pathlib import Path

from lexforge.anchors import PathPoint, Segmentation
from lexforge.binvec import binary_vector
from lexforge.errors import LexforgeError
from lexforge.lexicon import save_lexicon

LEXICON_FILE = "lexicon.tsv"
REPORT_FILE = "report.json"
TIMINGS_FILE = "timings.json"
CONFIG_FILE = "config.json"
SIGNALS_FILE = "signals.csv"
PATHS_FILE = "paths.csv"
ANCHORS_FILE = "anchors.csv"
ANCHORS_SVG = "anchors.svg"
SEGMENTS_FILE = "segments.tsv"
SEGMENT_SETS_FILE = "segment_sets.tsv"


def _writer(fh, delimiter=","):
    return csv.writer(fh, delimiter=delimiter, lineterminator="\n")


def write_signals(diffs: dict, path) -> None:
    """One row per gap: ``word, index, gap``."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(("word", "index", "gap"))
        for word in sorted(diffs):
            for k, gap in enumerate(diffs[word].values):
                w.writerow((word, k, gap))


def write_paths(primary: list, results: dict, path) -> None:
    """Warp paths of every primary (source, target) pair.

    ``pair_id`` is ``source->target``; steps count from 0 along the path.
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(("pair_id", "step", "i", "j"))
        for entry in primary:
            for cand in entry.candidates:
                res = results[(entry.source_word, cand.target_word)]
                pair_id = f"{entry.source_word}->{cand.target_word}"
                for step, (i, j) in enumerate(res.path):
                    w.writerow((pair_id, step, i, j))


def write_anchor_scatter(points: list, anchors, path) -> None:
    """Every pooled path point with ``kept`` = 1 for the ones that became anchors."""
    kept = set(anchors)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(("i", "j", "kept"))
        for p in sorted(set(points)):
            w.writerow((p.i, p.j, int(p in kept)))


def load_anchors(path) -> list:
    """Kept points of an anchor scatter CSV, in file order."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = csv.DictReader(fh)
        return [PathPoint(int(r["i"]), int(r["j"])) for r in rows if r["kept"] == "1"]


def plot_anchor_scatter(points: list, anchors, source_len: int, target_len: int, path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    # fixed hash salt keeps the SVG byte-stable across runs
    matplotlib.rcParams["svg.hashsalt"] = "lexforge"
    fig, ax = plt.subplots(figsize=(6, 6))
    if points:
        ax.scatter([p.i for p in points], [p.j for p in points], s=2, c="0.7",
                   label="path points", rasterized=False)
    if len(anchors):
        ax.plot([p.i for p in anchors], [p.j for p in anchors], ".", ms=3, c="C3",
                label="anchors")
    ax.plot([0, source_len], [0, target_len], lw=0.5, c="0.3")
    ax.set_xlim(0, source_len)
    ax.set_ylim(0, target_len)
    ax.set_xlabel("source offset")
    ax.set_ylabel("target offset")
    ax.legend(loc="upper left")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def write_segments(seg: Segmentation, path) -> None:
    """Segment table with half-open token ranges on both sides."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh, "\t")
        w.writerow(("segment", "source_start", "source_stop", "target_start", "target_stop",
                    "noise"))
        rows = zip(seg.ranges("source"), seg.ranges("target"), seg.noise_flags())
        for k, ((s0, s1), (t0, t1), noise) in enumerate(rows):
            w.writerow((k, s0, s1, t0, t1, int(noise)))


def load_segments(path) -> Segmentation:
    """Rebuild a :class:`Segmentation` from :func:`write_segments` output."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh, delimiter="\t"))
    if not rows:
        raise LexforgeError(f"{path}: no segments")
    s_cuts = tuple(int(r["source_stop"]) - 1 for r in rows[:-1])
    t_cuts = tuple(int(r["target_stop"]) - 1 for r in rows[:-1])
    return Segmentation(s_cuts, t_cuts, int(rows[-1]["source_stop"]), int(rows[-1]["target_stop"]))


def write_segment_sets(positions: dict, seg: Segmentation, side: str, path,
                       min_count: int = 1) -> None:
    """``word<TAB>comma-separated segment indices`` for words seen ``min_count``+ times."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh, "\t")
        w.writerow(("word", "segments"))
        for word in sorted(positions):
            p = positions[word]
            if p.count < min_count:
                continue
            segs = binary_vector(p, seg, side).segments()
            w.writerow((p.surface, ",".join(map(str, segs))))


def emit_outputs(run, out_dir, signals: bool = False, paths: bool = False,
                 anchors: bool = False, segments: bool = False) -> dict:
    """Write a :class:`~lexforge.pipeline.PipelineRun` into ``out_dir``.

    The lexicon, report, timings and resolved config are always written;
    the flags add the diagnostic dumps.  ``anchors`` writes both the
    scatter CSV and its SVG plot.

    Returns:
        name -> path of every file written.

    Raises:
        LexforgeError: the directory or a file cannot be written; the
            message names the path.
    """
    out = Path(out_dir)
    written = {}

    def target(name):
        written[name] = out / name
        return written[name]

    try:
        out.mkdir(parents=True, exist_ok=True)
        save_lexicon(run.lexicon, target(LEXICON_FILE))
        target(REPORT_FILE).write_text(run.report.to_json(), encoding="utf-8")
        target(TIMINGS_FILE).write_text(run.report.timings_json(), encoding="utf-8")
        target(CONFIG_FILE).write_text(
            json.dumps(run.config.as_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        if signals:
            write_signals(run.source_diffs, target(SIGNALS_FILE))
        if paths:
            write_paths(run.primary, dict(run.scored), target(PATHS_FILE))
        if anchors:
            write_anchor_scatter(run.points, run.anchors, target(ANCHORS_FILE))
            plot_anchor_scatter(run.points, run.anchors, run.report.source_tokens,
                                run.report.target_tokens, target(ANCHORS_SVG))
        if segments:
            write_segments(run.segmentation, target(SEGMENTS_FILE))
            write_segment_sets(run.source_positions, run.segmentation, "source",
                               target(SEGMENT_SETS_FILE), run.config.min_secondary_freq)
    except OSError as exc:
        where = exc.filename or out
        raise LexforgeError(f"cannot write {where}: {exc.strerror or exc}") from exc
    return written
