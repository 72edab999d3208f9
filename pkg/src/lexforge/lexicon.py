"""Lexicon entries, the TSV format they are stored in, and precision scoring."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, TextIO, Union

PRIMARY = "primary"
SECONDARY = "secondary"
STAGES = (PRIMARY, SECONDARY)

SCORE_TYPES = {PRIMARY: "dtw_norm", SECONDARY: "mi"}
TSV_COLUMNS = ("stage", "source_word", "rank", "target_word", "score", "score_type", "t")


@dataclass(frozen=True)
class Candidate:
    target_word: str
    score: float
    rank: int
    t: Optional[float] = None


@dataclass(frozen=True)
class LexiconEntry:
    source_word: str
    candidates: tuple
    stage: str

    def __post_init__(self):
        if self.stage not in STAGES:
            raise ValueError(f"unknown stage {self.stage!r}")
        ranks = [c.rank for c in self.candidates]
        if ranks != list(range(1, len(ranks) + 1)):
            raise ValueError(f"ranks of {self.source_word!r} not contiguous from 1: {ranks}")

    @property
    def best(self) -> Optional[Candidate]:
        return self.candidates[0] if self.candidates else None

    def targets(self, n: Optional[int] = None) -> list:
        cands = self.candidates if n is None else self.candidates[:n]
        return [c.target_word for c in cands]


def _fmt(x: Optional[float]) -> str:
    if x is None:
        return ""
    return repr(float(x))


def write_lexicon(entries: Iterable[LexiconEntry], fh: TextIO) -> None:
    writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
    writer.writerow(TSV_COLUMNS)
    for entry in entries:
        for c in entry.candidates:
            writer.writerow(
                (
                    entry.stage,
                    entry.source_word,
                    c.rank,
                    c.target_word,
                    _fmt(c.score),
                    SCORE_TYPES[entry.stage],
                    _fmt(c.t),
                )
            )


def read_lexicon(fh: TextIO) -> list:
    """Inverse of :func:`write_lexicon`; entry order follows first appearance."""
    reader = csv.reader(fh, delimiter="\t")
    header = next(reader, None)
    if header is None:
        return []
    if tuple(header) != TSV_COLUMNS:
        raise ValueError(f"unexpected lexicon header {header}")
    grouped = {}
    for row in reader:
        if not row:
            continue
        stage, source, rank, target, score, _, t = row
        cand = Candidate(target, float(score), int(rank), float(t) if t else None)
        grouped.setdefault((stage, source), []).append(cand)
    return [
        LexiconEntry(source, tuple(sorted(cands, key=lambda c: c.rank)), stage)
        for (stage, source), cands in grouped.items()
    ]


def save_lexicon(entries, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        write_lexicon(entries, fh)


def load_lexicon(path: Union[str, Path]) -> list:
    with open(path, encoding="utf-8", newline="") as fh:
        return read_lexicon(fh)


def load_gold(path: Union[str, Path]) -> dict:
    """Read a gold file: ``source<TAB>target`` per line, extra columns ignored.

    A source word may appear on several lines to list alternatives.
    Lines starting with ``#`` are comments.
    """
    gold = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise ValueError(f"gold line needs source and target: {line!r}")
            gold.setdefault(parts[0], set()).add(parts[1])
    return gold


@dataclass
class StagePrecision:
    """Precision@n counts for one row of the report.

    ``judged`` counts emitted source words that appear in the gold map;
    emitted words missing from gold cannot be scored and are counted in
    ``unjudged`` instead.  ``coverage`` is correct / gold size.
    """

    n: int
    judged: int = 0
    correct: int = 0
    unjudged: int = 0
    gold_size: int = 0

    @property
    def precision(self) -> float:
        return self.correct / self.judged if self.judged else 0.0

    @property
    def coverage(self) -> float:
        return self.correct / self.gold_size if self.gold_size else 0.0

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "judged": self.judged,
            "correct": self.correct,
            "unjudged": self.unjudged,
            "precision": self.precision,
            "coverage": self.coverage,
        }


def evaluate(lexicon: Iterable[LexiconEntry], gold: dict, n: int = 1) -> dict:
    """Precision@n of a lexicon against gold translations.

    A source word counts as correct when any of its top ``n`` candidates is
    among its gold targets.  Source words are compared case-insensitively.

    Returns:
        dict with keys ``primary``, ``secondary`` and ``total``, each a
        :class:`StagePrecision`.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    folded = {}
    for src, tgts in gold.items():
        folded.setdefault(src.casefold(), set()).update(tgts)
    report = {name: StagePrecision(n, gold_size=len(folded)) for name in (*STAGES, "total")}
    for entry in lexicon:
        rows = (report[entry.stage], report["total"])
        wanted = folded.get(entry.source_word.casefold())
        for row in rows:
            if wanted is None:
                row.unjudged += 1
                continue
            row.judged += 1
            if wanted.intersection(entry.targets(n)):
                row.correct += 1
    return report


def format_report(report: dict) -> str:
    lines = [f"{'lexicon':<10} {'judged':>7} {'correct':>8} {'precision':>10} {'coverage':>9}"]
    for name in (*STAGES, "total"):
        row = report[name]
        lines.append(
            f"{name + f'({row.n})':<10} {row.judged:>7} {row.correct:>8} "
            f"{row.precision:>10.1%} {row.coverage:>9.1%}"
        )
    return "\n".join(lines)
