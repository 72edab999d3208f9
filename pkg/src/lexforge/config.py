"""Pipeline configuration and the flat ``key = value`` config file format."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from lexforge.anchors import AnchorConfig
from lexforge.corpus import DEFAULT_NOUN_TAGS
from lexforge.posvec import PrefilterConfig

@dataclass(frozen=True)
class PipelineConfig:
    noun_tags: tuple = tuple(sorted(DEFAULT_NOUN_TAGS))
    # prefilter
    min_freq: int = 10
    max_freq_ratio: float = 2.0
    max_start_offset: float = 0.3
    euclid_threshold: Optional[float] = None
    euclid_relative: Optional[float] = 0.14
    # dtw
    dtw_threshold: Optional[float] = None
    dtw_relative: Optional[float] = 0.2
    dtw_band: Optional[float] = None
    top_n: int = 3
    anchor_ranks: int = 1
    cell_tolerance: Optional[float] = 0.2
    # anchors
    slope_band: float = 0.1
    min_gap_source: Optional[int] = None
    max_jump_target: Optional[int] = None
    jump_growth: float = 0.1
    # secondary
    t_threshold: float = 1.65
    min_secondary_freq: int = 3
    workers: int = 1

    def __post_init__(self):
        if not self.noun_tags:
            raise ValueError("noun_tags must not be empty")
        if self.top_n < 1 or self.anchor_ranks < 1 or self.workers < 1:
            raise ValueError("top_n, anchor_ranks and workers must be >= 1")
        if self.min_freq < 2:
            raise ValueError("min_freq must be >= 2 (a difference vector needs two occurrences)")
        if self.euclid_threshold is None and self.euclid_relative is None:
            raise ValueError("set euclid_threshold or euclid_relative")
        if self.dtw_threshold is None and self.dtw_relative is None:
            raise ValueError("set dtw_threshold or dtw_relative")
        if self.jump_growth < 0:
            raise ValueError(f"jump_growth must be >= 0, got {self.jump_growth}")
        for name in ("max_freq_ratio", "max_start_offset", "euclid_threshold",
                     "euclid_relative", "dtw_threshold", "dtw_relative",
                     "dtw_band", "cell_tolerance", "slope_band", "min_gap_source", "max_jump_target",
                     "t_threshold", "min_secondary_freq"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")

    def resolve(self, source_len: int, target_len: int) -> "PipelineConfig":
        """Fill the corpus-scaled anchor constants."""
        anchors = self.anchor_config().resolve(source_len, target_len)
        return dataclasses.replace(
            self,
            min_gap_source=anchors.min_gap_source,
            max_jump_target=anchors.max_jump_target,
        )

    def prefilter_config(self) -> PrefilterConfig:
        return PrefilterConfig(self.min_freq, self.max_freq_ratio, self.max_start_offset,
                               self.euclid_threshold, self.euclid_relative)

    def anchor_config(self) -> AnchorConfig:
        return AnchorConfig(self.slope_band, self.min_gap_source, self.max_jump_target,
                            self.jump_growth)

    def as_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["noun_tags"] = list(self.noun_tags)
        return out


_FIELDS = {f.name: f for f in dataclasses.fields(PipelineConfig)}
_INT_FIELDS = {"min_freq", "top_n", "anchor_ranks", "min_gap_source", "max_jump_target",
               "min_secondary_freq", "workers"}
_ALIASES = {"max_start_offset_ratio": "max_start_offset", "min_frequency": "min_freq"}


def field_name(key: str) -> str:
    name = key.strip().lstrip("-").replace("-", "_")
    name = _ALIASES.get(name, name)
    if name not in _FIELDS:
        raise KeyError(f"unknown config key {key!r}")
    return name


def coerce(name: str, raw):
    if raw is None:
        return None
    if not isinstance(raw, str):
        return tuple(raw) if name == "noun_tags" else raw
    text = raw.strip()
    if name == "noun_tags":
        return tuple(t.strip() for t in text.split(",") if t.strip())
    if text.lower() in ("", "none", "auto"):
        return None
    if name in _INT_FIELDS:
        return int(text)
    return float(text)


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines (``#`` comments, blank lines ignored)."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"line {lineno}: expected 'key = value', got {line!r}")
        try:
            name = field_name(key)
            values[name] = coerce(name, value)
        except (KeyError, ValueError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return values


def load_config(path=None, overrides: Optional[dict] = None) -> PipelineConfig:
    """Defaults, then the config file, then ``overrides`` (CLI flags) on top."""
    values = {}
    if path is not None:
        values.update(parse_config_text(Path(path).read_text(encoding="utf-8")))
    for key, value in (overrides or {}).items():
        if value is not None:
            name = field_name(key)
            values[name] = coerce(name, value)
    return PipelineConfig(**values)
