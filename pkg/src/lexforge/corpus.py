"""Reading one half of a parallel text and indexing where its words occur.

The source half is expected as whitespace-separated ``surface/TAG`` tokens
(Penn-style tags from any external tagger); the target half is bare,
pre-segmented tokens.  Offsets are token indices, not characters.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, TextIO, Union

from lexforge.errors import CorpusFormatError

DEFAULT_NOUN_TAGS = frozenset({"NN", "NNS", "NNP", "NNPS"})
TAG_SEP = "/"


@dataclass(frozen=True)
class TaggedToken:
    surface: str
    tag: str
    offset: int

    def __str__(self):
        return f"{self.surface}{TAG_SEP}{self.tag}" if self.tag else self.surface


@dataclass(frozen=True)
class CorpusSide:
    tokens: tuple

    @property
    def length(self) -> int:
        return len(self.tokens)

    def __len__(self):
        return len(self.tokens)

    def serialize(self) -> str:
        return " ".join(str(tok) for tok in self.tokens)


@dataclass(frozen=True)
class PositionVector:
    """Sorted token offsets of one word type.

    ``word`` is the identity key (case-folded on the source side);
    ``surface`` is the form shown in output, the first spelling seen.
    """

    word: str
    positions: tuple
    surface: str = ""

    def __post_init__(self):
        if not self.surface:
            object.__setattr__(self, "surface", self.word)

    @property
    def count(self) -> int:
        return len(self.positions)


def _split_token(raw: str, sep: Optional[str]):
    if sep is None:
        return raw, ""
    surface, found, tag = raw.rpartition(sep)
    # "abc/" and "/" carry no tag; keep them whole so they round-trip.
    if not found or not tag:
        return raw, ""
    return surface, tag


def load_tagged_text(stream: Union[TextIO, str], sep: Optional[str] = TAG_SEP) -> CorpusSide:
    """Parse a whitespace-tokenized text into a :class:`CorpusSide`.

    Args:
        stream: an open text stream or the text itself.
        sep: separator between surface and tag, or ``None`` for untagged
            text (every token then gets the empty tag).

    Raises:
        CorpusFormatError: a token has an empty surface, e.g. ``/NN``.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    tokens = []
    for line in stream:
        for raw in line.split():
            surface, tag = _split_token(raw, sep)
            if not surface:
                raise CorpusFormatError(f"empty surface in {raw!r}", len(tokens))
            tokens.append(TaggedToken(surface, tag, len(tokens)))
    return CorpusSide(tuple(tokens))


def read_side(path: Union[str, Path], tagged: bool = True) -> CorpusSide:
    with open(path, encoding="utf-8") as fh:
        return load_tagged_text(fh, TAG_SEP if tagged else None)


def noun_positions(
    side: CorpusSide,
    noun_tags: Optional[Iterable[str]] = DEFAULT_NOUN_TAGS,
    fold_case: bool = True,
) -> dict:
    """Map each surviving word type to its :class:`PositionVector`.

    ``noun_tags=None`` is the wildcard: every token is kept, which is what
    the untagged target side needs.
    """
    tags = None if noun_tags is None else frozenset(noun_tags)
    offsets = {}
    surfaces = {}
    for tok in side.tokens:
        if tags is not None and tok.tag not in tags:
            continue
        key = tok.surface.casefold() if fold_case else tok.surface
        if key not in offsets:
            offsets[key] = []
            surfaces[key] = tok.surface
        offsets[key].append(tok.offset)
    return {
        key: PositionVector(key, tuple(pos), surfaces[key])
        for key, pos in offsets.items()
    }
