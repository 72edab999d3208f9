"""Bilingual noun lexicon compilation from unaligned, noisy parallel text.

High-frequency nouns are matched by dynamic time warping over the gaps
between their occurrences; the warp paths of the best pairs give anchor
points that cut both texts into parallel segments, and low-frequency nouns
are then matched by mutual information over segment occupancy.
"""

from lexforge.errors import LexforgeError
from lexforge.config import PipelineConfig
from lexforge.lexicon import Candidate, LexiconEntry
from lexforge.pipeline import RunReport, run_pipeline

__version__ = "0.1.0"

__all__ = [
    "Candidate",
    "LexforgeError",
    "LexiconEntry",
    "PipelineConfig",
    "RunReport",
    "run_pipeline",
]
