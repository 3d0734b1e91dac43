"""Conversational style matching: feature extraction, re-ranking and SSML prosody."""

import os
from pathlib import Path

from . import _core
from ._core import (
    AcousticFeatures,
    Error,
    InvalidArgument,
    NotFound,
    ParseError,
    Token,
    compute_rms,
    content_features,
    emit_ssml,
    estimate_f0,
    lint_pack,
    map_prosody,
    read_wav,
    tokenize,
    utterance_acoustics,
)

__version__ = "0.1.0"

_BUNDLED_PACKS = Path(__file__).resolve().parent / "packs"


def packs_dir():
    """Task pack directory: $STYLEMATCH_PACKS_DIR, the bundled copy, or the source tree."""
    env = os.environ.get("STYLEMATCH_PACKS_DIR")
    if env:
        return Path(env)
    if _BUNDLED_PACKS.is_dir():
        return _BUNDLED_PACKS
    return Path(_core.default_packs_dir())


def _packs(explicit):
    return Path(explicit) if explicit else packs_dir()


def task_ids():
    return _core.task_ids(packs_dir())


class Session(_core.Session):
    def __init__(self, task, condition="matching", seed=0, packs_dir=None, config=None):
        super().__init__(task, condition, seed, _packs(packs_dir), config)


def replay(transcript, task, condition="matching", seed=0, audio_dir=None, packs_dir=None, config=None):
    return _core.replay(transcript, task, condition, seed, audio_dir, _packs(packs_dir), config)


__all__ = [
    "AcousticFeatures",
    "Error",
    "InvalidArgument",
    "NotFound",
    "ParseError",
    "Session",
    "Token",
    "compute_rms",
    "content_features",
    "emit_ssml",
    "estimate_f0",
    "lint_pack",
    "map_prosody",
    "packs_dir",
    "read_wav",
    "replay",
    "task_ids",
    "tokenize",
    "utterance_acoustics",
]
