"""Per-utterance quality filters."""

from __future__ import annotations

import re
import unicodedata

import editdistance
from pydantic import BaseModel, Field

from speechprep.errors import SpeechPrepError
from speechprep.manifest.validation import (
    DEFAULT_TOLERANCE_S,
    Violation,
    timestamp_violations,
    validate_utterance,
)
from speechprep.models.manifest import Utterance

_WHITESPACE_RE = re.compile(r"\s+")


class CleaningError(SpeechPrepError):
    """Raised when an utterance cannot be cleaned at all."""

    pass


class FilterVerdict(BaseModel):
    """Outcome of one filter on one utterance or clip.

    When ``keep`` is false, ``rule`` names the single check that failed.
    """

    utterance_id: str = Field(default="", description="Utterance or clip id")
    keep: bool
    rule: str
    measured: float
    threshold: float
    detail: str = ""


def speech_ratio_filter(u: Utterance, max_ratio: float) -> FilterVerdict:
    """Keep an utterance whose text rate (chars/s) is at most ``max_ratio``.

    Raises:
        CleaningError: If the utterance has no positive duration.
    """
    if u.duration_s <= 0:
        raise CleaningError(f"utterance {u.id!r} has zero duration")
    measured = u.char_count / u.duration_s
    return FilterVerdict(
        utterance_id=u.id,
        keep=measured <= max_ratio,
        rule="speech_ratio",
        measured=measured,
        threshold=max_ratio,
    )


def validate_timestamps(u: Utterance, tol_s: float = DEFAULT_TOLERANCE_S) -> list[Violation]:
    """Timestamp violations of ``u``; an empty list means the timestamps are sound."""
    return timestamp_violations(u, tol_s)


def validation_filter(u: Utterance, tol_s: float = DEFAULT_TOLERANCE_S) -> FilterVerdict:
    """Reject records with timestamp violations or empty sentence text."""
    violations = validate_utterance(u, tol_s)
    return FilterVerdict(
        utterance_id=u.id,
        keep=not violations,
        rule="validation",
        measured=float(len(violations)),
        threshold=0.0,
        detail="; ".join(v.message for v in violations),
    )


def text_similarity(before: str, after: str) -> float:
    """1 - levenshtein(before, after) / max(len) over code points; ("", "") is 1."""
    longest = max(len(before), len(after))
    if longest == 0:
        return 1.0
    return 1.0 - editdistance.eval(before, after) / longest


def similarity_filter(
    before: str, after: str, min_similarity: float, utterance_id: str = ""
) -> FilterVerdict:
    """Keep when cleaning changed the transcript by no more than allowed."""
    measured = text_similarity(before, after)
    return FilterVerdict(
        utterance_id=utterance_id,
        keep=measured >= min_similarity,
        rule="similarity",
        measured=measured,
        threshold=min_similarity,
    )


def normalize_transcript(text: str) -> str:
    """NFC-normalize, collapse whitespace runs and trim."""
    return _WHITESPACE_RE.sub(" ", unicodedata.normalize("NFC", text)).strip()


def punctuation_count(text: str) -> int:
    return sum(1 for ch in text if unicodedata.category(ch).startswith("P"))


def punctuation_filter(u: Utterance) -> FilterVerdict:
    """Check that punctuation presence agrees with the ``punctuated`` flag.

    Utterances without text pass.
    """
    count = punctuation_count(u.text)
    consistent = not u.text.strip() or (count > 0) == u.punctuated
    return FilterVerdict(
        utterance_id=u.id,
        keep=consistent,
        rule="punctuation",
        measured=float(count),
        threshold=0.0,
        detail="" if consistent else f"punct flag is {u.punctuated} but text has {count} marks",
    )
