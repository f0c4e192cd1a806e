"""Utterance-level invariant checks."""

from __future__ import annotations

from pydantic import BaseModel

from speechprep.models.enums import ViolationKind
from speechprep.models.manifest import Utterance

DEFAULT_TOLERANCE_S = 0.02


class Violation(BaseModel):
    """A single data violation found in an utterance."""

    utterance_id: str
    kind: ViolationKind
    sentence_index: int | None = None
    detail: str = ""

    @property
    def message(self) -> str:
        where = f" (sentence {self.sentence_index})" if self.sentence_index is not None else ""
        extra = f": {self.detail}" if self.detail else ""
        return f"{self.kind.message}{where}{extra}"


def timestamp_violations(u: Utterance, tol_s: float = DEFAULT_TOLERANCE_S) -> list[Violation]:
    """Check start < end, range within [-tol, duration + tol], and ordering.

    Args:
        u: Utterance to check.
        tol_s: Tolerance in seconds for range and overlap checks.

    Returns:
        Violations in sentence order; empty when the timestamps are sound.
    """
    violations: list[Violation] = []
    prev_end: float | None = None
    for i, s in enumerate(u.sentences):
        if s.start_s >= s.end_s:
            violations.append(
                Violation(
                    utterance_id=u.id,
                    kind=ViolationKind.START_NOT_BEFORE_END,
                    sentence_index=i,
                    detail=f"{s.start_s} >= {s.end_s}",
                )
            )
        if s.start_s < -tol_s:
            violations.append(
                Violation(
                    utterance_id=u.id,
                    kind=ViolationKind.BEFORE_START,
                    sentence_index=i,
                    detail=f"start {s.start_s}",
                )
            )
        if s.end_s > u.duration_s + tol_s:
            violations.append(
                Violation(
                    utterance_id=u.id,
                    kind=ViolationKind.EXCEEDS_DURATION,
                    sentence_index=i,
                    detail=f"end {s.end_s} > duration {u.duration_s}",
                )
            )
        if prev_end is not None and s.start_s < prev_end - tol_s:
            violations.append(
                Violation(
                    utterance_id=u.id,
                    kind=ViolationKind.OVERLAP,
                    sentence_index=i,
                    detail=f"start {s.start_s} < previous end {prev_end}",
                )
            )
        prev_end = s.end_s
    return violations


def validate_utterance(u: Utterance, tol_s: float = DEFAULT_TOLERANCE_S) -> list[Violation]:
    """Full record check: duration, timestamps, and non-empty sentence text."""
    violations: list[Violation] = []
    if u.duration_s <= 0:
        violations.append(Violation(utterance_id=u.id, kind=ViolationKind.NON_POSITIVE_DURATION))
    violations.extend(timestamp_violations(u, tol_s))
    for i, s in enumerate(u.sentences):
        if not s.text.strip():
            violations.append(
                Violation(utterance_id=u.id, kind=ViolationKind.EMPTY_TEXT, sentence_index=i)
            )
    return violations
