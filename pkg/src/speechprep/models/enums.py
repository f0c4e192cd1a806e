"""Enumeration types for speechprep models."""

from enum import Enum


class Task(str, Enum):
    """Task token carried in a multitask header."""

    ASR = "asr"
    LID = "lid"


class MergeMode(str, Enum):
    """Logical merge planning strategy."""

    TARGET_25_30 = "target-25-30"
    BUCKET_BALANCE = "bucket-balance"


class ShardMode(str, Enum):
    """How shard membership behaves across epochs."""

    STATIC = "static"
    GLOBAL_RESHUFFLE = "global-reshuffle"


class Metric(str, Enum):
    """Error-rate metric."""

    WER = "WER"
    CER = "CER"


class ViolationKind(str, Enum):
    """Kinds of utterance-level data violations."""

    NON_POSITIVE_DURATION = "non_positive_duration"
    START_NOT_BEFORE_END = "start_not_before_end"
    BEFORE_START = "before_start"
    EXCEEDS_DURATION = "exceeds_duration"
    OVERLAP = "overlap"
    EMPTY_TEXT = "empty_text"

    @property
    def message(self) -> str:
        """Human-readable label used in reports."""
        return {
            ViolationKind.NON_POSITIVE_DURATION: "non-positive duration",
            ViolationKind.START_NOT_BEFORE_END: "start ≥ end",
            ViolationKind.BEFORE_START: "starts before 0",
            ViolationKind.EXCEEDS_DURATION: "exceeds duration",
            ViolationKind.OVERLAP: "overlaps previous sentence",
            ViolationKind.EMPTY_TEXT: "empty text",
        }[self]
