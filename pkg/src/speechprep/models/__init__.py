"""Data models for speechprep."""

from speechprep.models.enums import (
    MergeMode,
    Metric,
    ShardMode,
    Task,
    ViolationKind,
)
from speechprep.models.manifest import Sentence, Utterance
from speechprep.models.tags import NULL_REGION, LanguageTag

__all__ = [
    # Enums
    "MergeMode",
    "Metric",
    "ShardMode",
    "Task",
    "ViolationKind",
    # Models
    "LanguageTag",
    "NULL_REGION",
    "Sentence",
    "Utterance",
]
