"""Quality filters, long-audio segmentation and the cleaning stage."""

from speechprep.cleaning.filters import (
    CleaningError,
    FilterVerdict,
    normalize_transcript,
    punctuation_filter,
    similarity_filter,
    speech_ratio_filter,
    text_similarity,
    validate_timestamps,
    validation_filter,
)
from speechprep.cleaning.pipeline import CleaningResult, clean_manifest, clean_utterance
from speechprep.cleaning.segmentation import MAX_CLIP_S, Clip, segment_long_audio

__all__ = [
    "MAX_CLIP_S",
    "CleaningError",
    "CleaningResult",
    "Clip",
    "FilterVerdict",
    "clean_manifest",
    "clean_utterance",
    "normalize_transcript",
    "punctuation_filter",
    "segment_long_audio",
    "similarity_filter",
    "speech_ratio_filter",
    "text_similarity",
    "validate_timestamps",
    "validation_filter",
]
