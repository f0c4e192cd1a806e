"""Manifest reading/writing, validation, WAV probing and corpus statistics."""

from speechprep.manifest.io import (
    LineError,
    ManifestError,
    ManifestLineError,
    ManifestReader,
    dump_record,
    iter_manifest,
    read_manifest,
    write_manifest,
)
from speechprep.manifest.stats import (
    DECADE_LABELS,
    StatsReport,
    TagStats,
    corpus_stats,
    duration_bucket,
)
from speechprep.manifest.validation import (
    DEFAULT_TOLERANCE_S,
    Violation,
    timestamp_violations,
    validate_utterance,
)
from speechprep.manifest.wav import WavFormatError, WavInfo, probe_wav_duration, read_wav_info

__all__ = [
    "DECADE_LABELS",
    "DEFAULT_TOLERANCE_S",
    "LineError",
    "ManifestError",
    "ManifestLineError",
    "ManifestReader",
    "StatsReport",
    "TagStats",
    "Violation",
    "WavFormatError",
    "WavInfo",
    "corpus_stats",
    "dump_record",
    "duration_bucket",
    "iter_manifest",
    "probe_wav_duration",
    "read_manifest",
    "read_wav_info",
    "timestamp_violations",
    "validate_utterance",
    "write_manifest",
]
