"""Multitask token-sequence codec."""

from speechprep.codec.multitask import Header, TokenSequence, parse, render
from speechprep.codec.tokens import (
    EOT,
    MAX_TIMESTAMP_INDEX,
    SOT,
    TIME_SHIFT_S,
    CodecError,
    TimestampToken,
    quantize_time,
    special_token_vocabulary,
    timestamp_vocabulary,
    unquantize,
)

__all__ = [
    "EOT",
    "MAX_TIMESTAMP_INDEX",
    "SOT",
    "TIME_SHIFT_S",
    "CodecError",
    "Header",
    "TimestampToken",
    "TokenSequence",
    "parse",
    "quantize_time",
    "render",
    "special_token_vocabulary",
    "timestamp_vocabulary",
    "unquantize",
]
