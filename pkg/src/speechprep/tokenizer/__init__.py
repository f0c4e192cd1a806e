"""Byte-level BPE tokenizer."""

from speechprep.tokenizer.bpe import (
    BpeError,
    BpeModel,
    decode,
    encode,
    load_model,
    save_model,
    train_bpe,
)
from speechprep.tokenizer.sequence import decode_sequence, encode_sequence

__all__ = [
    "BpeError",
    "BpeModel",
    "decode",
    "decode_sequence",
    "encode",
    "encode_sequence",
    "load_model",
    "save_model",
    "train_bpe",
]
