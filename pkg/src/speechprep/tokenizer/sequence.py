"""Integer-id streams for rendered multitask targets."""

from __future__ import annotations

from speechprep.codec.multitask import TokenSequence
from speechprep.codec.tokens import SPECIAL_RE
from speechprep.tokenizer.bpe import BpeError, BpeModel


def encode_sequence(model: BpeModel, seq: TokenSequence) -> list[int]:
    """Map special tokens to their reserved ids and BPE-encode text pieces.

    Raises:
        BpeError: If the sequence holds a special token the model does not protect.
    """
    ids: list[int] = []
    for token in seq.tokens:
        special_id = model.special_ids.get(token)
        if special_id is not None:
            ids.append(special_id)
        elif SPECIAL_RE.match(token):
            raise BpeError(f"special token {token!r} is not protected by the model")
        else:
            ids.extend(model.encode(token))
    return ids


def decode_sequence(model: BpeModel, ids: list[int]) -> TokenSequence:
    """Decode ids and re-split the text into tokens."""
    return TokenSequence.from_text(model.decode(ids))
