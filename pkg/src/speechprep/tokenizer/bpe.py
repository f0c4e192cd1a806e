"""Byte-level byte-pair encoding with protected special tokens.

Id layout: protected tokens first (0..P-1), then the 256 single bytes,
then one id per new merge output, dense from 0.
"""

from __future__ import annotations

import functools
import re
from collections import Counter
from pathlib import Path
from typing import Iterable, Optional, Sequence

import structlog

from speechprep.errors import SpeechPrepError

logger = structlog.get_logger()

MODEL_MAGIC = "bpe-v1"
PROTECTED_SECTION = "#protected"
BASE_ALPHABET_SIZE = 256
DEFAULT_VOCAB_SIZE = 40_000
# Distinct whitespace-delimited runs remembered per model.
ENCODE_CACHE_SIZE = 65_536

_RUN_RE = re.compile(r"\s+|\S+")

Pair = tuple[bytes, bytes]


class BpeError(SpeechPrepError):
    """Raised for invalid training parameters, model files or ids."""

    pass


def _protected_pattern(protected: Sequence[str]) -> Optional[re.Pattern[str]]:
    if not protected:
        return None
    ordered = sorted(protected, key=len, reverse=True)
    return re.compile("(" + "|".join(re.escape(t) for t in ordered) + ")")


def split_protected(text: str, protected: Sequence[str]) -> list[tuple[bool, str]]:
    """Split text into (is_protected, piece) segments, matching longest tokens first."""
    pattern = _protected_pattern(protected)
    if pattern is None:
        return [(False, text)] if text else []
    protected_set = set(protected)
    return [(piece in protected_set, piece) for piece in pattern.split(text) if piece]


def pretokenize(text: str) -> list[bytes]:
    """Lossless split into whitespace and non-whitespace runs, as UTF-8 bytes."""
    return [run.encode("utf-8") for run in _RUN_RE.findall(text)]


def merge_word(word: tuple[bytes, ...], pair: Pair) -> tuple[bytes, ...]:
    """Merge every non-overlapping occurrence of ``pair``, leftmost first."""
    left, right = pair
    merged: list[bytes] = []
    i = 0
    while i < len(word):
        if i < len(word) - 1 and word[i] == left and word[i + 1] == right:
            merged.append(left + right)
            i += 2
        else:
            merged.append(word[i])
            i += 1
    return tuple(merged)


def count_pairs(words: dict[tuple[bytes, ...], int]) -> Counter[Pair]:
    """Adjacent-pair frequencies weighted by word frequency (overlaps counted)."""
    counts: Counter[Pair] = Counter()
    for word, freq in words.items():
        for pair in zip(word, word[1:]):
            counts[pair] += freq
    return counts


class BpeModel:
    """A trained byte-level BPE model."""

    def __init__(self, merges: Sequence[Pair], protected: Sequence[str] = ()):
        """Build the vocabulary from a merge list.

        Args:
            merges: Merge pairs in priority order.
            protected: Special tokens that are never split.

        Raises:
            BpeError: If protected tokens repeat or a merge uses an unknown unit.
        """
        if len(set(protected)) != len(protected):
            raise BpeError("protected tokens must be unique")
        self.merges: list[Pair] = list(merges)
        self.protected: list[str] = list(protected)
        self.special_ids: dict[str, int] = {t: i for i, t in enumerate(self.protected)}

        offset = len(self.protected)
        self.vocab: dict[bytes, int] = {bytes([b]): offset + b for b in range(BASE_ALPHABET_SIZE)}
        self._id_to_bytes: list[bytes] = [t.encode("utf-8") for t in self.protected]
        self._id_to_bytes += [bytes([b]) for b in range(BASE_ALPHABET_SIZE)]
        self.ranks: dict[Pair, int] = {}
        for rank, (left, right) in enumerate(self.merges):
            if left not in self.vocab or right not in self.vocab:
                raise BpeError(f"merge {rank} uses a unit outside the vocabulary")
            self.ranks.setdefault((left, right), rank)
            merged = left + right
            if merged not in self.vocab:
                self.vocab[merged] = len(self._id_to_bytes)
                self._id_to_bytes.append(merged)
        self._pattern = _protected_pattern(self.protected)
        self._encode_run = functools.lru_cache(maxsize=ENCODE_CACHE_SIZE)(self._merge_run)

    @property
    def vocab_size(self) -> int:
        return len(self._id_to_bytes)

    def token_for(self, token_id: int) -> str | bytes:
        """Protected token string or byte sequence for an id."""
        if token_id < 0 or token_id >= len(self._id_to_bytes):
            raise BpeError(f"unknown token id {token_id}")
        if token_id < len(self.protected):
            return self.protected[token_id]
        return self._id_to_bytes[token_id]

    def _merge_run(self, run: bytes) -> tuple[int, ...]:
        word = tuple(bytes([b]) for b in run)
        while len(word) > 1:
            best = min(
                (self.ranks[p] for p in zip(word, word[1:]) if p in self.ranks),
                default=None,
            )
            if best is None:
                break
            word = merge_word(word, self.merges[best])
        return tuple(self.vocab[unit] for unit in word)

    def encode(self, text: str) -> list[int]:
        """Encode text; protected tokens become single ids."""
        ids: list[int] = []
        for is_protected, piece in split_protected(text, self.protected):
            if is_protected:
                ids.append(self.special_ids[piece])
                continue
            for run in pretokenize(piece):
                ids.extend(self._encode_run(run))
        return ids

    def decode(self, ids: Iterable[int]) -> str:
        """Decode ids back to text.

        Raises:
            BpeError: On an unknown id.
        """
        chunks = []
        for token_id in ids:
            if token_id < 0 or token_id >= len(self._id_to_bytes):
                raise BpeError(f"unknown token id {token_id}")
            chunks.append(self._id_to_bytes[token_id])
        return b"".join(chunks).decode("utf-8", errors="replace")


def train_bpe(
    corpus: Sequence[str],
    vocab_size: int,
    protected: Sequence[str] = (),
) -> BpeModel:
    """Learn merges greedily by pair frequency.

    Each step merges the most frequent adjacent pair; ties go to the
    lexicographically smallest (left, right). Training stops when the
    vocabulary reaches ``vocab_size`` or no pair occurs at least twice.
    Protected tokens are cut out of the corpus before counting.

    Args:
        corpus: Training texts.
        vocab_size: Target vocabulary size, including the 256 bytes and
            the protected tokens.
        protected: Special tokens reserved at the front of the vocabulary.

    Returns:
        The trained BpeModel.

    Raises:
        BpeError: If the corpus is empty or vocab_size is below
            256 + len(protected).
    """
    if not corpus:
        raise BpeError("cannot train on an empty corpus")
    floor = BASE_ALPHABET_SIZE + len(set(protected))
    if vocab_size < floor:
        raise BpeError(f"vocab_size {vocab_size} is below the base size {floor}")

    runs: Counter[bytes] = Counter()
    for text in corpus:
        for is_protected, piece in split_protected(text, protected):
            if not is_protected:
                runs.update(pretokenize(piece))
    words: dict[tuple[bytes, ...], int] = {}
    for run, freq in runs.items():
        word = tuple(bytes([b]) for b in run)
        words[word] = words.get(word, 0) + freq

    known: set[bytes] = {bytes([b]) for b in range(BASE_ALPHABET_SIZE)}
    size = floor
    merges: list[Pair] = []
    while size < vocab_size:
        counts = count_pairs(words)
        candidates = [(-count, pair) for pair, count in counts.items() if count >= 2]
        if not candidates:
            break
        _, best = min(candidates)
        merges.append(best)
        merged = best[0] + best[1]
        if merged not in known:
            known.add(merged)
            size += 1
        new_words: dict[tuple[bytes, ...], int] = {}
        for word, freq in words.items():
            new_word = merge_word(word, best) if len(word) > 1 else word
            new_words[new_word] = new_words.get(new_word, 0) + freq
        words = new_words

    logger.info("bpe_trained", merges=len(merges), vocab_size=size, protected=len(protected))
    return BpeModel(merges, protected)


def encode(model: BpeModel, text: str) -> list[int]:
    """Encode ``text`` with ``model``."""
    return model.encode(text)


def decode(model: BpeModel, ids: Iterable[int]) -> str:
    """Decode ``ids`` with ``model``."""
    return model.decode(ids)


def save_model(model: BpeModel, path: Path) -> None:
    """Write the ``bpe-v1`` model file; merge sides are hex-encoded bytes."""
    lines = [MODEL_MAGIC]
    lines += [f"{left.hex()} {right.hex()}" for left, right in model.merges]
    lines.append(PROTECTED_SECTION)
    lines += model.protected
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info("bpe_model_saved", path=str(path), merges=len(model.merges))


def load_model(path: Path) -> BpeModel:
    """Read a ``bpe-v1`` model file.

    Raises:
        BpeError: If the file is malformed.
    """
    lines = Path(path).read_text(encoding="utf-8").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines or lines[0] != MODEL_MAGIC:
        raise BpeError(f"{path}: not a {MODEL_MAGIC} model file")
    try:
        section = lines.index(PROTECTED_SECTION)
    except ValueError as e:
        raise BpeError(f"{path}: missing {PROTECTED_SECTION} section") from e
    merges: list[Pair] = []
    for line_num, line in enumerate(lines[1:section], start=2):
        parts = line.split(" ")
        if len(parts) != 2:
            raise BpeError(f"{path}:{line_num}: expected 'left right'")
        try:
            merges.append((bytes.fromhex(parts[0]), bytes.fromhex(parts[1])))
        except ValueError as e:
            raise BpeError(f"{path}:{line_num}: invalid hex") from e
    return BpeModel(merges, lines[section + 1 :])
