"""Multitask target sequences.

Canonical layout::

    <sot><lang><REGION><task><punct|nopunct><itn|noitn><ts|nots>
        <|start|> text <|end|> ...     (timed)
        text <sep> text ...          (untimed)
    <eot>

The header always has seven tokens; flags use explicit negative tokens.
There are no previous-text or translation tokens.
"""

from __future__ import annotations

import re
from typing import Iterator

from pydantic import BaseModel, ConfigDict, model_validator

from speechprep.codec.tokens import (
    EOT,
    ITN,
    NO_ITN,
    NO_PUNCT,
    NO_TS,
    PUNCT,
    RESERVED_NAMES,
    SEP,
    SOT,
    SPECIAL_RE,
    TASK_TOKENS,
    TIMESTAMP_RE,
    TS,
    CodecError,
    TimestampToken,
    quantize_time,
)
from speechprep.models.enums import Task
from speechprep.models.manifest import Sentence, Utterance
from speechprep.models.tags import LANGUAGE_RE, REGION_RE, LanguageTag

HEADER_LENGTH = 7
HEADER_KINDS = ("lang", "region", "task", "punct", "itn", "ts")

_SPLIT_RE = re.compile(r"(<\|\d+\.\d{2}\|>|<[^<>\s]+>)")
_TASK_BY_TOKEN = {token: task for task, token in TASK_TOKENS.items()}


class Header(BaseModel):
    """Header of a multitask target."""

    model_config = ConfigDict(frozen=True)

    tag: LanguageTag
    task: Task = Task.ASR
    punctuated: bool = False
    itn: bool = False
    with_timestamps: bool = False

    @model_validator(mode="after")
    def _lid_has_no_timestamps(self) -> Header:
        if self.task == Task.LID and self.with_timestamps:
            raise ValueError("lid headers cannot request timestamps")
        return self

    @classmethod
    def for_utterance(cls, u: Utterance, with_timestamps: bool = True) -> Header:
        """ASR header carrying an utterance's tag and flags."""
        return cls(
            tag=u.tag,
            task=Task.ASR,
            punctuated=u.punctuated,
            itn=u.itn,
            with_timestamps=with_timestamps,
        )

    def tokens(self) -> list[str]:
        return [
            SOT,
            self.tag.language_token,
            self.tag.region_token,
            TASK_TOKENS[self.task],
            PUNCT if self.punctuated else NO_PUNCT,
            ITN if self.itn else NO_ITN,
            TS if self.with_timestamps else NO_TS,
        ]


class TokenSequence(BaseModel):
    """Ordered special tokens and text pieces."""

    model_config = ConfigDict(frozen=True)

    tokens: tuple[str, ...]

    @property
    def text(self) -> str:
        return "".join(self.tokens)

    @classmethod
    def from_text(cls, text: str) -> TokenSequence:
        """Split a rendered string into special tokens and text runs."""
        return cls(tokens=tuple(piece for piece in _SPLIT_RE.split(text) if piece))

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[str]:  # type: ignore[override]
        return iter(self.tokens)

    def __str__(self) -> str:
        return self.text


def _token_kind(token: str) -> str:
    """Classify a token for header and body parsing."""
    if token == SOT:
        return "sot"
    if token == EOT:
        return "eot"
    if token == SEP:
        return "sep"
    if token in _TASK_BY_TOKEN:
        return "task"
    if token in (PUNCT, NO_PUNCT):
        return "punct"
    if token in (ITN, NO_ITN):
        return "itn"
    if token in (TS, NO_TS):
        return "ts"
    if TIMESTAMP_RE.match(token):
        return "timestamp"
    if SPECIAL_RE.match(token):
        name = token[1:-1]
        if LANGUAGE_RE.match(name):
            return "lang"
        if REGION_RE.match(name):
            return "region"
        return "unknown"
    return "text"


def _check_text(text: str) -> str:
    if not text.strip():
        raise CodecError("empty sentence text")
    if any(SPECIAL_RE.match(piece) for piece in _SPLIT_RE.split(text) if piece):
        raise CodecError(f"sentence text contains reserved token syntax: {text!r}")
    return text


def render(
    header: Header,
    sentences: list[Sentence],
    strict: bool = False,
) -> TokenSequence:
    """Serialize a header and its sentences.

    Args:
        header: Target header.
        sentences: Sentences in time order; times are ignored when the
            header has no timestamps.
        strict: Reject times beyond 30 s instead of clamping them.

    Returns:
        The token sequence.

    Raises:
        CodecError: For lid headers with a payload, empty or reserved text,
            out-of-range times (strict), or non-monotonic timestamps.
    """
    if header.tag.language in RESERVED_NAMES:
        raise CodecError(f"language subtag {header.tag.language!r} collides with a reserved token")
    if header.task == Task.LID and sentences:
        raise CodecError("lid task cannot carry sentences")

    tokens = header.tokens()
    prev_end = -1
    for s in sentences:
        text = _check_text(s.text)
        if not header.with_timestamps:
            if len(tokens) > HEADER_LENGTH:
                tokens.append(SEP)
            tokens.append(text)
            continue
        if strict and (s.start_s > 30.0 or s.end_s > 30.0):
            raise CodecError(f"sentence ({s.start_s}, {s.end_s}) extends beyond 30 s")
        start, end = quantize_time(s.start_s), quantize_time(s.end_s)
        if end.index < start.index:
            raise CodecError(f"non-monotonic timestamps: end {s.end_s} before start {s.start_s}")
        if start.index < prev_end:
            raise CodecError(f"non-monotonic timestamps: sentence at {s.start_s} overlaps previous")
        tokens.extend([start.text, text, end.text])
        prev_end = end.index
    tokens.append(EOT)
    return TokenSequence(tokens=tuple(tokens))


def _parse_header(header_tokens: tuple[str, ...]) -> Header:
    kinds = [_token_kind(t) for t in header_tokens]
    for i, expected in enumerate(HEADER_KINDS):
        kind = kinds[i]
        if kind == expected:
            continue
        if kind in kinds[:i]:
            raise CodecError(f"duplicated header token {header_tokens[i]!r}")
        if kind in HEADER_KINDS:
            raise CodecError(
                f"header tokens out of canonical order: {header_tokens[i]!r} "
                f"where {expected} expected"
            )
        if kind == "unknown":
            raise CodecError(f"unknown special token {header_tokens[i]!r}")
        raise CodecError(f"missing {expected} header token (found {header_tokens[i]!r})")

    lang, region, task, punct, itn, ts = header_tokens
    try:
        return Header(
            tag=LanguageTag(language=lang[1:-1], region=region[1:-1]),
            task=_TASK_BY_TOKEN[task],
            punctuated=punct == PUNCT,
            itn=itn == ITN,
            with_timestamps=ts == TS,
        )
    except ValueError as e:
        raise CodecError(f"invalid header: {e}") from e


def parse(seq: TokenSequence) -> tuple[Header, list[Sentence]]:
    """Inverse of render.

    Untimed sentences come back with a zero span (start = end = 0.0).

    Raises:
        CodecError: On a missing ``<sot>``, truncated sequence, header
            problems, unbalanced or non-monotonic timestamps, or unknown
            special tokens.
    """
    tokens = seq.tokens
    if not tokens or tokens[0] != SOT:
        raise CodecError("sequence does not start with <sot>")
    if EOT not in tokens:
        raise CodecError("truncated sequence: missing <eot>")
    eot_at = tokens.index(EOT)
    if eot_at != len(tokens) - 1:
        raise CodecError("trailing tokens after <eot>")
    if eot_at < HEADER_LENGTH:
        raise CodecError("truncated sequence: incomplete header")

    header = _parse_header(tokens[1:HEADER_LENGTH])
    body = tokens[HEADER_LENGTH:eot_at]

    for token in body:
        kind = _token_kind(token)
        if kind in ("text", "timestamp", "sep"):
            continue
        if kind == "unknown":
            raise CodecError(f"unknown special token {token!r}")
        if kind in HEADER_KINDS:
            raise CodecError(f"duplicated header token {token!r}")
        raise CodecError(f"unexpected token {token!r} in body")

    if header.task == Task.LID and body:
        raise CodecError("lid sequence carries a payload")

    if not header.with_timestamps:
        return header, _parse_untimed(body)

    if SEP in body:
        raise CodecError(f"unexpected token {SEP!r} in a timed sequence")
    if len(body) % 3:
        raise CodecError("unbalanced timestamp brackets")
    sentences = []
    prev_end = -1
    for i in range(0, len(body), 3):
        start_tok, text, end_tok = body[i : i + 3]
        if (
            _token_kind(start_tok) != "timestamp"
            or _token_kind(end_tok) != "timestamp"
            or _token_kind(text) != "text"
        ):
            raise CodecError("unbalanced timestamp brackets")
        start = TimestampToken.from_text(start_tok)
        end = TimestampToken.from_text(end_tok)
        if end.index < start.index or start.index < prev_end:
            raise CodecError("non-monotonic timestamps")
        prev_end = end.index
        sentences.append(Sentence(start_s=start.seconds, end_s=end.seconds, text=text))
    return header, sentences


def _parse_untimed(body: tuple[str, ...]) -> list[Sentence]:
    sentences = []
    for i, token in enumerate(body):
        kind = _token_kind(token)
        if kind == "timestamp":
            raise CodecError(f"timestamp token {token!r} in an untimed sequence")
        # Text at even positions, <sep> at odd ones.
        if (kind == "sep") != (i % 2 == 1):
            raise CodecError(f"misplaced sentence separator at body position {i}")
        if kind == "text":
            sentences.append(Sentence(start_s=0.0, end_s=0.0, text=token))
    if body and body[-1] == SEP:
        raise CodecError("misplaced sentence separator at the end of the body")
    return sentences
