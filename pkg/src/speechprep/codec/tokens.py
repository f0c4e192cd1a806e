"""Special tokens and 40 ms timestamp quantization."""

from __future__ import annotations

import math
import re
from decimal import ROUND_HALF_UP, Decimal
from typing import TYPE_CHECKING

import structlog
from pydantic import BaseModel, ConfigDict, Field

from speechprep.errors import SpeechPrepError
from speechprep.models.enums import Task

if TYPE_CHECKING:
    from speechprep.langtags.registry import LanguageRegistry

logger = structlog.get_logger()

TIME_SHIFT_S = 0.04
MAX_TIME_S = 30.0
MAX_TIMESTAMP_INDEX = 750
_TIME_SHIFT = Decimal("0.04")

SOT = "<sot>"
EOT = "<eot>"
TASK_TOKENS = {Task.ASR: "<asr>", Task.LID: "<lid>"}
PUNCT, NO_PUNCT = "<punct>", "<nopunct>"
ITN, NO_ITN = "<itn>", "<noitn>"
TS, NO_TS = "<ts>", "<nots>"
# Boundary between untimed sentences.
SEP = "<sep>"

# Lowercase tokens that can never be language subtags.
FLAG_TOKENS = (PUNCT, NO_PUNCT, ITN, NO_ITN, TS, NO_TS)
RESERVED_NAMES = frozenset(
    t.strip("<>") for t in (SOT, EOT, SEP, *TASK_TOKENS.values(), *FLAG_TOKENS)
)

TIMESTAMP_RE = re.compile(r"^<\|(0|[1-9]\d?)\.(\d{2})\|>$")
SPECIAL_RE = re.compile(r"^<[^<>\s]+>$")


class CodecError(SpeechPrepError):
    """Raised for sequences that cannot be rendered or parsed."""

    pass


class TimestampToken(BaseModel):
    """A timestamp on the 40 ms grid, indices 0..750 (0.00 s .. 30.00 s)."""

    model_config = ConfigDict(frozen=True)

    index: int = Field(..., ge=0, le=MAX_TIMESTAMP_INDEX)

    @property
    def seconds(self) -> float:
        return self.index * 4 / 100

    @property
    def text(self) -> str:
        hundredths = self.index * 4
        return f"<|{hundredths // 100}.{hundredths % 100:02d}|>"

    @classmethod
    def from_text(cls, token: str) -> TimestampToken:
        """Parse ``<|x.xx|>``.

        Raises:
            CodecError: If the token is malformed or off the 40 ms grid.
        """
        match = TIMESTAMP_RE.match(token)
        if not match:
            raise CodecError(f"malformed timestamp token {token!r}")
        hundredths = int(match.group(1)) * 100 + int(match.group(2))
        if hundredths % 4:
            raise CodecError(f"timestamp {token!r} is off the 40 ms grid")
        index = hundredths // 4
        if index > MAX_TIMESTAMP_INDEX:
            raise CodecError(f"timestamp {token!r} exceeds {MAX_TIME_S} s")
        return cls(index=index)


def quantize_time(t: float) -> TimestampToken:
    """Round a time to the 40 ms grid, half away from zero.

    Times beyond 30 s are clamped to index 750 with a warning.

    Raises:
        CodecError: If ``t`` is negative or not finite.
    """
    if math.isnan(t) or math.isinf(t):
        raise CodecError(f"timestamp must be finite, got {t}")
    if t < 0:
        raise CodecError(f"timestamp must be non-negative, got {t}")
    if t > MAX_TIME_S:
        logger.warning("timestamp_clamped", time_s=t, max_s=MAX_TIME_S)
        return TimestampToken(index=MAX_TIMESTAMP_INDEX)
    steps = Decimal(repr(float(t))) / _TIME_SHIFT
    return TimestampToken(index=int(steps.quantize(Decimal(1), rounding=ROUND_HALF_UP)))


def unquantize(token: TimestampToken) -> float:
    """Seconds represented by a timestamp token (``index * 0.04``)."""
    return token.seconds


def timestamp_vocabulary() -> list[str]:
    """All 751 timestamp token strings in index order."""
    return [TimestampToken(index=i).text for i in range(MAX_TIMESTAMP_INDEX + 1)]


def special_token_vocabulary(registry: LanguageRegistry) -> list[str]:
    """Every special token a target sequence may contain.

    Order: sentinels and the sentence separator, language tokens, region
    tokens, task tokens, flag tokens, timestamp tokens.
    """
    tokens = [SOT, EOT, SEP]
    tokens += [f"<{lang}>" for lang in registry.languages()]
    tokens += [f"<{region}>" for region in registry.regions()]
    tokens += list(TASK_TOKENS.values())
    tokens += list(FLAG_TOKENS)
    tokens += timestamp_vocabulary()
    return list(dict.fromkeys(tokens))
