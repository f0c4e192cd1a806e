"""Error rates and the comparison arithmetic used in result tables."""

from __future__ import annotations

import math
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

from speechprep.errors import SpeechPrepError
from speechprep.scoring.alignment import EditAlignment, align


class ScoreError(SpeechPrepError):
    """Raised for undefined aggregates or inconsistent scoring inputs."""

    pass


def wer(a: EditAlignment) -> float:
    """100 * (S + I + D) / N.

    With an empty reference the rate is 0 when nothing was inserted and
    ``math.inf`` otherwise.
    """
    if a.ref_length == 0:
        return math.inf if a.insertions else 0.0
    return 100.0 * a.errors / a.ref_length


def chars(text: str, remove_whitespace: bool = True) -> list[str]:
    """Code points of ``text``, optionally without whitespace."""
    if remove_whitespace:
        return [c for c in text if not c.isspace()]
    return list(text)


def cer(ref: str, hyp: str, remove_whitespace: bool = True) -> float:
    """Character error rate over code points."""
    return wer(align(chars(ref, remove_whitespace), chars(hyp, remove_whitespace)))


def word_error_rate(ref: str, hyp: str) -> float:
    """WER over whitespace-separated words."""
    return wer(align(ref.split(), hyp.split()))


def round_percent(value: float) -> float:
    """Round to one decimal, halves away from zero."""
    if not math.isfinite(value):
        return value
    return float(Decimal(str(value)).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def mean_percent(values: Sequence[float]) -> float:
    """Unrounded arithmetic mean.

    Raises:
        ScoreError: On an empty list.
    """
    if not values:
        raise ScoreError("cannot average an empty list")
    if not all(math.isfinite(v) for v in values):
        return math.inf
    return float(sum(Decimal(str(v)) for v in values) / len(values))


def macro_average(values: Sequence[float]) -> float:
    """Unweighted mean reported to one decimal, as in the "average" rows of result tables.

    Raises:
        ScoreError: On an empty list.
    """
    return round_percent(mean_percent(values))


def relative_reduction(baseline: float, improved: float) -> float:
    """100 * (baseline - improved) / baseline.

    Raises:
        ScoreError: If baseline is not positive.
    """
    if baseline <= 0:
        raise ScoreError(f"baseline must be positive, got {baseline}")
    return 100.0 * (baseline - improved) / baseline
