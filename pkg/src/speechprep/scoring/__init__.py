"""WER/CER scoring and result tables."""

from speechprep.scoring.alignment import EditAlignment, align
from speechprep.scoring.metrics import (
    ScoreError,
    cer,
    macro_average,
    mean_percent,
    relative_reduction,
    round_percent,
    wer,
    word_error_rate,
)
from speechprep.scoring.report import (
    ScoreReport,
    ScoreRow,
    normalize_for_scoring,
    render_markdown_table,
    score_manifest,
    score_systems,
)

__all__ = [
    "EditAlignment",
    "ScoreError",
    "ScoreReport",
    "ScoreRow",
    "align",
    "cer",
    "macro_average",
    "mean_percent",
    "normalize_for_scoring",
    "relative_reduction",
    "render_markdown_table",
    "round_percent",
    "score_manifest",
    "score_systems",
    "wer",
    "word_error_rate",
]
