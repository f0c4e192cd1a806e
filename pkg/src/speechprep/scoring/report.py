"""Per-language scoring of hypothesis manifests and table rendering."""

from __future__ import annotations

import re
import unicodedata
from collections import defaultdict
from typing import Mapping, Sequence

import structlog
from pydantic import BaseModel, Field

from speechprep.config import ScoringConfig
from speechprep.models.enums import Metric
from speechprep.models.manifest import Utterance
from speechprep.scoring.alignment import EditAlignment, align
from speechprep.scoring.metrics import ScoreError, chars, macro_average, round_percent, wer

logger = structlog.get_logger()

_WHITESPACE_RE = re.compile(r"\s+")


class ScoreRow(BaseModel):
    """Pooled error rate for one language tag or dataset."""

    label: str
    metric: Metric
    value: float = Field(..., ge=0, description="Percent; may exceed 100")
    errors: int = 0
    ref_tokens: int = 0
    utterances: int = 0


class ScoreReport(BaseModel):
    """Rows per tag plus their macro average."""

    system: str = ""
    rows: list[ScoreRow] = Field(default_factory=list)
    average: float | None = None
    missing: list[str] = Field(default_factory=list, description="Reference ids without hypothesis")

    def row(self, label: str) -> ScoreRow | None:
        return next((r for r in self.rows if r.label == label), None)


def normalize_for_scoring(
    text: str, strip_punctuation: bool = False, case_fold: bool = False
) -> str:
    """Trim and collapse whitespace; optionally drop punctuation and fold case."""
    if strip_punctuation:
        text = "".join(" " if unicodedata.category(c).startswith("P") else c for c in text)
    if case_fold:
        text = text.casefold()
    return _WHITESPACE_RE.sub(" ", text).strip()


def metric_for(language: str, cer_languages: Sequence[str]) -> Metric:
    return Metric.CER if language in cer_languages else Metric.WER


def _tokens(text: str, metric: Metric) -> list[str]:
    return chars(text) if metric == Metric.CER else text.split()


def score_manifest(
    refs: Sequence[Utterance],
    hyps: Sequence[Utterance],
    config: ScoringConfig | None = None,
    strict: bool = False,
    system: str = "",
) -> ScoreReport:
    """Score hypotheses against references, pooling errors per language tag.

    Args:
        refs: Reference utterances.
        hyps: Hypothesis utterances keyed by the same ids.
        config: Metric selection and normalization.
        strict: Count a missing hypothesis as all deletions instead of
            skipping it.
        system: Name recorded in the report.

    Returns:
        Rows sorted by tag with the macro average over rows.

    Raises:
        ScoreError: If a hypothesis id has no reference.
    """
    config = config or ScoringConfig()
    ref_ids = {u.id for u in refs}
    unknown = sorted(u.id for u in hyps if u.id not in ref_ids)
    if unknown:
        raise ScoreError(f"{len(unknown)} hypothesis ids have no reference, e.g. {unknown[0]!r}")
    hyp_text = {u.id: u.text for u in hyps}

    pooled: dict[str, EditAlignment] = defaultdict(EditAlignment)
    counts: dict[str, int] = defaultdict(int)
    metrics: dict[str, Metric] = {}
    missing: list[str] = []
    for ref in refs:
        label = str(ref.tag)
        metric = metric_for(ref.tag.language, config.cer_languages)
        metrics[label] = metric
        hyp = hyp_text.get(ref.id)
        if hyp is None:
            missing.append(ref.id)
            if not strict:
                continue
            hyp = ""
        norm = {"strip_punctuation": config.strip_punctuation, "case_fold": config.case_fold}
        pooled[label] = pooled[label] + align(
            _tokens(normalize_for_scoring(ref.text, **norm), metric),
            _tokens(normalize_for_scoring(hyp, **norm), metric),
        )
        counts[label] += 1

    rows = [
        ScoreRow(
            label=label,
            metric=metrics[label],
            value=wer(pooled[label]),
            errors=pooled[label].errors,
            ref_tokens=pooled[label].ref_length,
            utterances=counts[label],
        )
        for label in sorted(pooled)
    ]
    average = macro_average([r.value for r in rows]) if rows else None
    if missing:
        logger.warning("hypotheses_missing", system=system, count=len(missing), strict=strict)
    logger.info("scored", system=system, rows=len(rows), average=average)
    return ScoreReport(system=system, rows=rows, average=average, missing=missing)


def score_systems(
    refs: Sequence[Utterance],
    systems: Mapping[str, Sequence[Utterance]],
    config: ScoringConfig | None = None,
    strict: bool = False,
) -> dict[str, ScoreReport]:
    """Score several hypothesis sets against one reference set."""
    return {
        name: score_manifest(refs, hyps, config, strict=strict, system=name)
        for name, hyps in systems.items()
    }


def _cell(value: float | None) -> str:
    if value is None:
        return "-"
    return f"{round_percent(value):.1f}"


def render_markdown_table(
    reports: Mapping[str, ScoreReport], label_header: str = "Language"
) -> str:
    """Rows are tags, columns are systems, with a final average row."""
    systems = list(reports)
    labels = sorted({row.label for report in reports.values() for row in report.rows})
    lines = [
        "| " + " | ".join([label_header, *systems]) + " |",
        "|" + "|".join(["---"] * (len(systems) + 1)) + "|",
    ]
    for label in labels:
        cells = []
        for name in systems:
            row = reports[name].row(label)
            cells.append(_cell(row.value if row else None))
        lines.append("| " + " | ".join([label, *cells]) + " |")
    averages = [_cell(reports[name].average) for name in systems]
    lines.append("| " + " | ".join(["average", *averages]) + " |")
    return "\n".join(lines) + "\n"
