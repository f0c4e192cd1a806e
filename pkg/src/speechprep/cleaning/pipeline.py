"""Cleaning stage: filters plus segmentation over a whole manifest."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Sequence

import structlog
from pydantic import BaseModel, Field

from speechprep.cleaning.filters import (
    FilterVerdict,
    normalize_transcript,
    punctuation_filter,
    similarity_filter,
    speech_ratio_filter,
    validation_filter,
)
from speechprep.cleaning.segmentation import segment_long_audio
from speechprep.config import CleaningConfig
from speechprep.models.manifest import Sentence, Utterance

logger = structlog.get_logger()


class CleaningResult(BaseModel):
    """Kept utterances (or clips) and the verdicts of everything rejected."""

    kept: list[Utterance] = Field(default_factory=list)
    rejected: list[FilterVerdict] = Field(default_factory=list)


def clean_utterance(
    u: Utterance, config: CleaningConfig
) -> tuple[list[Utterance], list[FilterVerdict]]:
    """Run every filter on one utterance.

    Order: record validation, transcript normalization with a similarity
    check, punctuation consistency, segmentation of long audio, then the
    text-rate filter per clip.

    Returns:
        Kept utterances and rejection verdicts. A rejected utterance yields
        exactly one verdict; clips are judged individually.
    """
    verdict = validation_filter(u, config.timestamp_tolerance_s)
    if not verdict.keep:
        return [], [verdict]

    normalized = [
        Sentence(start_s=s.start_s, end_s=s.end_s, text=normalize_transcript(s.text))
        for s in u.sentences
    ]
    cleaned = u.model_copy(update={"sentences": normalized})
    verdict = similarity_filter(u.text, cleaned.text, config.min_similarity, utterance_id=u.id)
    if not verdict.keep:
        return [], [verdict]

    verdict = punctuation_filter(cleaned)
    if not verdict.keep:
        return [], [verdict]

    if cleaned.duration_s > config.segment_max_s:
        if not cleaned.sentences:
            return [], [
                FilterVerdict(
                    utterance_id=u.id,
                    keep=False,
                    rule="segmentation",
                    measured=cleaned.duration_s,
                    threshold=config.segment_max_s,
                    detail="long audio without sentence timestamps",
                )
            ]
        candidates: list[Utterance] = list(segment_long_audio(cleaned, config.segment_max_s))
    else:
        candidates = [cleaned]

    kept: list[Utterance] = []
    rejected: list[FilterVerdict] = []
    max_ratio = config.ratio_threshold_for(u.tag.language)
    for clip in candidates:
        if getattr(clip, "over_length", False):
            rejected.append(
                FilterVerdict(
                    utterance_id=clip.id,
                    keep=False,
                    rule="over_length",
                    measured=clip.duration_s,
                    threshold=config.segment_max_s,
                )
            )
            continue
        verdict = speech_ratio_filter(clip, max_ratio)
        if verdict.keep:
            kept.append(clip)
        else:
            rejected.append(verdict)
    return kept, rejected


def clean_manifest(
    utterances: Sequence[Utterance], config: CleaningConfig, jobs: int = 1
) -> CleaningResult:
    """Clean a manifest; output order follows input order for any ``jobs``.

    Args:
        utterances: Input records.
        config: Cleaning thresholds.
        jobs: Worker processes; 1 runs in-process.
    """
    worker = partial(clean_utterance, config=config)
    if jobs > 1 and len(utterances) > 1:
        chunksize = max(1, len(utterances) // (jobs * 4))
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            outcomes = list(executor.map(worker, utterances, chunksize=chunksize))
    else:
        outcomes = [worker(u) for u in utterances]

    result = CleaningResult()
    for kept, rejected in outcomes:
        result.kept.extend(kept)
        result.rejected.extend(rejected)
    by_rule: dict[str, int] = {}
    for verdict in result.rejected:
        by_rule[verdict.rule] = by_rule.get(verdict.rule, 0) + 1
    logger.info(
        "cleaning_finished",
        inputs=len(utterances),
        kept=len(result.kept),
        rejected=len(result.rejected),
        by_rule=by_rule,
        jobs=jobs,
    )
    return result
