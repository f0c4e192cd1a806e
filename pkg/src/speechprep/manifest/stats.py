"""Corpus statistics: per-tag hours, duration buckets and log-scale hour bins."""

from __future__ import annotations

import math
from collections import defaultdict
from typing import Iterable

from pydantic import BaseModel, Field

from speechprep.models.manifest import Utterance

BUCKET_WIDTH_S = 5.0
NUM_BUCKETS = 6
DECADE_LABELS = ("<1h", "1-10h", "10-100h", "100-1kh", ">=1kh")


def duration_bucket(duration_s: float) -> int:
    """Index of the 5 s bucket in [0, 30]; longer durations land in the last bucket."""
    return min(int(math.floor(duration_s / BUCKET_WIDTH_S + 1e-9)), NUM_BUCKETS - 1)


def hour_decade(hours: float) -> int:
    """Index into DECADE_LABELS for a total number of hours."""
    if hours < 1:
        return 0
    if hours < 10:
        return 1
    if hours < 100:
        return 2
    if hours < 1000:
        return 3
    return 4


class TagStats(BaseModel):
    """Statistics for one (language, region) tag."""

    language: str
    region: str
    utterances: int = 0
    hours: float = 0.0
    duration_buckets: list[int] = Field(default_factory=lambda: [0] * NUM_BUCKETS)
    hour_decade: str = DECADE_LABELS[0]


class StatsReport(BaseModel):
    """Corpus-level statistics."""

    total_utterances: int = 0
    total_hours: float = 0.0
    tags: list[TagStats] = Field(default_factory=list)
    duration_buckets: list[int] = Field(default_factory=lambda: [0] * NUM_BUCKETS)
    language_hours: dict[str, float] = Field(default_factory=dict)
    language_decades: dict[str, int] = Field(
        default_factory=lambda: {label: 0 for label in DECADE_LABELS}
    )
    dataset_hours: dict[str, float] = Field(default_factory=dict)

    def languages_over(self, hours: float) -> int:
        """Number of languages with strictly more than ``hours`` of audio."""
        return sum(1 for h in self.language_hours.values() if h > hours)


def corpus_stats(utterances: Iterable[Utterance]) -> StatsReport:
    """Aggregate per-tag, per-language and per-dataset statistics.

    Args:
        utterances: Validated utterances (any iterable; consumed once).

    Returns:
        StatsReport whose per-tag hours sum to the global total and whose
        bucket counts sum to the utterance count.
    """
    seconds_by_tag: dict[tuple[str, str], list[float]] = defaultdict(list)
    seconds_by_dataset: dict[str, list[float]] = defaultdict(list)
    buckets_by_tag: dict[tuple[str, str], list[int]] = defaultdict(lambda: [0] * NUM_BUCKETS)

    for u in utterances:
        key = (u.tag.language, u.tag.region)
        seconds_by_tag[key].append(u.duration_s)
        seconds_by_dataset[u.dataset].append(u.duration_s)
        buckets_by_tag[key][duration_bucket(u.duration_s)] += 1

    report = StatsReport()
    all_seconds: list[float] = []
    language_seconds: dict[str, list[float]] = defaultdict(list)
    for key in sorted(seconds_by_tag):
        seconds = seconds_by_tag[key]
        hours = math.fsum(seconds) / 3600
        report.tags.append(
            TagStats(
                language=key[0],
                region=key[1],
                utterances=len(seconds),
                hours=hours,
                duration_buckets=buckets_by_tag[key],
                hour_decade=DECADE_LABELS[hour_decade(hours)],
            )
        )
        for i, count in enumerate(buckets_by_tag[key]):
            report.duration_buckets[i] += count
        all_seconds.extend(seconds)
        language_seconds[key[0]].extend(seconds)

    report.total_utterances = len(all_seconds)
    report.total_hours = math.fsum(all_seconds) / 3600
    report.language_hours = {
        lang: math.fsum(secs) / 3600 for lang, secs in sorted(language_seconds.items())
    }
    for hours in report.language_hours.values():
        report.language_decades[DECADE_LABELS[hour_decade(hours)]] += 1
    report.dataset_hours = {
        name: math.fsum(secs) / 3600 for name, secs in sorted(seconds_by_dataset.items())
    }
    return report
