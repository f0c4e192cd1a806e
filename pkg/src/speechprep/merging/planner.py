"""Logical merge planning of short utterances into longer training segments.

Audio is never rewritten: a plan maps each merged segment to its source
utterances and their offsets, and transcripts are shifted accordingly.
"""

from __future__ import annotations

import random
from collections import defaultdict
from typing import Mapping, Sequence

import structlog
from pydantic import BaseModel, ConfigDict, Field, model_validator

from speechprep.codec.multitask import Header
from speechprep.errors import SpeechPrepError
from speechprep.manifest.stats import BUCKET_WIDTH_S, NUM_BUCKETS, duration_bucket
from speechprep.models.enums import MergeMode
from speechprep.models.manifest import Sentence, Utterance

logger = structlog.get_logger()

MAX_SEGMENT_S = 30.0
CLOSE_AT_S = 25.0
OFFSET_TOLERANCE_S = 1e-6
BUCKET_CENTERS = tuple(BUCKET_WIDTH_S * (b + 0.5) for b in range(NUM_BUCKETS))


class MergeError(SpeechPrepError):
    """Raised for unplannable input or inconsistent merged segments."""

    pass


class SegmentPart(BaseModel):
    """One source utterance placed inside a merged segment."""

    model_config = ConfigDict(frozen=True)

    utt_id: str
    offset_s: float = Field(..., ge=0)
    duration_s: float = Field(..., gt=0)


class MergedSegment(BaseModel):
    """A logical concatenation of utterances sharing one header."""

    merged_id: str
    parts: list[SegmentPart] = Field(..., min_length=1)
    total_duration_s: float
    bucket: int = Field(..., ge=0, lt=NUM_BUCKETS)

    @model_validator(mode="after")
    def _check_layout(self) -> MergedSegment:
        expected = 0.0
        for part in self.parts:
            if abs(part.offset_s - expected) > OFFSET_TOLERANCE_S:
                raise ValueError(f"part {part.utt_id} offset {part.offset_s} != {expected}")
            expected = part.offset_s + part.duration_s
        if abs(expected - self.total_duration_s) > OFFSET_TOLERANCE_S:
            raise ValueError("total_duration_s does not match the parts")
        if self.total_duration_s > MAX_SEGMENT_S + OFFSET_TOLERANCE_S:
            raise ValueError(f"segment {self.merged_id} exceeds {MAX_SEGMENT_S} s")
        if self.bucket != duration_bucket(self.total_duration_s):
            raise ValueError(
                f"segment {self.merged_id} bucket {self.bucket} does not match "
                f"{self.total_duration_s} s"
            )
        return self

    @classmethod
    def from_utterances(cls, merged_id: str, members: Sequence[Utterance]) -> MergedSegment:
        """Lay members end to end with no gap."""
        parts = []
        offset = 0.0
        for u in members:
            parts.append(SegmentPart(utt_id=u.id, offset_s=offset, duration_s=u.duration_s))
            offset = offset + u.duration_s
        return cls(
            merged_id=merged_id,
            parts=parts,
            total_duration_s=offset,
            bucket=duration_bucket(offset),
        )


class MergePlan(BaseModel):
    """Every source utterance assigned to exactly one merged segment."""

    mode: MergeMode
    seed: int = 0
    segments: list[MergedSegment] = Field(default_factory=list)

    def utterance_ids(self) -> list[str]:
        return [p.utt_id for seg in self.segments for p in seg.parts]


def _group(utterances: Sequence[Utterance]) -> list[tuple[str, list[Utterance]]]:
    groups: dict[tuple[str, str, bool, bool], list[Utterance]] = defaultdict(list)
    for u in utterances:
        groups[u.group_key].append(u)
    return [
        ("{}-{}:punct={}:itn={}".format(*key), groups[key])
        for key in sorted(groups)
    ]


def _first_fit_decreasing(items: list[Utterance]) -> list[list[Utterance]]:
    ordered = sorted(items, key=lambda u: (-u.duration_s, u.id))
    open_bins: list[tuple[float, list[Utterance]]] = []
    closed: list[list[Utterance]] = []
    for u in ordered:
        placed = False
        still_open: list[tuple[float, list[Utterance]]] = []
        for total, members in open_bins:
            if not placed and total + u.duration_s <= MAX_SEGMENT_S:
                members.append(u)
                still_open.append((total + u.duration_s, members))
                placed = True
            elif not placed and total >= CLOSE_AT_S:
                closed.append(members)
            else:
                still_open.append((total, members))
        if not placed:
            still_open.append((u.duration_s, [u]))
        open_bins = still_open
    closed.extend(members for _, members in open_bins)
    return closed


def _fits(total_s: float, bucket: int) -> bool:
    return total_s <= MAX_SEGMENT_S and duration_bucket(total_s) <= bucket


def _bucket_balance(items: list[Utterance], rng: random.Random) -> list[list[Utterance]]:
    pool = sorted(items, key=lambda u: u.id)
    rng.shuffle(pool)
    segments: list[list[Utterance]] = []
    bucket = 0
    while pool:
        members: list[Utterance] = []
        total = 0.0
        while total < BUCKET_CENTERS[bucket]:
            fitting = (i for i, u in enumerate(pool) if _fits(total + u.duration_s, bucket))
            pick = next(fitting, None)
            if pick is None:
                break
            u = pool.pop(pick)
            members.append(u)
            total += u.duration_s
        if members:
            segments.append(members)
        bucket = (bucket + 1) % NUM_BUCKETS
    return segments


def plan_merge(utterances: Sequence[Utterance], mode: MergeMode, seed: int = 0) -> MergePlan:
    """Plan merged segments of at most 30 s within each header group.

    Utterances merge only with others of the same language, region,
    punctuation and itn flags.

    Args:
        utterances: Cleaned utterances, none longer than 30 s.
        mode: ``target-25-30`` packs first-fit-decreasing into 30 s bins
            and closes bins that reached 25 s; ``bucket-balance`` fills
            segments toward bucket centers in round-robin order.
        seed: Seed for bucket-balance shuffling.

    Returns:
        The merge plan.

    Raises:
        MergeError: On an utterance longer than 30 s or a duplicate id.
    """
    seen: set[str] = set()
    for u in utterances:
        if u.duration_s > MAX_SEGMENT_S:
            raise MergeError(f"utterance {u.id!r} is {u.duration_s} s, longer than 30 s")
        if u.id in seen:
            raise MergeError(f"duplicate utterance id {u.id!r}")
        seen.add(u.id)

    segments: list[MergedSegment] = []
    for group_name, items in _group(utterances):
        if mode == MergeMode.TARGET_25_30:
            bins = _first_fit_decreasing(items)
        else:
            bins = _bucket_balance(items, random.Random(f"{seed}:{group_name}"))
        for members in bins:
            segments.append(
                MergedSegment.from_utterances(f"m{len(segments):07d}", members)
            )

    plan = MergePlan(mode=mode, seed=seed, segments=segments)
    logger.info(
        "merge_planned",
        mode=mode.value,
        inputs=len(utterances),
        segments=len(segments),
        histogram=bucket_histogram(plan),
    )
    return plan


def bucket_histogram(plan: MergePlan) -> list[int]:
    """Segment counts per 5 s bucket, the last bucket closed at 30 s."""
    counts = [0] * NUM_BUCKETS
    for seg in plan.segments:
        counts[duration_bucket(seg.total_duration_s)] += 1
    return counts


def _clamp(t: float, duration_s: float) -> float:
    return min(max(t, 0.0), duration_s)


def materialize_transcript(
    segment: MergedSegment,
    lookup: Mapping[str, Utterance],
    with_timestamps: bool = True,
) -> tuple[Header, list[Sentence]]:
    """Build the header and offset-shifted sentences of a merged segment.

    Sentence times are clamped into their part and never start before the
    previous sentence ends, so the result always renders.

    Raises:
        MergeError: On a missing part id, a tag mismatch or a flag mismatch.
    """
    members = []
    for part in segment.parts:
        u = lookup.get(part.utt_id)
        if u is None:
            raise MergeError(f"missing part id {part.utt_id!r} in segment {segment.merged_id}")
        members.append(u)
    first = members[0]
    for u in members[1:]:
        if u.tag != first.tag:
            raise MergeError(f"tag mismatch in segment {segment.merged_id}: {first.tag} vs {u.tag}")
        if (u.punctuated, u.itn) != (first.punctuated, first.itn):
            raise MergeError(f"flag mismatch in segment {segment.merged_id}")

    sentences: list[Sentence] = []
    prev_end = 0.0
    for part, u in zip(segment.parts, members):
        for s in u.sentences:
            start = max(part.offset_s + _clamp(s.start_s, u.duration_s), prev_end)
            end = max(part.offset_s + _clamp(s.end_s, u.duration_s), start)
            sentences.append(Sentence(start_s=start, end_s=end, text=s.text))
            prev_end = end
    return Header.for_utterance(first, with_timestamps=with_timestamps), sentences
