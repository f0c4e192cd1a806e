"""Logical merge planning."""

from speechprep.merging.plan_file import read_plan, write_plan
from speechprep.merging.planner import (
    BUCKET_CENTERS,
    MAX_SEGMENT_S,
    MergedSegment,
    MergeError,
    MergePlan,
    SegmentPart,
    bucket_histogram,
    materialize_transcript,
    plan_merge,
)

__all__ = [
    "BUCKET_CENTERS",
    "MAX_SEGMENT_S",
    "MergeError",
    "MergePlan",
    "MergedSegment",
    "SegmentPart",
    "bucket_histogram",
    "materialize_transcript",
    "plan_merge",
    "read_plan",
    "write_plan",
]
