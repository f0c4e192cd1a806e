"""Plan file: the JSON mapping from merged segments to source utterances."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import structlog
from pydantic import ValidationError

from speechprep.merging.planner import MergedSegment, MergeError, MergePlan, SegmentPart
from speechprep.models.enums import MergeMode

logger = structlog.get_logger()


def plan_to_dict(plan: MergePlan) -> dict[str, Any]:
    return {
        "mode": plan.mode.value,
        "seed": plan.seed,
        "segments": [
            {
                "id": seg.merged_id,
                "bucket": seg.bucket,
                "total_duration_s": seg.total_duration_s,
                "parts": [
                    {"utt": p.utt_id, "offset_s": p.offset_s, "duration_s": p.duration_s}
                    for p in seg.parts
                ],
            }
            for seg in plan.segments
        ],
    }


def write_plan(plan: MergePlan, path: Path) -> None:
    """Write a plan as UTF-8 JSON; equal plans give identical bytes."""
    text = json.dumps(plan_to_dict(plan), ensure_ascii=False, indent=2)
    Path(path).write_text(text + "\n", encoding="utf-8")
    logger.info("merge_plan_written", path=str(path), segments=len(plan.segments))


def read_plan(path: Path) -> MergePlan:
    """Read a plan file.

    Raises:
        MergeError: If the file is unreadable or violates the segment layout.
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        segments = [
            MergedSegment(
                merged_id=seg["id"],
                bucket=seg["bucket"],
                total_duration_s=seg["total_duration_s"],
                parts=[
                    SegmentPart(utt_id=p["utt"], offset_s=p["offset_s"], duration_s=p["duration_s"])
                    for p in seg["parts"]
                ],
            )
            for seg in data["segments"]
        ]
        return MergePlan(mode=MergeMode(data["mode"]), seed=data.get("seed", 0), segments=segments)
    except OSError as e:
        raise MergeError(f"cannot read plan {path}: {e}") from e
    except (KeyError, TypeError, ValueError, ValidationError) as e:
        raise MergeError(f"malformed plan {path}: {e}") from e
