"""Shard files: one manifest per rank plus a metadata file."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Sequence

import structlog

from speechprep.manifest.io import ManifestError, read_manifest, write_manifest
from speechprep.models.manifest import Utterance
from speechprep.sharding.sharder import ShardAssignment, ShardError

logger = structlog.get_logger()

META_FILENAME = "shards.meta.json"


def shard_filename(rank: int) -> str:
    return f"shard-{rank:05}.jsonl"


def write_shards(
    assignment: ShardAssignment,
    utterances: Sequence[Utterance],
    out_dir: Path,
    jobs: int = 1,
) -> Path:
    """Write each rank's manifest lines and the metadata file.

    Args:
        assignment: Shard assignment over the utterance ids.
        utterances: Records referenced by the assignment.
        out_dir: Output directory, created if needed.
        jobs: Writer threads.

    Returns:
        Path of the metadata file.

    Raises:
        ShardError: If an assigned id has no record or a file cannot be written.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    by_id = {u.id: u for u in utterances}
    missing = [i for shard in assignment.shards for i in shard if i not in by_id]
    if missing:
        raise ShardError(f"{len(missing)} assigned ids have no record, e.g. {missing[0]!r}")

    def write_rank(rank: int) -> int:
        records = [by_id[i] for i in assignment.shards[rank]]
        return write_manifest(records, out_dir / shard_filename(rank), validate=False)

    try:
        with ThreadPoolExecutor(max_workers=max(1, jobs)) as executor:
            counts = list(executor.map(write_rank, range(assignment.world_size)))
    except ManifestError as e:
        raise ShardError(str(e)) from e

    meta = {
        "world_size": assignment.world_size,
        "seed": assignment.seed,
        "epoch": assignment.epoch,
        "mode": assignment.mode.value,
        "prng": assignment.prng,
        "ranks": [
            {
                "rank": rank,
                "file": shard_filename(rank),
                "items": counts[rank],
                "duration_s": assignment.totals[rank] if assignment.totals else None,
            }
            for rank in range(assignment.world_size)
        ],
    }
    meta_path = out_dir / META_FILENAME
    meta_path.write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
    logger.info("shards_written", out_dir=str(out_dir), world_size=assignment.world_size)
    return meta_path


def read_rank_shard(out_dir: Path, rank: int) -> list[Utterance]:
    """Load one rank's records; only that rank's shard file is opened.

    Raises:
        ShardError: If the metadata is missing or the rank is out of range.
    """
    out_dir = Path(out_dir)
    try:
        meta = json.loads((out_dir / META_FILENAME).read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise ShardError(f"cannot read shard metadata in {out_dir}: {e}") from e
    if not 0 <= rank < meta["world_size"]:
        raise ShardError(f"rank {rank} outside world_size {meta['world_size']}")
    return read_manifest(out_dir / shard_filename(rank), strict=True)
