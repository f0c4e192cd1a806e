"""Duration-balanced, rank-local partitioning of a manifest.

Each data-parallel rank receives only the ids it will read. Membership is
computed with the longest-processing-time rule; within a shard the order
is shuffled per epoch.
"""

from __future__ import annotations

import heapq
import math
import random
from collections import Counter
from typing import Sequence

import structlog
from pydantic import BaseModel, Field

from speechprep.errors import SpeechPrepError
from speechprep.models.enums import ShardMode

logger = structlog.get_logger()

# Identity of the generator used for shuffles; recorded in shard metadata.
PRNG_ID = "python-random-mt19937/str-seed"

ShardItem = tuple[str, float]


class ShardError(SpeechPrepError):
    """Raised for invalid sharding parameters or inputs."""

    pass


class ShardAssignment(BaseModel):
    """Per-rank ordered id lists for one epoch."""

    world_size: int = Field(..., ge=1)
    epoch: int = Field(..., ge=0)
    seed: int
    mode: ShardMode = ShardMode.STATIC
    prng: str = PRNG_ID
    shards: list[list[str]]
    totals: list[float] = Field(default_factory=list, description="Seconds per rank")


class PartitionReport(BaseModel):
    """Result of checking an assignment against its input items."""

    violations: list[str] = Field(default_factory=list)
    rank_totals: list[float] = Field(default_factory=list)
    rank_counts: list[int] = Field(default_factory=list)
    balance_ratio: float = 1.0

    @property
    def ok(self) -> bool:
        return not self.violations


def rank_rng(seed: int, epoch: int, rank: int) -> random.Random:
    """Generator for the within-shard order of one rank in one epoch."""
    return random.Random(f"{seed}:{epoch}:{rank}")


def _list_schedule(order: Sequence[ShardItem], world_size: int) -> list[list[ShardItem]]:
    heap = [(0.0, rank) for rank in range(world_size)]
    shards: list[list[ShardItem]] = [[] for _ in range(world_size)]
    for item in order:
        total, rank = heapq.heappop(heap)
        shards[rank].append(item)
        heapq.heappush(heap, (total + item[1], rank))
    return shards


def assign_shards(
    items: Sequence[ShardItem],
    world_size: int,
    seed: int,
    epoch: int = 0,
    mode: ShardMode = ShardMode.STATIC,
) -> ShardAssignment:
    """Partition items across ranks.

    In static mode items are taken longest first (ties by id) and each goes
    to the rank with the smallest running duration, so membership does not
    depend on the epoch. In global-reshuffle mode the order is an
    epoch-seeded permutation instead. Each rank's list is then shuffled with
    a generator keyed on (seed, epoch, rank).

    Args:
        items: (id, duration_s) pairs with unique ids.
        world_size: Number of ranks.
        seed: Shuffle seed.
        epoch: Epoch number.
        mode: Membership policy across epochs.

    Returns:
        The assignment.

    Raises:
        ShardError: If world_size < 1, epoch < 0 or an id repeats.
    """
    if world_size < 1:
        raise ShardError(f"world_size must be >= 1, got {world_size}")
    if epoch < 0:
        raise ShardError(f"epoch must be >= 0, got {epoch}")
    dupes = [item_id for item_id, n in Counter(i for i, _ in items).items() if n > 1]
    if dupes:
        raise ShardError(f"duplicate ids: {', '.join(sorted(dupes)[:5])}")

    if mode == ShardMode.STATIC:
        order = sorted(items, key=lambda item: (-item[1], item[0]))
    else:
        order = sorted(items, key=lambda item: item[0])
        random.Random(f"{seed}:{epoch}").shuffle(order)

    shards: list[list[str]] = []
    totals: list[float] = []
    for rank, shard in enumerate(_list_schedule(order, world_size)):
        ids = [item_id for item_id, _ in shard]
        rank_rng(seed, epoch, rank).shuffle(ids)
        shards.append(ids)
        totals.append(math.fsum(d for _, d in shard))

    logger.info(
        "shards_assigned",
        items=len(items),
        world_size=world_size,
        epoch=epoch,
        mode=mode.value,
        max_total=max(totals),
        min_total=min(totals),
    )
    return ShardAssignment(
        world_size=world_size,
        epoch=epoch,
        seed=seed,
        mode=mode,
        shards=shards,
        totals=totals,
    )


def balance_ratio(totals: Sequence[float]) -> float:
    """max/min of per-rank totals; 1.0 when all are zero, inf when only some are."""
    if not totals or max(totals) == 0:
        return 1.0
    if min(totals) == 0:
        return math.inf
    return max(totals) / min(totals)


def verify_partition(assignment: ShardAssignment, items: Sequence[ShardItem]) -> PartitionReport:
    """Check disjointness and completeness; report per-rank totals.

    Violations are returned, never raised.
    """
    durations = dict(items)
    violations: list[str] = []
    if len(assignment.shards) != assignment.world_size:
        violations.append(
            f"world_size {assignment.world_size} but {len(assignment.shards)} shards"
        )
    seen: Counter[str] = Counter()
    totals: list[float] = []
    for shard in assignment.shards:
        seen.update(shard)
        totals.append(math.fsum(durations.get(item_id, 0.0) for item_id in shard))
    violations += [f"duplicate {item_id}" for item_id, n in sorted(seen.items()) if n > 1]
    violations += [f"missing {item_id}" for item_id in sorted(durations) if item_id not in seen]
    violations += [f"unknown {item_id}" for item_id in sorted(seen) if item_id not in durations]
    return PartitionReport(
        violations=violations,
        rank_totals=totals,
        rank_counts=[len(s) for s in assignment.shards],
        balance_ratio=balance_ratio(totals),
    )
