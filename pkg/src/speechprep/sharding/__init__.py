"""Rank sharding of manifests."""

from speechprep.sharding.sharder import (
    PRNG_ID,
    PartitionReport,
    ShardAssignment,
    ShardError,
    assign_shards,
    balance_ratio,
    verify_partition,
)
from speechprep.sharding.writer import META_FILENAME, read_rank_shard, shard_filename, write_shards

__all__ = [
    "META_FILENAME",
    "PRNG_ID",
    "PartitionReport",
    "ShardAssignment",
    "ShardError",
    "assign_shards",
    "balance_ratio",
    "read_rank_shard",
    "shard_filename",
    "verify_partition",
    "write_shards",
]
