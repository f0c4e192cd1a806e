"""Minimal-cost edit alignment between token sequences."""

from __future__ import annotations

from typing import Hashable, Sequence

from pydantic import BaseModel, ConfigDict, Field


class EditAlignment(BaseModel):
    """Operation counts of a minimal alignment."""

    model_config = ConfigDict(frozen=True)

    substitutions: int = Field(default=0, ge=0)
    insertions: int = Field(default=0, ge=0)
    deletions: int = Field(default=0, ge=0)
    hits: int = Field(default=0, ge=0)

    @property
    def errors(self) -> int:
        return self.substitutions + self.insertions + self.deletions

    @property
    def ref_length(self) -> int:
        """N = S + D + H."""
        return self.substitutions + self.deletions + self.hits

    def __add__(self, other: EditAlignment) -> EditAlignment:
        return EditAlignment(
            substitutions=self.substitutions + other.substitutions,
            insertions=self.insertions + other.insertions,
            deletions=self.deletions + other.deletions,
            hits=self.hits + other.hits,
        )


def align(ref: Sequence[Hashable], hyp: Sequence[Hashable]) -> EditAlignment:
    """Levenshtein alignment with unit costs.

    Among minimal alignments the backtrace prefers a substitution (or hit),
    then an insertion, then a deletion.
    """
    n, m = len(ref), len(hyp)
    cost = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        cost[i][0] = i
    for j in range(m + 1):
        cost[0][j] = j
    for i in range(1, n + 1):
        row, prev = cost[i], cost[i - 1]
        for j in range(1, m + 1):
            row[j] = min(
                prev[j - 1] + (ref[i - 1] != hyp[j - 1]),
                row[j - 1] + 1,
                prev[j] + 1,
            )

    s = ins = dels = hits = 0
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0:
            mismatch = ref[i - 1] != hyp[j - 1]
            if cost[i][j] == cost[i - 1][j - 1] + mismatch:
                if mismatch:
                    s += 1
                else:
                    hits += 1
                i -= 1
                j -= 1
                continue
        if j > 0 and cost[i][j] == cost[i][j - 1] + 1:
            ins += 1
            j -= 1
        else:
            dels += 1
            i -= 1
    return EditAlignment(substitutions=s, insertions=ins, deletions=dels, hits=hits)
