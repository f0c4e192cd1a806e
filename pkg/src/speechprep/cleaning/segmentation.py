"""Long-audio segmentation at sentence boundaries."""

from __future__ import annotations

from pydantic import Field

from speechprep.cleaning.filters import CleaningError
from speechprep.models.manifest import Sentence, Utterance

MAX_CLIP_S = 30.0


class Clip(Utterance):
    """An utterance cut out of a longer source recording."""

    source_id: str = Field(..., description="Id of the source utterance")
    source_offset_s: float = Field(default=0.0, ge=0, description="Clip start in the source")
    over_length: bool = Field(default=False, description="Single sentence longer than the limit")


def _make_clip(u: Utterance, index: int, group: list[Sentence], max_len_s: float) -> Clip:
    start = group[0].start_s
    end = group[-1].end_s
    if end <= start:
        raise CleaningError(f"utterance {u.id!r}: clip {index} has non-positive span")
    return Clip(
        id=f"{u.id}-{index:04d}",
        audio_path=u.audio_path,
        duration_s=end - start,
        tag=u.tag,
        sentences=[s.shifted(-start) for s in group],
        punctuated=u.punctuated,
        itn=u.itn,
        dataset=u.dataset,
        source_id=u.id,
        source_offset_s=max(start, 0.0),
        over_length=end - start > max_len_s,
    )


def segment_long_audio(u: Utterance, max_len_s: float = MAX_CLIP_S) -> list[Clip]:
    """Pack consecutive sentences greedily into clips spanning at most ``max_len_s``.

    Clip boundaries fall only between sentences, and clip-local times are
    re-based to the clip start. A sentence longer than the limit becomes a
    clip of its own with ``over_length`` set. An utterance already within the
    limit comes back as a single clip with its own id.

    Raises:
        CleaningError: If the utterance has no sentences.
    """
    if not u.sentences:
        raise CleaningError(f"utterance {u.id!r} has no sentences to segment")
    if u.duration_s <= max_len_s:
        record = {**u.model_dump(), "source_id": u.id, "source_offset_s": 0.0, "over_length": False}
        return [Clip.model_validate(record)]

    groups: list[list[Sentence]] = []
    current: list[Sentence] = []
    for s in u.sentences:
        if current and s.end_s - current[0].start_s > max_len_s:
            groups.append(current)
            current = []
        current.append(s)
    groups.append(current)
    return [_make_clip(u, i, group, max_len_s) for i, group in enumerate(groups)]
