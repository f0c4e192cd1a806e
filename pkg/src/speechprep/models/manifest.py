"""Utterance and sentence models for JSONL manifests."""

from __future__ import annotations

from typing import Any

from pydantic import BaseModel, Field

from speechprep.models.tags import LanguageTag


class Sentence(BaseModel):
    """One sentence with sentence-level timestamps.

    Ordering and range constraints are checked by ``validate_utterance``
    rather than at construction, so that bad rows can still be loaded and
    reported by the cleaning stage.
    """

    start_s: float = Field(..., description="Sentence start in seconds")
    end_s: float = Field(..., description="Sentence end in seconds")
    text: str = Field(..., description="UTF-8 sentence text")

    @property
    def span_s(self) -> float:
        return self.end_s - self.start_s

    def shifted(self, offset_s: float) -> Sentence:
        """Return a copy moved by ``offset_s`` seconds."""
        return Sentence(
            start_s=self.start_s + offset_s, end_s=self.end_s + offset_s, text=self.text
        )


class Utterance(BaseModel):
    """One manifest record."""

    id: str = Field(..., min_length=1, description="Unique utterance id")
    audio_path: str = Field(..., description="Audio reference (path or URI)")
    duration_s: float = Field(..., gt=0, description="Authoritative duration in seconds")
    tag: LanguageTag = Field(..., description="Language/region tag")
    sentences: list[Sentence] = Field(default_factory=list, description="Ordered sentences")
    punctuated: bool = Field(default=False, description="Transcript carries punctuation")
    itn: bool = Field(
        default=False, description="Transcript contains non-standardized elements (e.g. digits)"
    )
    dataset: str = Field(default="", description="Source corpus name")

    @property
    def text(self) -> str:
        """Sentence texts joined by single spaces."""
        return " ".join(s.text for s in self.sentences)

    @property
    def char_count(self) -> int:
        """Total Unicode scalar count over all sentence texts."""
        return sum(len(s.text) for s in self.sentences)

    @property
    def group_key(self) -> tuple[str, str, bool, bool]:
        """Key under which utterances may share one multitask header."""
        return (self.tag.language, self.tag.region, self.punctuated, self.itn)

    def to_record(self) -> dict[str, Any]:
        """Serialize to the manifest line schema, keys in canonical order."""
        return {
            "id": self.id,
            "audio": self.audio_path,
            "duration_s": self.duration_s,
            "lang": self.tag.language,
            "region": self.tag.region,
            "punct": self.punctuated,
            "itn": self.itn,
            "dataset": self.dataset,
            "sentences": [
                {"start": s.start_s, "end": s.end_s, "text": s.text} for s in self.sentences
            ],
        }

    @classmethod
    def from_record(cls, record: dict[str, Any]) -> Utterance:
        """Build from a manifest line object.

        Raises:
            KeyError: If a required key is missing.
            pydantic.ValidationError: If a value has the wrong type or range.
        """
        return cls(
            id=record["id"],
            audio_path=record["audio"],
            duration_s=record["duration_s"],
            tag=LanguageTag(language=record["lang"], region=record["region"]),
            sentences=[
                Sentence(start_s=s["start"], end_s=s["end"], text=s["text"])
                for s in record.get("sentences", [])
            ],
            punctuated=record.get("punct", False),
            itn=record.get("itn", False),
            dataset=record.get("dataset", ""),
        )
