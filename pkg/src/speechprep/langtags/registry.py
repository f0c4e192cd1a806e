"""Bundled language-region registry."""

from __future__ import annotations

import csv
import io
from importlib import resources
from pathlib import Path
from typing import Iterator, Optional

import structlog
from pydantic import BaseModel, ConfigDict

from speechprep.langtags.parser import TagError, parse_tag
from speechprep.models.tags import LanguageTag

logger = structlog.get_logger()

REGISTRY_RESOURCE = "language_regions.csv"


class RegistryError(TagError):
    """Raised when a registry file is malformed or contains duplicates."""

    pass


class RegistryEntry(BaseModel):
    """One registry row."""

    model_config = ConfigDict(frozen=True)

    tag: LanguageTag
    display_name: str


class LanguageRegistry:
    """Immutable, ordered set of registered language-region tags."""

    def __init__(self, entries: list[RegistryEntry]):
        """Initialize the registry.

        Args:
            entries: Entries in registry order.

        Raises:
            RegistryError: If a tag appears twice.
        """
        by_tag: dict[LanguageTag, RegistryEntry] = {}
        for entry in entries:
            if entry.tag in by_tag:
                raise RegistryError(f"duplicate registry tag {entry.tag}")
            by_tag[entry.tag] = entry
        self._entries: tuple[RegistryEntry, ...] = tuple(entries)
        self._by_tag = by_tag

    @classmethod
    def from_csv_text(cls, text: str) -> LanguageRegistry:
        """Parse ``code,name`` CSV text."""
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames != ["code", "name"]:
            raise RegistryError(f"expected columns code,name, got {reader.fieldnames}")
        entries = []
        for row_num, row in enumerate(reader, start=2):
            try:
                tag = parse_tag(row["code"])
            except TagError as e:
                raise RegistryError(f"row {row_num}: {e}") from e
            entries.append(RegistryEntry(tag=tag, display_name=row["name"].strip()))
        return cls(entries)

    @classmethod
    def from_file(cls, path: Path) -> LanguageRegistry:
        return cls.from_csv_text(path.read_text(encoding="utf-8"))

    @classmethod
    def bundled(cls) -> LanguageRegistry:
        """Load the registry shipped with the package."""
        text = resources.files("speechprep.langtags").joinpath(REGISTRY_RESOURCE).read_text(
            encoding="utf-8"
        )
        registry = cls.from_csv_text(text)
        logger.debug("registry_loaded", entries=len(registry))
        return registry

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[RegistryEntry]:
        return iter(self._entries)

    def __contains__(self, tag: object) -> bool:
        return tag in self._by_tag

    def lookup(self, tag: LanguageTag) -> Optional[RegistryEntry]:
        """Exact-match lookup; ``None`` when the tag is not registered."""
        return self._by_tag.get(tag)

    def list_dialects(self, language: str) -> list[RegistryEntry]:
        """All entries for one language subtag, in registry order."""
        return [e for e in self._entries if e.tag.language == language]

    def languages(self) -> list[str]:
        """Distinct language subtags in first-appearance order."""
        return list(dict.fromkeys(e.tag.language for e in self._entries))

    def regions(self) -> list[str]:
        """Distinct region subtags in first-appearance order."""
        return list(dict.fromkeys(e.tag.region for e in self._entries))


_registry: Optional[LanguageRegistry] = None


def get_registry() -> LanguageRegistry:
    """Get the lazily loaded bundled registry."""
    global _registry
    if _registry is None:
        _registry = LanguageRegistry.bundled()
    return _registry


def registry_lookup(
    tag: LanguageTag, registry: Optional[LanguageRegistry] = None
) -> Optional[RegistryEntry]:
    """Look up ``tag``; not-found is ``None``, never an error."""
    return (registry or get_registry()).lookup(tag)


def list_dialects(
    language: str, registry: Optional[LanguageRegistry] = None
) -> list[RegistryEntry]:
    """List every registry entry for ``language``."""
    return (registry or get_registry()).list_dialects(language)
