"""Two-level language/region tag model."""

from __future__ import annotations

import re

from pydantic import BaseModel, ConfigDict, field_validator

NULL_REGION = "NULL"

LANGUAGE_RE = re.compile(r"^[a-z]{2,4}$")
REGION_RE = re.compile(r"^[A-Z]{2,10}$")


class LanguageTag(BaseModel):
    """A (language, region) pair such as ``zh-WENZHOU`` or ``ct-NULL``.

    Regions exceed the BCP 47 region grammar on purpose: the registry uses
    province and city names (``SICHUAN``, ``GUANGDONG``) and the literal
    ``NULL`` for an unknown region.
    """

    model_config = ConfigDict(frozen=True)

    language: str
    region: str

    @field_validator("language")
    @classmethod
    def _check_language(cls, value: str) -> str:
        if not LANGUAGE_RE.match(value):
            raise ValueError(f"language subtag must be 2-4 lowercase letters, got {value!r}")
        return value

    @field_validator("region")
    @classmethod
    def _check_region(cls, value: str) -> str:
        if not REGION_RE.match(value):
            raise ValueError(f"region subtag must be 2-10 uppercase letters or NULL, got {value!r}")
        return value

    @property
    def hyphenated(self) -> str:
        """Render as ``ru-BY``."""
        return f"{self.language}-{self.region}"

    @property
    def tokens(self) -> str:
        """Render as ``<ru><BY>``."""
        return f"<{self.language}><{self.region}>"

    @property
    def language_token(self) -> str:
        return f"<{self.language}>"

    @property
    def region_token(self) -> str:
        return f"<{self.region}>"

    def __str__(self) -> str:
        return self.hyphenated
