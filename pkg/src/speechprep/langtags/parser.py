"""Parser for hyphenated (``ru-BY``) and token (``<ru><BY>``) tag forms."""

from __future__ import annotations

import re
from typing import TYPE_CHECKING, Optional

from pydantic import ValidationError

from speechprep.errors import SpeechPrepError
from speechprep.models.tags import NULL_REGION, LanguageTag

if TYPE_CHECKING:
    from speechprep.langtags.registry import LanguageRegistry


class TagError(SpeechPrepError):
    """Raised when a language tag cannot be parsed or is not registered."""

    pass


_ALLOWED_CHARS = re.compile(r"^[A-Za-z<>-]+$")
_TOKEN_FORM = re.compile(r"^<([^<>]*)><([^<>]*)>$")


def parse_tag(
    text: str,
    strict: bool = False,
    registry: Optional[LanguageRegistry] = None,
) -> LanguageTag:
    """Parse a two-level language tag.

    Args:
        text: ``"ru-BY"`` or ``"<ru><BY>"``. Casing is canonicalized
            (language lowercase, region uppercase).
        strict: Require the tag to be present in ``registry``.
        registry: Registry used for strict validation.

    Returns:
        The parsed LanguageTag.

    Raises:
        TagError: On empty components, illegal characters, malformed
            syntax, or (strict mode) an unregistered tag.
    """
    text = text.strip()
    if not text:
        raise TagError("empty tag")
    if not _ALLOWED_CHARS.match(text):
        raise TagError(f"illegal characters in tag {text!r}")

    if text.startswith("<"):
        match = _TOKEN_FORM.match(text)
        if not match:
            raise TagError(f"malformed token-form tag {text!r}")
        language, region = match.group(1), match.group(2)
    else:
        if "<" in text or ">" in text or text.count("-") != 1:
            raise TagError(f"malformed hyphenated tag {text!r}")
        language, region = text.split("-")

    if not language or not region:
        raise TagError(f"empty component in tag {text!r}")

    region = NULL_REGION if region.upper() == NULL_REGION else region.upper()
    try:
        tag = LanguageTag(language=language.lower(), region=region)
    except ValidationError as e:
        raise TagError(f"invalid tag {text!r}: {e.errors()[0]['msg']}") from e

    if strict:
        if registry is None:
            raise TagError("strict tag validation requires a registry")
        if registry.lookup(tag) is None:
            raise TagError(f"tag {tag} is not in the registry")
    return tag
