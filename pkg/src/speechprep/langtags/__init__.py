"""Two-level language/region tags and the bundled registry."""

from speechprep.langtags.parser import TagError, parse_tag
from speechprep.langtags.registry import (
    LanguageRegistry,
    RegistryEntry,
    RegistryError,
    get_registry,
    list_dialects,
    registry_lookup,
)

__all__ = [
    "LanguageRegistry",
    "RegistryEntry",
    "RegistryError",
    "TagError",
    "get_registry",
    "list_dialects",
    "parse_tag",
    "registry_lookup",
]
