"""Unit tests for language tags and the bundled registry."""

import pytest
from pydantic import ValidationError

from speechprep.langtags import (
    LanguageRegistry,
    RegistryError,
    TagError,
    list_dialects,
    parse_tag,
    registry_lookup,
)
from speechprep.models.tags import LanguageTag


class TestParseTag:
    """Tests for parse_tag."""

    def test_token_form(self):
        """Test that the token form parses into language and region."""
        assert parse_tag("<ru><RU>") == LanguageTag(language="ru", region="RU")

    def test_hyphenated_long_region(self):
        """Test that city-level regions longer than BCP 47 allows are accepted."""
        tag = parse_tag("zh-WENZHOU")
        assert (tag.language, tag.region) == ("zh", "WENZHOU")

    def test_unregistered_tag_permissive(self):
        """Test that permissive mode accepts syntactically valid unregistered tags."""
        assert parse_tag("<ru><BY>") == LanguageTag(language="ru", region="BY")

    def test_canonical_casing(self):
        """Test that language is lowercased and region uppercased."""
        tag = parse_tag("ZH-cn")
        assert tag.hyphenated == "zh-CN"

    def test_null_region_sentinel(self):
        """Test that NULL is kept as a literal region."""
        tag = parse_tag("ct-null")
        assert tag.region == "NULL"
        assert tag.tokens == "<ct><NULL>"

    @pytest.mark.parametrize(
        "text",
        ["", "zh", "zh-", "-CN", "<zh>", "<zh><>", "zh_CN", "zh-CN-x", "zh1-CN", "zh-C N"],
    )
    def test_rejects_malformed(self, text: str):
        """Test that malformed tags raise TagError."""
        with pytest.raises(TagError):
            parse_tag(text)

    @pytest.mark.parametrize("text", ["zh-CN", "ct-NULL", "kab-NULL", "zh-GUANGDONG", "ar-GLA"])
    def test_render_parse_inverse(self, text: str):
        """Test that both render forms parse back to the same tag."""
        tag = parse_tag(text)
        assert parse_tag(tag.hyphenated) == tag
        assert parse_tag(tag.tokens) == tag

    def test_strict_requires_registry_membership(self, registry: LanguageRegistry):
        """Test that strict mode rejects tags missing from the registry."""
        assert parse_tag("ja-JP", strict=True, registry=registry).region == "JP"
        with pytest.raises(TagError, match="not in the registry"):
            parse_tag("ru-BY", strict=True, registry=registry)

    def test_strict_without_registry(self):
        """Test that strict mode needs a registry."""
        with pytest.raises(TagError):
            parse_tag("ja-JP", strict=True)

    def test_model_rejects_bad_subtags(self):
        """Test LanguageTag validation directly."""
        with pytest.raises(ValidationError):
            LanguageTag(language="Zh", region="CN")
        with pytest.raises(ValidationError):
            LanguageTag(language="zh", region="cn")


class TestRegistry:
    """Tests for the bundled registry."""

    def test_loads_without_duplicates(self, registry: LanguageRegistry):
        """Test that every row is a distinct tag."""
        tags = [entry.tag for entry in registry]
        assert len(tags) == len(set(tags)) == 76

    def test_lookup_spot_checks(self, registry: LanguageRegistry):
        """Test lookups against printed display names."""
        assert registry_lookup(parse_tag("ja-JP"), registry).display_name == "Japanese"
        assert registry_lookup(parse_tag("ct-HK"), registry).display_name == "Yue (Hongkong)"
        entry = registry_lookup(parse_tag("zh-WENZHOU"), registry)
        assert entry.display_name == "Chinese (Wenzhou)"

    def test_lookup_missing_is_none(self, registry: LanguageRegistry):
        """Test that not-found is a value."""
        assert registry_lookup(parse_tag("ru-BY"), registry) is None
        assert parse_tag("ru-BY") not in registry

    def test_list_dialects(self, registry: LanguageRegistry):
        """Test dialect counts per language."""
        assert len(list_dialects("zh", registry)) == 22
        assert len(list_dialects("ar", registry)) == 9
        assert [e.tag.hyphenated for e in list_dialects("ja", registry)] == ["ja-JP"]
        assert list_dialects("xx", registry) == []

    def test_dialects_in_registry_order(self, registry: LanguageRegistry):
        """Test that list_dialects preserves file order."""
        zh = list_dialects("zh", registry)
        assert zh[0].tag.hyphenated == "zh-CN"
        order = [e.tag for e in registry if e.tag.language == "zh"]
        assert [e.tag for e in zh] == order

    def test_languages_are_distinct(self, registry: LanguageRegistry):
        """Test language subtag enumeration."""
        languages = registry.languages()
        assert len(languages) == len(set(languages))
        assert {"zh", "ja", "ct", "ar", "kab"} <= set(languages)

    def test_duplicate_rows_rejected(self):
        """Test that a registry with a repeated tag fails to load."""
        with pytest.raises(RegistryError, match="duplicate"):
            LanguageRegistry.from_csv_text("code,name\nzh-CN,A\nzh-cn,B\n")

    def test_bad_header_rejected(self):
        """Test that the CSV header is checked."""
        with pytest.raises(RegistryError):
            LanguageRegistry.from_csv_text("tag,label\nzh-CN,A\n")

    def test_bad_row_rejected(self):
        """Test that an unparseable code reports its row."""
        with pytest.raises(RegistryError, match="row 3"):
            LanguageRegistry.from_csv_text("code,name\nzh-CN,A\nbogus,B\n")
