"""Unit tests for manifest reading, writing, validation and statistics."""

import json
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from speechprep.manifest import (
    ManifestError,
    ManifestLineError,
    ManifestReader,
    Violation,
    corpus_stats,
    duration_bucket,
    read_manifest,
    validate_utterance,
    write_manifest,
)
from speechprep.models.enums import ViolationKind
from speechprep.models.manifest import Sentence, Utterance
from speechprep.models.tags import LanguageTag
from tests.conftest import make_utterance, write_jsonl


def _kinds(violations: list[Violation]) -> list[ViolationKind]:
    return [v.kind for v in violations]


class TestReadManifest:
    """Tests for read_manifest and ManifestReader."""

    def test_empty_file(self, tmp_path: Path):
        """Test that an empty file yields no utterances."""
        path = tmp_path / "empty.jsonl"
        path.write_text("", encoding="utf-8")
        assert read_manifest(path) == []

    def test_single_line(self, tmp_path: Path):
        """Test reading one valid record."""
        record = make_utterance("u1", 3.2, ((0.0, 3.0, "hi"),)).to_record()
        utterances = read_manifest(write_jsonl(tmp_path / "one.jsonl", [record]))
        assert len(utterances) == 1
        assert utterances[0].duration_s == 3.2

    def test_malformed_line_collected(self, tmp_path: Path):
        """Test that a bad line is reported with its number and skipped."""
        records = [make_utterance(f"u{i}").to_record() for i in range(3)]
        path = write_jsonl(tmp_path / "m.jsonl", [records[0], "{not json", records[2]])
        reader = ManifestReader(path)
        utterances = reader.read()
        assert [u.id for u in utterances] == ["u0", "u2"]
        assert len(reader.errors) == 1
        assert reader.errors[0].line == 2

    def test_malformed_line_strict(self, tmp_path: Path):
        """Test that strict mode fails on the first bad line."""
        path = write_jsonl(tmp_path / "m.jsonl", [make_utterance("u0").to_record(), "[1, 2]"])
        with pytest.raises(ManifestLineError) as exc:
            read_manifest(path, strict=True)
        assert exc.value.line == 2

    def test_duplicate_id(self, tmp_path: Path):
        """Test duplicate ids: skipped when permissive, fatal when strict."""
        record = make_utterance("dup").to_record()
        path = write_jsonl(tmp_path / "d.jsonl", [record, record])
        reader = ManifestReader(path)
        assert len(reader.read()) == 1
        assert "duplicate" in reader.errors[0].message
        with pytest.raises(ManifestLineError):
            read_manifest(path, strict=True)

    def test_missing_field(self, tmp_path: Path):
        """Test that a record without a required key is rejected."""
        record = make_utterance("u1").to_record()
        del record["lang"]
        reader = ManifestReader(write_jsonl(tmp_path / "m.jsonl", [record]))
        assert reader.read() == []
        assert "lang" in reader.errors[0].message

    def test_non_positive_duration_rejected(self, tmp_path: Path):
        """Test that duration_s must be positive."""
        record = make_utterance("u1").to_record()
        record["duration_s"] = 0
        reader = ManifestReader(write_jsonl(tmp_path / "m.jsonl", [record]))
        assert reader.read() == []
        assert len(reader.errors) == 1

    def test_missing_file(self, tmp_path: Path):
        """Test that a missing manifest raises."""
        with pytest.raises(ManifestError, match="not found"):
            read_manifest(tmp_path / "absent.jsonl")

    def test_field_order_ignored(self, tmp_path: Path):
        """Test that keys may appear in any order on read."""
        record = make_utterance("u1").to_record()
        shuffled = dict(reversed(list(record.items())))
        assert read_manifest(write_jsonl(tmp_path / "m.jsonl", [shuffled]))[0].id == "u1"


class TestWriteManifest:
    """Tests for write_manifest."""

    def test_empty(self, tmp_path: Path):
        """Test that writing nothing produces an empty file."""
        path = tmp_path / "out.jsonl"
        assert write_manifest([], path) == 0
        assert path.read_bytes() == b""

    def test_byte_stable(self, tmp_path: Path, sample_utterance: Utterance):
        """Test that equal inputs give identical bytes."""
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        write_manifest([sample_utterance], a)
        write_manifest([sample_utterance], b)
        assert a.read_bytes() == b.read_bytes()

    def test_utf8_preserved(self, tmp_path: Path):
        """Test that non-ASCII text is written as UTF-8, not escaped."""
        u = make_utterance("u1", 2.0, ((0.0, 1.0, "你好"),), "zh", "CN")
        path = tmp_path / "out.jsonl"
        write_manifest([u], path)
        assert "你好".encode("utf-8") in path.read_bytes()
        assert read_manifest(path) == [u]

    def test_key_order(self, tmp_path: Path, sample_utterance: Utterance):
        """Test that keys are emitted in schema order."""
        path = tmp_path / "out.jsonl"
        write_manifest([sample_utterance], path)
        keys = list(json.loads(path.read_text(encoding="utf-8")))
        assert keys == [
            "id", "audio", "duration_s", "lang", "region", "punct", "itn", "dataset", "sentences"
        ]

    def test_refuses_invalid(self, tmp_path: Path):
        """Test that records failing validation are not written."""
        bad = make_utterance("bad", 5.0, ((0.0, 9.0, "too long"),))
        with pytest.raises(ManifestError, match="bad"):
            write_manifest([bad], tmp_path / "out.jsonl")

    def test_failed_write_leaves_destination_untouched(
        self, tmp_path: Path, sample_utterance: Utterance
    ):
        """Test that a bad record midway leaves neither a truncated file nor a leftover."""
        bad = make_utterance("bad", 5.0, ((0.0, 9.0, "too long"),))
        fresh, existing = tmp_path / "fresh.jsonl", tmp_path / "existing.jsonl"
        existing.write_text("previous\n", encoding="utf-8")
        for path in (fresh, existing):
            with pytest.raises(ManifestError, match="bad"):
                write_manifest([sample_utterance, bad], path)
        assert not fresh.exists()
        assert existing.read_text(encoding="utf-8") == "previous\n"
        assert sorted(p.name for p in tmp_path.iterdir()) == ["existing.jsonl"]

    def test_unwritable_path(self, tmp_path: Path, sample_utterance: Utterance):
        """Test that an unwritable destination raises ManifestError."""
        with pytest.raises(ManifestError):
            write_manifest([sample_utterance], tmp_path / "missing-dir" / "out.jsonl")


@st.composite
def utterances(draw: st.DrawFn) -> list[Utterance]:
    """Valid manifests with ordered, non-overlapping sentences."""
    count = draw(st.integers(min_value=0, max_value=5))
    result = []
    for i in range(count):
        spans = draw(
            st.lists(st.tuples(st.integers(1, 400), st.integers(0, 100)), min_size=0, max_size=4)
        )
        sentences = []
        t = 0.0
        for length, gap in spans:
            start = t + gap / 100
            end = start + length / 100
            text = draw(st.text(alphabet="abcxyz 你好ё", min_size=1, max_size=12))
            sentences.append(Sentence(start_s=start, end_s=end, text=text + "x"))
            t = end
        result.append(
            Utterance(
                id=f"u{i}",
                audio_path=f"a/{i}.wav",
                duration_s=t + 0.5,
                tag=LanguageTag(language=draw(st.sampled_from(["zh", "ja", "ru"])), region="XX"),
                sentences=sentences,
                punctuated=draw(st.booleans()),
                itn=draw(st.booleans()),
                dataset=draw(st.sampled_from(["", "set-a"])),
            )
        )
    return result


class TestRoundTrip:
    """Property tests for write/read symmetry."""

    @settings(max_examples=50, deadline=None)
    @given(manifest=utterances())
    def test_read_write_identity(self, tmp_path_factory: pytest.TempPathFactory, manifest):
        """Test that read(write(M)) equals M field for field."""
        path = tmp_path_factory.mktemp("rt") / "m.jsonl"
        write_manifest(manifest, path)
        assert read_manifest(path, strict=True) == manifest


class TestValidateUtterance:
    """Tests for utterance-level checks."""

    def test_clean_utterance(self, sample_utterance: Utterance):
        """Test that a sound record has no violations."""
        assert validate_utterance(sample_utterance) == []

    def test_start_not_before_end(self):
        """Test detection of inverted sentences."""
        u = make_utterance(sentences=((6.0, 5.0, "x"),))
        assert _kinds(validate_utterance(u)) == [ViolationKind.START_NOT_BEFORE_END]
        assert validate_utterance(u)[0].message.startswith("start ≥ end")

    def test_exceeds_duration(self):
        """Test that a sentence past the end is reported beyond tolerance only."""
        u = make_utterance(duration_s=30.0, sentences=((0.0, 31.0, "x"),))
        assert _kinds(validate_utterance(u, 0.02)) == [ViolationKind.EXCEEDS_DURATION]
        within = make_utterance(duration_s=30.0, sentences=((0.0, 30.01, "x"),))
        assert validate_utterance(within, 0.02) == []

    def test_overlap(self):
        """Test that overlapping sentences are reported."""
        u = make_utterance(sentences=((0.0, 3.0, "a"), (2.0, 4.0, "b")))
        violations = validate_utterance(u)
        assert _kinds(violations) == [ViolationKind.OVERLAP]
        assert violations[0].sentence_index == 1

    def test_empty_text(self):
        """Test that whitespace-only sentence text is reported."""
        u = make_utterance(sentences=((0.0, 1.0, "  "),))
        assert _kinds(validate_utterance(u)) == [ViolationKind.EMPTY_TEXT]


class TestCorpusStats:
    """Tests for corpus_stats."""

    def test_dataset_table_total(self, datasets_manifest: Path):
        """Test that the eight cleaned-dataset rows sum to 218,137 hours."""
        report = corpus_stats(read_manifest(datasets_manifest, strict=True))
        assert report.total_hours == 218_137
        assert report.total_utterances == 8
        assert report.dataset_hours["Dataocean AI"] == 137_712
        assert report.dataset_hours["CommonVoice"] == 733

    def test_printed_total_is_not_reproducible(self, datasets_manifest: Path):
        """Test that the quoted 212,137 hour total is 6,000 hours short of the rows."""
        report = corpus_stats(read_manifest(datasets_manifest))
        assert sum(report.dataset_hours.values()) == report.total_hours
        assert report.total_hours - 212_137 == 6_000

    def test_language_hours(self, datasets_manifest: Path):
        """Test aggregation over regions and the language-count thresholds."""
        report = corpus_stats(read_manifest(datasets_manifest))
        assert report.language_hours["zh"] == 147_712
        assert report.language_hours["ko"] == 6_950
        assert report.languages_over(1000) == 5
        assert report.languages_over(100) == 6
        assert report.language_decades[">=1kh"] == 5

    def test_one_hour(self):
        """Test a single one-hour utterance."""
        report = corpus_stats([make_utterance(duration_s=3600.0, sentences=())])
        assert report.total_hours == 1.0
        assert report.total_utterances == 1

    def test_duration_histogram(self):
        """Test placement into 5 s buckets."""
        utts = [make_utterance(f"u{d}", float(d), ()) for d in (2, 7, 29)]
        report = corpus_stats(utts)
        assert report.duration_buckets == [1, 1, 0, 0, 0, 1]

    def test_bucket_edges(self):
        """Test bucket boundaries and the clamp for long audio."""
        assert duration_bucket(0.0) == 0
        assert duration_bucket(5.0) == 1
        assert duration_bucket(30.0) == 5
        assert duration_bucket(45.0) == 5

    def test_empty(self):
        """Test that no input gives an empty report."""
        report = corpus_stats([])
        assert report.total_utterances == 0
        assert report.tags == []

    def test_conservation(self):
        """Test that per-tag hours and histogram counts add up."""
        utts = [
            make_utterance(f"u{i}", 1.5 + i * 3.3, (), language=lang, region="XX")
            for i, lang in enumerate(["zh", "ja", "zh", "ru", "ja", "zh"])
        ]
        report = corpus_stats(utts)
        assert sum(t.hours for t in report.tags) == pytest.approx(report.total_hours, abs=1e-6)
        assert sum(report.duration_buckets) == len(utts)
        assert sum(sum(t.duration_buckets) for t in report.tags) == len(utts)
