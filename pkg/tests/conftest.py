"""Pytest fixtures for speechprep tests."""

from __future__ import annotations

import json
import struct
from pathlib import Path
from typing import Any, Callable, Sequence

import pytest

from speechprep.langtags import LanguageRegistry, get_registry
from speechprep.models.manifest import Sentence, Utterance
from speechprep.models.tags import LanguageTag

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES_DIR = REPO_ROOT / "fixtures"

UtteranceFactory = Callable[..., Utterance]


def make_utterance(
    utt_id: str = "u1",
    duration_s: float = 10.0,
    sentences: Sequence[tuple[float, float, str]] = ((0.0, 5.0, "hello world"),),
    language: str = "en",
    region: str = "US",
    punctuated: bool = False,
    itn: bool = False,
    dataset: str = "test",
) -> Utterance:
    """Build an utterance from (start, end, text) triples."""
    return Utterance(
        id=utt_id,
        audio_path=f"audio/{utt_id}.wav",
        duration_s=duration_s,
        tag=LanguageTag(language=language, region=region),
        sentences=[Sentence(start_s=s, end_s=e, text=t) for s, e, t in sentences],
        punctuated=punctuated,
        itn=itn,
        dataset=dataset,
    )


def write_jsonl(path: Path, records: Sequence[dict[str, Any] | str]) -> Path:
    """Write records (or raw lines) as a JSONL file."""
    lines = [r if isinstance(r, str) else json.dumps(r, ensure_ascii=False) for r in records]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def wav_bytes(
    sample_rate: int = 16000,
    channels: int = 1,
    bits: int = 16,
    frames: int = 16000,
    format_code: int = 1,
    extra_chunks: Sequence[tuple[bytes, bytes]] = (),
    data_first: bool = False,
) -> bytes:
    """Assemble a RIFF/WAVE byte string with zeroed samples."""
    block_align = channels * ((bits + 7) // 8)
    fmt_body = struct.pack(
        "<HHIIHH", format_code, channels, sample_rate, sample_rate * block_align, block_align, bits
    )
    if format_code == 0xFFFE:
        # cbSize, valid bits, channel mask, then the PCM sub-format GUID
        fmt_body += struct.pack("<HHI", 22, bits, 0) + struct.pack("<H", 1) + b"\x00" * 14
    fmt = b"fmt " + struct.pack("<I", len(fmt_body)) + fmt_body
    data_body = b"\x00" * (frames * block_align)
    data = b"data" + struct.pack("<I", len(data_body)) + data_body
    if len(data_body) % 2:
        data += b"\x00"
    extras = b""
    for chunk_id, body in extra_chunks:
        pad = b"\x00" if len(body) % 2 else b""
        extras += chunk_id + struct.pack("<I", len(body)) + body + pad
    chunks = extras + (data + fmt if data_first else fmt + data)
    return b"RIFF" + struct.pack("<I", 4 + len(chunks)) + b"WAVE" + chunks


@pytest.fixture
def utterance_factory() -> UtteranceFactory:
    """Factory for utterances with sensible defaults."""
    return make_utterance


@pytest.fixture
def sample_utterance() -> Utterance:
    """A punctuated two-sentence Mandarin utterance."""
    return make_utterance(
        "zh-0001",
        duration_s=8.0,
        sentences=((0.0, 2.5, "今天天气很好。"), (3.0, 7.2, "我们一起去公园吧。")),
        language="zh",
        region="CN",
        punctuated=True,
    )


@pytest.fixture
def registry() -> LanguageRegistry:
    """The bundled language registry."""
    return get_registry()


@pytest.fixture
def datasets_manifest() -> Path:
    """Manifest of the cleaned-dataset hour table."""
    return FIXTURES_DIR / "datasets.jsonl"


@pytest.fixture
def manifest_file(tmp_path: Path, sample_utterance: Utterance) -> Path:
    """A small valid manifest on disk."""
    other = make_utterance("ja-0001", 4.0, ((0.2, 3.8, "こんにちは"),), "ja", "JP")
    return write_jsonl(tmp_path / "in.jsonl", [sample_utterance.to_record(), other.to_record()])
