"""RIFF/WAVE header probe for PCM duration."""

from __future__ import annotations

import struct
from pathlib import Path
from typing import BinaryIO

from pydantic import BaseModel

from speechprep.manifest.io import ManifestError

WAVE_FORMAT_PCM = 0x0001
WAVE_FORMAT_EXTENSIBLE = 0xFFFE


class WavFormatError(ManifestError):
    """Raised when a file is not a PCM RIFF/WAVE file."""

    pass


class WavInfo(BaseModel):
    """Header fields needed to compute a duration."""

    sample_rate: int
    channels: int
    bits_per_sample: int
    data_bytes: int

    @property
    def bytes_per_sample(self) -> int:
        return (self.bits_per_sample + 7) // 8

    @property
    def duration_s(self) -> float:
        frame_bytes = self.sample_rate * self.channels * self.bytes_per_sample
        return self.data_bytes / frame_bytes


def _parse_fmt(chunk: bytes) -> tuple[int, int, int]:
    if len(chunk) < 16:
        raise WavFormatError(f"fmt chunk too short ({len(chunk)} bytes)")
    format_code, channels, sample_rate, _byte_rate, _block_align, bits = struct.unpack(
        "<HHIIHH", chunk[:16]
    )
    if format_code == WAVE_FORMAT_EXTENSIBLE:
        # cbSize(2) validBits(2) channelMask(4) then the sub-format GUID
        if len(chunk) < 26:
            raise WavFormatError("extensible fmt chunk missing sub-format")
        format_code = struct.unpack("<H", chunk[24:26])[0]
    if format_code != WAVE_FORMAT_PCM:
        raise WavFormatError(f"non-PCM format code 0x{format_code:04x}")
    if channels == 0 or sample_rate == 0 or bits == 0:
        raise WavFormatError("fmt chunk has zero channels, rate or sample width")
    return sample_rate, channels, bits


def read_wav_info(f: BinaryIO) -> WavInfo:
    """Walk RIFF chunks and collect the fmt fields and data size.

    Raises:
        WavFormatError: If the stream is not RIFF/WAVE, a required chunk is
            missing, or the format is not PCM.
    """
    header = f.read(12)
    if len(header) < 12 or header[:4] != b"RIFF" or header[8:12] != b"WAVE":
        raise WavFormatError("not a RIFF/WAVE file")

    fmt: tuple[int, int, int] | None = None
    data_bytes: int | None = None
    while True:
        chunk_header = f.read(8)
        if len(chunk_header) < 8:
            break
        chunk_id = chunk_header[:4]
        chunk_size = struct.unpack("<I", chunk_header[4:])[0]
        if chunk_id == b"fmt ":
            fmt = _parse_fmt(f.read(chunk_size))
        elif chunk_id == b"data":
            data_bytes = chunk_size
            if fmt is not None:
                break
            f.seek(chunk_size, 1)
        else:
            f.seek(chunk_size, 1)
        if chunk_size % 2:
            f.seek(1, 1)

    if fmt is None:
        raise WavFormatError("missing fmt chunk")
    if data_bytes is None:
        raise WavFormatError("missing data chunk")
    sample_rate, channels, bits = fmt
    return WavInfo(
        sample_rate=sample_rate, channels=channels, bits_per_sample=bits, data_bytes=data_bytes
    )


def probe_wav_duration(path: Path) -> float:
    """Duration in seconds from the WAV header, without decoding samples.

    Returns:
        data_chunk_bytes / (sample_rate * channels * bytes_per_sample).
    """
    with Path(path).open("rb") as f:
        return read_wav_info(f).duration_s
