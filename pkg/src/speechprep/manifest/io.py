"""JSONL manifest reading and writing."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Iterator

import structlog
from pydantic import BaseModel, ValidationError

from speechprep.errors import SpeechPrepError
from speechprep.manifest.validation import DEFAULT_TOLERANCE_S, validate_utterance
from speechprep.models.manifest import Utterance

logger = structlog.get_logger()


class ManifestError(SpeechPrepError):
    """Base exception for manifest errors."""

    pass


class ManifestLineError(ManifestError):
    """Raised in strict mode for the first bad manifest line."""

    def __init__(self, path: Path, line: int, message: str):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


class LineError(BaseModel):
    """A manifest line that could not be turned into an Utterance."""

    line: int
    message: str


class ManifestReader:
    """Streams a JSONL manifest, collecting bad lines instead of failing.

    Features:
    - Records are yielded in file order
    - Malformed JSON, schema errors and duplicate ids become LineError values
    - Strict mode raises on the first bad line
    """

    def __init__(self, path: Path, strict: bool = False):
        """Initialize the reader.

        Args:
            path: Manifest path.
            strict: Raise ManifestLineError instead of collecting errors.
        """
        self.path = Path(path)
        self.strict = strict
        self.errors: list[LineError] = []
        self._seen_ids: set[str] = set()

    def _reject(self, line_num: int, message: str) -> None:
        if self.strict:
            raise ManifestLineError(self.path, line_num, message)
        self.errors.append(LineError(line=line_num, message=message))
        logger.warning("manifest_line_rejected", path=str(self.path), line=line_num, error=message)

    def __iter__(self) -> Iterator[Utterance]:
        if not self.path.exists():
            raise ManifestError(f"manifest not found: {self.path}")

        with self.path.open("r", encoding="utf-8") as f:
            for line_num, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError as e:
                    self._reject(line_num, f"malformed JSON: {e.msg}")
                    continue
                if not isinstance(record, dict):
                    self._reject(line_num, "line is not a JSON object")
                    continue
                try:
                    utterance = Utterance.from_record(record)
                except KeyError as e:
                    self._reject(line_num, f"missing field {e.args[0]!r}")
                    continue
                except (ValidationError, TypeError) as e:
                    self._reject(line_num, f"invalid record: {e}")
                    continue
                if utterance.id in self._seen_ids:
                    self._reject(line_num, f"duplicate id {utterance.id!r}")
                    continue
                self._seen_ids.add(utterance.id)
                yield utterance

    def read(self) -> list[Utterance]:
        """Read the whole manifest."""
        utterances = list(self)
        logger.info(
            "manifest_read",
            path=str(self.path),
            count=len(utterances),
            errors=len(self.errors),
        )
        return utterances


def iter_manifest(path: Path, strict: bool = False) -> Iterator[Utterance]:
    """Stream utterances from a manifest without holding it in memory."""
    return iter(ManifestReader(path, strict=strict))


def read_manifest(path: Path, strict: bool = False) -> list[Utterance]:
    """Read a JSONL manifest.

    Args:
        path: Manifest path.
        strict: Fail on the first malformed line or duplicate id.

    Returns:
        Utterances in file order. Bad lines are logged and skipped unless
        strict; use ManifestReader to inspect them.

    Raises:
        ManifestError: If the file is missing.
        ManifestLineError: In strict mode, for the first bad line.
    """
    return ManifestReader(path, strict=strict).read()


def dump_record(utterance: Utterance) -> str:
    """Serialize one utterance as a manifest line (no trailing newline)."""
    return json.dumps(utterance.to_record(), ensure_ascii=False)


def write_manifest(
    utterances: Iterable[Utterance],
    path: Path,
    tol_s: float = DEFAULT_TOLERANCE_S,
    validate: bool = True,
) -> int:
    """Write utterances as UTF-8 JSONL; output is byte-stable for equal input.

    Args:
        utterances: Records to write.
        path: Destination path.
        tol_s: Timestamp tolerance used by validation.
        validate: Refuse records that fail validate_utterance.

    Returns:
        Number of records written.

    Raises:
        ManifestError: If a record is invalid or the path is unwritable.
    """
    path = Path(path)
    # Sibling file renamed over the destination only once every record is written.
    partial = path.with_name(f".{path.name}.partial")
    count = 0
    try:
        try:
            with partial.open("w", encoding="utf-8", newline="\n") as f:
                for u in utterances:
                    if validate:
                        violations = validate_utterance(u, tol_s)
                        if violations:
                            raise ManifestError(
                                f"refusing to write invalid utterance {u.id!r}: "
                                f"{violations[0].message}"
                            )
                    f.write(dump_record(u))
                    f.write("\n")
                    count += 1
            partial.replace(path)
        finally:
            partial.unlink(missing_ok=True)
    except OSError as e:
        raise ManifestError(f"cannot write manifest {path}: {e}") from e
    logger.info("manifest_written", path=str(path), count=count)
    return count
