"""Configuration management for speechprep pipelines."""

from __future__ import annotations

import os
from pathlib import Path
from typing import Literal, Optional

from dotenv import dotenv_values, load_dotenv
from pydantic import BaseModel, Field, ValidationError

from speechprep.errors import SpeechPrepError
from speechprep.models.enums import MergeMode, ShardMode

ENV_PREFIX = "SPEECHPREP_"


class ConfigError(SpeechPrepError):
    """Raised when configuration values are missing, malformed or inconsistent."""

    pass


class CleaningConfig(BaseModel):
    """Thresholds for the cleaning stage."""

    max_ratio_cjk: float = Field(default=30.0, gt=0, description="Max chars/s for CJK scripts")
    max_ratio_other: float = Field(default=25.0, gt=0, description="Max chars/s otherwise")
    cjk_languages: list[str] = Field(default_factory=lambda: ["zh", "ct", "ja", "ko"])
    timestamp_tolerance_s: float = Field(default=0.02, ge=0)
    min_similarity: float = Field(default=0.5, ge=0, le=1)
    segment_max_s: float = Field(default=30.0, gt=0, le=30.0)

    def ratio_threshold_for(self, language: str) -> float:
        """Chars-per-second ceiling for a language subtag."""
        if language in self.cjk_languages:
            return self.max_ratio_cjk
        return self.max_ratio_other


class MergeConfig(BaseModel):
    """Logical merge planning."""

    mode: MergeMode = MergeMode.TARGET_25_30


class ShardConfig(BaseModel):
    """Rank sharding."""

    world_size: int = Field(default=1, ge=1)
    epoch: int = Field(default=0, ge=0)
    mode: ShardMode = ShardMode.STATIC


class TokenizerConfig(BaseModel):
    """BPE training."""

    vocab_size: int = Field(default=40_000, ge=256)


class ScoringConfig(BaseModel):
    """Metric selection and text normalization before scoring."""

    cer_languages: list[str] = Field(default_factory=lambda: ["zh", "ja", "th"])
    strip_punctuation: bool = False
    case_fold: bool = False


class PathsConfig(BaseModel):
    """Files a pipeline run reads and writes."""

    manifest: Optional[Path] = None
    out_dir: Optional[Path] = None
    refs: Optional[Path] = None
    hyps: list[Path] = Field(default_factory=list)
    report: Optional[Path] = None


class PipelineConfig(BaseModel):
    """Main configuration for speechprep."""

    strict: bool = False
    jobs: int = Field(default=1, ge=1)
    seed: int = 17
    log_level: str = "INFO"
    log_format: Literal["json", "console"] = "json"

    cleaning: CleaningConfig = Field(default_factory=CleaningConfig)
    merge: MergeConfig = Field(default_factory=MergeConfig)
    shard: ShardConfig = Field(default_factory=ShardConfig)
    tokenizer: TokenizerConfig = Field(default_factory=TokenizerConfig)
    scoring: ScoringConfig = Field(default_factory=ScoringConfig)
    paths: PathsConfig = Field(default_factory=PathsConfig)

    def check_distinct_paths(self) -> None:
        """Reject configurations where two roles share one path.

        Raises:
            ConfigError: If any two configured paths resolve to the same file.
        """
        named: list[tuple[str, Path]] = []
        for role in ("manifest", "out_dir", "refs", "report"):
            value = getattr(self.paths, role)
            if value is not None:
                named.append((role, value))
        named.extend((f"hyps[{i}]", p) for i, p in enumerate(self.paths.hyps))
        seen: dict[Path, str] = {}
        for role, path in named:
            resolved = Path(path).resolve()
            if resolved in seen:
                raise ConfigError(f"{role} and {seen[resolved]} both point to {path}")
            seen[resolved] = role


def _as_bool(value: str) -> bool:
    return value.strip().lower() in {"1", "true", "yes", "on"}


def _as_list(value: str) -> list[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def load_config(config_file: Optional[Path] = None) -> PipelineConfig:
    """Load configuration from the environment and an optional key=value file.

    Environment variables (after loading a local ``.env``) are read first;
    keys in ``config_file`` override them. Both use the ``SPEECHPREP_*`` names.

    Args:
        config_file: Optional plain-text ``KEY=value`` file.

    Returns:
        PipelineConfig: Loaded configuration object.

    Raises:
        ConfigError: If the file is missing or a value is malformed.
    """
    load_dotenv()
    values: dict[str, str] = {k: v for k, v in os.environ.items() if k.startswith(ENV_PREFIX)}
    if config_file is not None:
        if not Path(config_file).is_file():
            raise ConfigError(f"config file not found: {config_file}")
        for key, value in dotenv_values(config_file).items():
            if value is not None:
                values[key if key.startswith(ENV_PREFIX) else ENV_PREFIX + key] = value

    def get(name: str, default: str) -> str:
        return values.get(ENV_PREFIX + name, default)

    try:
        cleaning = CleaningConfig(
            max_ratio_cjk=float(get("MAX_RATIO_CJK", "30")),
            max_ratio_other=float(get("MAX_RATIO_OTHER", "25")),
            cjk_languages=_as_list(get("CJK_LANGUAGES", "zh,ct,ja,ko")),
            timestamp_tolerance_s=float(get("TIMESTAMP_TOLERANCE", "0.02")),
            min_similarity=float(get("MIN_SIMILARITY", "0.5")),
            segment_max_s=float(get("SEGMENT_MAX_S", "30")),
        )
        merge = MergeConfig(mode=MergeMode(get("MERGE_MODE", MergeMode.TARGET_25_30.value)))
        shard = ShardConfig(
            world_size=int(get("WORLD_SIZE", "1")),
            epoch=int(get("EPOCH", "0")),
            mode=ShardMode(get("SHARD_MODE", ShardMode.STATIC.value)),
        )
        tokenizer = TokenizerConfig(vocab_size=int(get("VOCAB_SIZE", "40000")))
        scoring = ScoringConfig(
            cer_languages=_as_list(get("CER_LANGUAGES", "zh,ja,th")),
            strip_punctuation=_as_bool(get("STRIP_PUNCTUATION", "false")),
            case_fold=_as_bool(get("CASE_FOLD", "false")),
        )
        return PipelineConfig(
            strict=_as_bool(get("STRICT", "false")),
            jobs=int(get("JOBS", "1")),
            seed=int(get("SEED", "17")),
            log_level=get("LOG_LEVEL", "INFO").upper(),
            log_format=get("LOG_FORMAT", "json").lower(),  # type: ignore[arg-type]
            cleaning=cleaning,
            merge=merge,
            shard=shard,
            tokenizer=tokenizer,
            scoring=scoring,
        )
    except (ValueError, ValidationError) as e:
        raise ConfigError(f"invalid configuration: {e}") from e


# Global config instance (lazy loaded)
_config: Optional[PipelineConfig] = None


def get_config() -> PipelineConfig:
    """Get the global configuration instance."""
    global _config
    if _config is None:
        _config = load_config()
    return _config
