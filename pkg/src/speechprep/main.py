"""Command-line entry point for speechprep."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Optional, Sequence, TypeVar

import structlog
from pydantic import BaseModel, ValidationError
from rich.console import Console
from rich.table import Table

from speechprep.cleaning import clean_manifest
from speechprep.codec import Header, TokenSequence, parse, render, special_token_vocabulary
from speechprep.config import ConfigError, PipelineConfig, load_config
from speechprep.errors import SpeechPrepError
from speechprep.langtags import TagError, get_registry, parse_tag
from speechprep.manifest import ManifestReader, corpus_stats, read_manifest, write_manifest
from speechprep.manifest.stats import DECADE_LABELS, StatsReport
from speechprep.merging import (
    bucket_histogram,
    materialize_transcript,
    plan_merge,
    read_plan,
    write_plan,
)
from speechprep.models.enums import MergeMode, ShardMode
from speechprep.models.manifest import Utterance
from speechprep.scoring import render_markdown_table, score_systems
from speechprep.sharding import assign_shards, verify_partition, write_shards
from speechprep.synthetic import generate_corpus
from speechprep.tokenizer import (
    BpeModel,
    decode,
    encode_sequence,
    load_model,
    save_model,
    train_bpe,
)

logger = structlog.get_logger()
console = Console()
err_console = Console(stderr=True)

EXIT_OK = 0
EXIT_DATA = 1
EXIT_USAGE = 2

BUCKET_LABELS = ("0-5s", "5-10s", "10-15s", "15-20s", "20-25s", "25-30s")


def configure_logging(level: str = "INFO", fmt: str = "json") -> None:
    """Route structured logs to stderr so standard output carries only data."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )
    renderer: Any = (
        structlog.processors.JSONRenderer()
        if fmt == "json"
        else structlog.dev.ConsoleRenderer(colors=False)
    )
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            renderer,
        ],
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=False,
    )


class UsageError(SpeechPrepError):
    """Raised for flag combinations argparse cannot express."""

    pass


SectionT = TypeVar("SectionT", bound=BaseModel)


def _override(section: SectionT, **updates: Any) -> SectionT:
    """Copy a config section with flag values applied, re-running its validators.

    Raises:
        UsageError: If a flag value breaks a field constraint.
    """
    try:
        return type(section).model_validate({**section.model_dump(), **updates})
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()
        )
        raise UsageError(f"invalid flag value: {problems}") from e


def _emit_json(data: Any) -> None:
    sys.stdout.write(json.dumps(data, ensure_ascii=False, indent=2) + "\n")


def _write_jsonl(path: Path, rows: Sequence[dict[str, Any]]) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as f:
        for row in rows:
            f.write(json.dumps(row, ensure_ascii=False) + "\n")


def _read_jsonl(path: Path) -> list[dict[str, Any]]:
    rows = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            rows.append(json.loads(line))
    return rows


def _load(path: Path, config: PipelineConfig) -> list[Utterance]:
    return read_manifest(path, strict=config.strict)


# ---------------------------------------------------------------------------
# langtags
# ---------------------------------------------------------------------------


def cmd_langtags(args: argparse.Namespace, config: PipelineConfig) -> int:
    registry = get_registry()
    if args.action == "list":
        entries = registry.list_dialects(args.language) if args.language else list(registry)
        table = Table(title=f"Language tags ({len(entries)})")
        table.add_column("Tag")
        table.add_column("Tokens")
        table.add_column("Name")
        for entry in entries:
            table.add_row(entry.tag.hyphenated, entry.tag.tokens, entry.display_name)
        console.print(table)
        return EXIT_OK

    status = EXIT_OK
    results = []
    for text in args.tags:
        try:
            tag = parse_tag(text, strict=config.strict, registry=registry)
        except TagError as e:
            err_console.print(f"[red]{text}: {e}[/red]")
            status = EXIT_DATA
            continue
        entry = registry.lookup(tag)
        results.append(
            {
                "input": text,
                "tag": tag.hyphenated,
                "tokens": tag.tokens,
                "registered": entry is not None,
                "name": entry.display_name if entry else None,
            }
        )
    _emit_json(results)
    return status


# ---------------------------------------------------------------------------
# clean / stats
# ---------------------------------------------------------------------------


def cmd_clean(args: argparse.Namespace, config: PipelineConfig) -> int:
    updates: dict[str, Any] = {}
    if args.max_ratio is not None:
        updates.update(max_ratio_cjk=args.max_ratio, max_ratio_other=args.max_ratio)
    if args.tol is not None:
        updates["timestamp_tolerance_s"] = args.tol
    if args.min_similarity is not None:
        updates["min_similarity"] = args.min_similarity
    config = config.model_copy(update={"cleaning": _override(config.cleaning, **updates)})
    for role, path in (("out", args.out), ("rejected", args.rejected)):
        if path is not None and Path(path).resolve() == Path(args.manifest).resolve():
            raise ConfigError(f"--{role} must differ from --manifest")

    summary = run_clean(config, args.manifest, args.out, args.rejected)
    _emit_json(summary)
    return EXIT_OK


def run_clean(
    config: PipelineConfig, manifest: Path, out: Path, rejected: Optional[Path]
) -> dict[str, Any]:
    utterances = _load(manifest, config)
    result = clean_manifest(utterances, config.cleaning, jobs=config.jobs)
    write_manifest(result.kept, out, tol_s=config.cleaning.timestamp_tolerance_s)
    if rejected is not None:
        _write_jsonl(rejected, [v.model_dump(mode="json") for v in result.rejected])
    return {"inputs": len(utterances), "kept": len(result.kept), "rejected": len(result.rejected)}


def _stats_table(report: StatsReport) -> Table:
    table = Table(title="Corpus statistics")
    table.add_column("Tag")
    table.add_column("Utterances", justify="right")
    table.add_column("Hours", justify="right")
    table.add_column("Bin")
    for tag in report.tags:
        table.add_row(
            f"{tag.language}-{tag.region}",
            str(tag.utterances),
            f"{tag.hours:,.2f}",
            tag.hour_decade,
        )
    table.add_row("total", str(report.total_utterances), f"{report.total_hours:,.2f}", "")
    return table


def cmd_stats(args: argparse.Namespace, config: PipelineConfig) -> int:
    reader = ManifestReader(args.manifest, strict=config.strict)
    report = corpus_stats(reader)
    if args.table:
        console.print(_stats_table(report))
        decades = ", ".join(f"{label}: {report.language_decades[label]}" for label in DECADE_LABELS)
        console.print(f"languages per bin: {decades}")
    else:
        _emit_json(report.model_dump(mode="json"))
    if reader.errors:
        err_console.print(f"[yellow]{len(reader.errors)} manifest lines rejected[/yellow]")
    return EXIT_OK


# ---------------------------------------------------------------------------
# plan-merge / shard
# ---------------------------------------------------------------------------


def _histogram_table(counts: list[int]) -> Table:
    table = Table(title="Merged segments per bucket")
    table.add_column("Bucket")
    table.add_column("Segments", justify="right")
    for label, count in zip(BUCKET_LABELS, counts):
        table.add_row(label, str(count))
    return table


def cmd_plan_merge(args: argparse.Namespace, config: PipelineConfig) -> int:
    if args.histogram is not None:
        counts = bucket_histogram(read_plan(args.histogram))
        console.print(_histogram_table(counts))
        return EXIT_OK
    if args.manifest is None or args.out is None:
        raise UsageError("plan-merge needs --manifest and --out, or --histogram PLAN")

    mode = MergeMode(args.mode) if args.mode else config.merge.mode
    plan = plan_merge(_load(args.manifest, config), mode, seed=config.seed)
    write_plan(plan, args.out)
    _emit_json({"segments": len(plan.segments), "histogram": bucket_histogram(plan)})
    return EXIT_OK


def cmd_shard(args: argparse.Namespace, config: PipelineConfig) -> int:
    shard_cfg = _override(
        config.shard,
        **{
            k: v
            for k, v in {
                "world_size": args.world_size,
                "epoch": args.epoch,
                "mode": ShardMode(args.mode) if args.mode else None,
            }.items()
            if v is not None
        },
    )
    report = run_shard(config.model_copy(update={"shard": shard_cfg}), args.manifest, args.out)
    _emit_json(report)
    if config.strict and report["violations"]:
        return EXIT_DATA
    return EXIT_OK


def run_shard(config: PipelineConfig, manifest: Path, out_dir: Path) -> dict[str, Any]:
    utterances = _load(manifest, config)
    items = [(u.id, u.duration_s) for u in utterances]
    assignment = assign_shards(
        items,
        config.shard.world_size,
        config.seed,
        epoch=config.shard.epoch,
        mode=config.shard.mode,
    )
    write_shards(assignment, utterances, out_dir, jobs=config.jobs)
    report = verify_partition(assignment, items)
    for violation in report.violations:
        err_console.print(f"[red]{violation}[/red]")
    return report.model_dump(mode="json")


# ---------------------------------------------------------------------------
# codec / tokenize
# ---------------------------------------------------------------------------


def _render_utterance(u: Utterance, with_timestamps: bool, strict: bool) -> TokenSequence:
    return render(Header.for_utterance(u, with_timestamps), u.sentences, strict=strict)


def cmd_codec(args: argparse.Namespace, config: PipelineConfig) -> int:
    if args.action == "render":
        for u in _load(args.manifest, config):
            seq = _render_utterance(u, not args.no_timestamps, config.strict)
            sys.stdout.write(seq.text + "\n")
        return EXIT_OK

    source = sys.stdin if args.input == "-" else Path(args.input).open(encoding="utf-8")
    results = []
    with source:
        for line in source:
            if not line.strip():
                continue
            header, sentences = parse(TokenSequence.from_text(line.strip()))
            results.append(
                {
                    "lang": header.tag.language,
                    "region": header.tag.region,
                    "task": header.task.value,
                    "punct": header.punctuated,
                    "itn": header.itn,
                    "timestamps": header.with_timestamps,
                    "sentences": [
                        {"start": s.start_s, "end": s.end_s, "text": s.text} for s in sentences
                    ],
                }
            )
    _emit_json(results)
    return EXIT_OK


def _protected_tokens(utterances: Sequence[Utterance]) -> list[str]:
    protected = special_token_vocabulary(get_registry())
    known = set(protected)
    for u in utterances:
        for token in (u.tag.language_token, u.tag.region_token):
            if token not in known:
                known.add(token)
                protected.append(token)
    return protected


def _train(texts: list[str], protected: list[str], vocab_size: int) -> BpeModel:
    return train_bpe(texts, max(vocab_size, 256 + len(protected)), protected)


def cmd_tokenize(args: argparse.Namespace, config: PipelineConfig) -> int:
    if args.action == "train":
        utterances = _load(args.manifest, config)
        texts = [_render_utterance(u, True, config.strict).text for u in utterances]
        vocab_size = args.vocab_size or config.tokenizer.vocab_size
        model = _train(texts, _protected_tokens(utterances), vocab_size)
        save_model(model, args.out)
        _emit_json({"merges": len(model.merges), "vocab_size": model.vocab_size})
        return EXIT_OK

    model = load_model(args.model)
    if args.action == "encode":
        rows = [
            {"id": u.id, "ids": encode_sequence(model, _render_utterance(u, True, config.strict))}
            for u in _load(args.manifest, config)
        ]
        _write_jsonl(args.out, rows)
        _emit_json({"sequences": len(rows)})
        return EXIT_OK

    for row in _read_jsonl(args.input):
        text = decode(model, row["ids"])
        sys.stdout.write(json.dumps({"id": row["id"], "text": text}, ensure_ascii=False) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# score / synth / pipeline
# ---------------------------------------------------------------------------


def _system_name(arg: str) -> tuple[str, Path]:
    if "=" in arg:
        name, path = arg.split("=", 1)
        return name, Path(path)
    return Path(arg).stem, Path(arg)


def cmd_score(args: argparse.Namespace, config: PipelineConfig) -> int:
    updates: dict[str, Any] = {}
    if args.cer_languages is not None:
        updates["cer_languages"] = [c for c in args.cer_languages.split(",") if c]
    if args.strip_punctuation:
        updates["strip_punctuation"] = True
    if args.case_fold:
        updates["case_fold"] = True
    scoring = _override(config.scoring, **updates)

    refs = _load(args.refs, config)
    systems = dict(_system_name(arg) for arg in args.hyps)
    if len(systems) != len(args.hyps):
        raise UsageError("hypothesis system names must be unique")
    reports = score_systems(
        refs,
        {name: _load(path, config) for name, path in systems.items()},
        scoring,
        strict=config.strict,
    )
    payload = {name: report.model_dump(mode="json") for name, report in reports.items()}
    if args.report is not None:
        Path(args.report).write_text(
            json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )
    if args.table == "md":
        sys.stdout.write(render_markdown_table(reports))
    elif args.report is None:
        _emit_json(payload)
    if config.strict and any(report.missing for report in reports.values()):
        return EXIT_DATA
    return EXIT_OK


def cmd_synth(args: argparse.Namespace, config: PipelineConfig) -> int:
    corpus = generate_corpus(args.count, seed=config.seed)
    count = write_manifest(corpus, args.out)
    _emit_json({"utterances": count, "path": str(args.out)})
    return EXIT_OK


def run_pipeline(config: PipelineConfig) -> dict[str, Any]:
    """Run clean, stats, plan-merge, shard, tokenize and score into ``paths.out_dir``.

    Returns:
        Summary of every stage.
    """
    config.check_distinct_paths()
    manifest, out_dir = config.paths.manifest, config.paths.out_dir
    if manifest is None or out_dir is None:
        raise ConfigError("pipeline needs a manifest and an output directory")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary: dict[str, Any] = {}

    cleaned_path = out_dir / "clean.jsonl"
    summary["clean"] = run_clean(config, manifest, cleaned_path, out_dir / "rejected.jsonl")
    cleaned = read_manifest(cleaned_path, strict=True)

    stats = corpus_stats(cleaned)
    (out_dir / "stats.json").write_text(stats.model_dump_json(indent=2) + "\n", encoding="utf-8")
    summary["stats"] = {"utterances": stats.total_utterances, "hours": stats.total_hours}

    plan = plan_merge(cleaned, config.merge.mode, seed=config.seed)
    write_plan(plan, out_dir / "plan.json")
    summary["plan"] = {"segments": len(plan.segments), "histogram": bucket_histogram(plan)}

    summary["shard"] = run_shard(config, cleaned_path, out_dir / "shards")

    lookup = {u.id: u for u in cleaned}
    sequences = [
        render(*materialize_transcript(seg, lookup), strict=config.strict)
        for seg in plan.segments
    ]
    texts = [s.text for s in sequences]
    model = _train(texts, _protected_tokens(cleaned), config.tokenizer.vocab_size)
    save_model(model, out_dir / "model.bpe")
    encoded = [
        {"id": seg.merged_id, "ids": encode_sequence(model, seq)}
        for seg, seq in zip(plan.segments, sequences)
    ]
    _write_jsonl(out_dir / "tokens.jsonl", encoded)
    mismatches = sum(
        1 for row, seq in zip(encoded, sequences) if decode(model, row["ids"]) != seq.text
    )
    if mismatches:
        raise SpeechPrepError(f"{mismatches} token sequences do not decode back to their text")
    summary["tokenize"] = {"sequences": len(encoded), "vocab_size": model.vocab_size}

    systems = {"refs": cleaned}
    for hyp in config.paths.hyps:
        name, path = _system_name(str(hyp))
        systems[name] = read_manifest(path, strict=config.strict)
    reports = score_systems(cleaned, systems, config.scoring, strict=config.strict)
    payload = {name: report.model_dump(mode="json") for name, report in reports.items()}
    (out_dir / "score.json").write_text(
        json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    summary["score"] = {name: report.average for name, report in reports.items()}
    logger.info("pipeline_finished", out_dir=str(out_dir))
    return summary


def cmd_pipeline(args: argparse.Namespace, config: PipelineConfig) -> int:
    updates: dict[str, Any] = {}
    if args.mode:
        updates["merge"] = _override(config.merge, mode=MergeMode(args.mode))
    shard_updates = {
        k: v
        for k, v in {"world_size": args.world_size, "epoch": args.epoch}.items()
        if v is not None
    }
    updates["shard"] = _override(config.shard, **shard_updates)
    if args.vocab_size is not None:
        updates["tokenizer"] = _override(config.tokenizer, vocab_size=args.vocab_size)
    updates["paths"] = _override(
        config.paths, manifest=args.manifest, out_dir=args.out_dir, hyps=list(args.hyps)
    )
    summary = run_pipeline(config.model_copy(update=updates))
    _emit_json(summary)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    default = argparse.SUPPRESS if suppress else None
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument(
        "--strict",
        action="store_true",
        default=argparse.SUPPRESS if suppress else False,
        help="Fail on data violations",
    )
    parent.add_argument("--jobs", type=int, default=default, help="Worker parallelism")
    parent.add_argument("--config", type=Path, default=default, help="KEY=value config file")
    parent.add_argument("--seed", type=int, default=default, help="Random seed")
    parent.add_argument("--log-level", default=default, help="Log level (INFO, DEBUG, ...)")
    return parent


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(suppress=True)
    parser = argparse.ArgumentParser(
        prog="speechprep",
        description="Speech corpus preparation: clean, merge, shard, tokenize and score.",
        parents=[_global_flags(suppress=False)],
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("langtags", parents=[common], help="Inspect language tags")
    langtags_sub = p.add_subparsers(dest="action", required=True)
    lst = langtags_sub.add_parser("list", parents=[common], help="List registry entries")
    lst.add_argument("--language", help="Only dialects of this language subtag")
    chk = langtags_sub.add_parser("check", parents=[common], help="Parse and look up tags")
    chk.add_argument("tags", nargs="+")
    p.set_defaults(handler=cmd_langtags)

    p = sub.add_parser("clean", parents=[common], help="Filter and segment a manifest")
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--rejected", type=Path)
    p.add_argument("--max-ratio", type=float, help="Chars/s ceiling for every script")
    p.add_argument("--tol", type=float, help="Timestamp tolerance in seconds")
    p.add_argument("--min-similarity", type=float)
    p.set_defaults(handler=cmd_clean)

    p = sub.add_parser("stats", parents=[common], help="Corpus statistics")
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument("--table", action="store_true", help="Print a table instead of JSON")
    p.set_defaults(handler=cmd_stats)

    p = sub.add_parser("plan-merge", parents=[common], help="Plan logical merges")
    p.add_argument("--manifest", type=Path)
    p.add_argument("--mode", choices=[m.value for m in MergeMode])
    p.add_argument("--out", type=Path)
    p.add_argument("--histogram", type=Path, metavar="PLAN", help="Show a plan's buckets")
    p.set_defaults(handler=cmd_plan_merge)

    p = sub.add_parser("shard", parents=[common], help="Partition a manifest across ranks")
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument("--world-size", type=int)
    p.add_argument("--epoch", type=int)
    p.add_argument("--mode", choices=[m.value for m in ShardMode])
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(handler=cmd_shard)

    p = sub.add_parser("codec", parents=[common], help="Render or parse target sequences")
    codec_sub = p.add_subparsers(dest="action", required=True)
    rnd = codec_sub.add_parser("render", parents=[common])
    rnd.add_argument("--manifest", type=Path, required=True)
    rnd.add_argument("--no-timestamps", action="store_true")
    prs = codec_sub.add_parser("parse", parents=[common])
    prs.add_argument("--input", default="-", help="File of sequences, one per line")
    p.set_defaults(handler=cmd_codec)

    p = sub.add_parser("tokenize", parents=[common], help="Train and apply the BPE tokenizer")
    tok_sub = p.add_subparsers(dest="action", required=True)
    trn = tok_sub.add_parser("train", parents=[common])
    trn.add_argument("--manifest", type=Path, required=True)
    trn.add_argument("--vocab-size", type=int)
    trn.add_argument("--out", type=Path, required=True)
    enc = tok_sub.add_parser("encode", parents=[common])
    enc.add_argument("--model", type=Path, required=True)
    enc.add_argument("--manifest", type=Path, required=True)
    enc.add_argument("--out", type=Path, required=True)
    dec = tok_sub.add_parser("decode", parents=[common])
    dec.add_argument("--model", type=Path, required=True)
    dec.add_argument("--input", type=Path, required=True)
    p.set_defaults(handler=cmd_tokenize)

    p = sub.add_parser("score", parents=[common], help="WER/CER against references")
    p.add_argument("--refs", type=Path, required=True)
    p.add_argument(
        "--hyps", action="append", required=True, help="Hypothesis manifest, optionally NAME=PATH"
    )
    p.add_argument("--report", type=Path)
    p.add_argument("--table", choices=["md"])
    p.add_argument("--cer-languages", help="Comma-separated language subtags scored by CER")
    p.add_argument("--strip-punctuation", action="store_true")
    p.add_argument("--case-fold", action="store_true")
    p.set_defaults(handler=cmd_score)

    p = sub.add_parser("synth", parents=[common], help="Write the synthetic corpus")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--count", type=int, default=200)
    p.set_defaults(handler=cmd_synth)

    p = sub.add_parser("pipeline", parents=[common], help="Run every stage end to end")
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument("--out-dir", type=Path, required=True)
    p.add_argument("--mode", choices=[m.value for m in MergeMode])
    p.add_argument("--world-size", type=int)
    p.add_argument("--epoch", type=int)
    p.add_argument("--vocab-size", type=int)
    p.add_argument("--hyps", action="append", default=[], help="NAME=PATH to score")
    p.set_defaults(handler=cmd_pipeline)
    return parser


def _apply_global_flags(config: PipelineConfig, args: argparse.Namespace) -> PipelineConfig:
    updates: dict[str, Any] = {}
    if args.strict:
        updates["strict"] = True
    if args.jobs is not None:
        updates["jobs"] = args.jobs
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.log_level is not None:
        updates["log_level"] = args.log_level.upper()
    return _override(config, **updates)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run one subcommand and return its exit code.

    0 on success, 1 on errors and strict-mode data violations, 2 on usage errors.
    """
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    handler: Callable[[argparse.Namespace, PipelineConfig], int] = args.handler
    configure_logging(args.log_level or "INFO")
    try:
        config = _apply_global_flags(load_config(args.config), args)
        configure_logging(config.log_level, config.log_format)
        return handler(args, config)
    except UsageError as e:
        err_console.print(f"[red]usage error:[/red] {e}")
        return EXIT_USAGE
    except SpeechPrepError as e:
        logger.error("command_failed", command=args.command, error=str(e))
        err_console.print(f"[red]error:[/red] {e}")
        return EXIT_DATA
    except OSError as e:
        err_console.print(f"[red]error:[/red] {e}")
        return EXIT_DATA


def main() -> None:
    """Main entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
