"""Tests for the speechprep command line."""

import json
from pathlib import Path

import pytest

from speechprep.main import run
from speechprep.manifest import read_manifest
from tests.conftest import make_utterance, write_jsonl


def stdout_json(capsys: pytest.CaptureFixture[str]):
    return json.loads(capsys.readouterr().out)


class TestUsage:
    """Tests for argument handling and exit codes."""

    def test_no_arguments(self, capsys: pytest.CaptureFixture[str]):
        """Test that a bare invocation prints usage and exits 2."""
        assert run([]) == 2
        assert "usage" in capsys.readouterr().err

    def test_unknown_command(self):
        """Test that an unknown subcommand exits 2."""
        assert run(["frobnicate"]) == 2

    def test_plan_merge_needs_inputs(self):
        """Test the flag combination argparse cannot express."""
        assert run(["plan-merge"]) == 2

    def test_invalid_jobs(self, datasets_manifest: Path):
        """Test that an out-of-range global flag is a usage error."""
        assert run(["--jobs", "0", "stats", "--manifest", str(datasets_manifest)]) == 2
        assert run(["stats", "--manifest", str(datasets_manifest), "--jobs", "0"]) == 2

    @pytest.mark.parametrize(
        "flags",
        [["--max-ratio", "-5"], ["--tol", "-1"], ["--min-similarity", "1.5"], ["--max-ratio", "0"]],
    )
    def test_invalid_clean_thresholds(self, manifest_file: Path, tmp_path: Path, flags: list[str]):
        """Test that thresholds breaking their bounds exit 2 before anything is written."""
        out = tmp_path / "clean.jsonl"
        assert run(["clean", "--manifest", str(manifest_file), "--out", str(out), *flags]) == 2
        assert not out.exists()

    @pytest.mark.parametrize("flags", [["--world-size", "0"], ["--epoch", "-1"]])
    def test_invalid_shard_flags(self, manifest_file: Path, tmp_path: Path, flags: list[str]):
        """Test that shard parameters out of range exit 2."""
        out = tmp_path / "shards"
        assert run(["shard", "--manifest", str(manifest_file), "--out", str(out), *flags]) == 2
        assert not out.exists()

    @pytest.mark.parametrize("flags", [["--world-size", "0"], ["--vocab-size", "10"]])
    def test_invalid_pipeline_flags(self, manifest_file: Path, tmp_path: Path, flags: list[str]):
        """Test that falsy or too-small pipeline flags are validated, not ignored."""
        out_dir = tmp_path / "run"
        args = ["pipeline", "--manifest", str(manifest_file), "--out-dir", str(out_dir)]
        assert run([*args, *flags]) == 2
        assert not out_dir.exists()

    def test_missing_manifest(self, tmp_path: Path):
        """Test that an absent manifest exits 1."""
        assert run(["stats", "--manifest", str(tmp_path / "absent.jsonl")]) == 1


class TestStats:
    """Tests for the stats command."""

    def test_dataset_table(self, datasets_manifest: Path, capsys: pytest.CaptureFixture[str]):
        """Test the cleaned-dataset totals."""
        assert run(["stats", "--manifest", str(datasets_manifest)]) == 0
        report = stdout_json(capsys)
        assert report["total_hours"] == pytest.approx(218_137)
        assert report["total_utterances"] == 8

    def test_table_output(self, datasets_manifest: Path, capsys: pytest.CaptureFixture[str]):
        """Test the rich table with global flags after the subcommand."""
        assert run(["stats", "--manifest", str(datasets_manifest), "--table", "--strict"]) == 0
        out = capsys.readouterr().out
        assert "total" in out
        assert "languages per bin" in out


class TestLangtags:
    """Tests for the langtags command."""

    def test_list_dialects(self, capsys: pytest.CaptureFixture[str]):
        """Test that Chinese dialect tags are listed."""
        assert run(["langtags", "list", "--language", "zh"]) == 0
        assert "zh-WENZHOU" in capsys.readouterr().out

    def test_check(self, capsys: pytest.CaptureFixture[str]):
        """Test canonicalization of both tag forms."""
        assert run(["langtags", "check", "zh-cn", "<ct><NULL>"]) == 0
        results = stdout_json(capsys)
        assert [r["tag"] for r in results] == ["zh-CN", "ct-NULL"]
        assert all(r["registered"] for r in results)
        assert results[1]["tokens"] == "<ct><NULL>"

    def test_check_invalid(self, capsys: pytest.CaptureFixture[str]):
        """Test that a malformed tag exits 1."""
        assert run(["langtags", "check", "zh-CN-x"]) == 1

    def test_check_strict_unregistered(self):
        """Test that strict mode requires a registry entry."""
        assert run(["langtags", "check", "xx-YY"]) == 0
        assert run(["--strict", "langtags", "check", "xx-YY"]) == 1


class TestClean:
    """Tests for the clean command."""

    def test_clean(self, manifest_file: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]):
        """Test that valid records survive."""
        out = tmp_path / "clean.jsonl"
        args = ["clean", "--manifest", str(manifest_file), "--out", str(out)]
        assert run(args) == 0
        assert stdout_json(capsys) == {"inputs": 2, "kept": 2, "rejected": 0}
        assert [u.id for u in read_manifest(out)] == ["zh-0001", "ja-0001"]

    def test_max_ratio_override(
        self, manifest_file: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ):
        """Test that --max-ratio applies to every script and rejections are written."""
        out, rejected = tmp_path / "clean.jsonl", tmp_path / "rejected.jsonl"
        args = ["clean", "--manifest", str(manifest_file), "--out", str(out)]
        assert run([*args, "--rejected", str(rejected), "--max-ratio", "1"]) == 0
        assert stdout_json(capsys)["kept"] == 0
        rows = [json.loads(line) for line in rejected.read_text(encoding="utf-8").splitlines()]
        assert {r["rule"] for r in rows} == {"speech_ratio"}

    def test_out_must_differ(self, manifest_file: Path):
        """Test that the input manifest cannot be overwritten."""
        args = ["clean", "--manifest", str(manifest_file), "--out", str(manifest_file)]
        assert run(args) == 1


class TestPlanAndShard:
    """Tests for plan-merge and shard."""

    def test_plan_merge(
        self, manifest_file: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ):
        """Test planning and the histogram view."""
        plan = tmp_path / "plan.json"
        args = ["plan-merge", "--manifest", str(manifest_file), "--out", str(plan)]
        assert run([*args, "--mode", "bucket-balance"]) == 0
        summary = stdout_json(capsys)
        assert summary["segments"] == 2
        assert sum(summary["histogram"]) == 2
        assert json.loads(plan.read_text(encoding="utf-8"))["mode"] == "bucket-balance"
        assert run(["plan-merge", "--histogram", str(plan)]) == 0
        assert "0-5s" in capsys.readouterr().out

    def test_shard(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]):
        """Test that every rank gets a file and the partition verifies."""
        utterances = [
            make_utterance(f"u{i:02d}", duration_s=1.0 + i, sentences=((0.0, 1.0, "x"),))
            for i in range(12)
        ]
        manifest = write_jsonl(tmp_path / "m.jsonl", [u.to_record() for u in utterances])
        out = tmp_path / "shards"
        args = ["shard", "--manifest", str(manifest), "--world-size", "3", "--out", str(out)]
        assert run(args) == 0
        report = stdout_json(capsys)
        assert report["violations"] == []
        assert sum(report["rank_counts"]) == 12
        assert sorted(p.name for p in out.iterdir()) == [
            "shard-00000.jsonl",
            "shard-00001.jsonl",
            "shard-00002.jsonl",
            "shards.meta.json",
        ]


class TestCodecAndTokenize:
    """Tests for codec and tokenize."""

    def test_render_parse(
        self, manifest_file: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ):
        """Test that rendered lines parse back."""
        assert run(["codec", "render", "--manifest", str(manifest_file)]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("<sot><zh><CN><asr><punct><noitn><ts><|0.00|>")
        assert "今天天气很好。<|2.52|>" in lines[0]
        seqs = tmp_path / "seqs.txt"
        seqs.write_text("\n".join(lines) + "\n", encoding="utf-8")
        assert run(["codec", "parse", "--input", str(seqs)]) == 0
        parsed = stdout_json(capsys)
        assert [p["lang"] for p in parsed] == ["zh", "ja"]
        assert parsed[0]["sentences"][1]["text"] == "我们一起去公园吧。"

    def test_render_untimed(
        self, manifest_file: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ):
        """Test that --no-timestamps output parses back with its sentence boundaries."""
        assert run(["codec", "render", "--manifest", str(manifest_file), "--no-timestamps"]) == 0
        out = capsys.readouterr().out
        assert "<|" not in out
        seqs = tmp_path / "untimed.txt"
        seqs.write_text(out, encoding="utf-8")
        assert run(["codec", "parse", "--input", str(seqs)]) == 0
        parsed = stdout_json(capsys)
        assert parsed[0]["timestamps"] is False
        assert len(parsed[0]["sentences"]) == 2
        assert parsed[0]["sentences"][1]["text"] == "我们一起去公园吧。"

    def test_parse_error(self, tmp_path: Path):
        """Test that a malformed sequence exits 1."""
        bad = tmp_path / "bad.txt"
        bad.write_text("<sot><zh><CN><asr>\n", encoding="utf-8")
        assert run(["codec", "parse", "--input", str(bad)]) == 1

    def test_train_encode_decode(
        self, manifest_file: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ):
        """Test that decoded ids reproduce the rendered targets."""
        assert run(["codec", "render", "--manifest", str(manifest_file)]) == 0
        rendered = capsys.readouterr().out.splitlines()

        model, ids = tmp_path / "model.bpe", tmp_path / "ids.jsonl"
        train = ["tokenize", "train", "--manifest", str(manifest_file), "--out", str(model)]
        assert run([*train, "--vocab-size", "2000"]) == 0
        assert stdout_json(capsys)["vocab_size"] <= 2000
        encode = ["tokenize", "encode", "--model", str(model), "--manifest", str(manifest_file)]
        assert run([*encode, "--out", str(ids)]) == 0
        assert stdout_json(capsys) == {"sequences": 2}
        assert run(["tokenize", "decode", "--model", str(model), "--input", str(ids)]) == 0
        decoded = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
        assert [d["id"] for d in decoded] == ["zh-0001", "ja-0001"]
        assert [d["text"] for d in decoded] == rendered


class TestScore:
    """Tests for the score command."""

    def test_self_score(self, manifest_file: Path, capsys: pytest.CaptureFixture[str]):
        """Test that references scored against themselves are perfect."""
        args = ["score", "--refs", str(manifest_file), "--hyps", f"sys={manifest_file}"]
        assert run(args) == 0
        report = stdout_json(capsys)["sys"]
        assert report["average"] == 0.0
        assert {r["label"]: r["metric"] for r in report["rows"]} == {
            "ja-JP": "CER",
            "zh-CN": "CER",
        }

    def test_markdown_and_report(
        self, manifest_file: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ):
        """Test the markdown table alongside the JSON report file."""
        report = tmp_path / "report.json"
        args = ["score", "--refs", str(manifest_file), "--hyps", f"base={manifest_file}"]
        assert run([*args, "--table", "md", "--report", str(report)]) == 0
        out = capsys.readouterr().out
        assert "| Language | base |" in out
        assert "| zh-CN | 0.0 |" in out
        assert json.loads(report.read_text(encoding="utf-8"))["base"]["average"] == 0.0

    def test_missing_hypotheses_strict(
        self, manifest_file: Path, tmp_path: Path, sample_utterance
    ):
        """Test that strict mode turns missing hypotheses into exit 1."""
        hyps = write_jsonl(tmp_path / "hyps.jsonl", [sample_utterance.to_record()])
        args = ["score", "--refs", str(manifest_file), "--hyps", str(hyps)]
        assert run(args) == 0
        assert run([*args, "--strict"]) == 1

    def test_duplicate_system_names(self, manifest_file: Path):
        """Test that two hypothesis sets cannot share a name."""
        args = ["score", "--refs", str(manifest_file)]
        assert run([*args, "--hyps", f"a={manifest_file}", "--hyps", f"a={manifest_file}"]) == 2


class TestSynth:
    """Tests for the synth command."""

    def test_deterministic(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]):
        """Test that equal seeds write identical corpora."""
        first, second = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        assert run(["synth", "--count", "30", "--out", str(first)]) == 0
        assert stdout_json(capsys)["utterances"] == 30
        assert run(["--seed", "17", "synth", "--count", "30", "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()
        assert len(read_manifest(first)) == 30


def tree_bytes(root: Path) -> dict[str, bytes]:
    files = sorted(p for p in root.rglob("*") if p.is_file())
    return {str(p.relative_to(root)): p.read_bytes() for p in files}


class TestConfigAndReruns:
    """Tests for config-file precedence and repeatable outputs."""

    @pytest.fixture
    def corpus(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> Path:
        """A cleaned synthetic corpus with every utterance at most 30 s long."""
        raw, path = tmp_path / "raw.jsonl", tmp_path / "corpus.jsonl"
        assert run(["synth", "--count", "60", "--out", str(raw)]) == 0
        assert run(["clean", "--manifest", str(raw), "--out", str(path)]) == 0
        capsys.readouterr()
        return path

    def test_pipeline_flags_override_config_file(self, corpus: Path, tmp_path: Path):
        """Test that --epoch 0 and --world-size 1 win over the config file."""
        config = tmp_path / "pipeline.cfg"
        config.write_text("EPOCH=3\nWORLD_SIZE=2\n", encoding="utf-8")
        out_dir = tmp_path / "run"
        args = ["pipeline", "--manifest", str(corpus), "--out-dir", str(out_dir)]
        flags = ["--epoch", "0", "--world-size", "1", "--vocab-size", "1300"]
        assert run([*args, "--config", str(config), *flags]) == 0
        meta = json.loads((out_dir / "shards" / "shards.meta.json").read_text(encoding="utf-8"))
        assert (meta["epoch"], meta["world_size"]) == (0, 1)

    def test_config_file_matches_flags_for_clean(self, corpus: Path, tmp_path: Path):
        """Test that thresholds from a config file and from flags give the same files."""
        config = tmp_path / "clean.cfg"
        config.write_text("MAX_RATIO_CJK=4\nMAX_RATIO_OTHER=4\n", encoding="utf-8")
        via_file, via_flags = tmp_path / "file", tmp_path / "flags"
        variants = ((via_file, ["--config", str(config)]), (via_flags, ["--max-ratio", "4"]))
        for out_dir, extra in variants:
            out_dir.mkdir()
            args = ["clean", "--manifest", str(corpus), "--out", str(out_dir / "clean.jsonl")]
            assert run([*args, "--rejected", str(out_dir / "rejected.jsonl"), *extra]) == 0
        assert tree_bytes(via_file) == tree_bytes(via_flags)

    def test_config_file_matches_flags_for_shard(self, corpus: Path, tmp_path: Path):
        """Test that shard settings from a config file and from flags give the same files."""
        config = tmp_path / "shard.cfg"
        config.write_text(
            "WORLD_SIZE=3\nEPOCH=1\nSHARD_MODE=global-reshuffle\nSEED=5\n", encoding="utf-8"
        )
        base = ["shard", "--manifest", str(corpus), "--out"]
        assert run([*base, str(tmp_path / "file"), "--config", str(config)]) == 0
        flags = ["--world-size", "3", "--epoch", "1", "--mode", "global-reshuffle", "--seed", "5"]
        assert run([*base, str(tmp_path / "flags"), *flags]) == 0
        assert tree_bytes(tmp_path / "file") == tree_bytes(tmp_path / "flags")

    @pytest.mark.parametrize(
        "command",
        [
            ["clean", "--manifest", "{corpus}", "--out", "{out}/clean.jsonl"],
            ["plan-merge", "--manifest", "{corpus}", "--out", "{out}/plan.json"],
            ["plan-merge", "--manifest", "{corpus}", "--out", "{out}/plan.json", "--mode",
             "bucket-balance"],
            ["shard", "--manifest", "{corpus}", "--out", "{out}", "--world-size", "4"],
            ["tokenize", "train", "--manifest", "{corpus}", "--out", "{out}/model.bpe",
             "--vocab-size", "800"],
        ],
        ids=["clean", "plan-target", "plan-balance", "shard", "tokenize-train"],
    )
    def test_rerun_is_byte_identical(self, corpus: Path, tmp_path: Path, command: list[str]):
        """Test that running a subcommand twice on the same input gives identical files."""
        outputs = []
        for name in ("first", "second"):
            out = tmp_path / name
            out.mkdir()
            argv = [arg.format(corpus=corpus, out=out) for arg in command]
            assert run(argv) == 0
            outputs.append(tree_bytes(out))
        assert outputs[0]
        assert outputs[0] == outputs[1]

    def test_shard_files_independent_of_jobs(self, corpus: Path, tmp_path: Path):
        """Test that --jobs never changes shard bytes."""
        base = ["shard", "--manifest", str(corpus), "--world-size", "5", "--out"]
        assert run([*base, str(tmp_path / "one"), "--jobs", "1"]) == 0
        assert run([*base, str(tmp_path / "many"), "--jobs", "4"]) == 0
        assert tree_bytes(tmp_path / "one") == tree_bytes(tmp_path / "many")
