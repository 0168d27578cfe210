from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from chatmt.cli import main

from conftest import CHANNEL, telegram_export


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def env(tmp_path, runner):
    """A scratch db path plus a helper that invokes the CLI against it."""
    db = tmp_path / "cli.db"

    def invoke(*args, expect=0):
        result = runner.invoke(main, ["--db", str(db)] + list(args))
        if result.exception and not isinstance(result.exception, SystemExit):
            raise result.exception
        assert result.exit_code == expect, result.output
        return result

    return tmp_path, invoke


def seed_corpus(tmp_path, invoke, n=30):
    export = tmp_path / "export.json"
    export.write_bytes(telegram_export(n))
    invoke("corpus", "import", "--channel", CHANNEL, "--file", str(export))


def test_corpus_import_and_select(env):
    tmp_path, invoke = env
    seed_corpus(tmp_path, invoke)
    result = invoke("corpus", "select", "--channel", CHANNEL, "--n", "5")
    assert len(result.output.strip().splitlines()) == 5
    assert f"{CHANNEL}:1\t" in result.output


def test_corpus_split(env):
    tmp_path, invoke = env
    seed_corpus(tmp_path, invoke)
    result = invoke(
        "corpus", "split", "--channel", CHANNEL, "--n", "30", "--test-n", "10"
    )
    assert "train_val=20" in result.output
    assert "test=10" in result.output


def test_corpus_truth_add_vocabulary(env):
    _, invoke = env
    result = invoke(
        "corpus", "truth", "add",
        "--key", "Толстосумы", "--kind", "vocabulary",
        "--source", "Толстосумы", "--target", "Moneybags",
    )
    assert "stored ground truth" in result.output


def test_translate_run_with_mock_config(env, tmp_path):
    tmp_path, invoke = env
    seed_corpus(tmp_path, invoke, n=10)
    invoke("corpus", "split", "--channel", CHANNEL, "--n", "10", "--test-n", "3")
    dictionary_path = tmp_path / "dictionary.json"
    dictionary_path.write_text(json.dumps({"атака": "attack"}, ensure_ascii=False))
    config = {
        "version": 1,
        "prompts": [{"prompt_id": "p1", "text": "Translate."}],
        "backends": [
            {
                "backend_id": "mock",
                "kind": "mock_dictionary",
                "dictionary_path": str(dictionary_path),
            }
        ],
    }
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps(config))
    result = invoke(
        "translate", "run",
        "--backend", "mock", "--prompt", "p1", "--config", str(config_path),
    )
    assert "mock: ok=7" in result.output


def test_finetune_build_and_validate(env):
    tmp_path, invoke = env
    seed_corpus(tmp_path, invoke, n=10)
    for i in range(1, 11):
        invoke(
            "corpus", "truth", "add",
            "--key", f"{CHANNEL}:{i}", "--kind", "message",
            "--target", f"translation {i}",
        )
    out = tmp_path / "dataset.jsonl"
    result = invoke("finetune", "build", "--out", str(out), "--seed", "1")
    assert "wrote 8 train + 2 validation" in result.output
    assert out.exists()
    assert out.with_suffix(".validation.jsonl").exists()
    result = invoke("finetune", "validate", str(out))
    assert "clean=True" in result.output


def test_metrics_eval_table_and_jsonl(env):
    tmp_path, invoke = env
    hyp = tmp_path / "hyp.txt"
    ref = tmp_path / "ref.txt"
    hyp.write_text("the cat sat on the mat\nthe attack was confirmed today\n")
    ref.write_text("the cat sat on the mat\nthe attack was confirmed today\n")
    result = invoke("metrics", "eval", "--hyp", str(hyp), "--ref", str(ref))
    assert "BLEU" in result.output and "1.0000 ± 0.0000" in result.output
    result = invoke(
        "metrics", "eval", "--hyp", str(hyp), "--ref", str(ref),
        "--report", "jsonl", "--metrics", "bleu,ter",
    )
    rows = [json.loads(line) for line in result.output.strip().splitlines()]
    assert [r["metric"] for r in rows] == ["bleu", "ter"]


def test_metrics_eval_length_mismatch_fails(env):
    tmp_path, invoke = env
    hyp = tmp_path / "hyp.txt"
    ref = tmp_path / "ref.txt"
    hyp.write_text("one\ntwo\n")
    ref.write_text("one\n")
    invoke("metrics", "eval", "--hyp", str(hyp), "--ref", str(ref), expect=1)


def survey_fixture_file(tmp_path, n=10):
    path = tmp_path / "questions.jsonl"
    path.write_text(
        "\n".join(
            json.dumps(
                {"source": f"src {i}", "base": f"base {i}", "finetuned": f"ft {i}"}
            )
            for i in range(n)
        )
    )
    return path


def test_survey_generate_and_analyze_roundtrip(env):
    tmp_path, invoke = env
    questions = survey_fixture_file(tmp_path)
    result = invoke("survey", "generate", "--questions", str(questions), "--seed", "3")
    assert "generated 10 blinded questions" in result.output

    # No votes yet: analysis is a clean failure, not a crash.
    invoke("survey", "analyze", expect=1)


def test_survey_export_empty(env):
    _, invoke = env
    result = invoke("survey", "export")
    assert result.output == ""


def test_report_cost_430(env):
    _, invoke = env
    result = invoke(
        "report", "cost",
        "--human-per-message", "0.21",
        "--price-per-1k-input", "0.0015",
        "--price-per-1k-output", "0.002",
        "--input-tokens", "12000",
        "--output-tokens", "15400",
        "--n-messages", "100",
    )
    assert "model cost/message: 0.000488" in result.output
    assert "cost ratio: 430" in result.output


def test_report_cost_infinite(env):
    _, invoke = env
    result = invoke(
        "report", "cost",
        "--human-per-message", "0.21",
        "--price-per-1k-input", "0.0015",
        "--price-per-1k-output", "0.002",
        "--input-tokens", "0",
        "--output-tokens", "0",
        "--n-messages", "100",
    )
    assert "infinite" in result.output
