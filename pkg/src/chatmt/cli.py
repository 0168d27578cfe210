"""Command-line interface: corpus, translate, finetune, metrics, survey, report."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import config as config_mod
from . import finetune as ft
from .corpus import CorpusStore, DatasetSplit, GroundTruthEntry
from .errors import ChatMtError
from .evalharness import (
    HumanCost,
    ModelPricing,
    SurveyStore,
    TokenUsage,
    analyze_preferences,
    cost_report,
    create_app,
    export_votes_jsonl,
    generate_survey,
)
from .metrics import evaluate_system, render_jsonl, render_table
from .orchestrator import Orchestrator
from .store import Store


@click.group()
@click.option(
    "--db",
    "db_path",
    default="chatmt.db",
    show_default=True,
    help="Path to the embedded database file.",
)
@click.pass_context
def main(ctx, db_path):
    ctx.obj = {"db_path": db_path}


def _store(ctx) -> Store:
    return Store(ctx.obj["db_path"])


def _fail(exc: Exception) -> None:
    raise click.ClickException(str(exc))


# -- corpus -----------------------------------------------------------------


@main.group()
def corpus():
    """Chat-export ingestion, selection, splitting, ground truth."""


@corpus.command("import")
@click.option("--channel", required=True)
@click.option("--file", "path", required=True, type=click.Path(exists=True))
@click.pass_context
def corpus_import(ctx, channel, path):
    store = CorpusStore(_store(ctx))
    try:
        with open(path, "rb") as fh:
            report = store.import_export(fh, channel)
    except ChatMtError as exc:
        _fail(exc)
    click.echo(
        f"imported={report.imported} skipped={report.skipped} errors={len(report.errors)}"
    )
    for err in report.errors:
        click.echo(f"  {err}", err=True)
    if report.errors:
        sys.exit(1)


@corpus.command("select")
@click.option("--channel", required=True)
@click.option("--n", required=True, type=int)
@click.pass_context
def corpus_select(ctx, channel, n):
    store = CorpusStore(_store(ctx))
    try:
        messages = store.select_chronological(channel, n)
    except ChatMtError as exc:
        _fail(exc)
    for msg in messages:
        click.echo(f"{msg.key}\t{msg.timestamp.isoformat()}")


@corpus.command("split")
@click.option("--channel", required=True)
@click.option("--n", required=True, type=int, help="Chronological selection size.")
@click.option("--test-n", required=True, type=int)
@click.option("--name", default="default", show_default=True)
@click.pass_context
def corpus_split(ctx, channel, n, test_n, name):
    store = CorpusStore(_store(ctx))
    try:
        messages = store.select_chronological(channel, n)
        split = store.split_corpus(messages, test_n, name=name)
    except ChatMtError as exc:
        _fail(exc)
    click.echo(
        f"split {name!r}: train_val={len(split.keys('train_val'))}"
        f" test={len(split.keys('test'))}"
    )


@corpus.group("truth")
def corpus_truth():
    """Ground-truth translations."""


@corpus_truth.command("add")
@click.option("--key", required=True, help="channel:id for messages, literal for vocabulary.")
@click.option("--kind", type=click.Choice(["message", "vocabulary"]), required=True)
@click.option("--source", default="", help="Russian source (vocabulary only).")
@click.option("--target", required=True, help="English translation.")
@click.option("--translator", default="expert", show_default=True)
@click.pass_context
def corpus_truth_add(ctx, key, kind, source, target, translator):
    store = CorpusStore(_store(ctx))
    entry = GroundTruthEntry(
        key=key,
        kind=kind,
        source_text=source,
        target_text=target,
        translator_id=translator,
    )
    try:
        stored = store.add_ground_truth(entry)
    except ChatMtError as exc:
        _fail(exc)
    click.echo(f"stored ground truth for {stored!r}")


# -- translate --------------------------------------------------------------


def _orchestrator(ctx, config_path) -> Orchestrator:
    orch = Orchestrator(_store(ctx))
    if config_path:
        backends, prompts = config_mod.load_config(config_path)
    else:
        backends, prompts = config_mod.default_config()
    for backend in backends:
        try:
            orch.register_backend(backend)
        except ChatMtError as exc:
            click.echo(f"skipping backend {backend.backend_id}: {exc}", err=True)
    for prompt in prompts:
        orch.register_prompt(prompt)
    return orch


@main.group()
def translate():
    """Run backends over stored messages; record best picks."""


@translate.command("run")
@click.option("--backend", "backend_ids", multiple=True, required=True)
@click.option("--prompt", "prompt_id", default="translator-bot-v1", show_default=True)
@click.option("--split", "split_name", default="default", show_default=True)
@click.option("--bucket", default="train_val", show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--max-in-flight", default=4, show_default=True, type=int)
@click.pass_context
def translate_run(ctx, backend_ids, prompt_id, split_name, bucket, config_path, max_in_flight):
    orch = _orchestrator(ctx, config_path)
    try:
        split = orch.corpus.load_split(split_name)
        keys = split.keys(bucket)
        report = orch.translate_batch(keys, list(backend_ids), prompt_id, max_in_flight)
    except ChatMtError as exc:
        _fail(exc)
    for backend_id, counts in report.per_backend.items():
        click.echo(
            f"{backend_id}: ok={counts['ok']} refused={counts['refused']}"
            f" failed={counts['failed']}"
        )


@translate.command("pick")
@click.option("--message", "message_key", required=True)
@click.option("--record", "record_id", required=True, type=int)
@click.option("--rater", default="expert", show_default=True)
@click.pass_context
def translate_pick(ctx, message_key, record_id, rater):
    orch = Orchestrator(_store(ctx))
    try:
        pick = orch.record_best_pick(message_key, record_id, rater)
    except ChatMtError as exc:
        _fail(exc)
    click.echo(f"pick recorded: {pick.message_key} -> record {pick.record_id}")


# -- finetune ---------------------------------------------------------------


@main.group()
def finetune():
    """Fine-tune dataset building, validation, job metadata."""


@finetune.command("build")
@click.option("--prompt", "prompt_id", default="translator-bot-v1", show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--train-fraction", default=0.8, show_default=True, type=float)
@click.option("--translator", default="expert", show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.pass_context
def finetune_build(ctx, prompt_id, out_path, seed, train_fraction, translator, config_path):
    store = CorpusStore(_store(ctx))
    if config_path:
        _, prompts = config_mod.load_config(config_path)
    else:
        _, prompts = config_mod.default_config()
    by_id = {p.prompt_id: p for p in prompts}
    if prompt_id not in by_id:
        _fail(ChatMtError(f"prompt {prompt_id!r} not found in config"))
    try:
        truths = store.list_ground_truth(translator)
        records = ft.build_finetune_dataset(truths, by_id[prompt_id])
        split = ft.split_finetune(records, train_fraction, seed)
        out = Path(out_path)
        with open(out, "wb") as fh:
            written = ft.serialize_jsonl(split, fh)
        with open(out.with_suffix(".validation.jsonl"), "wb") as fh:
            ft.serialize_jsonl(split.validation, fh)
    except ChatMtError as exc:
        _fail(exc)
    click.echo(
        f"wrote {len(split.train)} train + {len(split.validation)} validation"
        f" records ({written} bytes train+validation)"
    )


@finetune.command("validate")
@click.argument("path", type=click.Path(exists=True))
def finetune_validate(path):
    with open(path, "rb") as fh:
        report = ft.validate_jsonl(fh)
    click.echo(f"lines={report.lines} clean={report.clean}")
    for label in (
        "role_errors",
        "empty_content",
        "duplicate_user_texts",
        "inconsistent_system_prompts",
    ):
        lines = getattr(report, label)
        if lines:
            click.echo(f"{label}: lines {lines}")
    if not report.clean:
        sys.exit(1)


@finetune.command("record-job")
@click.option("--file-digest", required=True)
@click.option("--base-model", default=None)
@click.option("--vendor-job-id", default=None)
@click.option("--result-model", default=None)
@click.option("--param", "params", multiple=True, help="key=value, repeatable.")
@click.pass_context
def finetune_record_job(ctx, file_digest, base_model, vendor_job_id, result_model, params):
    parsed = dict(p.split("=", 1) for p in params)
    job_id = ft.record_job(
        _store(ctx),
        file_digest=file_digest,
        base_model=base_model,
        vendor_job_id=vendor_job_id,
        result_model=result_model,
        params=parsed,
    )
    click.echo(f"recorded fine-tune job {job_id}")


# -- metrics ----------------------------------------------------------------


@main.group()
def metrics():
    """Automatic translation metrics."""


@metrics.command("eval")
@click.option("--hyp", "hyp_path", required=True, type=click.Path(exists=True))
@click.option("--ref", "ref_path", required=True, type=click.Path(exists=True))
@click.option("--metrics", "metric_list", default="bleu,meteor,ter", show_default=True)
@click.option(
    "--report",
    "report_format",
    type=click.Choice(["table", "jsonl"]),
    default="table",
    show_default=True,
)
def metrics_eval(hyp_path, ref_path, metric_list, report_format):
    hyps = Path(hyp_path).read_text(encoding="utf-8").splitlines()
    refs = Path(ref_path).read_text(encoding="utf-8").splitlines()
    if len(hyps) != len(refs):
        _fail(ChatMtError(f"{len(hyps)} hypotheses but {len(refs)} references"))
    wanted = tuple(m.strip() for m in metric_list.split(",") if m.strip())
    try:
        report = evaluate_system(list(zip(hyps, refs)), metrics=wanted)
    except ChatMtError as exc:
        _fail(exc)
    click.echo(render_table(report) if report_format == "table" else render_jsonl(report))


# -- survey -----------------------------------------------------------------


@main.group()
def survey():
    """Blinded A/B preference survey."""


@survey.command("generate")
@click.option("--questions", "questions_path", required=True, type=click.Path(exists=True),
              help="JSONL of {source, base, finetuned}.")
@click.option("--seed", required=True, type=int)
@click.option("--survey-id", default="default", show_default=True)
@click.pass_context
def survey_generate(ctx, questions_path, seed, survey_id):
    triples = []
    for line in Path(questions_path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            obj = json.loads(line)
            triples.append((obj["source"], obj["base"], obj["finetuned"]))
    try:
        questions = generate_survey(triples, seed, survey_id=survey_id)
    except ChatMtError as exc:
        _fail(exc)
    SurveyStore(_store(ctx)).save_survey(questions)
    click.echo(f"generated {len(questions)} blinded questions in survey {survey_id!r}")


@survey.command("serve")
@click.option("--addr", default="127.0.0.1:8000", show_default=True)
@click.option("--static", "static_dir", type=click.Path(), default=None,
              help="Optional UI asset directory to serve at /.")
@click.pass_context
def survey_serve(ctx, addr, static_dir):
    import uvicorn

    host, _, port = addr.partition(":")
    app = create_app(_store(ctx), static_dir=static_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))


@survey.command("analyze")
@click.option("--clusters", type=click.Choice(["respondent", "question", "both"]),
              default="both", show_default=True)
@click.option("--reps", default=10_000, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.pass_context
def survey_analyze(ctx, clusters, reps, seed):
    surveys = SurveyStore(_store(ctx))
    questions = {}
    for row in surveys.store.query("SELECT DISTINCT survey_id FROM survey_questions"):
        for q in surveys.list_questions(row["survey_id"]):
            questions[q.question_id] = q
    try:
        analysis = analyze_preferences(
            surveys.list_votes(), questions, clusters=clusters,
            bootstrap_reps=reps, seed=seed,
        )
    except ChatMtError as exc:
        _fail(exc)
    click.echo(
        f"votes={analysis.n_votes} finetuned={analysis.n_pref_finetuned}"
        f" proportion={analysis.proportion:.4f}"
    )
    click.echo(f"exact binomial two-sided p={analysis.exact_binomial_p_two_sided:.6g}")
    low, high = analysis.bootstrap_ci_95
    click.echo(
        f"bootstrap 95% CI [{low:.4f}, {high:.4f}]"
        f" ({analysis.bootstrap_reps} reps, clusters={analysis.clusters})"
    )
    click.echo(analysis.method_note)


@survey.command("export")
@click.option("--out", "out_path", type=click.Path(), default="-")
@click.pass_context
def survey_export(ctx, out_path):
    payload = export_votes_jsonl(SurveyStore(_store(ctx)).list_votes())
    if out_path == "-":
        click.echo(payload, nl=False)
    else:
        Path(out_path).write_text(payload, encoding="utf-8")


# -- report -----------------------------------------------------------------


@main.group()
def report():
    """Summary reports."""


@report.command("cost")
@click.option("--human-per-message", required=True, type=float)
@click.option("--human-per-word", type=float, default=None)
@click.option("--words-per-message", type=float, default=None)
@click.option("--price-per-1k-input", required=True, type=float)
@click.option("--price-per-1k-output", required=True, type=float)
@click.option("--input-tokens", required=True, type=int)
@click.option("--output-tokens", required=True, type=int)
@click.option("--n-messages", required=True, type=int)
def report_cost(
    human_per_message,
    human_per_word,
    words_per_message,
    price_per_1k_input,
    price_per_1k_output,
    input_tokens,
    output_tokens,
    n_messages,
):
    try:
        comparison = cost_report(
            HumanCost(per_message=human_per_message, per_word=human_per_word),
            ModelPricing(price_per_1k_input, price_per_1k_output),
            TokenUsage(input_tokens, output_tokens),
            n_messages,
            words_per_message=words_per_message,
        )
    except ChatMtError as exc:
        _fail(exc)
    click.echo(f"model cost/message: {comparison.model_cost_per_message:.6f}")
    click.echo(
        f"human cost/message: {comparison.human_cost_per_message_low:.2f}"
        f" .. {comparison.human_cost_per_message_high:.2f}"
    )
    if comparison.ratio_infinite:
        click.echo("cost ratio: infinite (model cost is zero)")
    else:
        click.echo(
            f"cost ratio: {comparison.ratio_low:,.0f} .. {comparison.ratio_high:,.0f}"
        )


if __name__ == "__main__":
    main()
