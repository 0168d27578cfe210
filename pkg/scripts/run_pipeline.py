#!/usr/bin/env python3
"""End-to-end demo pipeline on synthetic data.

Imports a synthetic chat export, splits it chronologically, translates the
corpus with two offline mock backends, builds and validates a fine-tune
dataset (with vocabulary entries pinned to the training side), scores one
backend against reference translations, generates a blinded survey, and
prints a cost comparison. Everything is seeded and offline; the point is to
exercise every stage the way a real experiment would.

Usage: python3 scripts/run_pipeline.py [--db PATH] [--seed N]
"""

from __future__ import annotations

import argparse
import io
import json

from chatmt.corpus import CorpusStore, GroundTruthEntry
from chatmt.evalharness import (
    HumanCost,
    ModelPricing,
    SurveyStore,
    TokenUsage,
    cost_report,
    generate_survey,
)
from chatmt.finetune import build_finetune_dataset, serialize_jsonl, split_finetune, validate_jsonl
from chatmt.metrics import evaluate_system, render_table
from chatmt.orchestrator import BackendConfig, Orchestrator, PromptTemplate
from chatmt.store import Store

CHANNEL = "synthetic-channel"
N_MESSAGES = 30
N_TEST = 10
N_VOCABULARY = 5


def synthetic_export(n: int) -> bytes:
    doc = {
        "messages": [
            {
                "id": i,
                "type": "message",
                "date": f"2022-03-11T{10 + i // 60:02d}:{i % 60:02d}:00",
                "text": f"⚡Сводка номер {i}: цель {i} подтверждена⚡",
            }
            for i in range(1, n + 1)
        ]
    }
    return json.dumps(doc, ensure_ascii=False).encode("utf-8")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--db", default=":memory:", help="database path")
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    store = Store(args.db)
    corpus = CorpusStore(store)

    report = corpus.import_export(io.BytesIO(synthetic_export(N_MESSAGES)), CHANNEL)
    print(f"import: {report.imported} messages")

    messages = corpus.select_chronological(CHANNEL, N_MESSAGES)
    split = corpus.split_corpus(messages, test_n=N_TEST, name="demo")
    print(f"split: {len(split.keys('train_val'))} train_val / {len(split.keys('test'))} test")

    prompt = PromptTemplate("demo-prompt", "Translate from Russian to English.")
    orch = Orchestrator(store)
    orch.register_prompt(prompt)
    references = {m.key: f"Report number {m.message_id}: target {m.message_id} confirmed" for m in messages}
    for backend_id, style in (("mock-base", "rough"), ("mock-finetuned", "clean")):
        dictionary = {
            m.text: (
                references[m.key]
                if style == "clean"
                else f"Report number {m.message_id}: goal {m.message_id} confirmed probably"
            )
            for m in messages
        }
        orch.register_backend(
            BackendConfig(backend_id=backend_id, kind="mock_dictionary"),
            dictionary=dictionary,
        )
    batch = orch.translate_batch(
        [m.key for m in messages], ["mock-base", "mock-finetuned"], "demo-prompt"
    )
    print(f"translate: {batch.total()} calls, per backend {batch.per_backend}")

    for m in messages:
        if split.assignments[m.key] == "train_val":
            corpus.add_ground_truth(
                GroundTruthEntry(
                    key=m.key, kind="message", source_text="",
                    target_text=references[m.key], translator_id="expert",
                )
            )
    for i in range(N_VOCABULARY):
        corpus.add_ground_truth(
            GroundTruthEntry(
                key=f"термин{i}", kind="vocabulary", source_text=f"термин{i}",
                target_text=f"term {i}", translator_id="expert",
            )
        )

    records = build_finetune_dataset(corpus.list_ground_truth("expert"), prompt)
    ft_split = split_finetune(records, 0.8, seed=args.seed)
    buffer = io.BytesIO()
    n_bytes = serialize_jsonl(ft_split, buffer)
    validation = validate_jsonl(io.BytesIO(buffer.getvalue()))
    print(
        f"finetune: {len(ft_split.train)} train / {len(ft_split.validation)} validation"
        f" records, {n_bytes} bytes, clean={validation.clean}"
    )

    pairs = []
    for m in messages:
        record = [r for r in orch.list_records(m.key) if r.backend_id == "mock-base"][0]
        pairs.append((record.output_text, references[m.key]))
    print("metrics (mock-base vs references):")
    print(render_table(evaluate_system(pairs)))

    triples = []
    for m in messages:
        by_backend = {r.backend_id: r.output_text for r in orch.list_records(m.key)}
        triples.append((m.text, by_backend["mock-base"], by_backend["mock-finetuned"]))
    questions = generate_survey(triples, seed=args.seed, survey_id="demo")
    SurveyStore(store).save_survey(questions)
    print(f"survey: {len(questions)} blinded questions saved (survey_id='demo')")

    comparison = cost_report(
        HumanCost(per_message=0.21),
        ModelPricing(per_1k_input_tokens=0.0015, per_1k_output_tokens=0.002),
        TokenUsage(input_tokens=12_000, output_tokens=15_400),
        n_messages=100,
    )
    print(
        f"cost: model ${comparison.model_cost_per_message:.6f}/message,"
        f" human ${comparison.human_cost_per_message_high:.2f}/message,"
        f" ratio {comparison.ratio_high:,.0f}x"
    )

    store.close()


if __name__ == "__main__":
    main()
