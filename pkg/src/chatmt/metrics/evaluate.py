"""Corpus-level scoring: per-sentence metrics aggregated as mean ± std."""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass, field

from ..errors import InvalidInputError
from .bleu import SMOOTHING_ADD_EPSILON, bleu
from .meteor import meteor
from .ter import ter
from .tokenizer import CASING_PRESERVED, tokenize

METRIC_BLEU = "bleu"
METRIC_METEOR = "meteor"
METRIC_TER = "ter"
ALL_METRICS = (METRIC_BLEU, METRIC_METEOR, METRIC_TER)


@dataclass
class MetricScore:
    metric: str
    per_sentence: list[float]
    mean: float
    std: float
    breakdowns: list = field(default_factory=list)


@dataclass
class SystemReport:
    scores: dict[str, MetricScore]
    skipped_pairs: list[int] = field(default_factory=list)


def _mean_std(values: list[float]) -> tuple[float, float]:
    mean = statistics.fmean(values)
    std = statistics.stdev(values) if len(values) > 1 else 0.0
    return mean, std


def format_mean_std(mean: float, std: float, digits: int = 4) -> str:
    return f"{mean:.{digits}f} ± {std:.{digits}f}"


def evaluate_system(
    pairs: list[tuple[str, str]],
    metrics=ALL_METRICS,
    casing: str = CASING_PRESERVED,
    smoothing: str = SMOOTHING_ADD_EPSILON,
    use_stem: bool = False,
) -> SystemReport:
    if not pairs:
        raise InvalidInputError("evaluate_system needs at least one pair")
    unknown = set(metrics) - set(ALL_METRICS)
    if unknown:
        raise InvalidInputError(f"unknown metrics: {sorted(unknown)}")

    skipped = []
    tokenized = []
    for i, (candidate, reference) in enumerate(pairs):
        ref_tokens = tokenize(reference, casing)
        if len(ref_tokens) == 0:
            skipped.append(i)
            continue
        tokenized.append((tokenize(candidate, casing), ref_tokens))
    if not tokenized:
        raise InvalidInputError("every pair has an empty reference")

    scores: dict[str, MetricScore] = {}
    for metric in metrics:
        per_sentence = []
        breakdowns = []
        for cand, ref in tokenized:
            if metric == METRIC_BLEU:
                score, breakdown = bleu(cand, [ref], smoothing=smoothing)
            elif metric == METRIC_METEOR:
                score, breakdown = meteor(cand, ref, use_stem=use_stem)
            else:
                score, breakdown = ter(cand, ref)
            per_sentence.append(score)
            breakdowns.append(breakdown)
        mean, std = _mean_std(per_sentence)
        scores[metric] = MetricScore(
            metric=metric,
            per_sentence=per_sentence,
            mean=mean,
            std=std,
            breakdowns=breakdowns,
        )
    return SystemReport(scores=scores, skipped_pairs=skipped)


def render_table(report: SystemReport) -> str:
    lines = ["Metric  Score"]
    for metric in ALL_METRICS:
        if metric in report.scores:
            s = report.scores[metric]
            lines.append(f"{metric.upper():<7} {format_mean_std(s.mean, s.std)}")
    if report.skipped_pairs:
        lines.append(f"(skipped {len(report.skipped_pairs)} pairs with empty references)")
    return "\n".join(lines)


def render_jsonl(report: SystemReport) -> str:
    lines = []
    for metric in ALL_METRICS:
        if metric in report.scores:
            s = report.scores[metric]
            lines.append(
                json.dumps(
                    {
                        "metric": s.metric,
                        "mean": round(s.mean, 10),
                        "std": round(s.std, 10),
                        "formatted": format_mean_std(s.mean, s.std),
                        "n": len(s.per_sentence),
                        "skipped": len(report.skipped_pairs),
                    },
                    ensure_ascii=False,
                )
            )
    return "\n".join(lines)
