"""Preference analysis: exact binomial test plus cluster bootstrap.

The published analysis for this kind of survey would fit a mixed logistic
model with random intercepts per question and respondent. Estimating
random-effects models is out of scope here; instead the preference is
tested with an exact two-sided binomial test against 0.5 and a cluster
bootstrap CI that resamples respondents and/or questions with replacement,
which addresses the same within-cluster correlation concern. Reports
state the substitution explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats as scipy_stats

from ..errors import InvalidInputError
from .survey import MODEL_FINETUNED, SurveyQuestion, VoteRecord

CLUSTER_RESPONDENT = "respondent"
CLUSTER_QUESTION = "question"
CLUSTER_BOTH = "both"

METHOD_NOTE = (
    "Significance via exact two-sided binomial test against 0.5 plus a cluster "
    "bootstrap percentile CI; this substitutes for a mixed logistic model with "
    "random intercepts per question and respondent."
)


@dataclass(frozen=True)
class PreferenceAnalysis:
    n_votes: int
    n_pref_finetuned: int
    proportion: float
    exact_binomial_p_two_sided: float
    bootstrap_ci_95: tuple[float, float]
    bootstrap_reps: int
    clusters: str
    method_note: str = METHOD_NOTE


def unblind_votes(
    votes: list[VoteRecord], questions: dict[str, SurveyQuestion]
) -> list[VoteRecord]:
    unknown = sorted({v.question_id for v in votes if v.question_id not in questions})
    if unknown:
        raise InvalidInputError(f"votes reference unknown questions: {unknown}")
    resolved = []
    for v in votes:
        model = questions[v.question_id].hidden_map[v.chosen_position]
        resolved.append(
            VoteRecord(
                respondent_id=v.respondent_id,
                question_id=v.question_id,
                chosen_position=v.chosen_position,
                captured_at=v.captured_at,
                resolved_model=model,
            )
        )
    return resolved


def exact_binomial_two_sided(successes: int, n: int, p: float = 0.5) -> float:
    return float(scipy_stats.binomtest(successes, n, p, alternative="two-sided").pvalue)


def _bootstrap_proportions(
    votes: list[VoteRecord], clusters: str, reps: int, seed: int
) -> np.ndarray:
    rng = np.random.default_rng(seed)
    respondents = sorted({v.respondent_id for v in votes})
    questions = sorted({v.question_id for v in votes})
    by_pair = {}
    for v in votes:
        by_pair.setdefault((v.respondent_id, v.question_id), []).append(
            1 if v.resolved_model == MODEL_FINETUNED else 0
        )

    proportions = np.empty(reps)
    for rep in range(reps):
        if clusters in (CLUSTER_RESPONDENT, CLUSTER_BOTH):
            r_sample = rng.choice(respondents, size=len(respondents), replace=True)
        else:
            r_sample = respondents
        if clusters in (CLUSTER_QUESTION, CLUSTER_BOTH):
            q_sample = rng.choice(questions, size=len(questions), replace=True)
        else:
            q_sample = questions
        total = 0
        pref = 0
        for r in r_sample:
            for q in q_sample:
                for outcome in by_pair.get((r, q), ()):
                    total += 1
                    pref += outcome
        proportions[rep] = pref / total if total else np.nan
    return proportions


def analyze_preferences(
    votes: list[VoteRecord],
    questions: dict[str, SurveyQuestion],
    clusters: str = CLUSTER_BOTH,
    bootstrap_reps: int = 10_000,
    seed: int = 0,
) -> PreferenceAnalysis:
    if not votes:
        raise InvalidInputError("analysis needs at least one vote")
    if clusters not in (CLUSTER_RESPONDENT, CLUSTER_QUESTION, CLUSTER_BOTH):
        raise InvalidInputError(f"unknown cluster level {clusters!r}")

    resolved = unblind_votes(votes, questions)
    n = len(resolved)
    n_pref = sum(1 for v in resolved if v.resolved_model == MODEL_FINETUNED)
    proportion = n_pref / n
    p_value = exact_binomial_two_sided(n_pref, n)

    samples = _bootstrap_proportions(resolved, clusters, bootstrap_reps, seed)
    valid = samples[~np.isnan(samples)]
    low, high = (
        (float(np.percentile(valid, 2.5)), float(np.percentile(valid, 97.5)))
        if len(valid)
        else (proportion, proportion)
    )

    return PreferenceAnalysis(
        n_votes=n,
        n_pref_finetuned=n_pref,
        proportion=proportion,
        exact_binomial_p_two_sided=p_value,
        bootstrap_ci_95=(low, high),
        bootstrap_reps=bootstrap_reps,
        clusters=clusters,
    )
