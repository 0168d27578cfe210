"""Sentence BLEU with clipped n-gram precisions and brevity penalty."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from ..errors import InvalidInputError
from .tokenizer import TokenSequence

SMOOTHING_NONE = "none"
SMOOTHING_ADD_EPSILON = "add_epsilon"
_EPSILON = 1e-9


@dataclass(frozen=True)
class BleuBreakdown:
    precisions: tuple[float, ...]  # p_1 .. p_max_n
    brevity_penalty: float
    candidate_length: int
    reference_length: int


def _ngrams(tokens: tuple[str, ...], n: int) -> Counter:
    return Counter(tokens[i : i + n] for i in range(len(tokens) - n + 1))


def _closest_reference_length(candidate_len: int, references) -> int:
    # Ties go to the shorter reference.
    return min(
        (len(r) for r in references),
        key=lambda rl: (abs(rl - candidate_len), rl),
    )


def bleu(
    candidate: TokenSequence,
    references: list[TokenSequence],
    max_n: int = 4,
    smoothing: str = SMOOTHING_ADD_EPSILON,
) -> tuple[float, BleuBreakdown]:
    if not references:
        raise InvalidInputError("bleu needs at least one reference")
    if smoothing not in (SMOOTHING_NONE, SMOOTHING_ADD_EPSILON):
        raise InvalidInputError(f"unknown smoothing {smoothing!r}")

    cand = tuple(candidate.tokens)
    c = len(cand)
    r = _closest_reference_length(c, references)
    if c == 0:
        return 0.0, BleuBreakdown((0.0,) * max_n, 0.0, 0, r)

    precisions = []
    for n in range(1, max_n + 1):
        cand_counts = _ngrams(cand, n)
        total = sum(cand_counts.values())
        if total == 0:
            precisions.append(0.0)
            continue
        clipped = 0
        max_ref = Counter()
        for ref in references:
            for gram, count in _ngrams(tuple(ref.tokens), n).items():
                if count > max_ref[gram]:
                    max_ref[gram] = count
        for gram, count in cand_counts.items():
            clipped += min(count, max_ref[gram])
        precisions.append(clipped / total)

    bp = min(1.0, math.exp(1.0 - r / c))
    weight = 1.0 / max_n
    if any(p == 0.0 for p in precisions):
        if smoothing == SMOOTHING_NONE:
            return 0.0, BleuBreakdown(tuple(precisions), bp, c, r)
        effective = [p if p > 0.0 else _EPSILON for p in precisions]
    else:
        effective = precisions
    score = bp * math.exp(sum(weight * math.log(p) for p in effective))
    return score, BleuBreakdown(tuple(precisions), bp, c, r)
