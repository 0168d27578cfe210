"""Unigram-alignment translation metric with fragmentation penalty.

score = f_mean * (1 - penalty), with f_mean = 10PR / (R + 9P) and
penalty = 0.5 * (chunks / matches)^3. The alignment maximizes unigram
matches and, among maximal alignments, minimizes the number of chunks;
both are computed exactly, which is fine at chat-message scale. The
optional stem stage (Porter) only considers tokens the exact stage left
unmatched.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .stemmer import porter_stem
from .tokenizer import TokenSequence


@dataclass(frozen=True)
class MeteorBreakdown:
    precision: float
    recall: float
    f_mean: float
    matches: int
    chunks: int
    fragmentation_penalty: float


def _match_quotas(cand: tuple[str, ...], ref: tuple[str, ...], use_stem: bool):
    """Per-token exact quotas plus per-stem quotas over the exact leftovers."""
    cand_counts = Counter(cand)
    ref_counts = Counter(ref)
    exact = {t: min(c, ref_counts[t]) for t, c in cand_counts.items() if t in ref_counts}
    stem_quota: dict[str, int] = {}
    cand_leftover = {t: c - exact.get(t, 0) for t, c in cand_counts.items()}
    ref_leftover = {t: c - exact.get(t, 0) for t, c in ref_counts.items()}
    if use_stem:
        cand_stems = Counter()
        ref_stems = Counter()
        for t, c in cand_leftover.items():
            if c:
                cand_stems[porter_stem(t)] += c
        for t, c in ref_leftover.items():
            if c:
                ref_stems[porter_stem(t)] += c
        stem_quota = {
            s: min(c, ref_stems[s]) for s, c in cand_stems.items() if s in ref_stems
        }
        stem_quota = {s: q for s, q in stem_quota.items() if q > 0}
    return exact, stem_quota, cand_leftover, ref_leftover


def _min_chunks(
    cand: tuple[str, ...], ref: tuple[str, ...], use_stem: bool
) -> tuple[int, int]:
    """Exact search for (max matches, fewest chunks at that maximum)."""
    exact, stem_quota, cand_leftover, ref_leftover = _match_quotas(cand, ref, use_stem)
    target = sum(exact.values()) + sum(stem_quota.values())
    if target == 0:
        return 0, 0

    n = len(cand)
    cand_stem = [porter_stem(t) for t in cand] if use_stem else [""] * n
    ref_stem = [porter_stem(t) for t in ref] if use_stem else [""] * len(ref)
    # Suffix counts for feasibility pruning of "skip" decisions.
    suffix_type: list[Counter] = [Counter() for _ in range(n + 1)]
    suffix_stem: list[Counter] = [Counter() for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        suffix_type[i] = suffix_type[i + 1].copy()
        suffix_type[i][cand[i]] += 1
        suffix_stem[i] = suffix_stem[i + 1].copy()
        suffix_stem[i][cand_stem[i]] += 1

    best = [len(cand) + 1]
    used = [False] * len(ref)
    rem_exact = dict(exact)
    rem_stem = dict(stem_quota)
    rem_cand_stem_cap = dict(cand_leftover)
    rem_ref_stem_cap = dict(ref_leftover)

    def feasible_skip(i: int, t: str) -> bool:
        # After skipping position i, remaining occurrences must cover quotas.
        if suffix_type[i + 1][t] < rem_exact.get(t, 0):
            return False
        if use_stem:
            s = cand_stem[i]
            need = rem_stem.get(s, 0)
            if need:
                remaining = suffix_stem[i + 1][s]
                # Exact matches of other same-stem types also consume positions.
                exact_need = sum(
                    rem_exact.get(tt, 0)
                    for tt in set(cand[i + 1 :])
                    if porter_stem(tt) == s
                )
                if remaining - exact_need < need:
                    return False
        return True

    def dfs(i: int, matched: int, chunks: int, prev_i: int, prev_j: int) -> None:
        if chunks >= best[0]:
            return
        if i == n:
            if matched == target:
                best[0] = chunks
            return
        t = cand[i]
        # Exact matches.
        if rem_exact.get(t, 0) > 0:
            for j, rt in enumerate(ref):
                if rt == t and not used[j]:
                    used[j] = True
                    rem_exact[t] -= 1
                    new_chunks = chunks if (prev_i == i - 1 and prev_j == j - 1) else chunks + 1
                    dfs(i + 1, matched + 1, new_chunks, i, j)
                    rem_exact[t] += 1
                    used[j] = False
        # Stem matches over exact-stage leftovers.
        if use_stem:
            s = cand_stem[i]
            if rem_stem.get(s, 0) > 0 and rem_cand_stem_cap.get(t, 0) > 0:
                for j, rt in enumerate(ref):
                    if used[j] or rt == t or ref_stem[j] != s:
                        continue
                    if rem_ref_stem_cap.get(rt, 0) <= 0:
                        continue
                    used[j] = True
                    rem_stem[s] -= 1
                    rem_cand_stem_cap[t] -= 1
                    rem_ref_stem_cap[rt] -= 1
                    new_chunks = chunks if (prev_i == i - 1 and prev_j == j - 1) else chunks + 1
                    dfs(i + 1, matched + 1, new_chunks, i, j)
                    rem_ref_stem_cap[rt] += 1
                    rem_cand_stem_cap[t] += 1
                    rem_stem[s] += 1
                    used[j] = False
        if feasible_skip(i, t):
            dfs(i + 1, matched, chunks, prev_i, prev_j)

    dfs(0, 0, 0, -2, -2)
    return target, best[0]


def meteor(
    candidate: TokenSequence, reference: TokenSequence, use_stem: bool = False
) -> tuple[float, MeteorBreakdown]:
    cand = tuple(candidate.tokens)
    ref = tuple(reference.tokens)
    if not cand or not ref:
        return 0.0, MeteorBreakdown(0.0, 0.0, 0.0, 0, 0, 0.0)

    matches, chunks = _min_chunks(cand, ref, use_stem)
    if matches == 0:
        return 0.0, MeteorBreakdown(0.0, 0.0, 0.0, 0, 0, 0.0)

    precision = matches / len(cand)
    recall = matches / len(ref)
    f_mean = 10.0 * precision * recall / (recall + 9.0 * precision)
    penalty = 0.5 * (chunks / matches) ** 3
    score = f_mean * (1.0 - penalty)
    return score, MeteorBreakdown(precision, recall, f_mean, matches, chunks, penalty)
