"""Translation edit rate: insertions, deletions, substitutions, block shifts.

Greedy shift search: repeatedly take the shift that most reduces the
word-level edit distance (ties: leftmost block, then longest, then earliest
insertion point), then add the remaining dynamic-programming edit distance.
A shifted block must exactly match a contiguous reference subsequence.
Score is on the 0-100 scale (edits per 100 reference words).

Greedy shift selection is a heuristic and can be strictly suboptimal even
on tiny inputs (e.g. hypothesis "b c a a" against reference "a b a c":
greedy stops at 3 edits where two shifts reach the reference exactly).
For short sequences the greedy result is therefore refined by a bounded
breadth-first search over shift sequences; a multiset lower bound proves
optimality and keeps the search tiny. Longer inputs use the plain greedy
procedure. Both paths are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InvalidInputError
from .tokenizer import TokenSequence

MAX_SHIFT_ITERATIONS = 50
# Exact-search limits: refinement only engages at or below this length, and
# never evaluates more than this many shifted sequences.
EXACT_SEARCH_MAX_TOKENS = 10
EXACT_SEARCH_MAX_EVALUATIONS = 50_000


@dataclass(frozen=True)
class TerBreakdown:
    insertions: int
    deletions: int
    substitutions: int
    shifts: int
    reference_length: int

    @property
    def edits(self) -> int:
        return self.insertions + self.deletions + self.substitutions + self.shifts


def edit_distance(hyp: tuple[str, ...], ref: tuple[str, ...]) -> int:
    """Uniform-cost word-level Levenshtein distance."""
    if not hyp:
        return len(ref)
    prev = list(range(len(ref) + 1))
    for i, h in enumerate(hyp, start=1):
        cur = [i]
        for j, r in enumerate(ref, start=1):
            cur.append(
                prev[j - 1]
                if h == r
                else 1 + min(prev[j - 1], prev[j], cur[-1])
            )
        prev = cur
    return prev[-1]


def _edit_counts(hyp: tuple[str, ...], ref: tuple[str, ...]) -> tuple[int, int, int]:
    """(insertions, deletions, substitutions) from a DP backtrace.

    Insertions are hypothesis words absent from the alignment with the
    reference; deletions are reference words the hypothesis lacks.
    """
    n, m = len(hyp), len(ref)
    dp = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        dp[i][0] = i
    for j in range(m + 1):
        dp[0][j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            if hyp[i - 1] == ref[j - 1]:
                dp[i][j] = dp[i - 1][j - 1]
            else:
                dp[i][j] = 1 + min(dp[i - 1][j - 1], dp[i - 1][j], dp[i][j - 1])
    ins = dels = subs = 0
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and hyp[i - 1] == ref[j - 1] and dp[i][j] == dp[i - 1][j - 1]:
            i, j = i - 1, j - 1
        elif i > 0 and j > 0 and dp[i][j] == dp[i - 1][j - 1] + 1:
            subs += 1
            i, j = i - 1, j - 1
        elif i > 0 and dp[i][j] == dp[i - 1][j] + 1:
            ins += 1
            i -= 1
        else:
            dels += 1
            j -= 1
    return ins, dels, subs


def _ref_sublists(ref: tuple[str, ...]) -> set[tuple[str, ...]]:
    out = set()
    for length in range(1, len(ref) + 1):
        for start in range(len(ref) - length + 1):
            out.add(ref[start : start + length])
    return out


def legal_shifts(hyp: tuple[str, ...], ref: tuple[str, ...]):
    """All (start, length, insert_at, shifted_hyp) with the block found in ref."""
    sublists = _ref_sublists(ref)
    n = len(hyp)
    for start in range(n):
        for length in range(1, n - start + 1):
            block = hyp[start : start + length]
            if block not in sublists:
                continue
            rest = hyp[:start] + hyp[start + length :]
            for insert_at in range(len(rest) + 1):
                if insert_at == start:
                    continue
                yield start, length, insert_at, rest[:insert_at] + block + rest[insert_at:]


def _greedy_shifts(
    hyp: tuple[str, ...], ref: tuple[str, ...]
) -> tuple[tuple[str, ...], int]:
    shifts = 0
    current = hyp
    for _ in range(MAX_SHIFT_ITERATIONS):
        base = edit_distance(current, ref)
        if base == 0:
            break
        best_gain = 0
        best_key = None
        best_hyp = None
        for start, length, insert_at, shifted in legal_shifts(current, ref):
            gain = base - edit_distance(shifted, ref)
            # Ties: leftmost start, longest block, earliest insertion point.
            key = (-gain, start, -length, insert_at)
            if gain >= 1 and (best_key is None or key < best_key):
                best_gain = gain
                best_key = key
                best_hyp = shifted
        if best_gain < 1:
            break
        current = best_hyp
        shifts += 1
    return current, shifts


def _multiset_lower_bound(hyp: tuple[str, ...], ref: tuple[str, ...]) -> int:
    """Edit-distance floor over every reordering of the hypothesis."""
    left = list(ref)
    overlap = 0
    for token in hyp:
        if token in left:
            left.remove(token)
            overlap += 1
    return max(len(hyp), len(ref)) - overlap


def _best_shift_sequence(
    hyp: tuple[str, ...], ref: tuple[str, ...]
) -> tuple[tuple[str, ...], int]:
    """Greedy shifts, refined to the provable optimum on short sequences."""
    best_hyp, best_shifts = _greedy_shifts(hyp, ref)
    best_total = best_shifts + edit_distance(best_hyp, ref)
    if not hyp or max(len(hyp), len(ref)) > EXACT_SEARCH_MAX_TOKENS:
        return best_hyp, best_shifts

    minperm = _multiset_lower_bound(hyp, ref)
    # Any sequence with >= 1 shift costs at least 1 + minperm.
    if best_total <= min(edit_distance(hyp, ref), 1 + minperm):
        return best_hyp, best_shifts

    evaluations = 0
    seen = {hyp}
    frontier = [hyp]
    depth = 0
    while (
        frontier
        and depth + 1 + minperm < best_total
        and evaluations < EXACT_SEARCH_MAX_EVALUATIONS
    ):
        depth += 1
        nxt = []
        for state in frontier:
            for _, _, _, shifted in legal_shifts(state, ref):
                if shifted in seen:
                    continue
                seen.add(shifted)
                evaluations += 1
                total = depth + edit_distance(shifted, ref)
                if total < best_total:
                    best_total = total
                    best_hyp, best_shifts = shifted, depth
                nxt.append(shifted)
                if evaluations >= EXACT_SEARCH_MAX_EVALUATIONS:
                    break
            else:
                continue
            break
        frontier = nxt
    return best_hyp, best_shifts


def ter(candidate: TokenSequence, reference: TokenSequence) -> tuple[float, TerBreakdown]:
    ref = tuple(reference.tokens)
    if not ref:
        raise InvalidInputError("ter needs a nonempty reference")
    hyp = tuple(candidate.tokens)
    shifted, shifts = _best_shift_sequence(hyp, ref)
    ins, dels, subs = _edit_counts(shifted, ref)
    breakdown = TerBreakdown(
        insertions=ins,
        deletions=dels,
        substitutions=subs,
        shifts=shifts,
        reference_length=len(ref),
    )
    score = 100.0 * breakdown.edits / len(ref)
    return score, breakdown
