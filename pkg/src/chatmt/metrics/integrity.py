"""Translation integrity checks: URL and emoji preservation.

Machine translation notoriously rewrites URLs and silently drops emoji;
these checks compare the multisets found in source and translation and
enumerate every mutation, drop, or addition.
"""

from __future__ import annotations

import difflib
from collections import Counter
from dataclasses import dataclass, field

from .tokenizer import extract_emoji, extract_urls

FINDING_URL_MUTATED = "url_mutated"
FINDING_URL_DROPPED = "url_dropped"
FINDING_EMOJI_DROPPED = "emoji_dropped"
FINDING_EMOJI_ADDED = "emoji_added"

_MUTATION_SIMILARITY = 0.5


@dataclass(frozen=True)
class Finding:
    kind: str
    detail: str


@dataclass
class IntegrityReport:
    urls_source: Counter
    urls_translation: Counter
    urls_preserved: bool
    emoji_source: Counter
    emoji_translation: Counter
    emoji_preserved: bool
    findings: list[Finding] = field(default_factory=list)


def _url_key(url: str) -> str:
    """Host compared case-insensitively, path case-sensitively."""
    rest = ""
    host = url
    for sep in ("://",):
        if sep in host:
            host = host.split(sep, 1)[1]
    if "/" in host:
        host, rest = host.split("/", 1)
        rest = "/" + rest
    return host.lower() + rest


def check_integrity(source: str, translation: str) -> IntegrityReport:
    urls_src = Counter(extract_urls(source))
    urls_tr = Counter(extract_urls(translation))
    emoji_src = Counter(extract_emoji(source))
    emoji_tr = Counter(extract_emoji(translation))

    findings: list[Finding] = []

    src_keyed = Counter(_url_key(u) for u in urls_src.elements())
    tr_keyed = Counter(_url_key(u) for u in urls_tr.elements())
    missing = list((src_keyed - tr_keyed).elements())
    extra = list((tr_keyed - src_keyed).elements())
    for lost in missing:
        best = None
        best_ratio = 0.0
        for candidate in extra:
            ratio = difflib.SequenceMatcher(None, lost, candidate).ratio()
            if ratio > best_ratio:
                best, best_ratio = candidate, ratio
        if best is not None and best_ratio >= _MUTATION_SIMILARITY:
            findings.append(
                Finding(FINDING_URL_MUTATED, f"{lost!r} became {best!r}")
            )
            extra.remove(best)
        else:
            findings.append(Finding(FINDING_URL_DROPPED, f"{lost!r} missing from translation"))

    for emoji in (emoji_src - emoji_tr).elements():
        findings.append(Finding(FINDING_EMOJI_DROPPED, f"{emoji} missing from translation"))
    for emoji in (emoji_tr - emoji_src).elements():
        findings.append(Finding(FINDING_EMOJI_ADDED, f"{emoji} not present in source"))

    return IntegrityReport(
        urls_source=urls_src,
        urls_translation=urls_tr,
        urls_preserved=src_keyed == tr_keyed,
        emoji_source=emoji_src,
        emoji_translation=emoji_tr,
        emoji_preserved=emoji_src == emoji_tr,
        findings=findings,
    )
