"""Tokenization shared by all metrics and the integrity checks.

URLs and emoji survive as single tokens; leading/trailing punctuation is
detached. Chat messages are short, so the tokenizer favours predictability
over linguistic sophistication.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

CASING_PRESERVED = "preserved"
CASING_FOLDED = "folded"

# Scheme-prefixed URLs, or bare domains like strana.today / We-are-not-alone.ru,
# optionally followed by a path.
URL_RE = re.compile(
    r"""
    (?:https?://[^\s<>"']+)
    |
    (?:\b[A-Za-z0-9][A-Za-z0-9-]*(?:\.[A-Za-z0-9][A-Za-z0-9-]*)+\.?[A-Za-z]*
       (?:/[^\s<>"']*)?)
    """,
    re.VERBOSE,
)

# Common emoji blocks; one base codepoint per token, with variation selectors
# and ZWJ-joined sequences kept attached.
_EMOJI_RANGES = (
    "\U0001F000-\U0001FAFF"  # pictographs, emoticons, transport, symbols
    "☀-➿"  # misc symbols + dingbats (includes lightning, check marks)
    "⬀-⯿"  # arrows/stars block
    "←-⇿"  # arrows
    "⌀-⏿"  # technical (clocks, hourglass)
)
# U+FE0F is the emoji variation selector, U+200D the zero-width joiner.
EMOJI_RE = re.compile(
    "[{r}]\uFE0F?(?:\u200D[{r}]\uFE0F?)*".format(r=_EMOJI_RANGES)
)

_TRAILING_URL_PUNCT = ".,;:!?)»\"'”’"


@dataclass(frozen=True)
class TokenSequence:
    tokens: tuple[str, ...]
    casing: str = CASING_PRESERVED

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)


def _find_protected_spans(text: str) -> list[tuple[int, int]]:
    spans = []
    for match in URL_RE.finditer(text):
        start, end = match.span()
        while end > start and text[end - 1] in _TRAILING_URL_PUNCT:
            end -= 1
        if end > start:
            spans.append((start, end))
    for match in EMOJI_RE.finditer(text):
        start, end = match.span()
        if not any(s <= start < e for s, e in spans):
            spans.append((start, end))
    return sorted(spans)


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith(("P", "S")) and not EMOJI_RE.match(ch)


def _split_word(chunk: str) -> list[str]:
    """Detach leading/trailing punctuation runs as separate tokens."""
    leading = []
    while chunk and _is_punct(chunk[0]):
        leading.append(chunk[0])
        chunk = chunk[1:]
    trailing = []
    while chunk and _is_punct(chunk[-1]):
        trailing.append(chunk[-1])
        chunk = chunk[:-1]
    tokens = leading
    if chunk:
        tokens.append(chunk)
    tokens.extend(reversed(trailing))
    return tokens


def tokenize(text: str, casing: str = CASING_PRESERVED) -> TokenSequence:
    text = unicodedata.normalize("NFC", text)
    spans = _find_protected_spans(text)
    tokens: list[str] = []
    cursor = 0

    def consume_plain(segment: str) -> None:
        for chunk in segment.split():
            tokens.extend(_split_word(chunk))

    for start, end in spans:
        consume_plain(text[cursor:start])
        tokens.append(text[start:end])
        cursor = end
    consume_plain(text[cursor:])

    if casing == CASING_FOLDED:
        tokens = [t.casefold() for t in tokens]
    elif casing != CASING_PRESERVED:
        raise ValueError(f"unknown casing {casing!r}")
    return TokenSequence(tokens=tuple(tokens), casing=casing)


def extract_urls(text: str) -> list[str]:
    text = unicodedata.normalize("NFC", text)
    urls = []
    for match in URL_RE.finditer(text):
        url = match.group()
        while url and url[-1] in _TRAILING_URL_PUNCT:
            url = url[:-1]
        if url:
            urls.append(url)
    return urls


def extract_emoji(text: str) -> list[str]:
    text = unicodedata.normalize("NFC", text)
    return [m.group() for m in EMOJI_RE.finditer(text)]
