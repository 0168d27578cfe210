from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from chatmt.metrics import (
    CASING_FOLDED,
    extract_emoji,
    extract_urls,
    tokenize,
)


def toks(text, **kwargs):
    return list(tokenize(text, **kwargs).tokens)


def test_url_survives_as_single_token():
    assert toks("Visit strana.today now!") == ["Visit", "strana.today", "now", "!"]


def test_empty_text():
    assert toks("") == []


def test_emoji_segmentation():
    assert toks("⚡Атака⚡") == ["⚡", "Атака", "⚡"]


def test_scheme_url_with_path():
    assert toks("see https://t.me/some_channel/42 here") == [
        "see", "https://t.me/some_channel/42", "here",
    ]


def test_hyphenated_domain_single_token():
    assert "We-are-not-alone.ru" in toks("Сайт We-are-not-alone.ru лежит.")


def test_trailing_sentence_punctuation_not_part_of_url():
    assert toks("go to espreso.tv.") == ["go", "to", "espreso.tv", "."]


def test_leading_and_trailing_punctuation_detached():
    assert toks("«Сегодня»?") == ["«", "Сегодня", "»", "?"]


def test_casing_folded():
    assert toks("Visit NOW", casing=CASING_FOLDED) == ["visit", "now"]


def test_casing_preserved_by_default():
    assert toks("Visit NOW") == ["Visit", "NOW"]


def test_extract_urls_multiset():
    text = "strana.today и ещё раз strana.today, плюс espreso.tv"
    assert extract_urls(text) == ["strana.today", "strana.today", "espreso.tv"]


def test_extract_emoji_with_variation_selector():
    assert extract_emoji("удар ⚡️ нанесён") == ["⚡️"]


def test_extract_emoji_counts():
    assert extract_emoji("⚡⚡ атака 🔥") == ["⚡", "⚡", "🔥"]


@settings(max_examples=100, deadline=None)
@given(st.text(max_size=120))
def test_tokens_never_contain_whitespace(text):
    for token in tokenize(text).tokens:
        assert token == token.strip()
        assert token != ""


@settings(max_examples=100, deadline=None)
@given(st.text(max_size=120))
def test_tokenize_deterministic(text):
    assert tokenize(text) == tokenize(text)
