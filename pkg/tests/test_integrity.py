from __future__ import annotations

from chatmt.metrics import (
    FINDING_EMOJI_ADDED,
    FINDING_EMOJI_DROPPED,
    FINDING_URL_DROPPED,
    FINDING_URL_MUTATED,
    check_integrity,
)


def kinds(report):
    return [f.kind for f in report.findings]


def test_mutated_hyphenated_domain():
    report = check_integrity(
        "Наша цель — We-are-not-alone.ru, готовьтесь.",
        "Our target is We-Ra-not-alone.ru, get ready.",
    )
    assert not report.urls_preserved
    assert kinds(report) == [FINDING_URL_MUTATED]
    assert "we-are-not-alone.ru" in report.findings[0].detail.lower()


def test_mutated_host_beyond_case():
    report = check_integrity("смотрите espreso.tv", "watch Espresso.TV")
    assert not report.urls_preserved
    assert kinds(report) == [FINDING_URL_MUTATED]


def test_host_case_only_change_is_preserved():
    report = check_integrity("see espreso.tv", "see ESPRESO.TV")
    assert report.urls_preserved
    assert report.findings == []


def test_path_case_is_significant():
    report = check_integrity(
        "https://example.com/Path", "https://example.com/path"
    )
    assert not report.urls_preserved
    assert kinds(report) == [FINDING_URL_MUTATED]


def test_url_dropped_entirely():
    report = check_integrity("атакуем strana.today сейчас", "we attack now")
    assert not report.urls_preserved
    assert kinds(report) == [FINDING_URL_DROPPED]


def test_urls_preserved_multiset():
    report = check_integrity(
        "strana.today and strana.today", "strana.today и strana.today"
    )
    assert report.urls_preserved
    assert report.urls_source["strana.today"] == 2


def test_emoji_preserved_two_bolts():
    report = check_integrity("⚡Атака⚡ началась", "⚡Attack⚡ has begun")
    assert report.emoji_preserved
    assert report.findings == []
    assert report.emoji_source["⚡"] == 2


def test_emoji_dropped():
    report = check_integrity("⚡Атака⚡ началась", "Attack has begun")
    assert not report.emoji_preserved
    assert kinds(report) == [FINDING_EMOJI_DROPPED, FINDING_EMOJI_DROPPED]


def test_emoji_added():
    report = check_integrity("Атака началась", "Attack has begun 🔥")
    assert not report.emoji_preserved
    assert kinds(report) == [FINDING_EMOJI_ADDED]


def test_partial_emoji_drop_counts():
    report = check_integrity("⚡⚡⚡", "⚡")
    assert not report.emoji_preserved
    assert kinds(report).count(FINDING_EMOJI_DROPPED) == 2


def test_clean_message_no_findings():
    report = check_integrity("Слава восстанию!", "Glory to the uprising!")
    assert report.urls_preserved and report.emoji_preserved
    assert report.findings == []
