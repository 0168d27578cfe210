from __future__ import annotations

import io
import json
import random
import sys
from datetime import datetime, timedelta, timezone
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from chatmt.corpus import CorpusStore, GroundTruthEntry
from chatmt.store import Store

CHANNEL = "hacktivist-main"

RUSSIAN_SNIPPETS = [
    "Наша DDoS-атака положила сайт {url} ⚡",
    "Сегодня мы атаковали {url} 🔥 подробности позже",
    "Недо-хакеры опять жалуются: {url}",
    "Каламбур: сегодня у «Сегодня» не задалось.",
    "Толстосумы из банка под ударом 💥 {url}",
    "Айтишник сообщает: сервисы {url} недоступны",
    "А нас за шо? Ответ тут: {url}",
    "Ахи-вздохи в комментариях 🙂",
]
URLS = [
    "We-are-not-alone.ru",
    "strana.today",
    "espreso.tv",
    "gosuslugi.ru/login",
    "https://example-bank.ru/news",
]


def synthetic_message_text(i: int) -> str:
    template = RUSSIAN_SNIPPETS[i % len(RUSSIAN_SNIPPETS)]
    return template.format(url=URLS[i % len(URLS)])


def telegram_export(n_messages: int, n_service: int = 0, shuffle_seed=None) -> bytes:
    start = datetime(2022, 3, 11, 10, 0, tzinfo=timezone.utc)
    entries = []
    for i in range(1, n_messages + 1):
        entries.append(
            {
                "id": i,
                "type": "message",
                "date": (start + timedelta(hours=i)).strftime("%Y-%m-%dT%H:%M:%S"),
                "from": "channel",
                "text": synthetic_message_text(i),
            }
        )
    for i in range(n_service):
        entries.append(
            {
                "id": n_messages + 1 + i,
                "type": "service",
                "date": (start + timedelta(days=2, hours=i)).strftime("%Y-%m-%dT%H:%M:%S"),
                "action": "pin_message",
                "text": "",
            }
        )
    if shuffle_seed is not None:
        random.Random(shuffle_seed).shuffle(entries)
    doc = {"name": "fixture", "type": "public_channel", "id": 1, "messages": entries}
    return json.dumps(doc, ensure_ascii=False).encode("utf-8")


@pytest.fixture
def store(tmp_path):
    s = Store(tmp_path / "test.db")
    yield s
    s.close()


@pytest.fixture
def corpus(store):
    return CorpusStore(store)


@pytest.fixture
def loaded_corpus(corpus):
    """130 text messages plus 2 service messages, chronological ids 1..130."""
    corpus.import_export(io.BytesIO(telegram_export(130, n_service=2)), CHANNEL)
    return corpus


VOCABULARY_PAIRS = [
    ("Толстосумы", "Moneybags"),
    ("DDOS-атаки", "DDoS-attacks"),
    ("айтишник", "person who works in IT"),
    ("Недо-хакеры", "wannabe hackers"),
    ("А нас за шо?", "Why us?"),
    ("Ахи-вздохи", "sighs and moans"),
    ("атака", "attack"),
    ("взлом", "breach"),
    ("слив", "leak"),
    ("ботнет", "botnet"),
    ("фишинг", "phishing"),
    ("даркнет", "darknet"),
    ("серверá", "servers"),
    ("уязвимость", "vulnerability"),
    ("шифровальщик", "ransomware"),
    ("прокси", "proxy"),
    ("зеркало", "mirror site"),
    ("отказ в обслуживании", "denial of service"),
    ("злоумышленник", "threat actor"),
    ("кибервойска", "cyber troops"),
    ("цель", "target"),
    ("заглушка", "stub page"),
    ("логи", "logs"),
    ("учётка", "account"),
    ("движок", "engine"),
]


def english_translation(i: int) -> str:
    texts = [
        "Our DDoS-attack took down {url} ⚡",
        "Today we attacked {url} 🔥 details later",
        "Wannabe hackers are complaining again: {url}",
        "A pun: today did not go well for Segodnya.",
        "Moneybags from the bank are under attack 💥 {url}",
        "A person who works in IT reports: {url} services are down",
        "Why us? The answer is here: {url}",
        "Sighs and moans in the comments 🙂",
    ]
    return texts[i % len(texts)].format(url=URLS[i % len(URLS)])


@pytest.fixture
def paper_shaped_truth(loaded_corpus):
    """100 message ground truths + 25 vocabulary entries, one translator."""
    messages = loaded_corpus.select_chronological(CHANNEL, 130)
    split = loaded_corpus.split_corpus(messages, test_n=30)
    for i, msg in enumerate(m for m in messages if split.assignments[m.key] == "train_val"):
        loaded_corpus.add_ground_truth(
            GroundTruthEntry(
                key=msg.key,
                kind="message",
                source_text="",
                target_text=english_translation(i),
                translator_id="expert",
            )
        )
    for source, target in VOCABULARY_PAIRS:
        loaded_corpus.add_ground_truth(
            GroundTruthEntry(
                key=source,
                kind="vocabulary",
                source_text=source,
                target_text=target,
                translator_id="expert",
            )
        )
    return loaded_corpus
