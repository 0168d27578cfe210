"""SQLite-backed store shared by the corpus, orchestrator, and survey layers.

One embedded database file holds every persisted table: messages,
ground_truth, splits, translations, best_picks, finetune_jobs, and the
survey tables. A single writer is assumed; readers may be concurrent.
"""

from __future__ import annotations

import json
import sqlite3
import threading
from pathlib import Path

_SCHEMA = """
CREATE TABLE IF NOT EXISTS messages (
    channel_id   TEXT NOT NULL,
    message_id   INTEGER NOT NULL,
    timestamp    TEXT NOT NULL,
    text         TEXT NOT NULL,
    has_media    INTEGER NOT NULL DEFAULT 0,
    trimmed      INTEGER NOT NULL DEFAULT 0,
    source_meta  TEXT NOT NULL DEFAULT '{}',
    PRIMARY KEY (channel_id, message_id)
);

CREATE TABLE IF NOT EXISTS ground_truth (
    key           TEXT NOT NULL,
    kind          TEXT NOT NULL CHECK (kind IN ('message', 'vocabulary')),
    channel_id    TEXT,
    message_id    INTEGER,
    source_text   TEXT NOT NULL,
    target_text   TEXT NOT NULL,
    translator_id TEXT NOT NULL,
    PRIMARY KEY (key, translator_id)
);

CREATE TABLE IF NOT EXISTS splits (
    name    TEXT NOT NULL,
    key     TEXT NOT NULL,
    bucket  TEXT NOT NULL CHECK (bucket IN ('train_val', 'test')),
    policy  TEXT NOT NULL,
    seed    INTEGER,
    PRIMARY KEY (name, key)
);

CREATE TABLE IF NOT EXISTS translations (
    record_id     INTEGER PRIMARY KEY AUTOINCREMENT,
    message_key   TEXT NOT NULL,
    backend_id    TEXT NOT NULL,
    prompt_id     TEXT NOT NULL,
    content_hash  TEXT NOT NULL,
    output_text   TEXT,
    status        TEXT NOT NULL,
    input_tokens  INTEGER,
    output_tokens INTEGER,
    latency_ms    REAL NOT NULL DEFAULT 0,
    attempt_count INTEGER NOT NULL DEFAULT 1,
    created_at    TEXT NOT NULL
);

CREATE TABLE IF NOT EXISTS best_picks (
    message_key TEXT NOT NULL,
    rater_id    TEXT NOT NULL,
    record_id   INTEGER NOT NULL REFERENCES translations(record_id),
    PRIMARY KEY (message_key, rater_id)
);

CREATE TABLE IF NOT EXISTS finetune_jobs (
    job_id        INTEGER PRIMARY KEY AUTOINCREMENT,
    base_model    TEXT,
    file_digest   TEXT NOT NULL,
    vendor_job_id TEXT,
    result_model  TEXT,
    params        TEXT NOT NULL DEFAULT '{}',
    recorded_at   TEXT NOT NULL
);

CREATE TABLE IF NOT EXISTS survey_questions (
    question_id   TEXT PRIMARY KEY,
    survey_id     TEXT NOT NULL,
    order_index   INTEGER NOT NULL,
    source_text   TEXT NOT NULL,
    option_a_text TEXT NOT NULL,
    option_b_text TEXT NOT NULL,
    model_at_a    TEXT NOT NULL,
    model_at_b    TEXT NOT NULL,
    indistinguishable INTEGER NOT NULL DEFAULT 0
);

CREATE TABLE IF NOT EXISTS respondents (
    respondent_id TEXT PRIMARY KEY,
    english_level TEXT NOT NULL,
    cyber_level   TEXT NOT NULL,
    consented     INTEGER NOT NULL,
    created_at    TEXT NOT NULL
);

CREATE TABLE IF NOT EXISTS votes (
    respondent_id   TEXT NOT NULL,
    question_id     TEXT NOT NULL,
    chosen_position TEXT NOT NULL CHECK (chosen_position IN ('a', 'b')),
    captured_at     TEXT NOT NULL,
    PRIMARY KEY (respondent_id, question_id)
);
"""


class Store:
    """Thin wrapper around one SQLite file with per-channel import locks."""

    def __init__(self, path: str | Path = ":memory:"):
        self.path = str(path)
        self._conn = sqlite3.connect(self.path, check_same_thread=False)
        self._conn.row_factory = sqlite3.Row
        self._conn.execute("PRAGMA foreign_keys = ON")
        self._conn.executescript(_SCHEMA)
        self._write_lock = threading.Lock()
        self._channel_locks: dict[str, threading.Lock] = {}
        self._channel_locks_guard = threading.Lock()

    def close(self) -> None:
        self._conn.close()

    def channel_lock(self, channel_id: str) -> threading.Lock:
        """Advisory lock serialising imports into one channel."""
        with self._channel_locks_guard:
            return self._channel_locks.setdefault(channel_id, threading.Lock())

    def execute(self, sql: str, params: tuple = ()) -> sqlite3.Cursor:
        with self._write_lock:
            cur = self._conn.execute(sql, params)
            self._conn.commit()
            return cur

    def query(self, sql: str, params: tuple = ()) -> list[sqlite3.Row]:
        return self._conn.execute(sql, params).fetchall()

    def query_one(self, sql: str, params: tuple = ()) -> sqlite3.Row | None:
        return self._conn.execute(sql, params).fetchone()


def dump_json(mapping: dict) -> str:
    return json.dumps(mapping, ensure_ascii=False, sort_keys=True)


def load_json(text: str) -> dict:
    return json.loads(text) if text else {}
