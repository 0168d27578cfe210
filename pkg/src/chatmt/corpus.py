"""Chat-export ingestion, chronological selection, splitting, ground truth.

Accepts the Telegram Desktop channel-export document (an object with a
"messages" array) or a one-message-per-line JSONL fallback. Message text is
stored byte-exact apart from outer-whitespace trimming, which is recorded
on the row as a flag.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .errors import (
    ConflictError,
    InvalidInputError,
    InvalidSplitError,
    NotFoundError,
    ParseError,
    ShortfallError,
)
from .store import Store, dump_json, load_json


@dataclass(frozen=True)
class ChatMessage:
    channel_id: str
    message_id: int
    timestamp: datetime
    text: str
    has_media: bool = False
    trimmed: bool = False
    source_meta: dict[str, str] = field(default_factory=dict)

    @property
    def key(self) -> str:
        return message_key(self.channel_id, self.message_id)


@dataclass(frozen=True)
class GroundTruthEntry:
    key: str
    kind: str  # "message" | "vocabulary"
    source_text: str
    target_text: str
    translator_id: str
    channel_id: str | None = None
    message_id: int | None = None


@dataclass
class DatasetSplit:
    name: str
    assignments: dict[str, str]  # key -> "train_val" | "test"
    policy: str = "chronological"
    created_with_seed: int | None = None

    def keys(self, bucket: str) -> list[str]:
        return [k for k, b in self.assignments.items() if b == bucket]


@dataclass
class ImportReport:
    imported: int = 0
    skipped: int = 0
    errors: list[str] = field(default_factory=list)


def message_key(channel_id: str, message_id: int) -> str:
    return f"{channel_id}:{message_id}"


def parse_message_key(key: str) -> tuple[str, int]:
    channel_id, _, message_id = key.rpartition(":")
    return channel_id, int(message_id)


def _flatten_text(text) -> str:
    """Telegram exports encode rich text as a list of strings and entity dicts."""
    if isinstance(text, str):
        return text
    if isinstance(text, list):
        parts = []
        for part in text:
            if isinstance(part, str):
                parts.append(part)
            elif isinstance(part, dict):
                parts.append(str(part.get("text", "")))
        return "".join(parts)
    return ""


def _parse_timestamp(raw: str) -> datetime:
    ts = datetime.fromisoformat(raw)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


_MEDIA_KEYS = ("photo", "file", "media_type", "thumbnail", "contact_information")


def _raw_to_message(raw: dict, channel_id: str) -> ChatMessage | None:
    """Convert one raw export entry; None for service/empty-text entries."""
    if raw.get("type", "message") != "message":
        return None
    full_text = _flatten_text(raw.get("text", ""))
    text = full_text.strip()
    if not text:
        return None
    meta = {
        k: (v if isinstance(v, str) else json.dumps(v, ensure_ascii=False))
        for k, v in raw.items()
        if k not in ("text", "text_entities")
    }
    date = raw.get("date")
    if date is None and "date_unixtime" in raw:
        ts = datetime.fromtimestamp(int(raw["date_unixtime"]), tz=timezone.utc)
    elif date is not None:
        ts = _parse_timestamp(str(date))
    else:
        raise ParseError(f"message {raw.get('id')} has no date field")
    return ChatMessage(
        channel_id=channel_id,
        message_id=int(raw["id"]),
        timestamp=ts,
        text=text,
        has_media=any(k in raw for k in _MEDIA_KEYS),
        trimmed=text != full_text,
        source_meta=meta,
    )


def _parse_export_bytes(data: bytes, channel_id: str) -> list[dict]:
    """Yield raw message dicts from either supported format."""
    stripped = data.lstrip()
    if not stripped:
        raise ParseError("empty export document", offset=0)
    if stripped[:1] == b"{":
        try:
            doc = json.loads(data.decode("utf-8"))
        except json.JSONDecodeError as exc:
            # A stream of one-object-per-line records also starts with "{".
            first_line = data.splitlines()[0]
            try:
                json.loads(first_line.decode("utf-8"))
            except json.JSONDecodeError:
                raise ParseError(
                    f"malformed export document: {exc.msg}", offset=exc.pos
                ) from exc
        else:
            if not isinstance(doc.get("messages"), list):
                raise ParseError('export document has no "messages" array', offset=0)
            return doc["messages"]
    # JSONL fallback: {channel_id, message_id, date, text}
    raws = []
    offset = 0
    for line in data.splitlines(keepends=True):
        text_line = line.strip()
        if text_line:
            try:
                obj = json.loads(text_line.decode("utf-8"))
            except json.JSONDecodeError as exc:
                raise ParseError(
                    f"malformed JSONL line: {exc.msg}", offset=offset + exc.pos
                ) from exc
            raws.append(
                {
                    "id": obj["message_id"],
                    "type": "message",
                    "date": obj["date"],
                    "text": obj.get("text", ""),
                }
            )
        offset += len(line)
    return raws


class CorpusStore:
    """Message, ground-truth, and split persistence over the shared store."""

    def __init__(self, store: Store):
        self.store = store

    # -- import ------------------------------------------------------------

    def import_export(self, stream, channel_id: str) -> ImportReport:
        data = stream.read() if hasattr(stream, "read") else bytes(stream)
        if isinstance(data, str):
            data = data.encode("utf-8")
        raws = _parse_export_bytes(data, channel_id)
        report = ImportReport()
        with self.store.channel_lock(channel_id):
            for raw in raws:
                msg = _raw_to_message(raw, channel_id)
                if msg is None:
                    report.skipped += 1
                    continue
                existing = self.store.query_one(
                    "SELECT text FROM messages WHERE channel_id=? AND message_id=?",
                    (channel_id, msg.message_id),
                )
                if existing is not None:
                    if existing["text"] == msg.text:
                        report.skipped += 1
                    else:
                        report.errors.append(
                            f"conflict: message {msg.key} already stored with different text"
                        )
                    continue
                self.store.execute(
                    "INSERT INTO messages (channel_id, message_id, timestamp, text,"
                    " has_media, trimmed, source_meta) VALUES (?,?,?,?,?,?,?)",
                    (
                        channel_id,
                        msg.message_id,
                        msg.timestamp.isoformat(),
                        msg.text,
                        int(msg.has_media),
                        int(msg.trimmed),
                        dump_json(msg.source_meta),
                    ),
                )
                report.imported += 1
        return report

    # -- reads -------------------------------------------------------------

    def _row_to_message(self, row) -> ChatMessage:
        return ChatMessage(
            channel_id=row["channel_id"],
            message_id=row["message_id"],
            timestamp=_parse_timestamp(row["timestamp"]),
            text=row["text"],
            has_media=bool(row["has_media"]),
            trimmed=bool(row["trimmed"]),
            source_meta=load_json(row["source_meta"]),
        )

    def get_message(self, channel_id: str, message_id: int) -> ChatMessage:
        row = self.store.query_one(
            "SELECT * FROM messages WHERE channel_id=? AND message_id=?",
            (channel_id, message_id),
        )
        if row is None:
            raise NotFoundError(f"message {message_key(channel_id, message_id)} not found")
        return self._row_to_message(row)

    def get_message_by_key(self, key: str) -> ChatMessage:
        channel_id, message_id = parse_message_key(key)
        return self.get_message(channel_id, message_id)

    def count_messages(self, channel_id: str) -> int:
        row = self.store.query_one(
            "SELECT COUNT(*) AS n FROM messages WHERE channel_id=?", (channel_id,)
        )
        return row["n"]

    def select_chronological(self, channel_id: str, n: int) -> list[ChatMessage]:
        if n < 0:
            raise InvalidInputError("n must be non-negative")
        available = self.count_messages(channel_id)
        if available < n:
            raise ShortfallError(
                f"channel {channel_id} has {available} messages, {n} requested",
                available=available,
            )
        rows = self.store.query(
            "SELECT * FROM messages WHERE channel_id=? ORDER BY message_id ASC LIMIT ?",
            (channel_id, n),
        )
        return [self._row_to_message(r) for r in rows]

    # -- splits ------------------------------------------------------------

    def split_corpus(
        self, messages: list[ChatMessage], test_n: int, name: str = "default"
    ) -> DatasetSplit:
        if test_n >= len(messages) or test_n < 0:
            raise InvalidSplitError(
                f"test_n={test_n} invalid for {len(messages)} messages"
            )
        ordered = sorted(messages, key=lambda m: m.message_id)
        assignments = {}
        cutoff = len(ordered) - test_n
        for i, msg in enumerate(ordered):
            assignments[msg.key] = "train_val" if i < cutoff else "test"
        split = DatasetSplit(name=name, assignments=assignments)
        self.save_split(split)
        return split

    def save_split(self, split: DatasetSplit) -> None:
        self.store.execute("DELETE FROM splits WHERE name=?", (split.name,))
        for key, bucket in split.assignments.items():
            self.store.execute(
                "INSERT INTO splits (name, key, bucket, policy, seed) VALUES (?,?,?,?,?)",
                (split.name, key, bucket, split.policy, split.created_with_seed),
            )

    def load_split(self, name: str = "default") -> DatasetSplit:
        rows = self.store.query("SELECT * FROM splits WHERE name=?", (name,))
        if not rows:
            raise NotFoundError(f"split {name!r} not found")
        return DatasetSplit(
            name=name,
            assignments={r["key"]: r["bucket"] for r in rows},
            policy=rows[0]["policy"],
            created_with_seed=rows[0]["seed"],
        )

    # -- ground truth ------------------------------------------------------

    def add_ground_truth(self, entry: GroundTruthEntry) -> str:
        if not entry.target_text:
            raise InvalidInputError("ground truth target_text must be nonempty")
        if entry.kind not in ("message", "vocabulary"):
            raise InvalidInputError(f"unknown ground truth kind {entry.kind!r}")
        source_text = entry.source_text
        channel_id, message_id = entry.channel_id, entry.message_id
        if entry.kind == "message":
            channel_id, message_id = parse_message_key(entry.key)
            msg = self.get_message(channel_id, message_id)
            if entry.source_text and entry.source_text != msg.text:
                raise ConflictError(
                    f"source_text for {entry.key} does not match the stored message"
                )
            source_text = msg.text
        else:
            if not source_text:
                raise InvalidInputError("vocabulary entries need a literal source_text")
            channel_id, message_id = None, None
        existing = self.store.query_one(
            "SELECT target_text FROM ground_truth WHERE key=? AND translator_id=?",
            (entry.key, entry.translator_id),
        )
        if existing is not None:
            raise ConflictError(
                f"ground truth for {entry.key!r} by {entry.translator_id!r} already exists"
            )
        self.store.execute(
            "INSERT INTO ground_truth (key, kind, channel_id, message_id, source_text,"
            " target_text, translator_id) VALUES (?,?,?,?,?,?,?)",
            (
                entry.key,
                entry.kind,
                channel_id,
                message_id,
                source_text,
                entry.target_text,
                entry.translator_id,
            ),
        )
        return entry.key

    def get_ground_truth(self, key: str, translator_id: str) -> GroundTruthEntry:
        row = self.store.query_one(
            "SELECT * FROM ground_truth WHERE key=? AND translator_id=?",
            (key, translator_id),
        )
        if row is None:
            raise NotFoundError(f"no ground truth for {key!r} by {translator_id!r}")
        return GroundTruthEntry(
            key=row["key"],
            kind=row["kind"],
            source_text=row["source_text"],
            target_text=row["target_text"],
            translator_id=row["translator_id"],
            channel_id=row["channel_id"],
            message_id=row["message_id"],
        )

    def list_ground_truth(self, translator_id: str | None = None) -> list[GroundTruthEntry]:
        if translator_id is None:
            rows = self.store.query("SELECT * FROM ground_truth ORDER BY rowid")
        else:
            rows = self.store.query(
                "SELECT * FROM ground_truth WHERE translator_id=? ORDER BY rowid",
                (translator_id,),
            )
        return [
            GroundTruthEntry(
                key=r["key"],
                kind=r["kind"],
                source_text=r["source_text"],
                target_text=r["target_text"],
                translator_id=r["translator_id"],
                channel_id=r["channel_id"],
                message_id=r["message_id"],
            )
            for r in rows
        ]
