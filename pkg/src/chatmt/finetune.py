"""Three-role fine-tuning dataset construction, splitting, JSONL I/O.

The JSONL contract: one object per line, key order system/user/assistant,
UTF-8, "\\n" separators, no trailing blank line. Vocabulary records are
pinned to the training side of any split; validation holds messages only.
"""

from __future__ import annotations

import hashlib
import io
import json
import math
import random
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .corpus import GroundTruthEntry
from .errors import EmptyDatasetError, InvalidInputError, InvalidSplitError
from .orchestrator import PromptTemplate
from .store import Store

ORIGIN_MESSAGE = "message"
ORIGIN_VOCABULARY = "vocabulary"


@dataclass(frozen=True)
class FineTuneRecord:
    system_text: str
    user_text: str
    assistant_text: str
    origin: str = ORIGIN_MESSAGE

    def __post_init__(self):
        if not (self.system_text and self.user_text and self.assistant_text):
            raise InvalidInputError("fine-tune record texts must all be nonempty")


@dataclass
class FineTuneSplit:
    train: list[FineTuneRecord]
    validation: list[FineTuneRecord]
    seed: int


@dataclass
class ValidationReport:
    lines: int = 0
    role_errors: list[int] = field(default_factory=list)
    empty_content: list[int] = field(default_factory=list)
    duplicate_user_texts: list[int] = field(default_factory=list)
    inconsistent_system_prompts: list[int] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not (
            self.role_errors
            or self.empty_content
            or self.duplicate_user_texts
            or self.inconsistent_system_prompts
        )


def build_finetune_dataset(
    ground_truth: list[GroundTruthEntry], prompt: PromptTemplate
) -> list[FineTuneRecord]:
    if not ground_truth:
        raise EmptyDatasetError("refusing to build a fine-tune dataset with zero examples")
    records = []
    for entry in ground_truth:
        if not entry.source_text or not entry.target_text:
            raise InvalidInputError(f"ground truth {entry.key!r} has an empty text")
        records.append(
            FineTuneRecord(
                system_text=prompt.text,
                user_text=entry.source_text,
                assistant_text=entry.target_text,
                origin=ORIGIN_VOCABULARY if entry.kind == "vocabulary" else ORIGIN_MESSAGE,
            )
        )
    return records


def split_finetune(
    records: list[FineTuneRecord], train_fraction: float, seed: int
) -> FineTuneSplit:
    if not 0 < train_fraction < 1:
        raise InvalidInputError("train_fraction must be strictly between 0 and 1")
    n = len(records)
    # Fractional boundary rounds toward train, so 125 @ 0.8 is exactly 100/25.
    n_train = math.ceil(n * train_fraction - 1e-9)
    n_validation = n - n_train
    vocabulary = [r for r in records if r.origin == ORIGIN_VOCABULARY]
    messages = [r for r in records if r.origin == ORIGIN_MESSAGE]
    if len(vocabulary) > n_train:
        raise InvalidSplitError(
            f"{len(vocabulary)} vocabulary records exceed train capacity {n_train}"
        )
    if len(messages) < n_validation:
        raise InvalidSplitError(
            f"only {len(messages)} message records for a validation set of {n_validation}"
        )
    shuffled = list(messages)
    random.Random(seed).shuffle(shuffled)
    validation = shuffled[:n_validation]
    train = vocabulary + shuffled[n_validation:]
    return FineTuneSplit(train=train, validation=validation, seed=seed)


def _record_to_line(record: FineTuneRecord) -> str:
    obj = {
        "messages": [
            {"role": "system", "content": record.system_text},
            {"role": "user", "content": record.user_text},
            {"role": "assistant", "content": record.assistant_text},
        ]
    }
    return json.dumps(obj, ensure_ascii=False)


def serialize_jsonl(records, out) -> int:
    """Write records (a list or a FineTuneSplit's train side) to a byte sink."""
    if isinstance(records, FineTuneSplit):
        records = records.train + records.validation
    written = 0
    try:
        for record in records:
            payload = (_record_to_line(record) + "\n").encode("utf-8")
            out.write(payload)
            written += len(payload)
    except OSError as exc:
        raise IOError(f"write failed after {written} bytes: {exc}") from exc
    return written


def parse_jsonl(stream) -> list[FineTuneRecord]:
    """Inverse of serialize_jsonl; raises on structural violations."""
    data = stream.read() if hasattr(stream, "read") else bytes(stream)
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    records = []
    for line in data.split("\n"):
        if not line.strip():
            continue
        obj = json.loads(line)
        roles = {m["role"]: m["content"] for m in obj["messages"]}
        records.append(
            FineTuneRecord(
                system_text=roles["system"],
                user_text=roles["user"],
                assistant_text=roles["assistant"],
            )
        )
    return records


def validate_jsonl(stream) -> ValidationReport:
    data = stream.read() if hasattr(stream, "read") else bytes(stream)
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    report = ValidationReport()
    seen_user: dict[str, tuple[int, str]] = {}
    system_text: str | None = None
    for i, line in enumerate(data.split("\n"), start=1):
        if not line.strip():
            continue
        report.lines += 1
        try:
            obj = json.loads(line)
            messages = obj["messages"]
            roles = [m["role"] for m in messages]
        except (json.JSONDecodeError, KeyError, TypeError):
            report.role_errors.append(i)
            continue
        if roles != ["system", "user", "assistant"]:
            report.role_errors.append(i)
            continue
        contents = [m.get("content", "") for m in messages]
        if any(not isinstance(c, str) or not c for c in contents):
            report.empty_content.append(i)
            continue
        system, user, assistant = contents
        if system_text is None:
            system_text = system
        elif system != system_text:
            report.inconsistent_system_prompts.append(i)
        if user in seen_user:
            _, prior_assistant = seen_user[user]
            if prior_assistant != assistant:
                report.duplicate_user_texts.append(i)
        else:
            seen_user[user] = (i, assistant)
    return report


def file_digest(records) -> str:
    """Stable digest of the serialized dataset, for job metadata."""
    buffer = io.BytesIO()
    serialize_jsonl(records, buffer)
    return hashlib.sha256(buffer.getvalue()).hexdigest()


def record_job(
    store: Store,
    file_digest: str,
    base_model: str | None = None,
    vendor_job_id: str | None = None,
    result_model: str | None = None,
    params: dict | None = None,
) -> int:
    """Persist fine-tune job metadata; the toolkit never calls vendor APIs."""
    cur = store.execute(
        "INSERT INTO finetune_jobs (base_model, file_digest, vendor_job_id,"
        " result_model, params, recorded_at) VALUES (?,?,?,?,?,?)",
        (
            base_model,
            file_digest,
            vendor_job_id,
            result_model,
            json.dumps(params or {}, ensure_ascii=False, sort_keys=True),
            datetime.now(timezone.utc).isoformat(),
        ),
    )
    return cur.lastrowid
