"""Translation orchestration: backends, prompts, retries, rate limits, picks.

Two backend kinds cover everything: a generic chat-completion HTTP adapter
(request shape and response JSON path configurable, so any vendor or a
locally hosted server works) and an offline mock dictionary for tests and
deterministic pipelines. Every attempt is persisted append-only, including
refusals and failures.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import httpx

from .corpus import CorpusStore
from .errors import AuthError, ConflictError, InvalidInputError, InvalidPickError, NotFoundError
from .store import Store

STATUS_OK = "ok"
STATUS_REFUSED = "refused"
STATUS_TRANSPORT_ERROR = "transport_error"
STATUS_RATE_LIMITED = "rate_limited"
STATUS_INVALID_RESPONSE = "invalid_response"


@dataclass(frozen=True)
class RetryPolicy:
    max_attempts: int = 3
    backoff_base_ms: float = 250.0


@dataclass(frozen=True)
class BackendConfig:
    backend_id: str
    kind: str  # "chat_completion_http" | "mock_dictionary"
    model_name: str = ""
    endpoint: str = ""
    auth_env_var: str = ""
    temperature: float = 0.0
    max_output_tokens: int | None = None
    extra: dict[str, str] = field(default_factory=dict)
    rate_limit_per_minute: float | None = None
    retry: RetryPolicy = field(default_factory=RetryPolicy)
    dictionary_path: str | None = None

    def __post_init__(self):
        if self.kind not in ("chat_completion_http", "mock_dictionary"):
            raise InvalidInputError(f"unknown backend kind {self.kind!r}")
        if self.kind == "chat_completion_http" and not self.endpoint.startswith(
            ("http://", "https://")
        ):
            raise InvalidInputError(
                f"backend {self.backend_id!r} needs an absolute http(s) endpoint"
            )


@dataclass(frozen=True)
class PromptTemplate:
    prompt_id: str
    text: str

    @property
    def content_hash(self) -> str:
        return hashlib.sha256(self.text.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class TranslationRecord:
    record_id: int
    message_key: str
    backend_id: str
    prompt_id: str
    content_hash: str
    output_text: str | None
    status: str
    input_tokens: int | None
    output_tokens: int | None
    latency_ms: float
    attempt_count: int
    created_at: datetime


@dataclass(frozen=True)
class BestPick:
    message_key: str
    record_id: int
    rater_id: str


@dataclass
class BatchReport:
    per_backend: dict[str, dict[str, int]] = field(default_factory=dict)

    def bump(self, backend_id: str, status: str) -> None:
        counts = self.per_backend.setdefault(
            backend_id, {"ok": 0, "refused": 0, "failed": 0}
        )
        if status == STATUS_OK:
            counts["ok"] += 1
        elif status == STATUS_REFUSED:
            counts["refused"] += 1
        else:
            counts["failed"] += 1

    def total(self) -> int:
        return sum(sum(c.values()) for c in self.per_backend.values())


class RefusalError(Exception):
    """Vendor content-policy rejection; terminal, never retried."""


class TransportError(Exception):
    def __init__(self, message: str, rate_limited: bool = False):
        super().__init__(message)
        self.rate_limited = rate_limited


class InvalidResponseError(Exception):
    """Response parsed but carried no completion text."""


class TokenBucket:
    """Serialises requests so consecutive starts are >= 60/rpm seconds apart."""

    def __init__(self, rate_per_minute: float, clock=time.monotonic, sleep=time.sleep):
        self.interval = 60.0 / rate_per_minute
        self._clock = clock
        self._sleep = sleep
        self._next_free = None
        self._lock = threading.Lock()

    def acquire(self) -> None:
        with self._lock:
            now = self._clock()
            if self._next_free is None or now >= self._next_free:
                self._next_free = now + self.interval
                wait = 0.0
            else:
                wait = self._next_free - now
                self._next_free += self.interval
        if wait > 0:
            self._sleep(wait)


class MockDictionaryBackend:
    """Offline deterministic backend backed by a source->target table."""

    def __init__(self, config: BackendConfig, table: dict[str, str]):
        self.config = config
        self.table = dict(table)

    def complete(self, prompt_text: str, source_text: str):
        target = self.table.get(source_text, source_text)
        usage = (len(source_text.split()), len(target.split()))
        return target, usage


class ChatCompletionBackend:
    """POSTs {model, messages:[{role,content}...]}; response paths configurable.

    Recognised `extra` keys: auth_header (default Authorization), auth_scheme
    (default Bearer, empty string for none), completion_path (default
    choices.0.message.content).
    """

    def __init__(self, config: BackendConfig, transport: httpx.BaseTransport | None = None):
        self.config = config
        self._client = httpx.Client(transport=transport, timeout=60.0)

    def _headers(self) -> dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.config.auth_env_var:
            secret = os.environ.get(self.config.auth_env_var)
            if not secret:
                raise AuthError(
                    f"environment variable {self.config.auth_env_var} is not set"
                )
            scheme = self.config.extra.get("auth_scheme", "Bearer")
            header = self.config.extra.get("auth_header", "Authorization")
            headers[header] = f"{scheme} {secret}".strip()
        return headers

    @staticmethod
    def _walk(payload, path: str):
        node = payload
        for part in path.split("."):
            if isinstance(node, list):
                node = node[int(part)]
            elif isinstance(node, dict):
                node = node[part]
            else:
                raise KeyError(part)
        return node

    @staticmethod
    def _looks_like_refusal(body: dict) -> bool:
        err = body.get("error") or {}
        code = str(err.get("code") or "")
        text = (str(err.get("message") or "") + " " + str(err.get("type") or "")).lower()
        return code in ("content_policy_violation", "content_filter") or (
            "content policy" in text or "hate" in text
        )

    def complete(self, prompt_text: str, source_text: str):
        body = {
            "model": self.config.model_name,
            "messages": [
                {"role": "system", "content": prompt_text},
                {"role": "user", "content": source_text},
            ],
            "temperature": self.config.temperature,
        }
        if self.config.max_output_tokens is not None:
            body["max_tokens"] = self.config.max_output_tokens
        try:
            response = self._client.post(
                self.config.endpoint, json=body, headers=self._headers()
            )
        except httpx.HTTPError as exc:
            raise TransportError(f"request failed: {exc}") from exc

        try:
            payload = response.json()
        except json.JSONDecodeError:
            payload = {}

        if response.status_code == 429:
            raise TransportError("rate limited by server", rate_limited=True)
        if response.status_code >= 400:
            if self._looks_like_refusal(payload):
                raise RefusalError(str(payload.get("error", {}).get("message", "refused")))
            if response.status_code >= 500:
                raise TransportError(f"server error {response.status_code}")
            raise InvalidResponseError(f"client error {response.status_code}")

        try:
            choice = payload["choices"][0]
        except (KeyError, IndexError, TypeError):
            choice = {}
        if choice.get("finish_reason") == "content_filter":
            raise RefusalError("completion stopped by content filter")

        path = self.config.extra.get("completion_path", "choices.0.message.content")
        try:
            text = self._walk(payload, path)
        except (KeyError, IndexError, ValueError):
            raise InvalidResponseError(f"no completion text at {path!r}")
        if not isinstance(text, str) or not text:
            raise InvalidResponseError("empty completion text")

        usage = payload.get("usage") or {}
        tokens = (usage.get("prompt_tokens"), usage.get("completion_tokens"))
        return text, tokens


def _load_dictionary(path: str | Path) -> dict[str, str]:
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        return json.loads(text)
    table = {}
    for line in text.splitlines():
        if line.strip():
            source, _, target = line.partition("\t")
            table[source] = target
    return table


class Orchestrator:
    """Registry of backends and prompts plus the translate operations."""

    def __init__(
        self,
        store: Store,
        clock=time.monotonic,
        sleep=time.sleep,
        rng: random.Random | None = None,
    ):
        self.store = store
        self.corpus = CorpusStore(store)
        self._backends: dict[str, object] = {}
        self._configs: dict[str, BackendConfig] = {}
        self._prompts: dict[str, PromptTemplate] = {}
        self._buckets: dict[str, TokenBucket] = {}
        self._clock = clock
        self._sleep = sleep
        self._rng = rng or random.Random()

    # -- registry ----------------------------------------------------------

    def register_backend(
        self,
        config: BackendConfig,
        dictionary: dict[str, str] | None = None,
        transport: httpx.BaseTransport | None = None,
    ) -> str:
        if config.backend_id in self._backends:
            raise ConflictError(f"backend {config.backend_id!r} already registered")
        if config.kind == "mock_dictionary":
            if dictionary is None:
                if not config.dictionary_path:
                    raise InvalidInputError(
                        f"mock backend {config.backend_id!r} needs a dictionary"
                    )
                dictionary = _load_dictionary(config.dictionary_path)
            backend = MockDictionaryBackend(config, dictionary)
        else:
            backend = ChatCompletionBackend(config, transport=transport)
        self._backends[config.backend_id] = backend
        self._configs[config.backend_id] = config
        if config.rate_limit_per_minute:
            self._buckets[config.backend_id] = TokenBucket(
                config.rate_limit_per_minute, clock=self._clock, sleep=self._sleep
            )
        return config.backend_id

    def list_backends(self) -> list[BackendConfig]:
        return list(self._configs.values())

    def register_prompt(self, prompt: PromptTemplate) -> str:
        existing = self._prompts.get(prompt.prompt_id)
        if existing is not None and existing.text != prompt.text:
            raise ConflictError(
                f"prompt {prompt.prompt_id!r} already registered with different text"
            )
        self._prompts[prompt.prompt_id] = prompt
        return prompt.prompt_id

    def get_prompt(self, prompt_id: str) -> PromptTemplate:
        if prompt_id not in self._prompts:
            raise NotFoundError(f"prompt {prompt_id!r} not registered")
        return self._prompts[prompt_id]

    # -- translate ---------------------------------------------------------

    def translate(self, message_key: str, backend_id: str, prompt_id: str) -> TranslationRecord:
        if backend_id not in self._backends:
            raise NotFoundError(f"backend {backend_id!r} not registered")
        backend = self._backends[backend_id]
        config = self._configs[backend_id]
        prompt = self.get_prompt(prompt_id)
        message = self.corpus.get_message_by_key(message_key)

        bucket = self._buckets.get(backend_id)
        status = STATUS_TRANSPORT_ERROR
        output_text = None
        usage = (None, None)
        attempts = 0
        started = self._clock()
        for attempt in range(1, config.retry.max_attempts + 1):
            attempts = attempt
            if bucket is not None:
                bucket.acquire()
            try:
                output_text, usage = backend.complete(prompt.text, message.text)
                status = STATUS_OK
                break
            except RefusalError:
                status = STATUS_REFUSED
                break
            except InvalidResponseError:
                status = STATUS_INVALID_RESPONSE
                break
            except (TransportError, AuthError) as exc:
                if isinstance(exc, AuthError):
                    raise
                status = (
                    STATUS_RATE_LIMITED if exc.rate_limited else STATUS_TRANSPORT_ERROR
                )
                if attempt < config.retry.max_attempts:
                    cap = config.retry.backoff_base_ms * (2 ** (attempt - 1)) / 1000.0
                    self._sleep(self._rng.uniform(0, cap))
        latency_ms = (self._clock() - started) * 1000.0

        cur = self.store.execute(
            "INSERT INTO translations (message_key, backend_id, prompt_id, content_hash,"
            " output_text, status, input_tokens, output_tokens, latency_ms, attempt_count,"
            " created_at) VALUES (?,?,?,?,?,?,?,?,?,?,?)",
            (
                message_key,
                backend_id,
                prompt_id,
                prompt.content_hash,
                output_text,
                status,
                usage[0],
                usage[1],
                latency_ms,
                attempts,
                datetime.now(timezone.utc).isoformat(),
            ),
        )
        return self.get_record(cur.lastrowid)

    def translate_batch(
        self,
        message_keys: list[str],
        backend_ids: list[str],
        prompt_id: str,
        max_in_flight: int = 4,
    ) -> BatchReport:
        if max_in_flight < 1:
            raise InvalidInputError("max_in_flight must be >= 1")
        report = BatchReport()
        for backend_id in backend_ids:
            report.per_backend[backend_id] = {"ok": 0, "refused": 0, "failed": 0}
        pairs = [(k, b) for b in backend_ids for k in message_keys]
        if not pairs:
            return report
        lock = threading.Lock()

        def run(pair):
            key, backend_id = pair
            record = self.translate(key, backend_id, prompt_id)
            with lock:
                report.bump(backend_id, record.status)

        with ThreadPoolExecutor(max_workers=max_in_flight) as pool:
            list(pool.map(run, pairs))
        return report

    # -- records and picks -------------------------------------------------

    def _row_to_record(self, row) -> TranslationRecord:
        return TranslationRecord(
            record_id=row["record_id"],
            message_key=row["message_key"],
            backend_id=row["backend_id"],
            prompt_id=row["prompt_id"],
            content_hash=row["content_hash"],
            output_text=row["output_text"],
            status=row["status"],
            input_tokens=row["input_tokens"],
            output_tokens=row["output_tokens"],
            latency_ms=row["latency_ms"],
            attempt_count=row["attempt_count"],
            created_at=datetime.fromisoformat(row["created_at"]),
        )

    def get_record(self, record_id: int) -> TranslationRecord:
        row = self.store.query_one(
            "SELECT * FROM translations WHERE record_id=?", (record_id,)
        )
        if row is None:
            raise NotFoundError(f"translation record {record_id} not found")
        return self._row_to_record(row)

    def list_records(
        self, message_key: str | None = None, backend_id: str | None = None
    ) -> list[TranslationRecord]:
        sql = "SELECT * FROM translations"
        clauses, params = [], []
        if message_key is not None:
            clauses.append("message_key=?")
            params.append(message_key)
        if backend_id is not None:
            clauses.append("backend_id=?")
            params.append(backend_id)
        if clauses:
            sql += " WHERE " + " AND ".join(clauses)
        sql += " ORDER BY record_id"
        return [self._row_to_record(r) for r in self.store.query(sql, tuple(params))]

    def record_best_pick(self, message_key: str, record_id: int, rater_id: str) -> BestPick:
        record = self.get_record(record_id)
        if record.status != STATUS_OK:
            raise InvalidPickError(
                f"record {record_id} has status {record.status!r}, cannot be picked"
            )
        if record.message_key != message_key:
            raise InvalidPickError(
                f"record {record_id} belongs to {record.message_key!r}, not {message_key!r}"
            )
        self.store.execute(
            "INSERT INTO best_picks (message_key, rater_id, record_id) VALUES (?,?,?)"
            " ON CONFLICT(message_key, rater_id) DO UPDATE SET record_id=excluded.record_id",
            (message_key, rater_id, record_id),
        )
        return BestPick(message_key=message_key, record_id=record_id, rater_id=rater_id)

    def get_best_pick(self, message_key: str, rater_id: str) -> BestPick:
        row = self.store.query_one(
            "SELECT * FROM best_picks WHERE message_key=? AND rater_id=?",
            (message_key, rater_id),
        )
        if row is None:
            raise NotFoundError(f"no pick for {message_key!r} by {rater_id!r}")
        return BestPick(
            message_key=row["message_key"],
            record_id=row["record_id"],
            rater_id=row["rater_id"],
        )

    def pick_histogram(self, rater_id: str) -> dict[str, int]:
        rows = self.store.query(
            "SELECT t.backend_id AS backend_id, COUNT(*) AS n FROM best_picks p"
            " JOIN translations t ON t.record_id = p.record_id"
            " WHERE p.rater_id=? GROUP BY t.backend_id",
            (rater_id,),
        )
        return {r["backend_id"]: r["n"] for r in rows}
