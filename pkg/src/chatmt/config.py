"""Versioned config file: backend and prompt definitions.

Schema (version 1):

    {
      "version": 1,
      "prompts":  [{"prompt_id": str, "text": str}, ...],
      "backends": [{"backend_id": str, "kind": str, "model_name": str,
                    "endpoint": str, "auth_env_var": str,
                    "temperature": float, "max_output_tokens": int,
                    "extra": {str: str}, "rate_limit_per_minute": float,
                    "retry": {"max_attempts": int, "backoff_base_ms": float},
                    "dictionary_path": str}, ...]
    }

Secrets are referenced by environment-variable name only and never appear
in the file or the store.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .errors import InvalidInputError
from .orchestrator import BackendConfig, PromptTemplate, RetryPolicy


def _backend_from_dict(raw: dict) -> BackendConfig:
    retry = raw.get("retry", {})
    return BackendConfig(
        backend_id=raw["backend_id"],
        kind=raw["kind"],
        model_name=raw.get("model_name", ""),
        endpoint=raw.get("endpoint", ""),
        auth_env_var=raw.get("auth_env_var", ""),
        temperature=float(raw.get("temperature", 0.0)),
        max_output_tokens=raw.get("max_output_tokens"),
        extra=dict(raw.get("extra", {})),
        rate_limit_per_minute=raw.get("rate_limit_per_minute"),
        retry=RetryPolicy(
            max_attempts=int(retry.get("max_attempts", 3)),
            backoff_base_ms=float(retry.get("backoff_base_ms", 250.0)),
        ),
        dictionary_path=raw.get("dictionary_path"),
    )


def parse_config(text: str) -> tuple[list[BackendConfig], list[PromptTemplate]]:
    doc = json.loads(text)
    version = doc.get("version")
    if version != 1:
        raise InvalidInputError(f"unsupported config version {version!r}")
    backends = [_backend_from_dict(b) for b in doc.get("backends", [])]
    prompts = [
        PromptTemplate(prompt_id=p["prompt_id"], text=p["text"])
        for p in doc.get("prompts", [])
    ]
    return backends, prompts


def load_config(path: str | Path) -> tuple[list[BackendConfig], list[PromptTemplate]]:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def default_config() -> tuple[list[BackendConfig], list[PromptTemplate]]:
    text = resources.files("chatmt.configs").joinpath("default_config.json").read_text(
        encoding="utf-8"
    )
    return parse_config(text)


def default_prompt() -> PromptTemplate:
    """The shipped translator-bot system prompt."""
    _, prompts = default_config()
    return prompts[0]
