"""Completion providers: an HTTP transport and an offline scripted mock."""

from __future__ import annotations

import hashlib
import json
import os
import threading
import urllib.error
import urllib.request
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol


class TransportError(RuntimeError):
    """One request failed; the trial it belonged to counts as failed."""


class ProviderUnavailable(RuntimeError):
    """The provider produced no completion at all; the record is aborted."""


class CompletionProvider(Protocol):
    def complete(self, prompt: str) -> str: ...


def prompt_key(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


@dataclass
class HttpProvider:
    """POST the prompt as text/plain and read the completion from the body."""

    url: str
    token: str | None = None
    timeout: float = 60.0

    @classmethod
    def from_env(cls, timeout: float = 60.0) -> "HttpProvider":
        url = os.environ.get("PROTO_PROVIDER_URL")
        if not url:
            raise ProviderUnavailable("PROTO_PROVIDER_URL is not set")
        return cls(url, os.environ.get("PROTO_PROVIDER_TOKEN"), timeout)

    def complete(self, prompt: str) -> str:
        headers = {"Content-Type": "text/plain; charset=utf-8"}
        if self.token:
            headers["Authorization"] = f"Bearer {self.token}"
        req = urllib.request.Request(self.url, data=prompt.encode("utf-8"), headers=headers, method="POST")
        try:
            with urllib.request.urlopen(req, timeout=self.timeout) as resp:
                return resp.read().decode("utf-8")
        except (urllib.error.URLError, OSError, UnicodeDecodeError) as e:
            raise TransportError(str(e)) from e


class ScriptedProvider:
    """Replays completions from ``<dir>/<sha256(prompt)>.json``.

    Each file holds a JSON list of completion strings; successive requests for
    the same prompt walk the list and wrap around.  ``default.json`` is used
    for prompts without their own file.  A ``null`` entry simulates a
    transport failure for that request.
    """

    def __init__(self, directory):
        self.directory = Path(directory)
        if not self.directory.is_dir():
            raise ProviderUnavailable(f"mock directory {self.directory} does not exist")
        self._counters: dict[str, int] = {}
        self._lock = threading.Lock()

    def _script(self, key: str) -> list:
        for name in (f"{key}.json", "default.json"):
            path = self.directory / name
            if path.is_file():
                items = json.loads(path.read_text(encoding="utf-8"))
                if not isinstance(items, list) or not items:
                    raise ProviderUnavailable(f"{path} must hold a non-empty JSON list")
                return items
        raise TransportError(f"no scripted completion for prompt {key[:12]}")

    def complete(self, prompt: str) -> str:
        key = prompt_key(prompt)
        script = self._script(key)
        with self._lock:
            i = self._counters.get(key, 0)
            self._counters[key] = i + 1
        item = script[i % len(script)]
        if item is None:
            raise TransportError("scripted transport failure")
        return item


def write_script(directory, prompt: str, completions: list) -> Path:
    """Store a ScriptedProvider response list for ``prompt``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{prompt_key(prompt)}.json"
    path.write_text(json.dumps(completions, ensure_ascii=False, indent=0) + "\n", encoding="utf-8")
    return path


class CallableProvider:
    """Adapter for a plain function ``prompt -> completion``."""

    def __init__(self, fn):
        self.fn = fn

    def complete(self, prompt: str) -> str:
        return self.fn(prompt)
