"""Chat-completion clients: a live HTTP client and a scripted mock."""

from __future__ import annotations

import json
import os
import threading
import time
from dataclasses import asdict, dataclass
from typing import Callable, Optional, Sequence, Union

import httpx

from ..errors import BoxArtError


class ClientError(BoxArtError):
    pass


class Auth(ClientError):
    pass


class Transport(ClientError):
    pass


class RateLimited(ClientError):
    pass


class MalformedResponse(ClientError):
    pass


_EXCERPT = 200


@dataclass(frozen=True)
class ClientConfig:
    base_url: str = "http://localhost:8000/v1"
    model_name: str = "mock"
    temperature: float = 0.0
    request_timeout: float = 60.0
    max_transport_retries: int = 5
    max_parallel_requests: int = 4
    api_key_env_name: str = "BOXART_API_KEY"

    # config file keys -> field names
    _FILE_KEYS = {"base_url": "base_url", "model": "model_name", "temperature": "temperature",
                  "timeout_s": "request_timeout", "max_parallel": "max_parallel_requests",
                  "api_key_env": "api_key_env_name", "max_retries": "max_transport_retries"}

    @classmethod
    def from_json(cls, d: dict) -> "ClientConfig":
        unknown = set(d) - set(cls._FILE_KEYS)
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**{cls._FILE_KEYS[k]: v for k, v in d.items()})

    @classmethod
    def load(cls, path) -> "ClientConfig":
        with open(path, encoding="utf-8") as f:
            return cls.from_json(json.load(f))

    def to_json(self) -> dict:
        fields = asdict(self)
        return {k: fields[v] for k, v in self._FILE_KEYS.items()}


class ChatClient:
    """Single-turn completions against a chat-completion compatible endpoint.

    Each call sends one user message and nothing else. Transport failures,
    5xx replies and 429s are retried with exponential backoff.
    """

    def __init__(self, config: ClientConfig, *, transport: Optional[httpx.BaseTransport] = None,
                 sleep: Callable[[float], None] = time.sleep, backoff_base: float = 1.0,
                 backoff_cap: float = 60.0):
        self.config = config
        self._sleep = sleep
        self._backoff_base = backoff_base
        self._backoff_cap = backoff_cap
        self._transport = transport
        self._http: Optional[httpx.Client] = None
        self._lock = threading.Lock()

    @property
    def model_name(self) -> str:
        return self.config.model_name

    def _key(self) -> str:
        key = os.environ.get(self.config.api_key_env_name)
        if not key:
            raise Auth(f"environment variable {self.config.api_key_env_name} is not set")
        return key

    def _client(self) -> httpx.Client:
        with self._lock:
            if self._http is None:
                self._http = httpx.Client(timeout=self.config.request_timeout, transport=self._transport)
            return self._http

    def close(self):
        if self._http is not None:
            self._http.close()

    def _delay(self, attempt: int, retry_after: Optional[str] = None) -> float:
        if retry_after:
            try:
                return min(float(retry_after), self._backoff_cap)
            except ValueError:
                pass
        return min(self._backoff_base * 2 ** attempt, self._backoff_cap)

    def complete(self, prompt: str) -> str:
        key = self._key()
        url = self.config.base_url.rstrip("/") + "/chat/completions"
        payload = {"model": self.config.model_name, "temperature": self.config.temperature,
                   "messages": [{"role": "user", "content": prompt}]}
        headers = {"Authorization": f"Bearer {key}"}
        http = self._client()
        last: Exception = Transport("no attempt made")
        for attempt in range(self.config.max_transport_retries + 1):
            if attempt:
                self._sleep(self._delay(attempt - 1, getattr(last, "retry_after", None)))
            try:
                resp = http.post(url, json=payload, headers=headers)
            except httpx.TransportError as e:
                last = Transport(f"{type(e).__name__}: {e}")
                continue
            if resp.status_code in (401, 403):
                raise Auth(f"endpoint refused credentials (HTTP {resp.status_code})")
            if resp.status_code == 429:
                last = RateLimited(f"HTTP 429 after {attempt + 1} attempt(s)")
                last.retry_after = resp.headers.get("retry-after")
                continue
            if resp.status_code >= 500:
                last = Transport(f"HTTP {resp.status_code}: {resp.text[:_EXCERPT]}")
                continue
            if resp.status_code >= 400:
                raise Transport(f"HTTP {resp.status_code}: {resp.text[:_EXCERPT]}")
            return _content(resp.text)
        raise last


def _content(body: str) -> str:
    try:
        data = json.loads(body)
        text = data["choices"][0]["message"]["content"]
    except (ValueError, KeyError, IndexError, TypeError):
        raise MalformedResponse(f"unexpected response body: {body[:_EXCERPT]!r}") from None
    if not isinstance(text, str):
        raise MalformedResponse(f"completion content is not text: {body[:_EXCERPT]!r}")
    return text


Script = Union[Sequence[str], Callable[[str, int], str]]


class MockClient:
    """Deterministic stand-in for ChatClient.

    ``script`` is either a list of responses handed out in call order, or a
    function of (prompt, call_index). Safe to call from several threads.
    """

    model_name = "mock"

    def __init__(self, script: Script):
        self._script = script
        self._lock = threading.Lock()
        self.calls = 0
        self.prompts: list[str] = []

    @classmethod
    def per_prompt(cls, responses: dict, default: Optional[str] = None) -> "MockClient":
        """Each prompt gets its own queue of responses; the last one repeats once the queue runs dry."""
        queues = {p: list(r) if not isinstance(r, str) else [r] for p, r in responses.items()}
        seen: dict[str, int] = {}
        lock = threading.Lock()

        def answer(prompt: str, _i: int) -> str:
            if prompt not in queues:
                if default is None:
                    raise KeyError("mock has no response for this prompt")
                return default
            with lock:
                j = seen.get(prompt, 0)
                seen[prompt] = j + 1
            q = queues[prompt]
            return q[min(j, len(q) - 1)]

        return cls(answer)

    def complete(self, prompt: str) -> str:
        with self._lock:
            i = self.calls
            self.calls += 1
            self.prompts.append(prompt)
            if not callable(self._script):
                if i >= len(self._script):
                    raise Transport(f"mock script exhausted after {len(self._script)} responses")
                return self._script[i]
        return self._script(prompt, i)

    def close(self):
        pass
