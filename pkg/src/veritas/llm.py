"""Text-generation backends and robust PLF extraction from completions.

The wire protocol is a single POST with a JSON body
{model, prompt, temperature, top_p, max_tokens}; the response JSON carries
the completion under "completion" (or "text"). A deterministic mock
backend (prompt -> completion map loaded from a file) is first class so
the whole evaluation pipeline runs hermetically.

Secrets never leave the process: configs name the environment variable
holding the token, and request logging records lengths and status codes
only.
"""

from __future__ import annotations

import json
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Mapping, Protocol
from urllib.parse import urlparse

import requests

from .errors import (
    AuthError, GenerationTimeout, HttpError, MalformedPlf, NoFormulaFound,
    ParseError, PartialParse,
)
from .plf import PlfDocument, parse_entry_line, parse_plf

log = logging.getLogger("veritas.llm")

MAX_RETRIES = 2
DEFAULT_MAX_IN_FLIGHT = 4


@dataclass(frozen=True)
class GenerationParams:
    temperature: float = 0.0
    top_p: float = 1.0
    max_tokens: int = 1200

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError(f"temperature must be nonnegative, got {self.temperature}")
        if not 0 < self.top_p <= 1:
            raise ValueError(f"top_p must be in (0, 1], got {self.top_p}")
        if self.max_tokens < 1:
            raise ValueError(f"max_tokens must be positive, got {self.max_tokens}")


@dataclass(frozen=True)
class EndpointConfig:
    base_url: str
    model: str
    token_env: str | None = None
    timeout: float = 30.0

    def __post_init__(self):
        parsed = urlparse(self.base_url)
        if parsed.scheme not in ("http", "https") or not parsed.netloc:
            raise ValueError(f"base_url must be an http(s) URL, got '{self.base_url}'")
        if self.timeout <= 0:
            raise ValueError(f"timeout must be positive, got {self.timeout}")


class Backend(Protocol):
    def generate(self, prompt: str, params: GenerationParams) -> str: ...


# transport(url, payload, headers, timeout) -> (status code, parsed json body)
Transport = Callable[[str, dict, dict, float], tuple[int, dict]]


def _requests_transport(url: str, payload: dict, headers: dict, timeout: float) -> tuple[int, dict]:
    try:
        response = requests.post(url, json=payload, headers=headers, timeout=timeout)
    except requests.Timeout as e:
        raise GenerationTimeout(f"no answer from {url} within {timeout}s") from e
    except requests.ConnectionError as e:
        raise GenerationTimeout(f"endpoint {url} unreachable") from e
    try:
        body = response.json()
    except ValueError:
        body = {}
    return response.status_code, body


class HttpBackend:
    """POST client with bounded retries (timeouts only, exponential backoff)."""

    def __init__(self, cfg: EndpointConfig, transport: Transport = _requests_transport,
                 retry_delay: float = 0.5):
        self.cfg = cfg
        self._transport = transport
        self._retry_delay = retry_delay

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        if self.cfg.token_env:
            token = os.environ.get(self.cfg.token_env)
            if not token:
                raise AuthError(f"environment variable {self.cfg.token_env} is not set")
            headers["Authorization"] = f"Bearer {token}"
        return headers

    def generate(self, prompt: str, params: GenerationParams) -> str:
        payload = {
            "model": self.cfg.model,
            "prompt": prompt,
            "temperature": params.temperature,
            "top_p": params.top_p,
            "max_tokens": params.max_tokens,
        }
        attempt = 0
        while True:
            try:
                status, body = self._transport(self.cfg.base_url, payload, self._headers(), self.cfg.timeout)
            except GenerationTimeout:
                if attempt >= MAX_RETRIES:
                    log.info("request failed: timeout after %d attempts (prompt %d chars)",
                             attempt + 1, len(prompt))
                    raise
                time.sleep(self._retry_delay * (2 ** attempt))
                attempt += 1
                continue
            log.info("request done: status=%s prompt=%d chars model=%s", status, len(prompt), self.cfg.model)
            if status in (401, 403):
                raise AuthError(f"endpoint rejected credentials (HTTP {status})")
            if not 200 <= status < 300:
                raise HttpError(status)
            completion = body.get("completion", body.get("text"))
            if not isinstance(completion, str):
                raise HttpError(status, "response carries no completion text")
            return completion


class MockBackend:
    """Canned prompt -> completion map; unknown prompts surface as HTTP 404."""

    def __init__(self, mapping: Mapping[str, str]):
        self._mapping = dict(mapping)

    def generate(self, prompt: str, params: GenerationParams) -> str:
        if prompt not in self._mapping:
            raise HttpError(404, "prompt not in mock map")
        return self._mapping[prompt]


def load_mock_map(path: str) -> dict[str, str]:
    """JSONL records {"prompt", "completion"}, or one JSON object mapping."""
    with open(path) as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{") and "\n{" not in stripped:
        raw = json.loads(stripped)
        if all(isinstance(v, str) for v in raw.values()):
            return dict(raw)
    mapping = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        mapping[record["prompt"]] = record["completion"]
    return mapping


def backend_from_config(raw: Mapping) -> Backend:
    """Build a backend from a parsed endpoint config (TOML/JSON dict).

    mode = "mock" takes `map` (path to the canned completions);
    mode = "http" (default) takes base_url, model, token_env, timeout.
    """
    section = raw.get("endpoint", raw)
    mode = section.get("mode", "http")
    if mode == "mock":
        return MockBackend(load_mock_map(section["map"]))
    if mode != "http":
        raise ValueError(f"unknown backend mode '{mode}'")
    cfg = EndpointConfig(
        base_url=section["base_url"],
        model=section.get("model", "default"),
        token_env=section.get("token_env"),
        timeout=float(section.get("timeout", 30.0)),
    )
    return HttpBackend(cfg)


def generate(prompt: str, params: GenerationParams, backend: Backend) -> str:
    return backend.generate(prompt, params)


def generate_many(
    prompts: list[str],
    params: GenerationParams,
    backend: Backend,
    max_in_flight: int = DEFAULT_MAX_IN_FLIGHT,
) -> list[str | Exception]:
    """Bounded-concurrency map; failures are returned in place, not raised."""

    def one(prompt: str) -> str | Exception:
        try:
            return backend.generate(prompt, params)
        except Exception as e:  # graded later; never aborts the batch
            return e

    with ThreadPoolExecutor(max_workers=max(1, max_in_flight)) as pool:
        return list(pool.map(one, prompts))


# ---------------------------------------------------------------------------
# completion post-processing

@dataclass(frozen=True)
class CompletionResult:
    raw: str
    document: PlfDocument | None = None
    failure: str | None = None


def _is_entry_line(line: str) -> bool:
    try:
        parse_entry_line(line)
        return True
    except ParseError:
        return False


def extract_plf(raw: str) -> PlfDocument:
    """Pull the largest contiguous PLF block out of a free-form completion.

    Markdown fences are dropped, prose lines delimit blocks, comment and
    blank lines inside a block are kept. Raises NoFormulaFound when no
    line parses as an entry, PartialParse when something entry-like exists
    but nothing parses.
    """
    lines = [l for l in raw.splitlines() if not l.strip().startswith("```")]

    blocks: list[tuple[int, list[str]]] = []   # (entry count, lines)
    current: list[str] = []
    pending: list[str] = []   # comments/blanks waiting for an entry to attach to
    entries_in_current = 0
    for line in lines:
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            pending.append(line)
            continue
        if _is_entry_line(stripped):
            current.extend(pending)
            pending = []
            current.append(line)
            entries_in_current += 1
        else:
            if entries_in_current:
                blocks.append((entries_in_current, current))
            current = []
            pending = []
            entries_in_current = 0
    if entries_in_current:
        blocks.append((entries_in_current, current))

    if not blocks:
        for lineno, line in enumerate(raw.splitlines(), start=1):
            if "<->" in line:
                raise PartialParse(lineno, f"line resembles a formula but does not parse: '{line.strip()}'")
        raise NoFormulaFound("completion contains no PLF entries")

    best = max(blocks, key=lambda b: b[0])
    try:
        return parse_plf("\n".join(best[1]))
    except (ParseError, MalformedPlf) as e:
        raise PartialParse(getattr(e, "line", 1), str(e)) from e
