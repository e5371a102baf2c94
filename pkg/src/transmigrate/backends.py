"""Translation backends: a live chat-completion client and a deterministic
rule-table mock.

The live wire format is a JSON POST of ``{"model", "messages", "temperature"}``
where messages carry the prompt split into a system part (the template's
first paragraph) and a user part (everything after it); the reply text is
the first choice's message content. The mock rewrites the envelope's code
payload with an ordered regex rule table and returns it fenced, which is
enough to drive the full pipeline bit-reproducibly and to script
validation-loop behaviors (fix one issue per round, never fix, and so on).
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import re
import time
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from pathlib import Path

from transmigrate.errors import ArgumentError, BackendError, ExtractionError, RetryableBackendError
from transmigrate.prompts import PromptEnvelope

logger = logging.getLogger(__name__)

TODO_MARKER = "// TODO: Platform-specific adaptation required"

DEFAULT_API_KEY_ENV = "TRANSMIGRATE_API_KEY"

# The first of these slots present in an envelope is the code payload the
# mock rewrites (repair prompts carry prior_code; translation prompts carry
# the source at their level).
_PAYLOAD_SLOTS = (
    "prior_code",
    "method_code",
    "class_content",
    "translated_classes",
    "translated_components",
)


@dataclass(frozen=True)
class BackendConfig:
    endpoint: str = "https://api.openai.com/v1/chat/completions"
    model: str = "gpt-4o"
    temperature: float = 0.0
    max_output_units: int | None = None
    retry_count: int = 2
    timeout_seconds: float = 60.0
    api_key_env: str = DEFAULT_API_KEY_ENV

    def __post_init__(self) -> None:
        if not 0.0 <= self.temperature <= 2.0:
            raise ArgumentError(f"temperature must be in [0, 2], got {self.temperature}")
        if self.retry_count < 0:
            raise ArgumentError(f"retry count must be >= 0, got {self.retry_count}")


def split_system_user(rendered_text: str) -> tuple[str, str]:
    """First paragraph becomes the system message; the rest is the user
    message. Falls back to a single user message when there is no blank
    line."""
    parts = rendered_text.split("\n\n", 1)
    if len(parts) == 2:
        return parts[0].strip(), parts[1].strip()
    return "", rendered_text.strip()


class LiveBackend:
    """Chat-completion client with bounded retries on transport failures."""

    def __init__(self, config: BackendConfig) -> None:
        self.config = config
        self.call_count = 0

    def build_request_body(self, envelope: PromptEnvelope) -> dict:
        system, user = split_system_user(envelope.rendered_text)
        messages = []
        if system:
            messages.append({"role": "system", "content": system})
        messages.append({"role": "user", "content": user})
        body: dict = {
            "model": self.config.model,
            "messages": messages,
            "temperature": self.config.temperature,
        }
        if self.config.max_output_units is not None:
            body["max_tokens"] = self.config.max_output_units
        return body

    def translate(self, envelope: PromptEnvelope) -> str:
        self.call_count += 1
        body = json.dumps(self.build_request_body(envelope)).encode("utf-8")
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(self.config.api_key_env, "")
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        prompt_hash = hashlib.sha256(envelope.rendered_text.encode("utf-8")).hexdigest()[:16]
        attempts = self.config.retry_count + 1
        last_error: Exception | None = None
        for attempt in range(attempts):
            request = urllib.request.Request(self.config.endpoint, data=body, headers=headers)
            started = time.monotonic()
            try:
                with urllib.request.urlopen(request, timeout=self.config.timeout_seconds) as resp:
                    payload = json.loads(resp.read().decode("utf-8"))
                latency = time.monotonic() - started
                logger.info(
                    "backend call prompt=%s attempt=%d latency=%.3fs", prompt_hash, attempt, latency
                )
                return str(payload["choices"][0]["message"]["content"])
            except urllib.error.HTTPError as exc:
                excerpt = exc.read()[:200].decode("utf-8", "replace")
                raise BackendError(f"backend returned status {exc.code}: {excerpt}") from exc
            except (urllib.error.URLError, OSError, TimeoutError) as exc:
                last_error = exc
                logger.warning("backend transport failure (attempt %d): %s", attempt, exc)
        raise RetryableBackendError(
            f"backend unreachable after {attempts} attempts: {last_error}"
        ) from last_error


@dataclass
class MockRule:
    pattern: str
    replacement: str
    when: str = "always"  # "always" | "translate" | "repair"

    def compiled(self) -> re.Pattern[str]:
        return re.compile(self.pattern, flags=re.MULTILINE)


class MockBackend:
    """Deterministic rewriter. Applies its rule table to the envelope's code
    payload and returns the result in a single fenced block.

    ``max_fixes_per_call`` caps the total number of replacements per call,
    which scripts "fix one issue per round" behavior for refinement tests.
    An empty rule table is a pass-through (a backend that never fixes
    anything).
    """

    def __init__(self, rules: list[MockRule] | None = None, max_fixes_per_call: int | None = None) -> None:
        self.rules = list(rules or [])
        self.max_fixes_per_call = max_fixes_per_call
        self.call_count = 0

    @classmethod
    def from_rules_file(cls, path: str | Path, max_fixes_per_call: int | None = None) -> "MockBackend":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        entries = raw["rules"] if isinstance(raw, dict) else raw
        rules = [
            MockRule(e["pattern"], e["replacement"], e.get("when", "always")) for e in entries
        ]
        return cls(rules, max_fixes_per_call=max_fixes_per_call)

    def translate(self, envelope: PromptEnvelope) -> str:
        self.call_count += 1
        payload = None
        for slot in _PAYLOAD_SLOTS:
            if slot in envelope.slots:
                payload = envelope.slots[slot]
                break
        if payload is None:
            payload = envelope.rendered_text
        mode = "repair" if "prior_code" in envelope.slots else "translate"
        remaining = self.max_fixes_per_call
        out = payload
        for rule in self.rules:
            if rule.when not in ("always", mode):
                continue
            if remaining is not None and remaining <= 0:
                break
            count = 0 if remaining is None else remaining
            out, n = rule.compiled().subn(rule.replacement, out, count=count)
            if remaining is not None:
                remaining -= n
        return f"```swift\n{out}\n```"


@dataclass
class CodeExtraction:
    code: str
    todo_markers: list[tuple[int, str]] = field(default_factory=list)
    fence_count: int = 0


_FENCE_OPEN_RE = re.compile(r"^```[\w+-]*\s*$")
_FENCE_CLOSE_RE = re.compile(r"^```\s*$")


def extract_code(response: str) -> CodeExtraction:
    """Pull target code out of a backend response.

    With one or more fenced blocks, the longest block wins (ties go to the
    first); an unterminated final fence runs to the end of the response.
    With no fence the whole response is taken as code and ``fence_count``
    stays 0, which callers treat as a warning. Lines containing the
    platform-adaptation TODO marker are collected as (line, text) pairs.
    """
    if not response.strip():
        raise ExtractionError("empty backend response")
    lines = response.splitlines()
    blocks: list[str] = []
    current: list[str] | None = None
    for line in lines:
        if current is None:
            if _FENCE_OPEN_RE.match(line):
                current = []
        elif _FENCE_CLOSE_RE.match(line):
            blocks.append("\n".join(current))
            current = None
        else:
            current.append(line)
    if current is not None:  # unterminated fence: lenient, take the tail
        blocks.append("\n".join(current))
    if blocks:
        code = max(blocks, key=len)  # max() keeps the first on ties
        fence_count = len(blocks)
    else:
        code = response
        fence_count = 0
    markers = [
        (idx + 1, line)
        for idx, line in enumerate(code.splitlines())
        if TODO_MARKER in line
    ]
    return CodeExtraction(code=code, todo_markers=markers, fence_count=fence_count)
