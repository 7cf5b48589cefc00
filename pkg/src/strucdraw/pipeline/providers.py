"""Completion backends.

A provider turns one ``CompletionRequest`` into one ``Completion``. During
step 3 a completion may carry tool calls instead of a final answer; the agent
runs them and asks again with ``turn`` incremented.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import re
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Mapping, Protocol, Sequence

import httpx

from .tools import TOOL_NAMES


class Role(str, Enum):
    LIGHT = "light"
    STRONG = "strong"


DEFAULT_ROLES: Mapping[int, Role] = {
    1: Role.LIGHT,
    2: Role.LIGHT,
    3: Role.STRONG,
    4: Role.LIGHT,
    5: Role.STRONG,
    6: Role.STRONG,
}


class ProviderError(RuntimeError):
    pass


class ProviderConfigError(ProviderError):
    """Misconfiguration; unlike other provider errors this aborts a run."""


@dataclass(frozen=True)
class ProviderConfig:
    model_light: str | None = None
    model_strong: str | None = None
    roles: Mapping[int, Role] = field(default_factory=lambda: dict(DEFAULT_ROLES))
    api_key_env: str = "OPENAI_API_KEY"
    base_url: str = "https://api.openai.com/v1"
    temperature: float = 0.0
    timeout: float = 120.0
    retries: int = 3
    max_tool_turns: int = 40

    def role(self, step: int) -> Role:
        return Role(self.roles.get(step, DEFAULT_ROLES[step]))

    def model(self, role: Role) -> str | None:
        return self.model_light if role is Role.LIGHT else self.model_strong


@dataclass(frozen=True)
class CompletionRequest:
    step: int
    prompt: str
    role: Role
    sub_step: str | None = None
    tools: tuple[str, ...] = ()
    turn: int = 0
    trial: int = 0
    description: str = ""

    @property
    def tag(self) -> str:
        return self.sub_step or str(self.step)


@dataclass(frozen=True)
class Completion:
    text: str
    tool_calls: tuple[tuple[str, tuple], ...] = ()


class Provider(Protocol):
    def complete(self, request: CompletionRequest) -> Completion: ...


def prompt_hash(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()


# -- replay ----------------------------------------------------------------

@dataclass(frozen=True)
class ReplayRecord:
    step: int
    sub_step: str | None
    completion: str
    tool_calls: tuple[tuple[str, tuple], ...] = ()
    prompt_hash: str | None = None

    @classmethod
    def from_json(cls, obj: Mapping) -> "ReplayRecord":
        calls = tuple((str(name), tuple(args)) for name, args, *_ in obj.get("tool_calls") or ())
        return cls(int(obj["step"]), obj.get("sub_step"), obj["completion"], calls, obj.get("prompt_hash"))

    def to_json(self) -> dict:
        return {
            "step": self.step,
            "sub_step": self.sub_step,
            "prompt_hash": self.prompt_hash,
            "completion": self.completion,
            "tool_calls": [[name, list(args)] for name, args in self.tool_calls],
        }


class ReplayProvider:
    """Answers from recorded transcripts; stateless, so safe to share between threads.

    Records are keyed by description (``None`` matches any description) and
    by ``(step, sub_step)``. A record with tool calls answers turn 0 with the
    calls and every later turn with the recorded completion.
    """

    def __init__(self, sessions: Mapping[str | None, Sequence[ReplayRecord]], strict: bool = False):
        self._table: dict[tuple[str | None, int, str | None], ReplayRecord] = {}
        for description, records in sessions.items():
            key_desc = None if description is None else _norm_desc(description)
            for rec in records:
                self._table[(key_desc, rec.step, rec.sub_step)] = rec
        self.strict = strict

    @classmethod
    def from_records(cls, records: Sequence[ReplayRecord | Mapping], description: str | None = None, strict: bool = False):
        recs = [r if isinstance(r, ReplayRecord) else ReplayRecord.from_json(r) for r in records]
        return cls({description: recs}, strict)

    @classmethod
    def from_path(cls, path: str | Path, strict: bool = False) -> "ReplayProvider":
        path = Path(path)
        files = sorted(path.glob("*.json")) if path.is_dir() else [path]
        if not files:
            raise ProviderConfigError(f"no replay transcripts found in {path}")
        sessions: dict[str | None, list[ReplayRecord]] = {}
        for f in files:
            try:
                data = json.loads(f.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise ProviderConfigError(f"cannot read replay file {f}: {exc}") from exc
            if isinstance(data, list):
                description, records = None, data
            else:
                description, records = data.get("description"), data["records"]
            sessions.setdefault(description, []).extend(ReplayRecord.from_json(r) for r in records)
        return cls(sessions, strict)

    @classmethod
    def bundled(cls) -> "ReplayProvider":
        from importlib import resources

        with resources.as_file(resources.files("strucdraw.data").joinpath("replay")) as p:
            return cls.from_path(p)

    def _find(self, request: CompletionRequest) -> ReplayRecord:
        for desc in (_norm_desc(request.description), None):
            rec = self._table.get((desc, request.step, request.sub_step))
            if rec is not None:
                return rec
        raise ProviderError(f"no recorded completion for step {request.tag} of {request.description!r}")

    def complete(self, request: CompletionRequest) -> Completion:
        rec = self._find(request)
        if self.strict and request.turn == 0 and rec.prompt_hash and rec.prompt_hash != prompt_hash(request.prompt):
            raise ProviderError(f"prompt for step {request.tag} differs from the recorded one")
        if request.turn == 0 and rec.tool_calls:
            return Completion("", rec.tool_calls)
        return Completion(rec.completion)


def _norm_desc(text: str) -> str:
    return " ".join(text.split()).casefold()


# -- fault injection -------------------------------------------------------

_NUMBER = re.compile(r"(?<![\w.])(\d+(?:\.\d+)?)(?![\w.])")
_KINDS = (
    "rectangular concrete beam cross-section",
    "steel beam cross-section",
    "precast beam cross-section",
)


def _bump_first_number(text: str) -> str:
    m = _NUMBER.search(text)
    if m is None:
        return text + "\n?"
    value = m.group(1)
    bumped = str(int(value) + 1) if "." not in value else f"{float(value) + 1:g}"
    return text[: m.start()] + bumped + text[m.end():]


def _bump_last_number(text: str) -> str:
    # the last coordinate of a drawing JSON can change without breaking its
    # internal consistency, so the IR still parses and only verification fails
    matches = list(_NUMBER.finditer(text))
    if not matches:
        return text + "\n?"
    m = matches[-1]
    value = m.group(1)
    bumped = str(int(value) + 1) if "." not in value else f"{float(value) + 1:g}"
    return text[: m.start()] + bumped + text[m.end():]


def _swap_kind(text: str) -> str:
    lower = text.lower()
    for i, kind in enumerate(_KINDS):
        pos = lower.rfind(kind)
        if pos >= 0:
            other = _KINDS[(i + 1) % len(_KINDS)]
            return text[:pos] + other + text[pos + len(kind):]
    return text


def _drop_last_bullet(text: str) -> str:
    lines = text.split("\n")
    for i in range(len(lines) - 1, -1, -1):
        if lines[i].lstrip().startswith("- "):
            del lines[i]
            break
    return "\n".join(lines)


def _flip_unit(text: str) -> str:
    def repl(m: re.Match) -> str:
        return m.group(1) + ("Millimeter" if m.group(2).lower().startswith("inch") else "Inch")

    return re.sub(r"(Unit:\s*)(\w+)", repl, text, count=1)


def _drop_last_command(text: str) -> str:
    close = text.rfind("</result>")
    body, tail = (text[:close], text[close:]) if close >= 0 else (text, "")
    lines = body.rstrip().split("\n")
    for i in range(len(lines) - 1, -1, -1):
        if lines[i].strip() and not lines[i].strip().startswith("#"):
            del lines[i]
            break
    return "\n".join(lines) + "\n" + tail


CORRUPTIONS: dict[int, Callable[[str], str]] = {
    1: _swap_kind,
    2: _drop_last_bullet,
    3: _bump_first_number,
    4: _flip_unit,
    5: _bump_last_number,
    6: _drop_last_command,
}


def _in_result(text: str, fn: Callable[[str], str]) -> str:
    """Apply ``fn`` to the last result block only, leaving the reasoning alone."""
    end = text.rfind("</result>")
    start = text.rfind("<result>", 0, end) if end >= 0 else -1
    if start < 0:
        return fn(text)
    inner = text[start + len("<result>"):end]
    return text[: start + len("<result>")] + fn(inner) + text[end:]


def parse_schedule(text: str) -> dict[str, float]:
    """``"1=0.98,3-1=0.85,..."`` -> ``{"1": 0.98, "3-1": 0.85, ...}`` (success rates)."""
    schedule = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        key, sep, value = part.partition("=")
        if not sep:
            raise ProviderConfigError(f"bad schedule entry {part!r}; expected step=rate")
        rate = float(value)
        if not 0.0 <= rate <= 1.0:
            raise ProviderConfigError(f"success rate for step {key} must be in [0, 1], got {rate}")
        schedule[key.strip()] = rate
    return schedule


class FaultProvider:
    """Wraps a provider and corrupts a seeded, exact fraction of trials per step.

    For a step with success rate ``p`` over ``trials`` trials, exactly
    ``round((1 - p) * trials)`` trial indices are corrupted. Corruptions change
    the content of the answer but keep the result block intact, so the run
    continues and only that step is scored as wrong.
    """

    def __init__(self, base: Provider, schedule: Mapping[str, float], trials: int, seed: int = 0):
        self.base = base
        self.schedule = dict(schedule)
        self.trials = trials
        self.seed = seed
        self._failing: dict[str, frozenset[int]] = {}
        for key, rate in self.schedule.items():
            n_fail = round((1.0 - rate) * trials)
            rng = random.Random(f"{seed}:{key}")
            self._failing[key] = frozenset(rng.sample(range(trials), n_fail))

    def failing_trials(self, tag: str) -> frozenset[int]:
        if tag in self._failing:
            return self._failing[tag]
        if tag.startswith("3-") and "3" in self._failing:
            return self._failing["3"]
        return frozenset()

    def complete(self, request: CompletionRequest) -> Completion:
        out = self.base.complete(request)
        if out.tool_calls or request.trial not in self.failing_trials(request.tag):
            return out
        return Completion(_in_result(out.text, CORRUPTIONS[request.step]), out.tool_calls)


# -- HTTP ------------------------------------------------------------------

def _tool_schema(name: str) -> dict:
    n = 1 if name == "Sqrt" else 2
    return {
        "type": "function",
        "function": {
            "name": name,
            "description": f"{name} of {n} number(s), rounded to 4 decimals",
            "parameters": {
                "type": "object",
                "properties": {"args": {"type": "array", "items": {"type": "number"}, "minItems": n, "maxItems": n}},
                "required": ["args"],
            },
        },
    }


class HttpProvider:
    """OpenAI-compatible chat-completions client."""

    def __init__(
        self,
        config: ProviderConfig,
        client: httpx.Client | None = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        key = os.environ.get(config.api_key_env)
        if not key:
            raise ProviderConfigError(f"environment variable {config.api_key_env} is not set")
        if not (config.model_light and config.model_strong):
            raise ProviderConfigError("both the light and the strong model must be named")
        self.config = config
        self._client = client or httpx.Client(base_url=config.base_url, timeout=config.timeout)
        self._headers = {"Authorization": f"Bearer {key}"}
        self._sleep = sleep

    def _payload(self, request: CompletionRequest) -> dict:
        body = {
            "model": self.config.model(request.role),
            "messages": [{"role": "user", "content": request.prompt}],
            "temperature": self.config.temperature,
        }
        if request.tools:
            body["tools"] = [_tool_schema(t) for t in request.tools if t in TOOL_NAMES]
        return body

    def complete(self, request: CompletionRequest) -> Completion:
        payload = self._payload(request)
        last_error: Exception | None = None
        for attempt in range(self.config.retries + 1):
            if attempt:
                self._sleep(min(2.0 ** attempt, 30.0))
            try:
                resp = self._client.post("/chat/completions", json=payload, headers=self._headers)
            except httpx.HTTPError as exc:
                last_error = exc
                continue
            if resp.status_code == 429 or resp.status_code >= 500:
                last_error = ProviderError(f"HTTP {resp.status_code}")
                continue
            if resp.status_code >= 400:
                raise ProviderError(f"HTTP {resp.status_code}: {resp.text[:200]}")
            return self._parse(resp.json())
        raise ProviderError(f"request failed after {self.config.retries + 1} attempts: {last_error}")

    @staticmethod
    def _parse(data: Mapping) -> Completion:
        try:
            message = data["choices"][0]["message"]
        except (KeyError, IndexError, TypeError):
            raise ProviderError("malformed chat-completions response") from None
        calls = []
        for call in message.get("tool_calls") or ():
            fn = call.get("function", {})
            try:
                raw = json.loads(fn.get("arguments") or "{}")
            except json.JSONDecodeError:
                raw = {}
            args = raw.get("args") if isinstance(raw, dict) else raw
            if args is None and isinstance(raw, dict):
                args = list(raw.values())
            calls.append((fn.get("name", ""), tuple(args or ())))
        return Completion(message.get("content") or "", tuple(calls))
