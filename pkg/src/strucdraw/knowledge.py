"""Keyed knowledge store spliced into the agent prompts.

Each drawing kind owns five text blocks (useful info, mandatory info, how to
obtain it, the JSON requirement and the code-generation steps). Texts are
kept verbatim, typos included, because they go straight into prompts.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .ir import DrawingKind

FIELDS = ("useful_info", "mandatory_info", "acquisition_methods", "json_requirement", "codegen_steps")


class KnowledgeError(Exception):
    pass


class SchemaError(KnowledgeError):
    pass


class UnknownKind(KnowledgeError, KeyError):
    pass


@dataclass(frozen=True)
class SubStepKnowledge:
    tag: str
    mandatory_info: str
    acquisition_methods: str


@dataclass(frozen=True)
class KnowledgeRecord:
    useful_info: str
    mandatory_info: str
    acquisition_methods: str
    json_requirement: str
    codegen_steps: str
    substeps: tuple[SubStepKnowledge, ...] = ()


@dataclass(frozen=True)
class KnowledgeBase:
    records: Mapping[DrawingKind, KnowledgeRecord]
    source: str = "<memory>"
    loaded_at: float = field(default=0.0, compare=False)


def _parse(data: object, source: str) -> KnowledgeBase:
    if not isinstance(data, dict):
        raise SchemaError(f"{source}: top level must be an object keyed by drawing kind")
    records: dict[DrawingKind, KnowledgeRecord] = {}
    for key, entry in data.items():
        try:
            kind = DrawingKind.from_text(key)
        except ValueError:
            raise SchemaError(f"{source}: unknown drawing kind {key!r}") from None
        if not isinstance(entry, dict):
            raise SchemaError(f"{source}: entry for {key!r} must be an object")
        values = {}
        for name in FIELDS:
            value = entry.get(name)
            if not isinstance(value, str) or not value.strip():
                raise SchemaError(f"{source}: {key!r} is missing a non-empty {name!r}")
            values[name] = value
        substeps = []
        for i, sub in enumerate(entry.get("substeps", [])):
            try:
                substeps.append(
                    SubStepKnowledge(sub["tag"], sub["mandatory_info"], sub["acquisition_methods"])
                )
            except (KeyError, TypeError):
                raise SchemaError(f"{source}: {key!r} substeps[{i}] is malformed") from None
        records[kind] = KnowledgeRecord(**values, substeps=tuple(substeps))
    missing = [k.value for k in DrawingKind if k not in records]
    if missing:
        raise SchemaError(f"{source}: no knowledge for {', '.join(missing)}")
    return KnowledgeBase(MappingProxyType(records), source, time.time())


def load(path: str | Path | None = None) -> KnowledgeBase:
    """Load a knowledge file; with no path, the bundled defaults."""
    if path is None:
        ref = resources.files("strucdraw.data").joinpath("knowledge.json")
        text, source = ref.read_text(encoding="utf-8"), "bundled:knowledge.json"
    else:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise KnowledgeError(f"cannot read knowledge file {path}: {exc}") from exc
        source = str(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{source}: invalid JSON: {exc}") from exc
    return _parse(data, source)


def retrieve(kb: KnowledgeBase, kind: DrawingKind) -> KnowledgeRecord:
    try:
        return kb.records[kind]
    except KeyError:
        raise UnknownKind(f"no knowledge for {kind!r}") from None
