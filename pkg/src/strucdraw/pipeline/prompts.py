"""Prompt templates for the six steps and their placeholder substitution."""

from __future__ import annotations

import string
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping

STEP_IDS = (1, 2, 3, 4, 5, 6)

# placeholder names each step's template must declare
STEP_PLACEHOLDERS: dict[int, frozenset[str]] = {
    1: frozenset({"description"}),
    2: frozenset({"useful_info", "description"}),
    3: frozenset({"Mandatory_Info", "background_sd", "Input"}),
    4: frozenset({"description"}),
    5: frozenset({"JSON_Requirement", "Input_Info"}),
    6: frozenset({"steps", "JSON_file"}),
}


class PromptError(ValueError):
    pass


class MissingBinding(PromptError, KeyError):
    def __init__(self, name: str):
        super().__init__(f"no binding for placeholder {{{name}}}")
        self.name = name


class UnknownPlaceholder(PromptError, KeyError):
    def __init__(self, name: str):
        super().__init__(f"binding {name!r} matches no placeholder in the template")
        self.name = name


class TemplateError(PromptError):
    pass


def placeholders(body: str) -> frozenset[str]:
    names = set()
    for _, name, spec, conv in string.Formatter().parse(body):
        if name is None:
            continue
        if not name.isidentifier() or spec or conv:
            raise TemplateError(f"unsupported placeholder {{{name}}}")
        names.add(name)
    return frozenset(names)


@dataclass(frozen=True)
class PromptTemplate:
    step_id: int
    body: str
    required: frozenset[str]

    @classmethod
    def from_text(cls, step_id: int, body: str, strict: bool = True) -> "PromptTemplate":
        names = placeholders(body)
        if strict and step_id in STEP_PLACEHOLDERS and names != STEP_PLACEHOLDERS[step_id]:
            want = ", ".join(sorted(STEP_PLACEHOLDERS[step_id]))
            got = ", ".join(sorted(names)) or "none"
            raise TemplateError(f"step {step_id} template must use {{{want}}}, found {{{got}}}")
        return cls(step_id, body, names)


def render_prompt(template: PromptTemplate, bindings: Mapping[str, str]) -> str:
    for name in bindings:
        if name not in template.required:
            raise UnknownPlaceholder(name)
    for name in sorted(template.required):
        if name not in bindings:
            raise MissingBinding(name)
    # values are inserted verbatim; braces inside them are never re-parsed
    return template.body.format_map({k: str(v) for k, v in bindings.items()})


def load_templates(directory: str | Path | None = None) -> dict[int, PromptTemplate]:
    """Read ``step1.txt`` .. ``step6.txt`` from ``directory`` or the bundled set."""
    out = {}
    for step in STEP_IDS:
        fname = f"step{step}.txt"
        if directory is None:
            body = resources.files("strucdraw.data.prompts").joinpath(fname).read_text(encoding="utf-8")
        else:
            path = Path(directory) / fname
            try:
                body = path.read_text(encoding="utf-8")
            except OSError as exc:
                raise TemplateError(f"cannot read prompt template {path}: {exc}") from exc
        out[step] = PromptTemplate.from_text(step, body)
    return out
