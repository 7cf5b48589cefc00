"""The six-step chain: kind, useful fields, mandatory values, other info, JSON, script."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..geometry import GeometryError, PrecastCatalog, VerifyReport, default_catalog, verify_ir
from ..ir import DrawingIR, DrawingKind, IRError, PrecastDrawing, parse_ir, serialize_ir
from ..knowledge import KnowledgeBase, retrieve
from .extract import ExtractionFailed, extract_result
from .prompts import PromptTemplate, load_templates, render_prompt
from .providers import (
    Completion,
    CompletionRequest,
    Provider,
    ProviderConfig,
    ProviderConfigError,
    ProviderError,
    ReplayRecord,
    prompt_hash,
)
from .tools import TOOL_NAMES, ToolError, calc_tool

OK = "ok"
EXTRACTION_FAILED = "extraction-failed"
PROVIDER_ERROR = "provider-error"

KIND_ANCHOR = "the type of structural drawing is:"


class UnknownDrawingKind(ExtractionFailed):
    pass


@dataclass(frozen=True)
class ToolCall:
    name: str
    args: tuple
    result: float | None = None
    error: str | None = None

    def observation(self) -> str:
        shown = ", ".join(str(a) for a in self.args)
        outcome = self.error if self.error is not None else _num(self.result)
        return f"Observation: {self.name}({shown}) = {outcome}"

    def to_json(self) -> dict:
        return {"name": self.name, "args": list(self.args), "result": self.result, "error": self.error}


def _num(value: float | None) -> str:
    if value is None:
        return "None"
    return str(int(value)) if float(value).is_integer() else repr(value)


@dataclass
class StepTranscript:
    step: int
    sub_step: str | None
    role: str
    prompt: str
    completions: list[str] = field(default_factory=list)
    tool_calls: list[ToolCall] = field(default_factory=list)
    result: str | None = None
    outcome: str = OK
    error: str | None = None

    @property
    def tag(self) -> str:
        return self.sub_step or str(self.step)

    @property
    def ok(self) -> bool:
        return self.outcome == OK

    @property
    def final_completion(self) -> str:
        return self.completions[-1] if self.completions else ""

    def to_json(self) -> dict:
        return {
            "step": self.step,
            "sub_step": self.sub_step,
            "role": self.role,
            "prompt": self.prompt,
            "completions": list(self.completions),
            "tool_calls": [c.to_json() for c in self.tool_calls],
            "result": self.result,
            "outcome": self.outcome,
            "error": self.error,
        }


@dataclass
class PipelineRun:
    description: str
    kind: DrawingKind | None = None
    transcripts: list[StepTranscript] = field(default_factory=list)
    ir: DrawingIR | None = None
    script: str | None = None
    verify: VerifyReport | None = None
    error: str | None = None

    def transcript(self, tag: str) -> StepTranscript | None:
        for t in self.transcripts:
            if t.tag == tag:
                return t
        return None

    @property
    def completed(self) -> bool:
        return self.error is None and self.script is not None and all(t.ok for t in self.transcripts)

    @property
    def ok(self) -> bool:
        return self.completed and (self.verify is None or self.verify.ok)

    def to_json(self) -> dict:
        return {
            "description": self.description,
            "kind": self.kind.value if self.kind else None,
            "transcripts": [t.to_json() for t in self.transcripts],
            "ir": json.loads(serialize_ir(self.ir)) if self.ir is not None else None,
            "script": self.script,
            "verify": self.verify.to_json() if self.verify is not None else None,
            "error": self.error,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"


def parse_kind(result: str) -> DrawingKind:
    """Find the drawing kind in a step-1 answer.

    The text after the anchor phrase is searched first; otherwise the last
    kind name mentioned anywhere wins.
    """
    text = " ".join(result.lower().split())
    pos = text.rfind(KIND_ANCHOR)
    if pos >= 0:
        tail = text[pos + len(KIND_ANCHOR):]
        hits = [(tail.find(k.value), k) for k in DrawingKind if k.value in tail]
        if hits:
            return min(hits)[1]
    hits = [(text.rfind(k.value), k) for k in DrawingKind if k.value in text]
    if hits:
        return max(hits)[1]
    raise UnknownDrawingKind(f"no known drawing kind in step-1 answer: {result[:120]!r}")


def _bindings(step: int, inputs: Mapping[str, str], kb: KnowledgeBase, kind: DrawingKind | None, sub_step: str | None) -> dict[str, str]:
    if step in (1, 4):
        return {"description": inputs["description"]}
    record = retrieve(kb, _need_kind(kind, step))
    if step == 2:
        return {"useful_info": record.useful_info, "description": inputs["description"]}
    if step == 3:
        mandatory, background = record.mandatory_info, record.acquisition_methods
        if sub_step is not None:
            sub = {s.tag: s for s in record.substeps}.get(sub_step)
            if sub is None:
                raise ValueError(f"no knowledge for sub-step {sub_step} of {kind.value}")
            mandatory, background = sub.mandatory_info, sub.acquisition_methods
        return {"Mandatory_Info": mandatory, "background_sd": background, "Input": inputs["Input"]}
    if step == 5:
        return {"JSON_Requirement": record.json_requirement, "Input_Info": inputs["Input_Info"]}
    if step == 6:
        return {"steps": record.codegen_steps, "JSON_file": inputs["JSON_file"]}
    raise ValueError(f"no such step {step}")


def _need_kind(kind: DrawingKind | None, step: int) -> DrawingKind:
    if kind is None:
        raise ValueError(f"step {step} needs the drawing kind from step 1")
    return kind


def run_step(
    step: int,
    inputs: Mapping[str, str],
    provider: Provider,
    kb: KnowledgeBase,
    kind: DrawingKind | None = None,
    *,
    sub_step: str | None = None,
    templates: Mapping[int, PromptTemplate] | None = None,
    config: ProviderConfig | None = None,
    trial: int = 0,
    description: str = "",
) -> StepTranscript:
    """Render, complete (looping over tool calls in step 3) and extract one step.

    Provider and extraction failures are recorded in the transcript rather
    than raised; configuration errors propagate.
    """
    templates = templates or load_templates()
    config = config or ProviderConfig()
    role = config.role(step)
    prompt = render_prompt(templates[step], _bindings(step, inputs, kb, kind, sub_step))
    tr = StepTranscript(step, sub_step, role.value, prompt)
    tools = TOOL_NAMES if step == 3 else ()
    context = prompt
    try:
        for turn in range(config.max_tool_turns + 1):
            req = CompletionRequest(step, context, role, sub_step, tools, turn, trial, description)
            out: Completion = provider.complete(req)
            tr.completions.append(out.text)
            if not (tools and out.tool_calls):
                break
            observations = []
            for name, args in out.tool_calls:
                try:
                    call = ToolCall(name, tuple(args), calc_tool(name, args))
                except ToolError as exc:
                    call = ToolCall(name, tuple(args), None, f"error: {exc}")
                tr.tool_calls.append(call)
                observations.append(call.observation())
            context = context + (out.text + "\n" if out.text else "") + "\n".join(observations) + "\n"
        else:
            tr.outcome, tr.error = EXTRACTION_FAILED, f"no final answer after {config.max_tool_turns} tool turns"
            return tr
    except ProviderConfigError:
        raise
    except ProviderError as exc:
        tr.outcome, tr.error = PROVIDER_ERROR, str(exc)
        return tr
    try:
        tr.result = extract_result(tr.final_completion)
        if step == 1:
            parse_kind(tr.result)
    except ExtractionFailed as exc:
        tr.outcome, tr.error, tr.result = EXTRACTION_FAILED, f"{type(exc).__name__}: {exc}", None
    return tr


def step3_tags(kb: KnowledgeBase, kind: DrawingKind) -> list[str | None]:
    subs = retrieve(kb, kind).substeps
    return [s.tag for s in subs] if subs else [None]


def run_pipeline(
    description: str,
    config: ProviderConfig | None,
    provider: Provider,
    kb: KnowledgeBase,
    *,
    templates: Mapping[int, PromptTemplate] | None = None,
    catalog: PrecastCatalog | None = None,
    tolerance: float = 1e-3,
    trial: int = 0,
    kind_override: DrawingKind | None = None,
) -> PipelineRun:
    """Run steps 1..6 in order, stopping at the first step without a usable answer.

    ``kind_override`` replaces the step-1 kind for the later steps (step 1 is
    still run and recorded); the evaluation harness uses it so a wrong step-1
    answer is scored on its own instead of derailing every later step.
    """
    config = config or ProviderConfig()
    templates = templates or load_templates()
    catalog = catalog or default_catalog()
    run = PipelineRun(description)
    if not description or not description.strip():
        run.error = "configuration error: empty description"
        return run

    def step(n: int, inputs: Mapping[str, str], sub_step: str | None = None) -> StepTranscript | None:
        tr = run_step(
            n, inputs, provider, kb, run.kind, sub_step=sub_step, templates=templates,
            config=config, trial=trial, description=description,
        )
        run.transcripts.append(tr)
        return tr if tr.ok else None

    t1 = step(1, {"description": description})
    if t1 is None:
        return run
    run.kind = kind_override or parse_kind(t1.result)

    t2 = step(2, {"description": description})
    if t2 is None:
        return run

    step3_results = []
    for tag in step3_tags(kb, run.kind):
        t3 = step(3, {"Input": "\n".join([t2.result, *step3_results])}, tag)
        if t3 is None:
            return run
        step3_results.append(t3.result)

    t4 = step(4, {"description": description})
    if t4 is None:
        return run

    t5 = step(5, {"Input_Info": "\n".join([*step3_results, t4.result])})
    if t5 is None:
        return run
    try:
        ir = parse_ir(t5.result)
    except IRError as exc:
        t5.outcome, t5.error = EXTRACTION_FAILED, f"{type(exc).__name__}: {exc}"
        return run
    run.ir = _canonical_section(ir, catalog)

    t6 = step(6, {"JSON_file": t5.result})
    if t6 is None:
        return run
    run.script = _strip_fence(t6.result)

    run.verify = _verify(run, t2.result, t4.result, catalog, tolerance)
    return run


def _canonical_section(ir: DrawingIR, catalog: PrecastCatalog) -> DrawingIR:
    if isinstance(ir, PrecastDrawing):
        try:
            name = catalog.canonical_name(ir.section_type)
        except GeometryError:
            return ir
        if name != ir.section_type:
            from dataclasses import replace

            return replace(ir, section_type=name)
    return ir


_FENCE = re.compile(r"^```[\w-]*\n(.*?)\n?```\s*$", re.S)


def _strip_fence(code: str) -> str:
    m = _FENCE.match(code.strip())
    return (m.group(1) if m else code.strip()) + "\n"


def _verify(run: PipelineRun, fields_text: str, other_text: str, catalog, tolerance: float) -> VerifyReport | None:
    """Check the IR against the oracle when a spec can be recovered from step 2."""
    from ..frontend import FrontendError, fields_to_spec, parse_fields

    try:
        spec = fields_to_spec(parse_fields(fields_text), run.kind, catalog)
    except (FrontendError, GeometryError):
        return None
    try:
        return verify_ir(run.ir, spec, tolerance, catalog=catalog)
    except GeometryError as exc:
        report = VerifyReport(tolerance=tolerance)
        from ..geometry import Mismatch

        report.mismatches.append(Mismatch("kind", run.kind.value, str(exc)))
        return report


def records_from_run(run: PipelineRun) -> list[dict]:
    """Turn a run into replay records, e.g. to freeze a live session."""
    out = []
    for t in run.transcripts:
        calls = tuple((c.name, c.args) for c in t.tool_calls)
        rec = ReplayRecord(t.step, t.sub_step, t.final_completion, calls, prompt_hash(t.prompt))
        out.append(rec.to_json())
    return out
