"""Per-step accuracy over repeated runs of a corpus.

A step counts as a success only if it produced an answer and that answer is
right: kinds and fields must match the expected spec, step-3 values must match
the deterministic geometry, the JSON must verify against the oracle, and the
script must draw the expected entities when traced.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from ..emit import Arc, Circle, Line, ScriptError, TemplateLibrary, ir_to_entities, template_name, trace_script
from ..frontend import FrontendError, OtherInfo, fields_to_spec, parse_fields, parse_other_info
from ..geometry import (
    GeometryError,
    PrecastCatalog,
    PrecastSpec,
    RcSectionSpec,
    Spec,
    SteelSpec,
    corner_rebars,
    default_catalog,
    hook_length,
    layout_rebars,
    resolve,
    verify_ir,
)
from ..ir import DrawingIR, DrawingKind, Unit
from ..knowledge import KnowledgeBase
from .agent import PipelineRun, StepTranscript, UnknownDrawingKind, parse_kind, run_pipeline
from .prompts import PromptTemplate
from .providers import Provider, ProviderConfig

COLUMNS = ("1", "2", "3", "3-1", "3-2", "3-3", "4", "5", "6")


@dataclass(frozen=True)
class CorpusCase:
    name: str
    description: str
    kind: DrawingKind
    spec: Spec
    unit: Unit
    save: object = False

    @classmethod
    def from_json(cls, obj: Mapping, catalog: PrecastCatalog | None = None) -> "CorpusCase":
        kind = DrawingKind.from_text(obj["kind"])
        spec = fields_to_spec(parse_fields(obj["fields"]), kind, catalog)
        return cls(obj.get("name", ""), obj["description"], kind, spec, Unit.parse(obj.get("unit", "Millimeter")), obj.get("save", False))

    def expected_ir(self, catalog: PrecastCatalog | None = None) -> DrawingIR:
        unit = None if isinstance(self.spec, RcSectionSpec) else self.unit
        return resolve(self.spec, unit=unit, save=self.save, catalog=catalog)


def load_corpus(directory: str | Path, catalog: PrecastCatalog | None = None) -> list[CorpusCase]:
    files = sorted(Path(directory).glob("*.json"))
    if not files:
        raise FileNotFoundError(f"no corpus cases in {directory}")
    return [CorpusCase.from_json(json.loads(f.read_text(encoding="utf-8")), catalog) for f in files]


def bundled_corpus() -> list[CorpusCase]:
    from importlib import resources

    with resources.as_file(resources.files("strucdraw.data").joinpath("corpus")) as p:
        return load_corpus(p)


# -- result-line parsing ---------------------------------------------------

_NUM = re.compile(r"[-+]?(?:\d+(?:\.\d*)?|\.\d+)")


def _key(name: str) -> str:
    return " ".join(re.sub(r"[^\w\s]", " ", name).split()).casefold()


def result_lines(text: str) -> list[tuple[str, str]]:
    out = []
    for line in text.splitlines():
        line = line.strip().lstrip("-*•").strip()
        key, sep, value = line.partition(":")
        if sep:
            out.append((_key(key), value.strip()))
    return out


def numbers(text: str) -> list[float]:
    return [float(m) for m in _NUM.findall(text)]


# -- step 3 oracle ---------------------------------------------------------

class _Check:
    def __init__(self, lines: list[tuple[str, str]], tol: float):
        self.values = {}
        for k, v in lines:
            self.values.setdefault(k, v)
        self.lines = lines
        self.tol = tol
        self.ok = True

    def close(self, a: float, b: float) -> bool:
        return abs(a - b) <= self.tol

    def nums(self, key: str, expected: Sequence[float], angles: Sequence[int] = ()) -> None:
        raw = self.values.get(_key(key))
        if raw is None:
            self.ok = False
            return
        got = numbers(raw)
        if len(got) < len(expected):
            self.ok = False
            return
        got = got[: len(expected)]
        for i, (e, g) in enumerate(zip(expected, got)):
            if i in angles:
                d = abs(e - g) % 360.0
                if min(d, 360.0 - d) > self.tol:
                    self.ok = False
            elif not self.close(e, g):
                self.ok = False

    def segment(self, key: str, a, b) -> None:
        raw = self.values.get(_key(key))
        got = numbers(raw) if raw is not None else []
        if len(got) < 4:
            self.ok = False
            return
        fwd = [a.x, a.y, b.x, b.y]
        rev = [b.x, b.y, a.x, a.y]
        if not (all(map(self.close, fwd, got[:4])) or all(map(self.close, rev, got[:4]))):
            self.ok = False

    def text(self, key: str, expected: str, norm: Callable[[str], str]) -> None:
        raw = self.values.get(_key(key))
        if raw is None or norm(raw) != norm(expected):
            self.ok = False

    def tuples(self, rows: list[str], expected: list[tuple[float, ...]], width: int) -> None:
        got = []
        for raw in rows:
            vals = numbers(raw)
            if len(vals) % width:
                self.ok = False
                return
            got += [tuple(vals[i:i + width]) for i in range(0, len(vals), width)]
        if len(got) != len(expected):
            self.ok = False
            return
        for e, g in zip(sorted(expected), sorted(got)):
            if not all(map(self.close, e, g)):
                self.ok = False


def _norm_name(s: str) -> str:
    return " ".join(s.replace("_", " ").split()).casefold()


def score_step3(tag: str, result: str, case: CorpusCase, tol: float, catalog: PrecastCatalog) -> bool:
    chk = _Check(result_lines(result), tol)
    spec = case.spec
    if isinstance(spec, RcSectionSpec):
        ir = case.expected_ir(catalog)
        ds = ir.stirrup[1]
        if tag == "3-1":
            for name, p in zip(("bottom left vertex", "top left vertex", "top right vertex", "bottom right vertex"), ir.vertices):
                chk.nums(name, p)
            chk.nums("Height", [spec.height])
            chk.nums("Width", [spec.width])
            chk.nums("Radius of Stirrup", [ir.stirrup[0]])
            chk.nums("Diameter of Stirrup", [ds])
            chk.nums("Thickness of clear cover", [spec.cover])
            chk.nums("Total number of all rebars", [len(ir.rebar_centers)])
            rows = [v for k, v in chk.lines if "layer" in k.split()]
            chk.tuples(rows, [(c.x, c.y, r) for c, r in zip(ir.rebar_centers, ir.rebar_radii)], 3)
        elif tag == "3-2":
            corners = corner_rebars(layout_rebars(spec))
            chk.nums("Radius of Stirrup", [ir.stirrup[0]])
            chk.nums("Diameter of Stirrup", [ds])
            for i, c in enumerate((corners.c1, corners.c2, corners.c3, corners.c4), 1):
                chk.nums(f"C{i}", [c.center.x, c.center.y, c.radius])
            for i, s in enumerate(ir.stirrup_lines, 1):
                chk.segment(f"L{i}", *s)
            for i, a in enumerate(ir.stirrup_arcs, 1):
                chk.nums(f"A{i}", [a.center.x, a.center.y, a.radius, a.start_angle, a.end_angle], angles=(3, 4))
            chk.nums("Length of Hook", [hook_length(ds, spec.unit)])
        elif tag == "3-3":
            for i, s in enumerate(ir.hook_lines, 1):
                chk.segment(f"Lh{i}", *s)
        else:
            return False
        return chk.ok
    ir = case.expected_ir(catalog)
    if isinstance(spec, SteelSpec):
        chk.text("Type of Steel Beam Cross-section", ir.section_type, _norm_name)
    else:
        chk.text("Type of Precast Beam Cross-section", ir.section_type, _norm_name)
        rows = [v for k, v in chk.lines if k == _key("Positions of Strands")]
        if rows or ir.strand_centers:
            chk.tuples(rows, [tuple(p) for p in ir.strand_centers], 2)
    chk.nums("Coordinate of Bottom Left of the Cross-section", ir.bottom_left)
    return chk.ok


# -- step 6 oracle ---------------------------------------------------------

def _same_entity(a, b, tol: float) -> bool:
    if type(a) is not type(b):
        return False
    close = lambda u, v: abs(u - v) <= tol
    if isinstance(a, Line):
        fwd = close(a.start.x, b.start.x) and close(a.start.y, b.start.y) and close(a.end.x, b.end.x) and close(a.end.y, b.end.y)
        rev = close(a.start.x, b.end.x) and close(a.start.y, b.end.y) and close(a.end.x, b.start.x) and close(a.end.y, b.start.y)
        return fwd or rev
    if isinstance(a, Circle):
        return close(a.center.x, b.center.x) and close(a.center.y, b.center.y) and close(a.radius, b.radius)
    ang = lambda u, v: min(abs(u - v) % 360.0, 360.0 - abs(u - v) % 360.0) <= tol
    return (
        close(a.center.x, b.center.x) and close(a.center.y, b.center.y) and close(a.radius, b.radius)
        and ang(a.start_angle, b.start_angle) and ang(a.end_angle, b.end_angle)
    )


def entities_match(expected: Iterable, actual: Iterable, tol: float) -> bool:
    remaining = list(actual)
    for e in expected:
        for i, a in enumerate(remaining):
            if _same_entity(e, a, tol):
                del remaining[i]
                break
        else:
            return False
    return not remaining


_PASTE = re.compile(r"^PASTECLIP\s+(\S+?)\s*,\s*(\S+?) $")


def score_script(script: str, expected: DrawingIR, tol: float, catalog: PrecastCatalog) -> bool:
    try:
        trace = trace_script(script)
    except ScriptError:
        return False
    saves = [c for c in trace.calls if c[0] in ("SaveAs", "Save")]
    if bool(expected.save) != bool(saves):
        return False
    if expected.kind is DrawingKind.RC:
        units = trace.variables().get("INSUNITS")
        if units != expected.unit.insunits:
            return False
        return entities_match(ir_to_entities(expected), trace.entities, tol)
    # catalogue items: open the right source drawing, copy, paste at the corner, close it
    opened = trace.opened()
    stem = template_name(expected, catalog).casefold()
    sources = [p for p in opened if re.split(r"[\\/]", p)[-1].rsplit(".", 1)[0].casefold() == stem]
    if not sources or sources[0] not in trace.closed():
        return False
    commands = trace.commands()
    if "COPYCLIP " not in commands or not any(c.startswith("SELECT") for c in commands):
        return False
    pastes = [m for m in map(_PASTE.match, commands) if m]
    if len(pastes) != 1:
        return False
    try:
        px, py = float(pastes[0].group(1)), float(pastes[0].group(2))
    except ValueError:
        return False
    if abs(px - expected.bottom_left.x) > tol or abs(py - expected.bottom_left.y) > tol:
        return False
    strands = []
    if expected.kind is DrawingKind.PRECAST:
        radius = catalog.lookup(expected.section_type).strand_radius
        strands = [Circle(p, radius) for p in expected.strand_centers]
    return entities_match(strands, trace.entities, tol)


# -- scoring a run ---------------------------------------------------------

def score_run(run: PipelineRun, case: CorpusCase, tol: float, catalog: PrecastCatalog) -> dict[str, bool]:
    """Success flag per step tag; steps that never ran are failures."""
    out: dict[str, bool] = {}
    for t in run.transcripts:
        out[t.tag] = t.ok and _score_step(t, run, case, tol, catalog)
    return out


def _score_step(t: StepTranscript, run: PipelineRun, case: CorpusCase, tol: float, catalog) -> bool:
    try:
        if t.step == 1:
            return parse_kind(t.result) is case.kind
        if t.step == 2:
            return fields_to_spec(parse_fields(t.result), case.kind, catalog) == case.spec
        if t.step == 3:
            return score_step3(t.tag, t.result, case, tol, catalog)
        if t.step == 4:
            return parse_other_info(t.result) == OtherInfo(case.save, case.unit)
        if t.step == 5:
            ir = run.ir
            if ir is None or ir.kind is not case.kind or ir.unit is not case.unit or ir.save != case.save:
                return False
            return verify_ir(ir, case.spec, tol, catalog=catalog).ok
        if t.step == 6:
            return run.script is not None and score_script(run.script, case.expected_ir(catalog), tol, catalog)
    except (FrontendError, GeometryError, UnknownDrawingKind, ValueError):
        return False
    return False


def expected_tags(kind: DrawingKind, kb: KnowledgeBase) -> list[str]:
    from .agent import step3_tags

    threes = [t or "3" for t in step3_tags(kb, kind)]
    return ["1", "2", *threes, "4", "5", "6"]


@dataclass
class AccuracyTable:
    trials: int
    counts: dict[DrawingKind, dict[str, list[int]]] = field(default_factory=dict)

    def add(self, kind: DrawingKind, tag: str, success: bool) -> None:
        cell = self.counts.setdefault(kind, {}).setdefault(tag, [0, 0])
        cell[0] += int(success)
        cell[1] += 1

    def ratio(self, kind: DrawingKind, tag: str) -> float | None:
        cell = self.counts.get(kind, {}).get(tag)
        return None if cell is None or cell[1] == 0 else cell[0] / cell[1]

    def rows(self) -> list[tuple[DrawingKind, dict[str, float | None]]]:
        return [(k, {c: self.ratio(k, c) for c in COLUMNS}) for k in DrawingKind if k in self.counts]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["drawing", *COLUMNS, "trials"])
        for kind, cells in self.rows():
            w.writerow([kind.value, *("" if v is None else f"{v:.4g}" for v in cells.values()), self.trials])
        return buf.getvalue()

    def format(self) -> str:
        lines = [f"{'drawing':42}" + "".join(f"{c:>7}" for c in COLUMNS)]
        for kind, cells in self.rows():
            lines.append(f"{kind.value:42}" + "".join(
                f"{'':>7}" if v is None else f"{v * 100:>6.0f}%" for v in cells.values()
            ))
        return "\n".join(lines)


def evaluate(
    cases: Sequence[CorpusCase],
    trials: int,
    provider: Provider,
    kb: KnowledgeBase,
    *,
    config: ProviderConfig | None = None,
    templates: Mapping[int, PromptTemplate] | None = None,
    catalog: PrecastCatalog | None = None,
    tolerance: float = 1e-3,
    jobs: int = 1,
) -> AccuracyTable:
    """Run every case ``trials`` times and tabulate per-step success ratios.

    Trial ``t`` of every case is passed to the provider as ``trial=t`` so a
    seeded fault schedule hits the same trials for each case. The drawing kind
    used after step 1 is the case's own, so each step is scored on its own.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    catalog = catalog or default_catalog()
    from .prompts import load_templates

    templates = templates or load_templates()
    tasks = [(case, t) for case in cases for t in range(trials)]

    def work(task):
        case, t = task
        run = run_pipeline(
            case.description, config, provider, kb, templates=templates, catalog=catalog,
            tolerance=tolerance, trial=t, kind_override=case.kind,
        )
        return score_run(run, case, tolerance, catalog)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            scores = list(pool.map(work, tasks))
    else:
        scores = [work(task) for task in tasks]

    table = AccuracyTable(trials)
    for (case, _), score in zip(tasks, scores):
        for tag in expected_tags(case.kind, kb):
            table.add(case.kind, tag, score.get(tag, False))
    return table
