"""Drawing intermediate representation and its JSON surface.

One ``DrawingIR`` describes one beam cross-section drawing. The JSON form uses
the knowledge-base key names verbatim (including their odd capitalisation) so
that LLM output and deterministic output share a single schema.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, ClassVar, Literal, NamedTuple, Union

DECIMALS = 4


class IRError(ValueError):
    """Base class for IR parse failures."""


class MalformedJson(IRError):
    pass


class MissingKey(IRError):
    def __init__(self, path: str):
        super().__init__(f"missing key: {path}")
        self.path = path


class UnknownKey(IRError):
    def __init__(self, path: str):
        super().__init__(f"unknown key: {path}")
        self.path = path


class BadType(IRError):
    def __init__(self, path: str, detail: str):
        super().__init__(f"bad value at {path}: {detail}")
        self.path = path


class InvariantViolation(IRError):
    pass


class DrawingKind(str, Enum):
    RC = "rectangular concrete beam cross-section"
    STEEL = "steel beam cross-section"
    PRECAST = "precast beam cross-section"

    @classmethod
    def from_text(cls, text: str) -> "DrawingKind":
        norm = " ".join(text.lower().split())
        for kind in cls:
            if kind.value == norm:
                return kind
        raise ValueError(f"unknown drawing kind: {text!r}")


class Unit(str, Enum):
    INCH = "Inch"
    MILLIMETER = "Millimeter"

    @property
    def insunits(self) -> int:
        # DXF $INSUNITS codes
        return {Unit.INCH: 1, Unit.MILLIMETER: 4}[self]

    @property
    def per_inch(self) -> float:
        return {Unit.INCH: 1.0, Unit.MILLIMETER: 25.4}[self]

    @classmethod
    def parse(cls, text: str) -> "Unit":
        norm = text.strip().lower().rstrip(".")
        if norm in {"inch", "inches", "in", '"'}:
            return cls.INCH
        if norm in {"millimeter", "millimeters", "millimetre", "millimetres", "mm"}:
            return cls.MILLIMETER
        raise ValueError(f"unknown unit: {text!r}")


SaveTarget = Union[Literal[False], str]


class Point2(NamedTuple):
    x: float
    y: float


class Segment(NamedTuple):
    end1: Point2
    end2: Point2


class ArcSpec(NamedTuple):
    center: Point2
    radius: float
    start_angle: float
    end_angle: float


class CircleSpec(NamedTuple):
    center: Point2
    radius: float


class Vertices(NamedTuple):
    bottom_left: Point2
    top_left: Point2
    top_right: Point2
    bottom_right: Point2


class Sides(NamedTuple):
    left: Segment
    top: Segment
    right: Segment
    bottom: Segment


@dataclass(frozen=True, kw_only=True)
class DrawingIR:
    save: SaveTarget = False
    unit: Unit = Unit.MILLIMETER
    kind: ClassVar[DrawingKind]


@dataclass(frozen=True, kw_only=True)
class RcDrawing(DrawingIR):
    vertices: Vertices
    sides: Sides
    rebar_centers: tuple[Point2, ...]
    rebar_radii: tuple[float, ...]
    stirrup: tuple[float, float]  # (radius, diameter)
    stirrup_lines: tuple[Segment, ...]  # L1..L8
    stirrup_arcs: tuple[ArcSpec, ...]  # A1..A4
    hook_lines: tuple[Segment, ...]  # Lh1..Lh6
    kind: ClassVar[DrawingKind] = DrawingKind.RC


@dataclass(frozen=True, kw_only=True)
class SteelDrawing(DrawingIR):
    section_type: str
    bottom_left: Point2 = Point2(0.0, 0.0)
    kind: ClassVar[DrawingKind] = DrawingKind.STEEL


@dataclass(frozen=True, kw_only=True)
class PrecastDrawing(DrawingIR):
    section_type: str
    bottom_left: Point2 = Point2(0.0, 0.0)
    strand_centers: tuple[Point2, ...] = ()
    kind: ClassVar[DrawingKind] = DrawingKind.PRECAST


# -- key names -------------------------------------------------------------

K_SAVE = "Save"
K_UNIT = "Unit"
K_TYPE = "Type of Structural drawing"
K_VERTICES = "Coordinates of Four Vertices"
K_SIDES = "End Point of Four Sides"
K_CENTERS = "Center of Rebars"
K_RADII = "Radius of Rebars"
K_STIRRUP = "Radius and Diameter of Stirrup"
K_LINES = "End Points of Internal and External Lines of Stirrup"
K_ARCS = "Arc Lines of Stirrup"
K_HOOKS = "Hook lines of Stirrup"
K_SECTION = "Type of the requested steel beam cross-section"
K_POSITION = "Position of the bottom left of the steel beam cross-section"
K_STRANDS = "Position of the strands"

VERTEX_KEYS = ("bottom left", "top left", "top right", "bottom right")
SIDE_KEYS = ("left", "top", "right", "bottom")
LINE_KEYS = tuple(f"L{i}" for i in range(1, 9))
ARC_KEYS = tuple(f"A{i}" for i in range(1, 5))
HOOK_KEYS = tuple(f"Lh{i}" for i in range(1, 7))

KEYS_BY_KIND: dict[DrawingKind, tuple[str, ...]] = {
    DrawingKind.RC: (
        K_SAVE, K_UNIT, K_TYPE, K_VERTICES, K_SIDES, K_CENTERS, K_RADII,
        K_STIRRUP, K_LINES, K_ARCS, K_HOOKS,
    ),
    DrawingKind.STEEL: (K_SAVE, K_UNIT, K_TYPE, K_SECTION, K_POSITION),
    DrawingKind.PRECAST: (K_SAVE, K_UNIT, K_TYPE, K_SECTION, K_POSITION, K_STRANDS),
}


# -- numbers ---------------------------------------------------------------

def rounded(value: float, decimals: int = DECIMALS) -> float:
    out = round(float(value), decimals)
    return 0.0 if out == 0 else out


def fmt(value: float) -> str:
    """Shortest text for a coordinate: 4 decimals at most, trailing zeros dropped."""
    v = rounded(value)
    if v.is_integer():
        return str(int(v))
    return repr(v)


def _num(value: float) -> int | float:
    v = rounded(value)
    return int(v) if v.is_integer() else v


def pt(x: float, y: float) -> Point2:
    return Point2(rounded(x), rounded(y))


# -- parsing ---------------------------------------------------------------

_NUM_RE = r"[-+]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?"
_PAIR_RE = re.compile(rf"[\(\[]\s*({_NUM_RE})\s*,\s*({_NUM_RE})\s*[\)\]]")


def parse_point_text(text: str, path: str = "") -> Point2:
    m = _PAIR_RE.fullmatch(text.strip())
    if not m:
        raise BadType(path, f"expected '(x, y)', got {text!r}")
    return Point2(float(m.group(1)), float(m.group(2)))


def parse_points_text(text: str, path: str = "") -> list[Point2]:
    stripped = text.strip()
    if not stripped:
        return []
    pairs = _PAIR_RE.findall(stripped)
    leftover = _PAIR_RE.sub("", stripped).replace(",", "").strip()
    if leftover.startswith("[") and leftover.endswith("]"):
        leftover = leftover[1:-1].strip()
    if not pairs or leftover:
        raise BadType(path, f"expected a list of '[x, y]' pairs, got {text!r}")
    return [Point2(float(x), float(y)) for x, y in pairs]


def _norm_key(key: str) -> str:
    return " ".join(key.split()).casefold()


class _Obj:
    """Case-insensitive view over a JSON object that tracks which keys were read."""

    def __init__(self, raw: Any, path: str):
        if not isinstance(raw, dict):
            raise BadType(path or "$", "expected an object")
        self.path = path
        self.items: dict[str, tuple[str, Any]] = {}
        for k, v in raw.items():
            self.items[_norm_key(k)] = (k, v)
        self.used: set[str] = set()

    def child_path(self, key: str) -> str:
        return f"{self.path}.{key}" if self.path else key

    def get(self, key: str, default: Any = ...) -> Any:
        norm = _norm_key(key)
        if norm not in self.items:
            if default is ...:
                raise MissingKey(self.child_path(key))
            return default
        self.used.add(norm)
        return self.items[norm][1]

    def finish(self) -> None:
        for norm, (original, _) in self.items.items():
            if norm not in self.used:
                raise UnknownKey(self.child_path(original))


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise BadType(path, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise BadType(path, "number is not finite")
    return float(value)


def _point(value: Any, path: str) -> Point2:
    if not isinstance(value, list) or len(value) != 2:
        raise BadType(path, f"expected [x, y], got {value!r}")
    return Point2(_number(value[0], f"{path}[0]"), _number(value[1], f"{path}[1]"))


def _position(value: Any, path: str) -> Point2:
    if isinstance(value, str):
        return parse_point_text(value, path)
    return _point(value, path)


def _segment(value: Any, path: str) -> Segment:
    obj = _Obj(value, path)
    seg = Segment(
        _point(obj.get("end1"), obj.child_path("end1")),
        _point(obj.get("end2"), obj.child_path("end2")),
    )
    obj.finish()
    return seg


def _arc(value: Any, path: str) -> ArcSpec:
    if not isinstance(value, list) or len(value) != 5:
        raise BadType(path, f"expected [cx, cy, radius, start, end], got {value!r}")
    cx, cy, r, a0, a1 = (_number(v, f"{path}[{i}]") for i, v in enumerate(value))
    return ArcSpec(Point2(cx, cy), r, a0, a1)


def _keyed(value: Any, path: str, keys: tuple[str, ...], conv) -> tuple:
    obj = _Obj(value, path)
    out = tuple(conv(obj.get(k), obj.child_path(k)) for k in keys)
    obj.finish()
    return out


def _save(value: Any) -> SaveTarget:
    if value is False:
        return False
    if isinstance(value, str):
        if value.strip().lower() == "false":
            return False
        if value.strip():
            return value
    raise BadType(K_SAVE, f"expected false or a path, got {value!r}")


def parse_ir(json_text: str) -> DrawingIR:
    """Parse and fully validate one drawing record."""
    try:
        raw = json.loads(json_text)
    except json.JSONDecodeError as exc:
        raise MalformedJson(str(exc)) from exc
    top = _Obj(raw, "")
    type_text = top.get(K_TYPE)
    if not isinstance(type_text, str):
        raise BadType(K_TYPE, "expected a string")
    try:
        kind = DrawingKind.from_text(type_text)
    except ValueError as exc:
        raise BadType(K_TYPE, str(exc)) from None

    save = _save(top.get(K_SAVE))
    unit_text = top.get(K_UNIT)
    try:
        unit = Unit.parse(unit_text) if isinstance(unit_text, str) else None
    except ValueError:
        unit = None
    if unit is None:
        raise BadType(K_UNIT, f"expected Inch or Millimeter, got {unit_text!r}")

    ir: DrawingIR
    if kind is DrawingKind.RC:
        centers = top.get(K_CENTERS)
        radii = top.get(K_RADII)
        if not isinstance(centers, list):
            raise BadType(K_CENTERS, "expected a list")
        if not isinstance(radii, list):
            raise BadType(K_RADII, "expected a list")
        stirrup = top.get(K_STIRRUP)
        if not isinstance(stirrup, list) or len(stirrup) != 2:
            raise BadType(K_STIRRUP, "expected [radius, diameter]")
        ir = RcDrawing(
            save=save,
            unit=unit,
            vertices=Vertices(*_keyed(top.get(K_VERTICES), K_VERTICES, VERTEX_KEYS, _point)),
            sides=Sides(*_keyed(top.get(K_SIDES), K_SIDES, SIDE_KEYS, _segment)),
            rebar_centers=tuple(_point(c, f"{K_CENTERS}[{i}]") for i, c in enumerate(centers)),
            rebar_radii=tuple(_number(r, f"{K_RADII}[{i}]") for i, r in enumerate(radii)),
            stirrup=(_number(stirrup[0], f"{K_STIRRUP}[0]"), _number(stirrup[1], f"{K_STIRRUP}[1]")),
            stirrup_lines=_keyed(top.get(K_LINES), K_LINES, LINE_KEYS, _segment),
            stirrup_arcs=_keyed(top.get(K_ARCS), K_ARCS, ARC_KEYS, _arc),
            hook_lines=_keyed(top.get(K_HOOKS), K_HOOKS, HOOK_KEYS, _segment),
        )
    else:
        section = top.get(K_SECTION)
        if not isinstance(section, str) or not section.strip():
            raise BadType(K_SECTION, "expected a non-empty string")
        position = _position(top.get(K_POSITION), K_POSITION)
        if kind is DrawingKind.STEEL:
            ir = SteelDrawing(save=save, unit=unit, section_type=section.strip(), bottom_left=position)
        else:
            strands = top.get(K_STRANDS)
            if isinstance(strands, str):
                points = parse_points_text(strands, K_STRANDS)
            elif isinstance(strands, list):
                points = [_point(s, f"{K_STRANDS}[{i}]") for i, s in enumerate(strands)]
            else:
                raise BadType(K_STRANDS, "expected a list of [x, y]")
            ir = PrecastDrawing(
                save=save, unit=unit, section_type=section.strip(),
                bottom_left=position, strand_centers=tuple(points),
            )
    top.finish()
    problems = validate(ir)
    if problems:
        raise InvariantViolation("; ".join(str(p) for p in problems))
    return ir


# -- validation ------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    def __bool__(self) -> bool:
        return bool(self.violations)

    def __len__(self) -> int:
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    def add(self, path: str, message: str) -> None:
        self.violations.append(Violation(path, message))


_EPS = 1e-4


def _finite(p: Point2) -> bool:
    return math.isfinite(p.x) and math.isfinite(p.y)


def validate(ir: DrawingIR) -> ValidationReport:
    report = ValidationReport()
    if ir.save is not False and not (isinstance(ir.save, str) and ir.save.strip()):
        report.add(K_SAVE, "must be False or a non-empty path")
    if isinstance(ir, RcDrawing):
        _validate_rc(ir, report)
    elif isinstance(ir, (SteelDrawing, PrecastDrawing)):
        if not ir.section_type.strip():
            report.add(K_SECTION, "empty section type")
        if not _finite(ir.bottom_left):
            report.add(K_POSITION, "non-finite coordinate")
        if isinstance(ir, PrecastDrawing):
            for i, c in enumerate(ir.strand_centers):
                if not _finite(c):
                    report.add(f"{K_STRANDS}[{i}]", "non-finite coordinate")
    return report


def _check_segment(report: ValidationReport, path: str, seg: Segment) -> None:
    if not (_finite(seg.end1) and _finite(seg.end2)):
        report.add(path, "non-finite coordinate")
    elif seg.end1 == seg.end2:
        report.add(path, "degenerate segment (end1 == end2)")


def _validate_rc(ir: RcDrawing, report: ValidationReport) -> None:
    if len(ir.rebar_centers) != len(ir.rebar_radii):
        report.add(
            K_CENTERS,
            f"{len(ir.rebar_centers)} centers but {len(ir.rebar_radii)} radii",
        )
    if not ir.rebar_centers:
        report.add(K_CENTERS, "no rebars")
    for i, r in enumerate(ir.rebar_radii):
        if not r > 0:
            report.add(f"{K_RADII}[{i}]", f"radius must be positive, got {r}")
    for i, c in enumerate(ir.rebar_centers):
        if not _finite(c):
            report.add(f"{K_CENTERS}[{i}]", "non-finite coordinate")
    rs, ds = ir.stirrup
    if not rs > 0:
        report.add(K_STIRRUP, f"stirrup radius must be positive, got {rs}")
    if abs(ds - 2 * rs) > _EPS:
        report.add(K_STIRRUP, f"diameter {ds} != 2 * radius {rs}")
    expected_sides = (
        (ir.vertices.bottom_left, ir.vertices.top_left),
        (ir.vertices.top_left, ir.vertices.top_right),
        (ir.vertices.top_right, ir.vertices.bottom_right),
        (ir.vertices.bottom_right, ir.vertices.bottom_left),
    )
    for key, side, (a, b) in zip(SIDE_KEYS, ir.sides, expected_sides):
        _check_segment(report, f"{K_SIDES}.{key}", side)
        if {tuple(side.end1), tuple(side.end2)} != {tuple(a), tuple(b)}:
            report.add(f"{K_SIDES}.{key}", "end points do not match the vertices")
    for keys, segs, label in ((LINE_KEYS, ir.stirrup_lines, K_LINES), (HOOK_KEYS, ir.hook_lines, K_HOOKS)):
        if len(segs) != len(keys):
            report.add(label, f"expected {len(keys)} lines, got {len(segs)}")
        for key, seg in zip(keys, segs):
            _check_segment(report, f"{label}.{key}", seg)
    if len(ir.stirrup_arcs) != len(ARC_KEYS):
        report.add(K_ARCS, f"expected 4 arcs, got {len(ir.stirrup_arcs)}")
    for key, arc in zip(ARC_KEYS, ir.stirrup_arcs):
        path = f"{K_ARCS}.{key}"
        if not _finite(arc.center):
            report.add(path, "non-finite center")
        if not arc.radius > 0:
            report.add(path, f"radius must be positive, got {arc.radius}")
        for angle in (arc.start_angle, arc.end_angle):
            if not 0 <= angle < 360:
                report.add(path, f"angle {angle} outside [0, 360)")


# -- serialization ---------------------------------------------------------

def _jpoint(p: Point2) -> list:
    return [_num(p.x), _num(p.y)]


def _jseg(s: Segment) -> dict:
    return {"end1": _jpoint(s.end1), "end2": _jpoint(s.end2)}


def point_text(p: Point2) -> str:
    return f"({fmt(p.x)}, {fmt(p.y)})"


def points_text(points) -> str:
    return ", ".join(f"[{fmt(p.x)}, {fmt(p.y)}]" for p in points)


def to_json_obj(ir: DrawingIR) -> dict:
    out: dict[str, Any] = {
        K_SAVE: ir.save,
        K_UNIT: ir.unit.value,
        K_TYPE: ir.kind.value,
    }
    if isinstance(ir, RcDrawing):
        out[K_VERTICES] = dict(zip(VERTEX_KEYS, map(_jpoint, ir.vertices)))
        out[K_SIDES] = dict(zip(SIDE_KEYS, map(_jseg, ir.sides)))
        out[K_CENTERS] = [_jpoint(c) for c in ir.rebar_centers]
        out[K_RADII] = [_num(r) for r in ir.rebar_radii]
        out[K_STIRRUP] = [_num(ir.stirrup[0]), _num(ir.stirrup[1])]
        out[K_LINES] = dict(zip(LINE_KEYS, map(_jseg, ir.stirrup_lines)))
        out[K_ARCS] = {
            k: [_num(a.center.x), _num(a.center.y), _num(a.radius), _num(a.start_angle), _num(a.end_angle)]
            for k, a in zip(ARC_KEYS, ir.stirrup_arcs)
        }
        out[K_HOOKS] = dict(zip(HOOK_KEYS, map(_jseg, ir.hook_lines)))
    elif isinstance(ir, (SteelDrawing, PrecastDrawing)):
        out[K_SECTION] = ir.section_type
        out[K_POSITION] = point_text(ir.bottom_left)
        if isinstance(ir, PrecastDrawing):
            out[K_STRANDS] = points_text(ir.strand_centers)
    else:
        raise TypeError(f"not a drawing IR: {type(ir).__name__}")
    return out


_NUM_LIST = re.compile(r"\[\s*([-+\d.eE,\s]+?)\s*\]")
_SEG_OBJ = re.compile(r'\{\s*"end1": (\[[^\]]*\]),\s*"end2": (\[[^\]]*\])\s*\}')


def serialize_ir(ir: DrawingIR) -> str:
    """Canonical JSON text: fixed key order, 2-space indent, trimmed numbers.

    Numeric lists and end-point pairs are kept on one line, the way the
    knowledge-base examples print them.
    """
    text = json.dumps(to_json_obj(ir), indent=2, ensure_ascii=False)
    text = _NUM_LIST.sub(lambda m: "[" + ", ".join(v.strip() for v in m.group(1).split(",")) + "]", text)
    text = _SEG_OBJ.sub(r'{"end1": \1, "end2": \2}', text)
    return text + "\n"


def canonical(ir: DrawingIR) -> DrawingIR:
    """The IR as it reads back after one serialization pass (4-decimal values)."""
    return parse_ir(serialize_ir(ir))
