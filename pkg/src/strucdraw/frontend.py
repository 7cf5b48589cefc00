"""Bullet-list field format shared by hand-written input and step-2 answers.

    - Height of cross-section: 24in
    - Rebar information:
        - Top layer: 4 No 8
        - Bottom layer: 2 No 4

Quantities are ``<number><unit>`` with unit ``in`` or ``mm``; bar schedules
are ``<count> No <n>``; layers are Top, Middle, Middle k and Bottom, where
middle layers are numbered from the bottom.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from .geometry import (
    BarSize,
    GeometryError,
    LayerSpec,
    PrecastCatalog,
    PrecastSpec,
    RcSectionSpec,
    Spec,
    SteelSpec,
    default_catalog,
)
from .ir import DrawingKind, Point2, SaveTarget, Unit, fmt, parse_point_text


class FrontendError(ValueError):
    pass


class DuplicateField(FrontendError):
    def __init__(self, name: str):
        super().__init__(f"duplicate field: {name}")
        self.name = name


class EmptyValue(FrontendError):
    def __init__(self, name: str):
        super().__init__(f"field has no value: {name}")
        self.name = name


class MissingMandatory(FrontendError):
    def __init__(self, names: list[str]):
        super().__init__(f"missing mandatory field(s): {', '.join(names)}")
        self.names = list(names)


class UnparsableQuantity(FrontendError):
    def __init__(self, name: str, raw: str):
        super().__init__(f"cannot parse {name}: {raw!r}")
        self.name = name
        self.raw = raw


class MixedUnits(FrontendError):
    pass


class UnsupportedReference(FrontendError):
    pass


@dataclass(frozen=True)
class Field:
    name: str
    value: str
    children: tuple["Field", ...] = ()


@dataclass(frozen=True)
class FieldBlock:
    fields: tuple[Field, ...] = ()

    def __len__(self) -> int:
        return len(self.fields)

    def __iter__(self) -> Iterator[Field]:
        return iter(self.fields)

    def get(self, *names: str) -> Field | None:
        wanted = {_key(n) for n in names}
        for f in self.fields:
            if _key(f.name) in wanted:
                return f
        return None

    def pairs(self) -> list[tuple[str, str]]:
        return [(f.name, f.value) for f in self.fields]

    def render(self) -> str:
        lines = []
        for f in self.fields:
            lines.append(f"- {f.name}: {f.value}".rstrip())
            lines.extend(f"    - {c.name}: {c.value}".rstrip() for c in f.children)
        return "\n".join(lines) + "\n"


def _key(name: str) -> str:
    return " ".join(re.sub(r"[^\w\s]", " ", name).split()).casefold()


_BULLET = re.compile(r"^(\s*)[-*•]\s+(.*)$")


def parse_fields(text: str) -> FieldBlock:
    """Bulleted ``- Name: Value`` lines; indented bullets nest under the one above."""
    top: list[tuple[str, str, list]] = []
    top_indent: int | None = None
    for raw in text.replace("\t", "    ").splitlines():
        m = _BULLET.match(raw)
        if not m:
            continue
        indent, body = len(m.group(1)), m.group(2).strip()
        name, sep, value = body.partition(":")
        if not sep:
            continue
        name, value = name.strip(), value.strip()
        if top_indent is None:
            top_indent = indent
        if indent > top_indent and top:
            top[-1][2].append((name, value))
        else:
            top.append((name, value, []))
    fields = []
    seen = set()
    for name, value, kids in top:
        if _key(name) in seen:
            raise DuplicateField(name)
        seen.add(_key(name))
        kid_seen = set()
        children = []
        for cname, cvalue in kids:
            if _key(cname) in kid_seen:
                raise DuplicateField(cname)
            kid_seen.add(_key(cname))
            if not cvalue:
                raise EmptyValue(cname)
            children.append(Field(cname, cvalue))
        if not value and not children:
            raise EmptyValue(name)
        fields.append(Field(name, value, tuple(children)))
    return FieldBlock(tuple(fields))


# -- value grammars --------------------------------------------------------

_QTY = re.compile(r"^\s*([-+]?(?:\d+(?:\.\d*)?|\.\d+))\s*(in|inch|inches|\"|mm|millimeters?|millimetres?)?\.?\s*$", re.I)
_BAR = re.compile(r"(?:#|\bNo\.?\s*)(\d+)", re.I)
_SCHEDULE = re.compile(r"^\s*(\d+)\s*(?:x\s*|[×*]\s*)?(?:#|No\.?\s*)(\d+)\b", re.I)


def parse_quantity(name: str, raw: str) -> tuple[float, Unit | None]:
    m = _QTY.match(raw)
    if not m:
        raise UnparsableQuantity(name, raw)
    unit = Unit.parse(m.group(2)) if m.group(2) else None
    return float(m.group(1)), unit


def parse_bar(name: str, raw: str) -> BarSize:
    m = _BAR.search(raw)
    if not m:
        raise UnparsableQuantity(name, raw)
    try:
        return BarSize(int(m.group(1)))
    except GeometryError:
        raise UnparsableQuantity(name, raw) from None


def parse_schedule(name: str, raw: str) -> LayerSpec:
    m = _SCHEDULE.match(raw)
    if not m:
        raise UnparsableQuantity(name, raw)
    try:
        return LayerSpec(int(m.group(1)), BarSize(int(m.group(2))))
    except GeometryError:
        raise UnparsableQuantity(name, raw) from None


# -- field name aliases ----------------------------------------------------

HEIGHT = ("Height of cross-section", "Height", "Height of the cross-section")
WIDTH = ("Width of cross-section", "Width", "Width of the cross-section")
COVER = ("Thickness of clear cover", "Thinkness of clear cover", "Clear cover", "Cover")
STIRRUP = ("Stirrup information", "Stirrup", "Stirrups")
REBARS = ("Rebar information", "Rebars", "Reinforcement")
LAYER_COUNT = ("Number of rebars", "Number of layers", "Number of rebar layers")
ORIGIN = ("Bottom left vertex", "Bottom left", "Position", "Coordinate of Bottom Left of the Cross-section",
          "Position of the bottom left")
STEEL_TYPE = ("Steel Beam Cross-section", "Type of Steel Beam Cross-section", "Steel beam type",
              "Type of the requested steel beam cross-section", "Section")
PRECAST_TYPE = ("Type of Precast Beam Cross-section", "Precast Beam Cross-section", "Precast beam type",
                "Type of the requested precast beam cross-section", "Section")
STRANDS = ("Number of Strands", "Strands", "Number of strand")
KIND_FIELD = ("Type of Structure", "Type of structural drawing")

_LAYER = re.compile(r"^(top|bottom|middle)(?:\s*(\d+))?(?:\s*layer)?(?:\s*(\d+))?$")


def _layers(fields: FieldBlock) -> list[tuple[str, LayerSpec]] | None:
    group = fields.get(*REBARS)
    items = list(group.children) if group is not None else []
    if not items:
        items = [f for f in fields if _LAYER.match(_key(f.name))]
    if not items:
        return None
    top = bottom = None
    middles: list[tuple[int, int, LayerSpec]] = []
    for i, f in enumerate(items):
        m = _LAYER.match(_key(f.name))
        if not m:
            raise UnparsableQuantity(f.name, f.value)
        layer = parse_schedule(f.name, f.value)
        where, k = m.group(1), m.group(2) or m.group(3)
        if where == "top":
            top = layer
        elif where == "bottom":
            bottom = layer
        else:
            # numbered middles count up from the bottom; unnumbered keep listed (top-down) order
            middles.append((int(k) if k else -i, i, layer))
    ordered = [layer for *_, layer in sorted(middles, key=lambda t: (-t[0], t[1]))]
    out = []
    if top is not None:
        out.append(("Top layer", top))
    out.extend(("Middle layer", layer) for layer in ordered)
    if bottom is not None:
        out.append(("Bottom layer", bottom))
    return out


def _point_field(f: Field) -> Point2:
    value = f.value
    head, sep, rest = value.partition(":")
    if sep and not re.search(r"\d", head):
        if "bottom left" not in _key(head):
            raise UnsupportedReference(
                f"only the bottom-left corner can be given as a reference point, got {head.strip()!r}"
            )
        value = rest
    try:
        return parse_point_text(value, f.name)
    except ValueError:
        raise UnparsableQuantity(f.name, f.value) from None


def _section_name(fields: FieldBlock, aliases: tuple[str, ...]) -> str | None:
    f = fields.get(*aliases)
    if f is not None:
        return f.value
    f = fields.get(*KIND_FIELD)
    if f is not None:
        try:
            DrawingKind.from_text(f.value)
        except ValueError:
            return f.value  # step-2 answers sometimes put the section name here
    return None


def infer_kind(fields: FieldBlock, catalog: PrecastCatalog | None = None) -> DrawingKind | None:
    """The kind named in the fields, else guessed from which section fields are present."""
    f = fields.get(*KIND_FIELD)
    if f is not None:
        try:
            return DrawingKind.from_text(f.value)
        except ValueError:
            pass
    name = _section_name(fields, PRECAST_TYPE)
    if name:
        try:
            (catalog or default_catalog()).lookup(name)
            return DrawingKind.PRECAST
        except GeometryError:
            pass
    if fields.get(*STRANDS) is not None:
        return DrawingKind.PRECAST
    if _section_name(fields, STEEL_TYPE):
        return DrawingKind.STEEL
    if fields.get(*HEIGHT) is not None and fields.get(*REBARS) is not None:
        return DrawingKind.RC
    return None


def fields_to_spec(fields: FieldBlock, kind: DrawingKind, catalog: PrecastCatalog | None = None) -> Spec:
    if kind is DrawingKind.RC:
        return _rc_spec(fields)
    if kind is DrawingKind.STEEL:
        name = _section_name(fields, STEEL_TYPE)
        if not name:
            raise MissingMandatory([STEEL_TYPE[0]])
        f = fields.get(*ORIGIN)
        return SteelSpec(name.strip(), _point_field(f) if f else Point2(0.0, 0.0))
    if kind is DrawingKind.PRECAST:
        name = _section_name(fields, PRECAST_TYPE)
        count = fields.get(*STRANDS)
        missing = [n for n, v in ((PRECAST_TYPE[0], name), (STRANDS[0], count)) if not v]
        if missing:
            raise MissingMandatory(missing)
        m = re.match(r"^\s*(\d+)\b", count.value)
        if not m:
            raise UnparsableQuantity(count.name, count.value)
        catalog = catalog or default_catalog()
        f = fields.get(*ORIGIN)
        return PrecastSpec(
            catalog.canonical_name(name.strip()),
            int(m.group(1)),
            _point_field(f) if f else Point2(0.0, 0.0),
        )
    raise FrontendError(f"unsupported drawing kind {kind!r}")


def _rc_spec(fields: FieldBlock) -> RcSectionSpec:
    found = {
        "height": fields.get(*HEIGHT),
        "width": fields.get(*WIDTH),
        "cover": fields.get(*COVER),
        "stirrup": fields.get(*STIRRUP),
    }
    layers = _layers(fields)
    missing = [
        canon for key, canon in (
            ("height", HEIGHT[0]), ("width", WIDTH[0]), ("layers", REBARS[0]),
            ("stirrup", STIRRUP[0]), ("cover", COVER[0]),
        )
        if (layers if key == "layers" else found[key]) is None
    ]
    if missing:
        raise MissingMandatory(missing)

    values, units = {}, set()
    for key in ("height", "width", "cover"):
        f = found[key]
        values[key], unit = parse_quantity(f.name, f.value)
        if unit is not None:
            units.add(unit)
    if len(units) > 1:
        raise MixedUnits("all lengths of one section must use the same unit, got " + ", ".join(sorted(u.value for u in units)))
    unit = units.pop() if units else Unit.MILLIMETER

    count = fields.get(*LAYER_COUNT)
    if count is not None:
        m = re.match(r"^\s*(\d+)\s*layers?\b", count.value, re.I)
        if m and int(m.group(1)) != len(layers):
            raise FrontendError(f"{count.name} says {m.group(1)} layers but {len(layers)} are listed")

    origin = fields.get(*ORIGIN)
    try:
        return RcSectionSpec(
            width=values["width"],
            height=values["height"],
            cover=values["cover"],
            stirrup_bar=parse_bar(found["stirrup"].name, found["stirrup"].value),
            layers=tuple(layer for _, layer in layers),
            origin=_point_field(origin) if origin else Point2(0.0, 0.0),
            unit=unit,
        )
    except GeometryError as exc:
        raise FrontendError(str(exc)) from exc


def _qty(value: float, unit: Unit) -> str:
    return f"{fmt(value)}{'in' if unit is Unit.INCH else 'mm'}"


def _point(p: Point2) -> str:
    return f"({fmt(p.x)}, {fmt(p.y)})"


def render_fields(spec: Spec) -> str:
    """Canonical bullet text that ``fields_to_spec`` reads back to ``spec``."""
    if isinstance(spec, RcSectionSpec):
        n = len(spec.layers)
        names = ["Top layer"] if n > 1 else ["Bottom layer"]
        if n > 1:
            mids = n - 2
            names += ["Middle layer" if mids == 1 else f"Middle layer {mids - i}" for i in range(mids)]
            names.append("Bottom layer")
        kids = tuple(
            Field(name, f"{layer.count} No {layer.bar.designation}") for name, layer in zip(names, spec.layers)
        )
        fields = [
            Field("Type of Structure", DrawingKind.RC.value),
            Field("Height of cross-section", _qty(spec.height, spec.unit)),
            Field("Width of cross-section", _qty(spec.width, spec.unit)),
            Field("Number of rebars", f"{n} layer{'s' if n > 1 else ''}"),
            Field("Rebar information", "", kids),
            Field("Stirrup information", f"No {spec.stirrup_bar.designation}"),
            Field("Thickness of clear cover", _qty(spec.cover, spec.unit)),
        ]
        if spec.origin != (0, 0):
            fields.append(Field("Bottom left vertex", _point(spec.origin)))
    elif isinstance(spec, SteelSpec):
        fields = [
            Field("Type of Structure", DrawingKind.STEEL.value),
            Field("Steel Beam Cross-section", spec.section_type),
            Field("Position", f"Bottom Left Vertex: {_point(spec.bottom_left)}"),
        ]
    elif isinstance(spec, PrecastSpec):
        fields = [
            Field("Type of Structure", DrawingKind.PRECAST.value),
            Field("Type of Precast Beam Cross-section", spec.section_type),
            Field("Position", f"Bottom Left Vertex: {_point(spec.bottom_left)}"),
            Field("Number of Strands", str(spec.strand_count)),
        ]
    else:
        raise FrontendError(f"cannot render {type(spec).__name__}")
    return FieldBlock(tuple(fields)).render()


@dataclass(frozen=True)
class OtherInfo:
    save: SaveTarget = False
    unit: Unit = Unit.MILLIMETER


def parse_other_info(text: str) -> OtherInfo:
    """Read ``Save: ...`` and ``Unit: ...`` lines; absent lines take the defaults."""
    save: SaveTarget = False
    unit = Unit.MILLIMETER
    for line in text.splitlines():
        line = line.strip().lstrip("-*").strip()
        key, sep, value = line.partition(":")
        if not sep:
            continue
        key, value = key.strip().casefold(), value.strip().strip("'\"")
        if key == "save":
            save = False if value.casefold() in {"false", "no", "none", ""} else value
        elif key == "unit":
            try:
                unit = Unit.parse(value)
            except ValueError:
                raise UnparsableQuantity("Unit", value) from None
    return OtherInfo(save, unit)
