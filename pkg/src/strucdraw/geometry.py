"""Deterministic geometry for the three beam cross-section drawings.

The rectangular concrete case places longitudinal bars layer by layer inside
the clear cover and stirrup, picks the four corner bars, and builds the
stirrup (inner/outer lines, corner arcs, 135-degree hook at the top-left
bar). Steel and precast sections are catalogue items: only the insertion
point and the strand pattern vary.

Everything here is pure. Internal arithmetic is full precision; values are
rounded to 4 decimals only when a ``DrawingIR`` is produced.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Union

from .ir import (
    ArcSpec,
    CircleSpec,
    DrawingIR,
    DrawingKind,
    Point2,
    PrecastDrawing,
    RcDrawing,
    SaveTarget,
    Segment,
    Sides,
    SteelDrawing,
    Unit,
    Vertices,
    pt,
    rounded,
)

SQRT2 = math.sqrt(2.0)
HOOK_MIN_LENGTH_IN = 3.0
DEFAULT_STRAND_RADIUS = 0.5


class GeometryError(ValueError):
    pass


class NonPositiveDesignation(GeometryError):
    pass


class SectionTooSmall(GeometryError):
    pass


class EmptyLayout(GeometryError):
    pass


class UnknownPrecastType(GeometryError):
    pass


class TooManyStrands(GeometryError):
    def __init__(self, section_type: str, requested: int, maximum: int):
        super().__init__(
            f"{section_type} has {maximum} potential strand positions, {requested} requested"
        )
        self.maximum = maximum


class KindMismatch(GeometryError):
    pass


# -- specs -----------------------------------------------------------------

def bar_dims(designation: int) -> tuple[float, float]:
    """(diameter, radius) in inches of US bar No. ``designation`` (n/8 inch)."""
    if isinstance(designation, bool) or int(designation) != designation or designation < 1:
        raise NonPositiveDesignation(f"bar designation must be a positive integer, got {designation!r}")
    diameter = designation / 8.0
    return diameter, diameter / 2.0


@dataclass(frozen=True)
class BarSize:
    designation: int

    def __post_init__(self):
        bar_dims(self.designation)

    @property
    def diameter(self) -> float:
        return bar_dims(self.designation)[0]

    @property
    def radius(self) -> float:
        return bar_dims(self.designation)[1]

    def radius_in(self, unit: Unit) -> float:
        return self.radius * unit.per_inch

    def diameter_in(self, unit: Unit) -> float:
        return self.diameter * unit.per_inch


@dataclass(frozen=True)
class LayerSpec:
    count: int
    bar: BarSize

    def __post_init__(self):
        if self.count < 1:
            raise GeometryError(f"a layer needs at least one bar, got {self.count}")


@dataclass(frozen=True)
class RcSectionSpec:
    """Rectangular section; ``layers`` run top to bottom, lengths are in ``unit``."""

    width: float
    height: float
    cover: float
    stirrup_bar: BarSize
    layers: tuple[LayerSpec, ...]
    origin: Point2 = Point2(0.0, 0.0)
    unit: Unit = Unit.INCH

    kind = DrawingKind.RC

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        object.__setattr__(self, "origin", Point2(*self.origin))
        for name in ("width", "height", "cover"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise GeometryError(f"{name} must be positive, got {value}")
        if not self.layers:
            raise GeometryError("at least one rebar layer is required")

    @property
    def x1(self) -> float:
        return self.origin.x

    @property
    def y1(self) -> float:
        return self.origin.y

    @property
    def x2(self) -> float:
        return self.origin.x + self.width

    @property
    def y2(self) -> float:
        return self.origin.y + self.height


@dataclass(frozen=True)
class SteelSpec:
    section_type: str
    bottom_left: Point2 = Point2(0.0, 0.0)

    kind = DrawingKind.STEEL


@dataclass(frozen=True)
class PrecastSpec:
    section_type: str
    strand_count: int
    bottom_left: Point2 = Point2(0.0, 0.0)

    kind = DrawingKind.PRECAST


Spec = Union[RcSectionSpec, SteelSpec, PrecastSpec]


# -- rebar layout ----------------------------------------------------------

@dataclass(frozen=True)
class RebarLayout:
    """Bar circles per layer, layers ordered top to bottom like ``spec.layers``."""

    layers: tuple[tuple[CircleSpec, ...], ...]

    def drawing_order(self) -> list[CircleSpec]:
        return [c for layer in self.layers for c in layer]

    def analysis_order(self) -> list[CircleSpec]:
        """Top layer, bottom layer, then the middle layers from the bottom up."""
        if len(self.layers) == 1:
            return list(self.layers[0])
        order = [*self.layers[0], *self.layers[-1]]
        for layer in reversed(self.layers[1:-1]):
            order.extend(layer)
        return order


def _layer_xs(spec: RcSectionSpec, layer: LayerSpec, ds: float) -> list[float]:
    r = layer.bar.radius_in(spec.unit)
    x_lm = spec.x1 + spec.cover + r + ds
    x_rm = spec.x2 - spec.cover - r - ds
    if layer.count == 1:
        if x_lm > x_rm:
            raise SectionTooSmall(f"a bar of radius {r} does not fit across width {spec.width}")
        return [(spec.x1 + spec.x2) / 2.0]
    if x_lm >= x_rm:
        raise SectionTooSmall(
            f"no room for {layer.count} bars: left bar at x={x_lm:g}, right bar at x={x_rm:g}"
        )
    dx = (x_rm - x_lm) / (layer.count - 1)
    return [x_lm + i * dx for i in range(layer.count - 1)] + [x_rm]


def layout_rebars(spec: RcSectionSpec, decimals: int | None = 4) -> RebarLayout:
    """Place every longitudinal bar; top and bottom layers first, middles between."""
    ds = spec.stirrup_bar.diameter_in(spec.unit)
    n = len(spec.layers)
    top, bottom = spec.layers[0], spec.layers[-1]
    y_bottom = spec.y1 + spec.cover + bottom.bar.radius_in(spec.unit) + ds
    if n == 1:
        y_limit = spec.y2 - spec.cover - bottom.bar.radius_in(spec.unit) - ds
        if y_bottom > y_limit:
            raise SectionTooSmall(f"a bar layer does not fit inside height {spec.height}")
        ys = [y_bottom]
    else:
        y_top = spec.y2 - spec.cover - top.bar.radius_in(spec.unit) - ds
        if y_bottom >= y_top:
            raise SectionTooSmall(
                f"top layer (y={y_top:g}) is not above bottom layer (y={y_bottom:g})"
            )
        dy = (y_top - y_bottom) / (n - 1)
        # middle k counts up from the bottom layer
        ys = [y_top] + [y_bottom + k * dy for k in range(n - 2, 0, -1)] + [y_bottom]

    def r_(v: float) -> float:
        return v if decimals is None else rounded(v, decimals)

    layers = []
    for layer, y in zip(spec.layers, ys):
        r = layer.bar.radius_in(spec.unit)
        layers.append(
            tuple(CircleSpec(Point2(r_(x), r_(y)), r_(r)) for x in _layer_xs(spec, layer, ds))
        )
    return RebarLayout(tuple(layers))


# -- stirrup ---------------------------------------------------------------

@dataclass(frozen=True)
class CornerRebars:
    c1: CircleSpec  # top-left
    c2: CircleSpec  # top-right
    c3: CircleSpec  # bottom-right
    c4: CircleSpec  # bottom-left


def corner_rebars(layout: RebarLayout, eps: float = 1e-9) -> CornerRebars:
    bars = layout.drawing_order()
    if not bars:
        raise EmptyLayout("layout has no bars")
    y_max = max(c.center.y for c in bars)
    y_min = min(c.center.y for c in bars)
    top = [c for c in bars if c.center.y >= y_max - eps]
    bottom = [c for c in bars if c.center.y <= y_min + eps]
    return CornerRebars(
        c1=min(top, key=lambda c: c.center.x),
        c2=max(top, key=lambda c: c.center.x),
        c3=max(bottom, key=lambda c: c.center.x),
        c4=min(bottom, key=lambda c: c.center.x),
    )


def _seg(x1: float, y1: float, x2: float, y2: float) -> Segment:
    return Segment(Point2(x1, y1), Point2(x2, y2))


def stirrup_geometry(corners: CornerRebars, ds: float) -> tuple[tuple[Segment, ...], tuple[ArcSpec, ...]]:
    """Inner lines L1-L4, outer lines L5-L8 and corner arcs A1-A4 (degrees)."""
    if not ds > 0:
        raise GeometryError(f"stirrup diameter must be positive, got {ds}")
    (x1, y1), r1 = corners.c1
    (x2, y2), r2 = corners.c2
    (x3, y3), r3 = corners.c3
    (x4, y4), r4 = corners.c4
    lines = (
        _seg(x1 - r1, y1, x4 - r4, y4),
        _seg(x1 + SQRT2 * (r1 + ds) - r1, y1 + r1, x2, y2 + r2),
        _seg(x2 + r2, y2, x3 + r3, y3),
        _seg(x4, y4 - r4, x3, y3 - r3),
        _seg(x1 - r1 - ds, y1, x4 - r4 - ds, y4),
        _seg(x1, y1 + r1 + ds, x2, y2 + r2 + ds),
        _seg(x2 + r2 + ds, y2, x3 + r3 + ds, y3),
        _seg(x4, y4 - r4 - ds, x3, y3 - r3 - ds),
    )
    arcs = (
        ArcSpec(Point2(x1, y1), r1 + ds, 45.0, 180.0),
        ArcSpec(Point2(x2, y2), r2 + ds, 0.0, 90.0),
        ArcSpec(Point2(x3, y3), r3 + ds, 270.0, 0.0),
        ArcSpec(Point2(x4, y4), r4 + ds, 180.0, 270.0),
    )
    return lines, arcs


def hook_length(ds: float, unit: Unit = Unit.INCH) -> float:
    return max(6.0 * ds, HOOK_MIN_LENGTH_IN * unit.per_inch)


def hook_geometry(c1: CircleSpec, ds: float, unit: Unit = Unit.INCH) -> tuple[tuple[Segment, ...], float]:
    """Double-line 135-degree hook at the top-left bar: Lh1..Lh6 and the leg length.

    Lh1/Lh2 are the outer/inner edges of the leg leaving the bar's upper-right
    side, Lh4/Lh5 the edges of the leg on its lower-left side; both legs run
    down-right at 45 degrees. Lh3 and Lh6 cap the leg ends.
    """
    if not ds > 0:
        raise GeometryError(f"stirrup diameter must be positive, got {ds}")
    (cx, cy), r = c1
    lext = hook_length(ds, unit)
    h = SQRT2 / 2.0
    ux, uy = h, -h  # unit leg direction
    a1 = (cx + h * (r + ds), cy + h * (r + ds))
    a2 = (cx + h * r, cy + h * r)
    b1 = (a1[0] + lext * ux, a1[1] + lext * uy)
    b2 = (a2[0] + lext * ux, a2[1] + lext * uy)
    a4 = (cx - h * r, cy - h * r)
    b4 = (a4[0] + lext * ux, a4[1] + lext * uy)
    # Lh5 sits on the line x + y = const, Ds below Lh4, starting at the bar's left edge
    offset_sum = a4[0] + a4[1] - SQRT2 * ds
    a5 = (cx - r, offset_sum - (cx - r))
    b5 = (b4[0] - h * ds, b4[1] - h * ds)
    hooks = (
        _seg(*a1, *b1),
        _seg(*a2, *b2),
        _seg(*b1, *b2),
        _seg(*a4, *b4),
        _seg(*a5, *b5),
        _seg(*b4, *b5),
    )
    return hooks, lext


# -- precast catalogue -----------------------------------------------------

@dataclass(frozen=True)
class PrecastEntry:
    name: str
    positions: tuple[Point2, ...]
    strand_radius: float = DEFAULT_STRAND_RADIUS
    template: str | None = None


def _norm_name(name: str) -> str:
    return " ".join(name.replace("_", " ").split()).casefold()


@dataclass(frozen=True)
class PrecastCatalog:
    entries: dict[str, PrecastEntry] = field(default_factory=dict)

    @classmethod
    def from_json(cls, data: dict) -> "PrecastCatalog":
        entries = {}
        for name, value in data.items():
            if isinstance(value, list):
                value = {"positions": value}
            positions = tuple(Point2(float(x), float(y)) for x, y in value["positions"])
            entries[name] = PrecastEntry(
                name=name,
                positions=positions,
                strand_radius=float(value.get("strand_radius", DEFAULT_STRAND_RADIUS)),
                template=value.get("template"),
            )
        return cls(entries)

    @classmethod
    def load(cls, path: str | Path) -> "PrecastCatalog":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))

    def lookup(self, section_type: str) -> PrecastEntry:
        if section_type in self.entries:
            return self.entries[section_type]
        wanted = _norm_name(section_type)
        for name, entry in self.entries.items():
            if _norm_name(name) == wanted:
                return entry
        raise UnknownPrecastType(
            f"unknown precast section {section_type!r}; known: {', '.join(self.entries)}"
        )

    def canonical_name(self, section_type: str) -> str:
        return self.lookup(section_type).name


@lru_cache(maxsize=1)
def default_catalog() -> PrecastCatalog:
    text = resources.files("strucdraw.data").joinpath("catalog.json").read_text(encoding="utf-8")
    return PrecastCatalog.from_json(json.loads(text))


def strand_layout(catalog: PrecastCatalog, section_type: str, n: int) -> list[Point2]:
    """The first ``n`` potential strand positions, bottom row first, left to right."""
    entry = catalog.lookup(section_type)
    if n < 0:
        raise GeometryError(f"strand count must be non-negative, got {n}")
    if n > len(entry.positions):
        raise TooManyStrands(entry.name, n, len(entry.positions))
    return list(entry.positions[:n])


# -- resolution ------------------------------------------------------------

def _round_seg(s: Segment) -> Segment:
    return Segment(pt(*s.end1), pt(*s.end2))


def _round_arc(a: ArcSpec) -> ArcSpec:
    return ArcSpec(pt(*a.center), rounded(a.radius), rounded(a.start_angle), rounded(a.end_angle))


def resolve_rc(spec: RcSectionSpec, save: SaveTarget = False) -> RcDrawing:
    unit = spec.unit
    layout = layout_rebars(spec, decimals=None)
    corners = corner_rebars(layout)
    rs = spec.stirrup_bar.radius_in(unit)
    ds = spec.stirrup_bar.diameter_in(unit)
    lines, arcs = stirrup_geometry(corners, ds)
    hooks, _ = hook_geometry(corners.c1, ds, unit)
    bl = pt(spec.x1, spec.y1)
    tl = pt(spec.x1, spec.y2)
    tr = pt(spec.x2, spec.y2)
    br = pt(spec.x2, spec.y1)
    bars = layout.drawing_order()
    return RcDrawing(
        save=save,
        unit=unit,
        vertices=Vertices(bl, tl, tr, br),
        sides=Sides(Segment(bl, tl), Segment(tl, tr), Segment(tr, br), Segment(br, bl)),
        rebar_centers=tuple(pt(*c.center) for c in bars),
        rebar_radii=tuple(rounded(c.radius) for c in bars),
        stirrup=(rounded(rs), rounded(ds)),
        stirrup_lines=tuple(map(_round_seg, lines)),
        stirrup_arcs=tuple(map(_round_arc, arcs)),
        hook_lines=tuple(map(_round_seg, hooks)),
    )


def resolve(
    spec: Spec,
    unit: Unit | None = None,
    save: SaveTarget = False,
    catalog: PrecastCatalog | None = None,
) -> DrawingIR:
    """Build the drawing IR for a parsed spec without any LLM involvement.

    For the concrete section the unit is ``spec.unit``; passing a
    different one is an error because lengths are never converted.
    """
    if isinstance(spec, RcSectionSpec):
        if unit is not None and unit is not spec.unit:
            raise GeometryError(
                f"section lengths are in {spec.unit.value}, drawing unit {unit.value} requested"
            )
        return resolve_rc(spec, save)
    unit = unit or Unit.MILLIMETER
    bl = pt(*spec.bottom_left)
    if isinstance(spec, SteelSpec):
        return SteelDrawing(save=save, unit=unit, section_type=spec.section_type, bottom_left=bl)
    if isinstance(spec, PrecastSpec):
        catalog = catalog or default_catalog()
        name = catalog.canonical_name(spec.section_type)
        strands = strand_layout(catalog, name, spec.strand_count)
        return PrecastDrawing(
            save=save,
            unit=unit,
            section_type=name,
            bottom_left=bl,
            strand_centers=tuple(pt(bl.x + p.x, bl.y + p.y) for p in strands),
        )
    raise TypeError(f"unsupported spec type {type(spec).__name__}")


# -- verification ----------------------------------------------------------

@dataclass(frozen=True)
class Mismatch:
    field: str
    expected: object
    actual: object
    delta: float | None = None

    def __str__(self) -> str:
        delta = "" if self.delta is None else f" (delta {self.delta:.4g})"
        return f"{self.field}: expected {self.expected!r}, got {self.actual!r}{delta}"


@dataclass
class VerifyReport:
    mismatches: list[Mismatch] = field(default_factory=list)
    tolerance: float = 1e-3

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def __len__(self) -> int:
        return len(self.mismatches)

    def __iter__(self):
        return iter(self.mismatches)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "tolerance": self.tolerance,
            "mismatches": [
                {"field": m.field, "expected": m.expected, "actual": m.actual, "delta": m.delta}
                for m in self.mismatches
            ],
        }


class _Comparer:
    def __init__(self, tol: float):
        self.report = VerifyReport(tolerance=tol)
        self.tol = tol

    def num(self, name: str, expected: float, actual: float) -> None:
        delta = abs(expected - actual)
        if not delta <= self.tol:
            self.report.mismatches.append(Mismatch(name, expected, actual, delta))

    def angle(self, name: str, expected: float, actual: float) -> None:
        d = abs(expected - actual) % 360.0
        delta = min(d, 360.0 - d)
        if not delta <= self.tol:
            self.report.mismatches.append(Mismatch(name, expected, actual, delta))

    def point(self, name: str, expected: Point2, actual: Point2) -> None:
        self.num(f"{name}.x", expected.x, actual.x)
        self.num(f"{name}.y", expected.y, actual.y)

    def segment(self, name: str, expected: Segment, actual: Segment) -> None:
        # a line drawn end2 -> end1 is the same line
        def dist(a: Segment, b: Segment) -> float:
            return max(abs(u - v) for p, q in zip(a, b) for u, v in zip(p, q))

        flipped = Segment(actual.end2, actual.end1)
        if dist(expected, flipped) < dist(expected, actual):
            actual = flipped
        self.point(f"{name}.end1", expected.end1, actual.end1)
        self.point(f"{name}.end2", expected.end2, actual.end2)

    def text(self, name: str, expected: str, actual: str) -> None:
        if _norm_name(expected) != _norm_name(actual):
            self.report.mismatches.append(Mismatch(name, expected, actual))

    def count(self, name: str, expected: int, actual: int) -> bool:
        if expected != actual:
            self.report.mismatches.append(Mismatch(f"{name} (count)", expected, actual, float(abs(expected - actual))))
            return False
        return True


def _by_row(items):
    return sorted(items, key=lambda item: (-round(item[0].y, 6), round(item[0].x, 6)))


def verify_ir(
    ir: DrawingIR,
    spec: Spec,
    tolerance: float = 1e-3,
    catalog: PrecastCatalog | None = None,
) -> VerifyReport:
    """Compare every geometric field of ``ir`` with the deterministic resolution of ``spec``."""
    if ir.kind is not spec.kind:
        raise KindMismatch(f"IR is a {ir.kind.value}, spec is a {spec.kind.value}")
    cmp = _Comparer(tolerance)
    if isinstance(spec, RcSectionSpec):
        assert isinstance(ir, RcDrawing)
        if ir.unit is not spec.unit:
            cmp.report.mismatches.append(Mismatch("Unit", spec.unit.value, ir.unit.value))
        exp = resolve_rc(spec, save=ir.save)
        for key, e, a in zip(("bottom left", "top left", "top right", "bottom right"), exp.vertices, ir.vertices):
            cmp.point(f"Vertices.{key}", e, a)
        for key, e, a in zip(("left", "top", "right", "bottom"), exp.sides, ir.sides):
            cmp.segment(f"Sides.{key}", e, a)
        n_ok = cmp.count("Center of Rebars", len(exp.rebar_centers), len(ir.rebar_centers))
        n_ok &= cmp.count("Radius of Rebars", len(exp.rebar_radii), len(ir.rebar_radii))
        if n_ok:
            exp_bars = _by_row(zip(exp.rebar_centers, exp.rebar_radii))
            act_bars = _by_row(zip(ir.rebar_centers, ir.rebar_radii))
            for i, ((ec, er), (ac, ar)) in enumerate(zip(exp_bars, act_bars)):
                cmp.point(f"Center of Rebars[{i}]", ec, ac)
                cmp.num(f"Radius of Rebars[{i}]", er, ar)
        cmp.num("Stirrup.radius", exp.stirrup[0], ir.stirrup[0])
        cmp.num("Stirrup.diameter", exp.stirrup[1], ir.stirrup[1])
        for i, (e, a) in enumerate(zip(exp.stirrup_lines, ir.stirrup_lines), 1):
            cmp.segment(f"L{i}", e, a)
        for i, (e, a) in enumerate(zip(exp.stirrup_arcs, ir.stirrup_arcs), 1):
            cmp.point(f"A{i}.center", e.center, a.center)
            cmp.num(f"A{i}.radius", e.radius, a.radius)
            cmp.angle(f"A{i}.start", e.start_angle, a.start_angle)
            cmp.angle(f"A{i}.end", e.end_angle, a.end_angle)
        for i, (e, a) in enumerate(zip(exp.hook_lines, ir.hook_lines), 1):
            cmp.segment(f"Lh{i}", e, a)
        return cmp.report

    exp = resolve(spec, unit=ir.unit, save=ir.save, catalog=catalog)
    assert isinstance(exp, (SteelDrawing, PrecastDrawing))
    assert isinstance(ir, (SteelDrawing, PrecastDrawing))
    cmp.text("Section type", exp.section_type, ir.section_type)
    cmp.point("Bottom left", exp.bottom_left, ir.bottom_left)
    if isinstance(exp, PrecastDrawing) and isinstance(ir, PrecastDrawing):
        if cmp.count("Strands", len(exp.strand_centers), len(ir.strand_centers)):
            exp_s = sorted(exp.strand_centers, key=lambda p: (p.y, p.x))
            act_s = sorted(ir.strand_centers, key=lambda p: (p.y, p.x))
            for i, (e, a) in enumerate(zip(exp_s, act_s)):
                cmp.point(f"Strands[{i}]", e, a)
    return cmp.report
