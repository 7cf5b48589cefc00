"""Minimal ASCII DXF: a HEADER with $INSUNITS and an ENTITIES section.

Only LINE, CIRCLE and ARC are written or read. Coordinates are written with
``repr`` so a float survives the round trip exactly.
"""

from __future__ import annotations

from typing import Iterable

from ..ir import Point2, Unit
from .entities import Arc, Circle, Entity, EntityList, Line


class TemplateParseError(ValueError):
    pass


def _pair(code: int, value) -> str:
    return f"{code:>3}\n{value}\n"


def _num(value: float) -> str:
    value = float(value)
    return repr(0.0 if value == 0 else value)


def emit_dxf(entities: Iterable[Entity], unit: Unit) -> bytes:
    entities = list(entities)
    if not entities:
        raise ValueError("nothing to draw")
    out = [
        _pair(0, "SECTION"), _pair(2, "HEADER"),
        _pair(9, "$INSUNITS"), _pair(70, unit.insunits),
        _pair(0, "ENDSEC"),
        _pair(0, "SECTION"), _pair(2, "ENTITIES"),
    ]
    for e in entities:
        if isinstance(e, Line):
            out += [
                _pair(0, "LINE"), _pair(8, "0"),
                _pair(10, _num(e.start.x)), _pair(20, _num(e.start.y)), _pair(30, "0.0"),
                _pair(11, _num(e.end.x)), _pair(21, _num(e.end.y)), _pair(31, "0.0"),
            ]
        elif isinstance(e, Circle):
            out += [
                _pair(0, "CIRCLE"), _pair(8, "0"),
                _pair(10, _num(e.center.x)), _pair(20, _num(e.center.y)), _pair(30, "0.0"),
                _pair(40, _num(e.radius)),
            ]
        elif isinstance(e, Arc):
            out += [
                _pair(0, "ARC"), _pair(8, "0"),
                _pair(10, _num(e.center.x)), _pair(20, _num(e.center.y)), _pair(30, "0.0"),
                _pair(40, _num(e.radius)),
                _pair(50, _num(e.start_angle)), _pair(51, _num(e.end_angle)),
            ]
        else:
            raise TypeError(f"cannot emit {type(e).__name__}")
    out += [_pair(0, "ENDSEC"), _pair(0, "EOF")]
    return "".join(out).encode("ascii")


def _pairs(text: str) -> list[tuple[int, str]]:
    lines = text.splitlines()
    if len(lines) % 2:
        lines = lines[:-1] if not lines[-1].strip() else lines
    if len(lines) % 2:
        raise TemplateParseError("odd number of lines; not a DXF tag stream")
    out = []
    for i in range(0, len(lines), 2):
        try:
            code = int(lines[i].strip())
        except ValueError:
            raise TemplateParseError(f"line {i + 1}: bad group code {lines[i]!r}") from None
        out.append((code, lines[i + 1].strip()))
    return out


def read_dxf(data: bytes | str) -> tuple[EntityList, Unit | None]:
    """Entities and header unit of an ASCII DXF; unsupported entities are errors."""
    text = data.decode("ascii", errors="replace") if isinstance(data, bytes) else data
    pairs = _pairs(text)
    entities: list[Entity] = []
    unit: Unit | None = None
    section = None
    i = 0
    while i < len(pairs):
        code, value = pairs[i]
        if code == 0 and value == "SECTION" and i + 1 < len(pairs):
            section = pairs[i + 1][1]
            i += 2
            continue
        if code == 0 and value == "ENDSEC":
            section = None
        elif section == "HEADER" and code == 9 and value == "$INSUNITS" and i + 1 < len(pairs):
            unit = {1: Unit.INCH, 4: Unit.MILLIMETER}.get(int(pairs[i + 1][1]))
        elif section == "ENTITIES" and code == 0:
            j = i + 1
            groups: dict[int, str] = {}
            while j < len(pairs) and pairs[j][0] != 0:
                groups.setdefault(pairs[j][0], pairs[j][1])
                j += 1
            entities.append(_entity(value, groups))
            i = j
            continue
        i += 1
    return tuple(entities), unit


def _entity(kind: str, g: dict[int, str]) -> Entity:
    try:
        f = {k: float(v) for k, v in g.items() if k in (10, 20, 11, 21, 40, 50, 51)}
        if kind == "LINE":
            return Line(Point2(f[10], f[20]), Point2(f[11], f[21]))
        if kind == "CIRCLE":
            return Circle(Point2(f[10], f[20]), f[40])
        if kind == "ARC":
            return Arc(Point2(f[10], f[20]), f[40], f[50], f[51])
    except (KeyError, ValueError) as exc:
        raise TemplateParseError(f"{kind} entity is missing or has a bad group {exc}") from None
    raise TemplateParseError(f"unsupported entity kind: {kind}")
