"""Drawing primitives handed to the backends. Arc angles are in degrees."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Union

from ..ir import Point2


@dataclass(frozen=True)
class Line:
    start: Point2
    end: Point2

    def translated(self, dx: float, dy: float) -> "Line":
        return Line(Point2(self.start.x + dx, self.start.y + dy), Point2(self.end.x + dx, self.end.y + dy))


@dataclass(frozen=True)
class Circle:
    center: Point2
    radius: float

    def translated(self, dx: float, dy: float) -> "Circle":
        return Circle(Point2(self.center.x + dx, self.center.y + dy), self.radius)


@dataclass(frozen=True)
class Arc:
    center: Point2
    radius: float
    start_angle: float
    end_angle: float

    def translated(self, dx: float, dy: float) -> "Arc":
        return Arc(Point2(self.center.x + dx, self.center.y + dy), self.radius, self.start_angle, self.end_angle)


Entity = Union[Line, Circle, Arc]
EntityList = tuple[Entity, ...]


def translate(entities: Iterable[Entity], dx: float, dy: float) -> EntityList:
    return tuple(e.translated(dx, dy) for e in entities)


def _arc_points(a: Arc) -> list[tuple[float, float]]:
    start = a.start_angle % 360.0
    span = (a.end_angle - a.start_angle) % 360.0 or 360.0
    angles = [start, start + span]
    angles += [q for q in (0.0, 90.0, 180.0, 270.0, 360.0, 450.0, 540.0, 630.0) if start < q < start + span]
    return [
        (a.center.x + a.radius * math.cos(math.radians(t)), a.center.y + a.radius * math.sin(math.radians(t)))
        for t in angles
    ]


def bbox_min(entities: Iterable[Entity]) -> Point2:
    """Lower-left corner of the entities' bounding box (arcs counted exactly)."""
    xs, ys = [], []
    for e in entities:
        if isinstance(e, Line):
            xs += [e.start.x, e.end.x]
            ys += [e.start.y, e.end.y]
        elif isinstance(e, Circle):
            xs.append(e.center.x - e.radius)
            ys.append(e.center.y - e.radius)
        else:
            pts = _arc_points(e)
            xs += [p[0] for p in pts]
            ys += [p[1] for p in pts]
    if not xs:
        raise ValueError("empty entity list has no bounding box")
    return Point2(min(xs), min(ys))


def counts(entities: Iterable[Entity]) -> dict[str, int]:
    out = {"LINE": 0, "CIRCLE": 0, "ARC": 0}
    for e in entities:
        out[type(e).__name__.upper()] += 1
    return out
