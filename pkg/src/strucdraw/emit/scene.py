"""IR -> ordered entity list."""

from __future__ import annotations

from ..geometry import DEFAULT_STRAND_RADIUS, GeometryError, PrecastCatalog, default_catalog
from ..ir import DrawingIR, PrecastDrawing, RcDrawing, SteelDrawing
from .entities import Arc, Circle, EntityList, Line, bbox_min, translate
from .templates import TemplateLibrary, load_template


class UnsupportedKind(TypeError):
    pass


def template_name(ir: DrawingIR, catalog: PrecastCatalog | None = None) -> str:
    """File stem of the catalogue drawing for a steel or precast IR."""
    if isinstance(ir, SteelDrawing):
        return ir.section_type
    if isinstance(ir, PrecastDrawing):
        try:
            entry = (catalog or default_catalog()).lookup(ir.section_type)
        except GeometryError:
            return ir.section_type.replace(" ", "_")
        return entry.template or entry.name
    raise UnsupportedKind(f"{type(ir).__name__} has no template")


def _placed_template(ir, templates: TemplateLibrary, catalog) -> EntityList:
    raw = load_template(templates, template_name(ir, catalog))
    origin = bbox_min(raw)
    return translate(raw, ir.bottom_left.x - origin.x, ir.bottom_left.y - origin.y)


def ir_to_entities(
    ir: DrawingIR,
    templates: TemplateLibrary | None = None,
    catalog: PrecastCatalog | None = None,
) -> EntityList:
    if isinstance(ir, RcDrawing):
        out: list = [Line(s.end1, s.end2) for s in ir.sides]
        out += [Circle(c, r) for c, r in zip(ir.rebar_centers, ir.rebar_radii)]
        out += [Line(s.end1, s.end2) for s in ir.stirrup_lines]
        out += [Arc(a.center, a.radius, a.start_angle, a.end_angle) for a in ir.stirrup_arcs]
        out += [Line(s.end1, s.end2) for s in ir.hook_lines]
        return tuple(out)
    templates = templates or TemplateLibrary.bundled()
    if isinstance(ir, SteelDrawing):
        return _placed_template(ir, templates, catalog)
    if isinstance(ir, PrecastDrawing):
        radius = DEFAULT_STRAND_RADIUS
        try:
            radius = (catalog or default_catalog()).lookup(ir.section_type).strand_radius
        except GeometryError:
            pass
        base = _placed_template(ir, templates, catalog)
        return base + tuple(Circle(p, radius) for p in ir.strand_centers)
    raise UnsupportedKind(f"cannot draw {type(ir).__name__}")
