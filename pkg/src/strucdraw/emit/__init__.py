"""DXF and script backends for a resolved drawing."""

from .dxf import TemplateParseError, emit_dxf, read_dxf
from .entities import Arc, Circle, Entity, EntityList, Line, bbox_min, counts, translate
from .scene import UnsupportedKind, ir_to_entities, template_name
from .script import emit_script
from .templates import TemplateLibrary, TemplateNotFound, load_template
from .trace import ScriptError, Trace, trace_script

__all__ = [
    "Arc", "Circle", "Entity", "EntityList", "Line", "ScriptError", "TemplateLibrary",
    "TemplateNotFound", "TemplateParseError", "Trace", "UnsupportedKind", "bbox_min", "counts",
    "emit_dxf", "emit_script", "ir_to_entities", "load_template", "read_dxf", "template_name",
    "trace_script", "translate",
]
