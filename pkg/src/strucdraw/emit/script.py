"""Automation-script text in the pyautocad dialect.

The script is an output artifact meant to run next to a CAD application; it
is never executed here except under the stubbed tracer in ``trace``.
"""

from __future__ import annotations

import re

from ..geometry import DEFAULT_STRAND_RADIUS, GeometryError, PrecastCatalog, default_catalog
from ..ir import DrawingIR, PrecastDrawing, RcDrawing, SteelDrawing, fmt
from .scene import UnsupportedKind, template_name

STEEL_FOLDER = "steelBeamDrawingSet"
PRECAST_FOLDER = "Preset_Prestressed_Concrete"

_HEADER = re.compile(r"^\((\d+)\)\s*(.+?):\s*$")


def step_headers(codegen_steps: str) -> dict[int, str]:
    """``{0: "Set units", 1: "Create all vertices", ...}`` from the knowledge text."""
    out = {}
    for line in codegen_steps.splitlines():
        m = _HEADER.match(line.strip())
        if m:
            out[int(m.group(1))] = m.group(2)
    return out


def _p(point) -> str:
    return f"APoint({fmt(point[0])}, {fmt(point[1])})"


def _comment(headers: dict[int, str], n: int, fallback: str) -> str:
    return f"# {headers.get(n, fallback)}"


def _rc(ir: RcDrawing, h: dict[int, str]) -> list[str]:
    v = ir.vertices
    lines = [
        "from pyautocad import Autocad, APoint",
        "from math import radians",
        "",
        "acad = Autocad()",
        "",
        _comment(h, 0, "Set units"),
        f"acad.doc.SetVariable('INSUNITS', {ir.unit.insunits})",
        "",
        _comment(h, 1, "Create all vertices"),
        "vertices = {",
        f'    "bottom_left": {_p(v.bottom_left)},',
        f'    "top_left": {_p(v.top_left)},',
        f'    "top_right": {_p(v.top_right)},',
        f'    "bottom_right": {_p(v.bottom_right)}',
        "}",
        "",
        _comment(h, 2, "Draw four sides"),
        "sides = {",
    ]
    names = ("left", "top", "right", "bottom")
    lines += _entries([f'"{n}": acad.model.AddLine({_p(s.end1)}, {_p(s.end2)})' for n, s in zip(names, ir.sides)])
    lines += ["}", "", _comment(h, 3, "Draw steel rebars"), "rebars = ["]
    lines += _entries([f"acad.model.AddCircle({_p(c)}, {fmt(r)})" for c, r in zip(ir.rebar_centers, ir.rebar_radii)])
    lines += ["]", "", _comment(h, 4, "Draw internal and external stirrup lines"), "stirrup_lines = {"]
    lines += _entries([
        f'"L{i}": acad.model.AddLine({_p(s.end1)}, {_p(s.end2)})' for i, s in enumerate(ir.stirrup_lines, 1)
    ])
    lines += ["}", "", _comment(h, 5, "Draw arcs of stirrup"), "stirrup_arcs = {"]
    lines += _entries([
        f'"A{i}": acad.model.AddArc({_p(a.center)}, {fmt(a.radius)}, '
        f"radians({fmt(a.start_angle)}), radians({fmt(a.end_angle)}))"
        for i, a in enumerate(ir.stirrup_arcs, 1)
    ])
    lines += ["}", "", _comment(h, 6, "Draw hook lines of stirrup"), "stirrup_hooks = {"]
    lines += _entries([
        f'"Lh{i}": acad.model.AddLine({_p(s.end1)}, {_p(s.end2)})' for i, s in enumerate(ir.hook_lines, 1)
    ])
    lines.append("}")
    if ir.save:
        lines += ["", "# Save drawing", f"acad.doc.SaveAs({ir.save!r})"]
    return lines


def _entries(items: list[str]) -> list[str]:
    return [f"    {item}{',' if i < len(items) - 1 else ''}" for i, item in enumerate(items)]


def _catalog_item(ir, h: dict[int, str], folder: str, name: str, strand_radius: float | None = None) -> list[str]:
    precast = strand_radius is not None
    # step numbering differs between the steel and precast step lists
    n = (lambda steel, pre: pre if precast else steel)
    x, y = fmt(ir.bottom_left.x), fmt(ir.bottom_left.y)
    lines = [
        "from pyautocad import Autocad, APoint",
        "import os",
        "import time",
        "",
        "acad = Autocad()",
        "",
        _comment(h, 1, "Determine source file path"),
        f"source_file_path = os.path.join(os.getcwd(), {folder!r}, {name + '.dwg'!r})",
        "source_document = acad.app.Documents.Open(source_file_path)",
        _comment(h, n(3, 2), "Pause script"),
        "time.sleep(1)",
        _comment(h, n(4, 3), "Activate source file"),
        "acad.app.ActiveDocument = source_document",
        _comment(h, n(5, 4), "Select all in source"),
        "acad.app.ActiveDocument.SendCommand('SELECT ALL  ')",
        _comment(h, n(6, 5), "Copy selected objects"),
        "acad.app.ActiveDocument.SendCommand('COPYCLIP ')",
        "",
        _comment(h, n(7, 6), "Build target path"),
        "target_file = os.path.join(os.getcwd(), 'targetfile.dwg')",
        _comment(h, n(8, 7), "Open target file"),
        "target_document = acad.app.Documents.Open(target_file)",
        _comment(h, n(9, 8), "Activate target file"),
        "acad.app.ActiveDocument = target_document",
        f"target_document.SetVariable('INSUNITS', {ir.unit.insunits})",
        _comment(h, n(10, 9), "Paste in position"),
        f"acad.app.ActiveDocument.SendCommand('PASTECLIP {x},{y} ')",
        "",
        _comment(h, n(11, 10), "Close source document"),
        "source_document.Close()",
    ]
    if precast:
        coords = ", ".join(f"[{fmt(p.x)}, {fmt(p.y)}]" for p in ir.strand_centers)
        lines += [
            "",
            _comment(h, 11, "Draw strands"),
            f"strand_coordinates = [{coords}]",
            "for coord in strand_coordinates:",
            "    center = APoint(coord[0], coord[1])",
            f"    acad.model.AddCircle(center, {fmt(strand_radius)})",
        ]
    if ir.save:
        lines += ["", "# Save drawing", f"target_document.SaveAs({ir.save!r})"]
    return lines


def emit_script(ir: DrawingIR, codegen_steps: str, catalog: PrecastCatalog | None = None) -> str:
    headers = step_headers(codegen_steps)
    if isinstance(ir, RcDrawing):
        lines = _rc(ir, headers)
    elif isinstance(ir, SteelDrawing):
        lines = _catalog_item(ir, headers, STEEL_FOLDER, template_name(ir, catalog))
    elif isinstance(ir, PrecastDrawing):
        try:
            radius = (catalog or default_catalog()).lookup(ir.section_type).strand_radius
        except GeometryError:
            radius = DEFAULT_STRAND_RADIUS
        lines = _catalog_item(ir, headers, PRECAST_FOLDER, template_name(ir, catalog), radius)
    else:
        raise UnsupportedKind(f"no script dialect for {type(ir).__name__}")
    return "\n".join(lines) + "\n"
