"""Catalogue drawings for steel sections and precast outlines, stored as DXF."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .dxf import TemplateParseError, read_dxf
from .entities import EntityList


class TemplateNotFound(LookupError):
    def __init__(self, section_type: str, directory: str):
        super().__init__(f"no template for {section_type!r} in {directory}")
        self.section_type = section_type


@dataclass(frozen=True)
class TemplateLibrary:
    """``<directory>/<SectionType>.dxf``; lookup ignores case."""

    directory: Path
    files: dict[str, Path] = field(default_factory=dict, compare=False)

    @classmethod
    def open(cls, directory: str | Path) -> "TemplateLibrary":
        directory = Path(directory)
        files = {p.stem.casefold(): p for p in sorted(directory.glob("*.dxf"))} if directory.is_dir() else {}
        return cls(directory, files)

    @classmethod
    def bundled(cls) -> "TemplateLibrary":
        # the package is installed as plain files, so the traversable is a real path
        return cls.open(Path(str(resources.files("strucdraw.data").joinpath("templates"))))

    def names(self) -> list[str]:
        return [p.stem for p in self.files.values()]

    def path(self, section_type: str) -> Path:
        p = self.files.get(section_type.casefold())
        if p is None:
            raise TemplateNotFound(section_type, str(self.directory))
        return p


def load_template(templates: TemplateLibrary, section_type: str) -> EntityList:
    path = templates.path(section_type)
    try:
        entities, _ = read_dxf(path.read_bytes())
    except TemplateParseError as exc:
        raise TemplateParseError(f"{path.name}: {exc}") from None
    if not entities:
        raise TemplateParseError(f"{path.name}: template has no entities")
    return entities
