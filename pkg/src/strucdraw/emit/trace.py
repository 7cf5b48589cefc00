"""Run a generated pyautocad script against recording stubs.

Used to score step-6 output without a CAD application: the script runs with
fake ``pyautocad``, ``os`` and ``time`` modules and restricted builtins, and
every drawing or document call is recorded. This is a checker, not a
security sandbox; only run scripts you would be willing to run anyway.
"""

from __future__ import annotations

import builtins
import math
import ntpath
import posixpath
import sys
import types
from dataclasses import dataclass, field

from ..ir import Point2
from .entities import Arc, Circle, Entity, Line


class ScriptError(RuntimeError):
    pass


class StepBudgetExceeded(ScriptError):
    pass


@dataclass
class Trace:
    entities: list[Entity] = field(default_factory=list)
    calls: list[tuple] = field(default_factory=list)

    def commands(self) -> list[str]:
        return [c[2] for c in self.calls if c[0] == "SendCommand"]

    def opened(self) -> list[str]:
        return [c[1] for c in self.calls if c[0] == "Open"]

    def closed(self) -> list[str]:
        return [c[1] for c in self.calls if c[0] == "Close"]

    def variables(self) -> dict[str, object]:
        return {c[2]: c[3] for c in self.calls if c[0] == "SetVariable"}


def _xy(obj) -> Point2:
    if isinstance(obj, _APoint):
        return Point2(obj.x, obj.y)
    try:
        return Point2(float(obj[0]), float(obj[1]))
    except (TypeError, IndexError, ValueError):
        raise ScriptError(f"not a point: {obj!r}") from None


class _APoint(tuple):
    def __new__(cls, x=0.0, y=0.0, z=0.0):
        if not isinstance(x, (int, float)):
            seq = list(x)
            x, y, z = (list(seq) + [0.0, 0.0, 0.0])[:3]
        return super().__new__(cls, (float(x), float(y), float(z)))

    x = property(lambda self: self[0])
    y = property(lambda self: self[1])
    z = property(lambda self: self[2])


class _Model:
    def __init__(self, trace: Trace):
        self._t = trace

    def AddLine(self, start, end):
        e = Line(_xy(start), _xy(end))
        self._t.entities.append(e)
        return e

    def AddCircle(self, center, radius):
        e = Circle(_xy(center), float(radius))
        self._t.entities.append(e)
        return e

    def AddArc(self, center, radius, start, end):
        e = Arc(_xy(center), float(radius), math.degrees(float(start)), math.degrees(float(end)))
        self._t.entities.append(e)
        return e


class _Document:
    def __init__(self, trace: Trace, name: str):
        self._t = trace
        self.Name = name

    def SetVariable(self, name, value):
        self._t.calls.append(("SetVariable", self.Name, name, value))

    def SendCommand(self, command):
        self._t.calls.append(("SendCommand", self.Name, command))

    def Close(self, *args):
        self._t.calls.append(("Close", self.Name))

    def SaveAs(self, path, *args):
        self._t.calls.append(("SaveAs", self.Name, str(path)))

    def Save(self):
        self._t.calls.append(("Save", self.Name))


class _Documents:
    def __init__(self, app: "_App"):
        self._app = app

    def Open(self, path):
        self._app._t.calls.append(("Open", str(path)))
        return _Document(self._app._t, str(path))

    def Add(self, *args):
        return _Document(self._app._t, "new")


class _App:
    def __init__(self, trace: Trace, doc: _Document):
        self._t = trace
        self.Documents = _Documents(self)
        self._active = doc

    @property
    def ActiveDocument(self):
        return self._active

    @ActiveDocument.setter
    def ActiveDocument(self, doc):
        self._t.calls.append(("Activate", getattr(doc, "Name", repr(doc))))
        self._active = doc


def _fake_modules(trace: Trace) -> dict[str, types.ModuleType]:
    doc = _Document(trace, "active")

    class Autocad:
        def __init__(self, *args, **kwargs):
            self.doc = doc
            self.ActiveDocument = doc
            self.model = _Model(trace)
            self.app = _App(trace, doc)

    pyautocad = types.ModuleType("pyautocad")
    pyautocad.Autocad = Autocad
    pyautocad.APoint = _APoint

    path = types.ModuleType("os.path")
    path.join = lambda *parts: posixpath.join(*(str(p) for p in parts))
    path.basename = lambda p: ntpath.basename(str(p))
    path.dirname = lambda p: ntpath.dirname(str(p))
    path.exists = lambda p: True
    path.abspath = lambda p: str(p)
    os_mod = types.ModuleType("os")
    os_mod.path = path
    os_mod.getcwd = lambda: "."
    os_mod.sep = "/"

    time_mod = types.ModuleType("time")
    time_mod.sleep = lambda seconds: None

    return {"pyautocad": pyautocad, "os": os_mod, "os.path": path, "time": time_mod, "math": math}


_SAFE_BUILTINS = (
    "abs all any bool dict enumerate float int len list map max min print range reversed "
    "round set sorted str sum tuple zip isinstance Exception ValueError TypeError KeyError"
).split()


def trace_script(code: str, max_steps: int = 200_000) -> Trace:
    """Execute ``code`` against the stubs and return what it drew."""
    trace = Trace()
    modules = _fake_modules(trace)

    def _import(name, globals=None, locals=None, fromlist=(), level=0):
        if name not in modules:
            raise ScriptError(f"import of {name!r} is not allowed")
        if name == "os.path" and not fromlist:
            return modules["os"]
        return modules[name]

    safe = {n: getattr(builtins, n) for n in _SAFE_BUILTINS}
    safe["__import__"] = _import
    safe["print"] = lambda *a, **k: None
    namespace = {"__builtins__": safe, "__name__": "__cad_script__"}
    try:
        compiled = compile(code, "<script>", "exec")
    except SyntaxError as exc:
        raise ScriptError(f"syntax error: {exc}") from None

    steps = 0

    def tracer(frame, event, arg):
        nonlocal steps
        if frame.f_code.co_filename != "<script>":
            return None
        if event == "line":
            steps += 1
            if steps > max_steps:
                raise StepBudgetExceeded(f"script ran more than {max_steps} lines")
        return tracer

    previous = sys.gettrace()
    sys.settrace(tracer)
    try:
        exec(compiled, namespace)
    except ScriptError:
        raise
    except Exception as exc:
        raise ScriptError(f"{type(exc).__name__}: {exc}") from None
    finally:
        sys.settrace(previous)
    return trace
