import json

import pytest

from strucdraw.ir import DrawingKind
from strucdraw.knowledge import FIELDS, KnowledgeError, SchemaError, UnknownKind, load, retrieve


def test_bundled_has_every_kind(kb):
    assert set(kb.records) == set(DrawingKind)
    for record in kb.records.values():
        assert all(getattr(record, f).strip() for f in FIELDS)


def test_rc_substeps(kb):
    record = retrieve(kb, DrawingKind.RC)
    assert [s.tag for s in record.substeps] == ["3-1", "3-2", "3-3"]
    assert not retrieve(kb, DrawingKind.STEEL).substeps


@pytest.mark.parametrize("kind, fragment", [
    (DrawingKind.STEEL, "PASTECLIP x_coordinate,y_coordinate"),
    (DrawingKind.PRECAST, "PASTECLIP x_coordinate,y_coordinate"),
    (DrawingKind.RC, "AddArc"),
])
def test_codegen_fragments(kb, kind, fragment):
    assert fragment in retrieve(kb, kind).codegen_steps


def test_retrieve_is_keyed_not_fuzzy(kb):
    from types import MappingProxyType
    from strucdraw.knowledge import KnowledgeBase

    partial = KnowledgeBase(MappingProxyType({DrawingKind.RC: kb.records[DrawingKind.RC]}))
    with pytest.raises(UnknownKind):
        retrieve(partial, DrawingKind.STEEL)


def test_equal_loads_compare_equal(kb):
    assert load() == kb


def _bundled_json():
    from importlib import resources

    return json.loads(resources.files("strucdraw.data").joinpath("knowledge.json").read_text(encoding="utf-8"))


def test_custom_file(tmp_path):
    data = _bundled_json()
    data["steel beam cross-section"]["useful_info"] = "only the section name"
    path = tmp_path / "kb.json"
    path.write_text(json.dumps(data))
    assert retrieve(load(path), DrawingKind.STEEL).useful_info == "only the section name"


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("precast beam cross-section"),
    lambda d: d["steel beam cross-section"].pop("codegen_steps"),
    lambda d: d["steel beam cross-section"].update(useful_info="  "),
    lambda d: d.update({"timber beam": {}}),
    lambda d: d["rectangular concrete beam cross-section"]["substeps"].append({"tag": "3-4"}),
])
def test_schema_errors(tmp_path, mutate):
    data = _bundled_json()
    mutate(data)
    path = tmp_path / "kb.json"
    path.write_text(json.dumps(data))
    with pytest.raises(SchemaError):
        load(path)


def test_unreadable(tmp_path):
    with pytest.raises(KnowledgeError):
        load(tmp_path / "absent.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(KnowledgeError):
        load(bad)
