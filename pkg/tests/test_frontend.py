import pytest
from hypothesis import given, settings, strategies as st

from strucdraw.frontend import (
    DuplicateField,
    EmptyValue,
    FrontendError,
    MissingMandatory,
    MixedUnits,
    OtherInfo,
    UnparsableQuantity,
    UnsupportedReference,
    fields_to_spec,
    infer_kind,
    parse_fields,
    parse_other_info,
    parse_quantity,
    render_fields,
)
from strucdraw.geometry import BarSize, LayerSpec, PrecastSpec, RcSectionSpec, SteelSpec
from strucdraw.ir import DrawingKind, Point2, Unit

import golden
from strategies import rc_specs


def rc(text):
    return fields_to_spec(parse_fields(text), DrawingKind.RC)


def test_golden_fields(rc_spec):
    assert rc_spec == RcSectionSpec(
        width=14, height=24, cover=2, stirrup_bar=BarSize(4),
        layers=(LayerSpec(4, BarSize(8)), LayerSpec(2, BarSize(4)), LayerSpec(2, BarSize(4))),
        unit=Unit.INCH,
    )


def test_nesting_and_bullets():
    block = parse_fields("* A: 1\n  • B: 2\n- C:\n\t- D: 3\nnot a bullet\n- no colon here\n")
    assert block.pairs() == [("A", "1"), ("C", "")]
    assert [c.name for c in block.get("c").children] == ["D"]
    assert [c.name for c in block.get("A").children] == ["B"]


@pytest.mark.parametrize("text, error", [
    ("- Width: 1\n- width: 2\n", DuplicateField),
    ("- Width:\n", EmptyValue),
])
def test_block_errors(text, error):
    with pytest.raises(error):
        parse_fields(text)


def test_missing_cover_is_named():
    text = "\n".join(l for l in golden.RC_FIELDS.splitlines() if "cover" not in l)
    with pytest.raises(MissingMandatory) as err:
        rc(text)
    assert "Thickness of clear cover" in str(err.value)


def test_mixed_units():
    with pytest.raises(MixedUnits):
        rc(golden.RC_FIELDS.replace("14in", "350mm"))


def test_unitless_defaults_to_mm():
    spec = rc(golden.RC_FIELDS.replace("24in", "600").replace("14in", "350").replace("2in", "50"))
    assert spec.unit is Unit.MILLIMETER and spec.width == 350


def test_layer_count_must_agree():
    with pytest.raises(FrontendError):
        rc(golden.RC_FIELDS.replace("3 layers", "2 layers"))


def test_stirrup_spacing_is_ignored(rc_spec):
    assert rc(golden.RC_FIELDS.replace("Stirrup information: No 4", "Stirrup information: No 4 at 5 in")) == rc_spec


def test_alias_and_bar_spellings(rc_spec):
    text = golden.RC_FIELDS.replace("Thickness of clear cover", "Thinkness of clear cover").replace("4 No 8", "4 #8")
    assert rc(text) == rc_spec


@pytest.mark.parametrize("raw, expected", [
    ("24in", (24.0, Unit.INCH)), ('2.5"', (2.5, Unit.INCH)), ("600 mm", (600.0, Unit.MILLIMETER)),
    ("12", (12.0, None)), ("3 inches", (3.0, Unit.INCH)),
])
def test_quantities(raw, expected):
    assert parse_quantity("x", raw) == expected


def test_bad_quantity():
    with pytest.raises(UnparsableQuantity):
        rc(golden.RC_FIELDS.replace("24in", "two feet"))


def test_origin_field():
    spec = rc(golden.RC_FIELDS + "- Bottom left vertex: (10, 5)\n")
    assert spec.origin == Point2(10, 5)
    with pytest.raises(UnsupportedReference):
        rc(golden.RC_FIELDS + "- Position: Centroid: (10, 5)\n")


def test_steel_and_precast(steel_spec, precast_spec):
    assert steel_spec == SteelSpec("W1100X390", Point2(0, 0))
    assert precast_spec == PrecastSpec("I-Beam Type I", 4, Point2(0, 0))
    with pytest.raises(MissingMandatory):
        fields_to_spec(parse_fields("- Type of Structure: precast beam cross-section\n- Section: I-beam type I\n"), DrawingKind.PRECAST)


@pytest.mark.parametrize("text, kind", [
    (golden.RC_FIELDS, DrawingKind.RC),
    (golden.STEEL_FIELDS, DrawingKind.STEEL),
    (golden.PRECAST_FIELDS, DrawingKind.PRECAST),
    ("- Type of Structure: W1100X390\n", DrawingKind.STEEL),
    ("- Height of cross-section: 2\n- Rebar information: 2 No 4\n", DrawingKind.RC),
    ("- Colour: red\n", None),
])
def test_infer_kind(text, kind):
    assert infer_kind(parse_fields(text)) is kind


def test_other_info():
    assert parse_other_info("Save: False\nUnit: Inch\n") == OtherInfo(False, Unit.INCH)
    assert parse_other_info("- Save: 'C:/a.dwg'\n") == OtherInfo("C:/a.dwg", Unit.MILLIMETER)
    assert parse_other_info("") == OtherInfo()
    with pytest.raises(UnparsableQuantity):
        parse_other_info("Unit: cubits")


@settings(max_examples=200)
@given(st.one_of(rc_specs(), rc_specs(unit=Unit.MILLIMETER)))
def test_rc_render_round_trip(spec):
    assert rc(render_fields(spec)) == spec


@given(st.integers(0, 18), st.integers(-500, 500), st.integers(-500, 500))
def test_precast_render_round_trip(n, x, y):
    spec = PrecastSpec("I-Beam Type I", n, Point2(x, y))
    assert fields_to_spec(parse_fields(render_fields(spec)), DrawingKind.PRECAST) == spec


def test_steel_render_round_trip():
    spec = SteelSpec("HP360X174", Point2(12.5, -3))
    assert fields_to_spec(parse_fields(render_fields(spec)), DrawingKind.STEEL) == spec
