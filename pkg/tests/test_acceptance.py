"""Acceptance criteria, one test each; every test reports a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` or
``python tests/test_acceptance.py``; the lines are repeated in the session
summary.
"""

import io
import math
import time

import ezdxf
import pytest
from click.testing import CliRunner

from strucdraw.cli import main
from strucdraw.emit import Circle, counts, emit_dxf, emit_script, ir_to_entities, trace_script
from strucdraw.frontend import fields_to_spec, parse_fields
from strucdraw.geometry import corner_rebars, hook_geometry, layout_rebars, resolve, verify_ir
from strucdraw.ir import DrawingKind, Point2, PrecastDrawing, SteelDrawing, Unit, parse_ir, serialize_ir
from strucdraw.knowledge import retrieve
from strucdraw.pipeline import FaultProvider, calc_tool, parse_schedule, run_pipeline
from strucdraw.pipeline.evaluate import bundled_corpus, evaluate, expected_tags

import golden
from oracles import random_calls, reference
from strategies import random_rc_specs

TOL = 1e-3
RESULTS: dict[int, str] = {}


def report(n: int, title: str, check):
    """Run ``check``; record and print one PASS/FAIL line whatever happens."""
    try:
        detail = check()
    except Exception as exc:
        line = f"FAIL criterion {n}: {title} ({type(exc).__name__}: {exc})"
        RESULTS[n] = line
        print(line)
        raise
    line = f"PASS criterion {n}: {title}" + (f" ({detail})" if detail else "")
    RESULTS[n] = line
    print(line)


def _close(a, b, tol=TOL):
    return len(a) == len(b) and all(math.isclose(x, y, abs_tol=tol) for x, y in zip(a, b))


def _seg(s):
    return (*s.end1, *s.end2)


def _ref_seg(ref):
    return (*ref[0], *ref[1])


def _spec(fields, kind):
    return fields_to_spec(parse_fields(fields), kind)


def test_1_rc_golden():
    def check():
        spec = _spec(golden.RC_FIELDS, DrawingKind.RC)
        start = time.perf_counter()
        ir = resolve(spec)
        elapsed = time.perf_counter() - start
        assert [tuple(v) for v in ir.vertices] == golden.VERTICES
        assert all(_close(_seg(s), _ref_seg(r)) for s, r in zip(ir.sides, golden.SIDES))
        assert len(ir.rebar_centers) == 8
        for c, r, rc, rr in zip(ir.rebar_centers, ir.rebar_radii, golden.REBAR_CENTERS, golden.REBAR_RADII):
            assert _close(c, rc) and math.isclose(r, rr, abs_tol=TOL)
        assert ir.rebar_centers[3] == Point2(11, 21)
        assert _close(ir.stirrup, golden.STIRRUP)
        assert all(_close(_seg(s), _ref_seg(r)) for s, r in zip(ir.stirrup_lines, golden.L))
        assert all(_close((*a.center, a.radius, a.start_angle, a.end_angle), r) for a, r in zip(ir.stirrup_arcs, golden.A))
        assert all(_close(_seg(s), _ref_seg(r)) for s, r in zip(ir.hook_lines, golden.LH))
        assert len(ir.stirrup_lines) == 8 and len(ir.stirrup_arcs) == 4 and len(ir.hook_lines) == 6
        assert elapsed < 1.0
        return f"resolve took {elapsed * 1000:.2f} ms"

    report(1, "RC golden reproduction within 1e-3, fourth top bar at x = 11", check)


def test_2_hook_golden():
    def check():
        spec = _spec(golden.RC_FIELDS, DrawingKind.RC)
        c1 = corner_rebars(layout_rebars(spec)).c1
        hooks, lext = hook_geometry(c1, spec.stirrup_bar.diameter_in(spec.unit), spec.unit)
        endpoints = [p for s in hooks for p in (s.end1, s.end2)]
        expected = [p for ref in golden.LH for p in ref]
        assert len(endpoints) == 12
        worst = max(max(abs(a - b) for a, b in zip(p, q)) for p, q in zip(endpoints, expected))
        assert worst <= TOL
        assert lext == 3.0 == golden.HOOK_LENGTH
        return f"max endpoint error {worst:.2e}, Lext = {lext}"

    report(2, "hook endpoints within 1e-3 and Lext = 3 for Ds = 0.5", check)


def test_3_steel_golden(replay, kb, templates):
    def check():
        run = run_pipeline(golden.STEEL_DESCRIPTION, None, replay, kb, templates=templates)
        assert run.ok
        assert run.ir == SteelDrawing(save=False, unit=Unit.MILLIMETER, section_type="W1100X390", bottom_left=Point2(0, 0))
        assert "PASTECLIP 0,0 " in trace_script(run.script).commands()
        emitted = emit_script(run.ir, retrieve(kb, DrawingKind.STEEL).codegen_steps)
        assert "SendCommand('PASTECLIP 0,0 ')" in emitted
        assert "PASTECLIP 0,0 " in trace_script(emitted).commands()

    report(3, "steel pipeline IR exact and script pastes with 'PASTECLIP 0,0 '", check)


def test_4_precast_golden(replay, kb, templates):
    def check():
        ir = resolve(_spec(golden.PRECAST_FIELDS, DrawingKind.PRECAST))
        assert isinstance(ir, PrecastDrawing)
        assert [tuple(p) for p in ir.strand_centers] == golden.PRECAST_STRANDS
        circles = [e for e in ir_to_entities(ir) if isinstance(e, Circle)]
        assert len(circles) == 4 and all(c.radius == golden.STRAND_RADIUS for c in circles)
        run = run_pipeline(golden.PRECAST_DESCRIPTION, None, replay, kb, templates=templates)
        assert run.ok and run.ir == ir
        drawn = trace_script(run.script).entities
        assert len(drawn) == 4 and all(isinstance(c, Circle) and c.radius == 0.5 for c in drawn)

    report(4, "precast strands [3,2] [5,2] [7,2] [9,2] and exactly 4 circles of radius 0.5", check)


def test_5_pipeline_determinism(replay, kb, templates):
    def check():
        spec = _spec(golden.RC_FIELDS, DrawingKind.RC)
        dumps = set()
        for _ in range(20):
            run = run_pipeline(golden.RC_DESCRIPTION, None, replay, kb, templates=templates)
            dumps.add(run.dumps())
        assert len(dumps) == 1
        ir = parse_ir(serialize_ir(run.ir))
        report_ = verify_ir(ir, spec, TOL)
        assert len(report_) == 0
        return "20 runs, 1 distinct transcript, empty verify report"

    report(5, "replay pipeline byte-identical over 20 runs and final IR verifies", check)


def _ezdxf_flat(data: bytes):
    doc = ezdxf.read(io.StringIO(data.decode("ascii")))
    out = []
    for e in doc.modelspace():
        if e.dxftype() == "LINE":
            out.append(("LINE", e.dxf.start.x, e.dxf.start.y, e.dxf.end.x, e.dxf.end.y))
        elif e.dxftype() == "CIRCLE":
            out.append(("CIRCLE", e.dxf.center.x, e.dxf.center.y, e.dxf.radius))
        else:
            out.append(("ARC", e.dxf.center.x, e.dxf.center.y, e.dxf.radius, e.dxf.start_angle, e.dxf.end_angle))
    return out


def _flat(e):
    name = type(e).__name__.upper()
    if name == "LINE":
        return (name, *e.start, *e.end)
    if name == "CIRCLE":
        return (name, *e.center, e.radius)
    return (name, *e.center, e.radius, e.start_angle, e.end_angle)


def test_6_property_suites():
    def check():
        start = time.perf_counter()
        specs = random_rc_specs(1000)
        for spec in specs:
            ir = resolve(spec)
            axis = spec.x1 + spec.x2
            bars = sorted(((c.x, c.y, r) for c, r in zip(ir.rebar_centers, ir.rebar_radii)), key=lambda b: (round(b[1], 2), b[0]))
            mirrored = sorted(((axis - x, y, r) for x, y, r in bars), key=lambda b: (round(b[1], 2), b[0]))
            assert all(_close(a, b) for a, b in zip(bars, mirrored)), "(a) mirror symmetry"
            ds = spec.stirrup_bar.diameter_in(spec.unit)
            for x, y, r in bars:
                clear = min(x - spec.x1, spec.x2 - x, y - spec.y1, spec.y2 - y) - r
                assert clear >= spec.cover - 1e-4, "(b) cover"
                assert clear >= spec.cover + ds - 1e-4, "(b) cover plus stirrup"
            ents = ir_to_entities(ir)
            theirs = _ezdxf_flat(emit_dxf(ents, ir.unit))
            ours = [_flat(e) for e in ents]
            assert len(theirs) == len(ours)
            for a, b in zip(ours, theirs):
                assert a[0] == b[0] and _close(a[1:], b[1:], 1e-6), "(c) DXF round trip"
            assert len(verify_ir(ir, spec, TOL)) == 0, "(e) oracle self-consistency"
        n_calls = 0
        for op, args in random_calls(10_000):
            assert calc_tool(op, args) == reference(op, args), f"(d) {op}{args}"
            n_calls += 1
        elapsed = time.perf_counter() - start
        assert elapsed < 60
        return f"1000 specs, {n_calls} tool calls, {elapsed:.1f} s"

    report(6, "property suites (a)-(e) over 1000 random RC specs and 10^4 tool calls", check)


def test_7_harness_reproduces_schedule(replay, kb, templates):
    def check():
        cases = bundled_corpus()
        fault = FaultProvider(replay, parse_schedule(golden.SCHEDULE), 100, seed=0)
        table = evaluate(cases, 100, fault, kb, templates=templates, jobs=4)
        rc = dict(table.rows())[DrawingKind.RC]
        for tag, rate in golden.SCHEDULE_RATES.items():
            assert rc[tag] == pytest.approx(rate, abs=1e-12), f"step {tag}: {rc[tag]} != {rate}"
        perfect = evaluate(cases, 10, replay, kb, templates=templates)
        for kind, cells in perfect.rows():
            for tag in expected_tags(kind, kb):
                assert cells[tag] == 1.0, f"{kind.value} step {tag}"
        return "RC row " + ", ".join(f"{t}={rc[t]:.2f}" for t in golden.SCHEDULE_RATES)

    report(7, "seeded fault schedule reproduced exactly, perfect replay 100%", check)


def test_8_front_end_equivalence(tmp_path):
    def check():
        runner = CliRunner()
        for name, fields, description in (
            ("rc", golden.RC_FIELDS, golden.RC_DESCRIPTION),
            ("steel", golden.STEEL_FIELDS, golden.STEEL_DESCRIPTION),
            ("precast", golden.PRECAST_FIELDS, golden.PRECAST_DESCRIPTION),
        ):
            (tmp_path / f"{name}.fields").write_text(fields)
            (tmp_path / f"{name}.txt").write_text(description)
            c = runner.invoke(main, ["compile", str(tmp_path / f"{name}.fields"), "--out-dir", str(tmp_path / f"{name}_c")])
            a = runner.invoke(main, ["agent", str(tmp_path / f"{name}.txt"), "--out-dir", str(tmp_path / f"{name}_a")])
            assert c.exit_code == 0 and a.exit_code == 0, (name, c.output, a.output)
            ir_c = parse_ir((tmp_path / f"{name}_c" / "ir.json").read_text())
            ir_a = parse_ir((tmp_path / f"{name}_a" / "ir.json").read_text())
            assert ir_c == ir_a, name
        return "rc, steel and precast IRs equal"

    report(8, "compile and agent (replay) produce equal IRs", check)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
