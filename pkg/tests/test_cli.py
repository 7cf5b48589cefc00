import json
from importlib import resources

import pytest
from click.testing import CliRunner

from strucdraw.cli import main
from strucdraw.emit import counts, read_dxf
from strucdraw.ir import parse_ir

import golden

CASES = [
    ("rc", golden.RC_FIELDS, golden.RC_DESCRIPTION),
    ("steel", golden.STEEL_FIELDS, golden.STEEL_DESCRIPTION),
    ("precast", golden.PRECAST_FIELDS, golden.PRECAST_DESCRIPTION),
]


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args, input=None):
    return runner.invoke(main, [str(a) for a in args], input=input, catch_exceptions=False)


@pytest.mark.parametrize("name, fields, description", CASES)
def test_compile_and_agent_agree(runner, tmp_path, name, fields, description):
    (tmp_path / "fields.txt").write_text(fields)
    (tmp_path / "desc.txt").write_text(description)
    c = invoke(runner, "compile", tmp_path / "fields.txt", "--out-dir", tmp_path / "c")
    assert c.exit_code == 0, c.output
    a = invoke(runner, "agent", tmp_path / "desc.txt", "--out-dir", tmp_path / "a")
    assert a.exit_code == 0, a.output
    assert parse_ir((tmp_path / "c" / "ir.json").read_text()) == parse_ir((tmp_path / "a" / "ir.json").read_text())
    for out in ("run.json", "ir.json", "script.py.txt", "drawing.dxf"):
        assert (tmp_path / "a" / out).exists()


def test_compile_rc_outputs(runner, tmp_path):
    (tmp_path / "f.txt").write_text(golden.RC_FIELDS)
    assert invoke(runner, "compile", tmp_path / "f.txt", "--out-dir", tmp_path).exit_code == 0
    ents, unit = read_dxf((tmp_path / "drawing.dxf").read_bytes())
    assert counts(ents) == {"LINE": 18, "CIRCLE": 8, "ARC": 4} and unit.value == "Inch"
    assert parse_ir((tmp_path / "ir.json").read_text()) == parse_ir(golden.RC_JSON)


def test_compile_stdin_and_emit_subset(runner, tmp_path):
    r = invoke(runner, "compile", "-", "--emit", "ir", "--out-dir", tmp_path, input=golden.STEEL_FIELDS + "Save: C:/x.dwg\n")
    assert r.exit_code == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["ir.json"]
    assert parse_ir((tmp_path / "ir.json").read_text()).save == "C:/x.dwg"


def test_compile_missing_cover(runner, tmp_path):
    text = "\n".join(l for l in golden.RC_FIELDS.splitlines() if "cover" not in l)
    r = invoke(runner, "compile", "-", "--out-dir", tmp_path, input=text)
    assert r.exit_code == 1 and "Thickness of clear cover" in r.output


def test_compile_unknown_kind(runner, tmp_path):
    r = invoke(runner, "compile", "-", "--out-dir", tmp_path, input="- Colour: red\n")
    assert r.exit_code == 1


def test_agent_is_byte_identical(runner, tmp_path):
    (tmp_path / "d.txt").write_text(golden.RC_DESCRIPTION)
    outs = []
    for i in range(2):
        assert invoke(runner, "agent", tmp_path / "d.txt", "--out-dir", tmp_path / str(i)).exit_code == 0
        outs.append([(tmp_path / str(i) / n).read_bytes() for n in ("run.json", "ir.json", "script.py.txt", "drawing.dxf")])
    assert outs[0] == outs[1]


def _replay_dir(tmp_path, edit):
    data = json.loads(resources.files("strucdraw.data").joinpath("replay", "rc_beam.json").read_text())
    for rec in data["records"]:
        rec["completion"] = edit(rec["step"], rec["completion"])
    d = tmp_path / "replay"
    d.mkdir()
    (d / "rc.json").write_text(json.dumps(data))
    return d


def test_agent_step_failure_exit_2(runner, tmp_path):
    d = _replay_dir(tmp_path, lambda step, c: c.replace("</result>", "") if step == 5 else c)
    (tmp_path / "d.txt").write_text(golden.RC_DESCRIPTION)
    r = invoke(runner, "agent", tmp_path / "d.txt", "--provider", f"replay:{d}", "--out-dir", tmp_path / "o")
    assert r.exit_code == 2
    run = json.loads((tmp_path / "o" / "run.json").read_text())
    assert run["transcripts"][-1]["step"] == 5 and run["transcripts"][-1]["outcome"] == "extraction-failed"


def test_agent_verify_failure_exit_1(runner, tmp_path):
    d = _replay_dir(tmp_path, lambda step, c: c.replace("[11, 21],", "[13, 21],") if step == 5 else c)
    (tmp_path / "d.txt").write_text(golden.RC_DESCRIPTION)
    r = invoke(runner, "agent", tmp_path / "d.txt", "--provider", f"replay:{d}", "--out-dir", tmp_path / "o")
    assert r.exit_code == 1 and "1 mismatch" in r.output


def test_agent_live_without_key(runner, tmp_path, monkeypatch):
    monkeypatch.delenv("NO_SUCH_KEY", raising=False)
    (tmp_path / "d.txt").write_text(golden.RC_DESCRIPTION)
    r = invoke(runner, "agent", tmp_path / "d.txt", "--provider", "live", "--api-key-env", "NO_SUCH_KEY",
               "--out-dir", tmp_path)
    assert r.exit_code == 2 and "NO_SUCH_KEY" in r.output


@pytest.mark.parametrize("ir_text, fields, code", [
    (golden.RC_JSON, golden.RC_FIELDS, 0),
    (golden.RC_JSON_X13, golden.RC_FIELDS, 1),
])
def test_verify(runner, tmp_path, ir_text, fields, code):
    (tmp_path / "ir.json").write_text(ir_text)
    (tmp_path / "f.txt").write_text(fields)
    r = invoke(runner, "verify", tmp_path / "ir.json", tmp_path / "f.txt")
    assert r.exit_code == code
    report = json.loads(r.output)
    assert len(report["mismatches"]) == code


def test_verify_wrong_steel_type(runner, tmp_path):
    (tmp_path / "f.txt").write_text(golden.STEEL_FIELDS)
    r = invoke(runner, "compile", tmp_path / "f.txt", "--emit", "ir", "--out-dir", tmp_path)
    ir = (tmp_path / "ir.json").read_text().replace("W1100X390", "HP360X174")
    (tmp_path / "ir.json").write_text(ir)
    assert invoke(runner, "verify", tmp_path / "ir.json", tmp_path / "f.txt").exit_code == 1


def test_eval_fault_schedule(runner, tmp_path):
    r = invoke(runner, "eval", "--trials", 100, "--provider", f"fault:{golden.SCHEDULE}", "--seed", 5,
               "--jobs", 4, "--out-dir", tmp_path)
    assert r.exit_code == 0, r.output
    rows = (tmp_path / "accuracy.csv").read_text().splitlines()
    rc = next(row for row in rows if row.startswith("rectangular"))
    assert rc == "rectangular concrete beam cross-section,0.98,1,,0.85,0.77,0.81,1,0.95,0.83,100"


def test_eval_single_trial(runner, tmp_path):
    r = invoke(runner, "eval", "--trials", 1, "--out-dir", tmp_path)
    assert r.exit_code == 0
    assert "100%" in r.output


@pytest.mark.parametrize("args", [
    ["--trials", 0], ["--tolerance", 0], ["--provider", "oracle"], ["--provider", "fault:"], ["--provider", "fault:1=2"],
])
def test_eval_bad_arguments(runner, tmp_path, args):
    r = runner.invoke(main, ["eval", "--out-dir", str(tmp_path), *map(str, args)])
    assert r.exit_code != 0
