import json
import subprocess
import sys
from pathlib import Path

import pytest

from sphtrop.cli import load_schema, run

ROOT = Path(__file__).resolve().parent.parent
PROBLEMS = ROOT / "problems"


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def payload(capsys, *argv):
    code, out, err = call(capsys, *argv)
    assert code == 0, err
    doc = json.loads(out)
    assert doc["status"] == "ok"
    return doc["payload"]


def test_every_problem_file_runs(capsys):
    for path in sorted(PROBLEMS.glob("*.json")):
        op = json.loads(path.read_text())["operation"]
        code, out, err = call(capsys, op, path)
        expected = 2 if path.stem == "redblue" else 0
        assert code == expected, (path.name, err)
        assert json.loads(out)["operation"] == op


def test_valuation_cone_sl3(capsys):
    cone = payload(capsys, "valuation-cone", PROBLEMS / "sl3_sl2.json")["cone"]
    assert cone["rays"] == [[0, -1]] and cone["lineality"] == [[1, -1]]


def test_validate_flags_non_polyhedral_fan(capsys):
    p = payload(capsys, "validate-fan", PROBLEMS / "redblue.json")
    assert p["ok"] and not p["polyhedral"] and len(p["non_polyhedral_witnesses"]) == 1


def test_sphtrop_error_gives_exit_two_and_error_document(capsys):
    code, out, err = call(capsys, "build-z", PROBLEMS / "redblue.json")
    assert code == 2
    doc = json.loads(out)
    assert doc["status"] == "error" and doc["payload"]["error"]["type"] == "NonPolyhedralFan"
    code, _, _ = call(capsys, "trop-closure", PROBLEMS / "redblue.json", "--global")
    assert code == 2


def test_build_z_gamma(capsys):
    assert payload(capsys, "build-z", PROBLEMS / "blowup_fan.json")["hat"]["gamma"] == [[-1, -1, 1]]
    assert payload(capsys, "build-z", PROBLEMS / "p2minus0.json")["hat"]["gamma"] == [[1, 1, 1]]


def test_lifted_trop_is_pushed(capsys):
    p = payload(capsys, "trop", PROBLEMS / "p1p1_diagonal.json")
    (cell,) = p["pushed"]["cells"]
    assert cell["points"] == [["0"]] and cell["rays"] == [[1]]


def test_check_closure_equal(capsys):
    assert payload(capsys, "check-closure", PROBLEMS / "blowup_line.json")["equal"]


def test_push_operation(tmp_path, capsys):
    raw = json.loads((PROBLEMS / "blowup_line.json").read_text())
    raw["operation"] = "push"
    raw["push"] = {"target_dim": 1, "maps": [
        {"source": {"rays": []}, "target": {"rays": []}, "matrix": [[1]]},
        {"source": {"rays": [[1]]}, "target": {"rays": [[1]]}, "matrix": []},
    ]}
    f = tmp_path / "push.json"
    f.write_text(json.dumps(raw))
    p = payload(capsys, "push", f)
    assert len(p["pushed"]["pieces"]) == len(p["source"]["pieces"])
    del raw["push"]["maps"][1]
    f.write_text(json.dumps(raw))
    assert call(capsys, "push", f)[0] == 2


def test_output_is_deterministic_and_thread_independent(tmp_path, monkeypatch):
    outs = []
    for threads in ("1", "4"):
        monkeypatch.setenv("SPHTROP_THREADS", threads)
        target = tmp_path / f"out{threads}.json"
        assert run(["check-closure", str(PROBLEMS / "blowup_line.json"), "--out", str(target)]) == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]


def test_usage_and_input_errors_exit_one(tmp_path, capsys):
    assert call(capsys, "no-such-op", PROBLEMS / "sl2.json")[0] == 1
    assert call(capsys, "trop")[0] == 1
    assert call(capsys, "trop", tmp_path / "missing.json")[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert call(capsys, "trop", bad)[0] == 1


def test_schema_violation_exits_one(tmp_path, capsys):
    raw = json.loads((PROBLEMS / "sl2.json").read_text())
    raw["surprise"] = 1
    f = tmp_path / "extra.json"
    f.write_text(json.dumps(raw))
    code, out, err = call(capsys, "valuation-cone", f)
    assert code == 1 and out == ""


def test_missing_descriptor_exits_one(tmp_path, capsys):
    f = tmp_path / "nodesc.json"
    f.write_text(json.dumps({"version": "1", "operation": "valuation-cone"}))
    assert call(capsys, "valuation-cone", f)[0] == 1


def test_stdin(monkeypatch, capsys):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO((PROBLEMS / "sl2.json").read_text()))
    code, out, _ = call(capsys, "valuation-cone", "-")
    assert code == 0 and json.loads(out)["input"] == "<stdin>"


@pytest.mark.parametrize("op,name", [("validate-fan", "blowup_fan"), ("build-z", "blowup_fan"),
                                     ("valuation-cone", "sl3_sl2"), ("trop", "punctured_plane_line"),
                                     ("render", "blowup_fan")])
def test_svg_output(op, name, capsys):
    argv = [op, PROBLEMS / f"{name}.json"] + ([] if op == "render" else ["--format", "svg"])
    code, out, err = call(capsys, *argv)
    assert code == 0, err
    assert out.startswith("<svg") and out.rstrip().endswith("</svg>")


def test_svg_unsupported_for_closure(capsys):
    assert call(capsys, "trop-closure", PROBLEMS / "blowup_line.json", "--format", "svg")[0] == 1


def test_docs_schema_matches_packaged_schema():
    assert json.loads((ROOT / "docs" / "problem.schema.json").read_text()) == load_schema()


def test_console_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sphtrop.cli", "valuation-cone", str(PROBLEMS / "sl2.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["payload"]["cone"]["rays"] == [[-1]]
