import json
import subprocess
import sys

import pytest

from possframes.cli import main
from possframes.corpus import corpus_path
from possframes.documents import load_algebra, load_frame

WATSON = str(corpus_path("watson"))
OVER = str(corpus_path("overconfident"))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", WATSON)
    assert code == 0 and out.strip().endswith("PASS watson")
    code, out, _ = run(capsys, "validate", WATSON, "--json")
    doc = json.loads(out)
    assert code == 0 and doc["ok"] and doc["standard"] and doc["kind"] == "validation-report"


def test_validate_failure_exit_code(capsys, tmp_path):
    doc = json.loads(corpus_path("watson").read_text())
    doc["agents"]["i"]["aware"]["bbar"] = []
    path = tmp_path / "bad.frame"
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "validate", str(path))
    assert code == 1 and "FAIL nonvacuity" in out


def test_eval(capsys):
    assert run(capsys, "eval", WATSON, "U.i(Barks)", "--at", "bbar", "--query", "holds_at")[:2] == (0, "true\n")
    assert run(capsys, "eval", WATSON, "U.i(Barks)", "--at", "bbar")[:2] == (0, "true\n")
    assert run(capsys, "eval", WATSON, "A.i(Barks)", "--at", "bbar")[:2] == (1, "false\n")
    assert run(capsys, "eval", WATSON, "~K.i(U.i(Barks))", "--query", "valid")[:2] == (0, "true\n")
    assert run(capsys, "eval", WATSON, "A.i(Barks)")[:2] == (0, "b\n")
    assert run(capsys, "eval", WATSON, "BOT")[:2] == (0, "(empty)\n")
    assert run(capsys, "eval", WATSON, "K.i(Barks)", "--query", "subset", "Barks")[0] == 0
    assert run(capsys, "eval", WATSON, "Barks", "--query", "equal", "TOP")[0] == 1


@pytest.mark.parametrize("argv", [
    ["eval", WATSON, "A.i("],
    ["eval", WATSON, "Meows"],
    ["eval", WATSON, "Barks", "--query", "equal"],
    ["eval", WATSON, "Barks", "--query", "holds_at"],
    ["eval", WATSON, "Barks", "--query", "valid", "Barks"],
    ["eval", WATSON, "Barks", "--query", "nonsense"],
    ["eval", WATSON, "Barks", "--at", "nowhere"],
    ["audit", WATSON, "--required", "made_up"],
    ["audit", WATSON, "--suite", "astrology"],
    ["audit", WATSON, "--agent", "nobody"],
    ["validate", "/nonexistent/file.frame"],
    ["frobnicate"],
    [],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_audit_watson(capsys):
    code, out, _ = run(capsys, "audit", WATSON, "--suite", "dlr", "--mode", "exhaustive", "--agent", "i")
    assert code == 0
    lines = out.splitlines()
    plaus = next(l for l in lines if "FAIL Plausibility" in l)
    assert "bbar" in plaus
    assert any(l.strip().startswith("PASS Nontrivial Plausibility") for l in lines)
    assert "dekel consistency: consistent" in out


def test_audit_required_set_changes_exit_code(capsys):
    code, _, _ = run(capsys, "audit", WATSON, "--suite", "dlr", "--required", "plausibility")
    assert code == 1


def test_audit_json_all_agents(capsys):
    code, out, _ = run(capsys, "audit", WATSON, "--json")
    doc = json.loads(out)
    assert code == 0 and doc["kind"] == "audit-reports" and len(doc["reports"]) == 2
    code, out, _ = run(capsys, "audit", WATSON, "--json", "--agent", "i", "--mode", "sample", "--samples", "50")
    doc = json.loads(out)
    assert doc["mode"] == "sampled"


def test_algebra_and_represent(capsys, tmp_path):
    out_alg = tmp_path / "watson.algebra"
    code, out, _ = run(capsys, "algebra", WATSON, "--agent", "i", "--out", str(out_alg))
    assert code == 0 and "4 elements" in out
    assert load_algebra(out_alg).size == 4
    out_frame = tmp_path / "filters.frame"
    code, out, err = run(capsys, "represent", str(out_alg), "--verify", "--out", str(out_frame))
    assert code == 0 and "PASS isomorphism" in out
    assert load_frame(out_frame).poset.n == 3
    code, out, _ = run(capsys, "represent", str(out_alg))
    assert code == 0 and json.loads(out)["kind"] == "frame"
    code, out, _ = run(capsys, "audit", str(out_alg), "--suite", "hms")
    assert code == 0


def test_represent_invalid_algebra(capsys, tmp_path):
    path = tmp_path / "bad.algebra"
    path.write_text(json.dumps({"format_version": 1, "kind": "algebra", "atoms": ["x"],
                                "tables": {"A": [0, 0], "K": [0, 1], "B": [0, 1]}}))
    code, _, err = run(capsys, "represent", str(path), "--verify")
    assert code == 1 and "A_tautology" in err


def test_quotient(capsys, tmp_path):
    code, out, _ = run(capsys, "quotient", WATSON)
    assert code == 0 and json.loads(out)["possibilities"] == ["m", "b", "bbar"]


def test_examples(capsys, tmp_path):
    code, out, _ = run(capsys, "examples")
    assert code == 0 and "watson.frame" in out
    code, out, _ = run(capsys, "examples", "--install", str(tmp_path / "ex"))
    assert code == 0
    assert (tmp_path / "ex" / "game.frame").exists()
    assert (tmp_path / "ex" / "watson.i.audit.json").exists()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "possframes", "eval", WATSON, "A.i(Barks)", "--at", "b"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "true\n"
