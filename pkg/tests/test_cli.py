from __future__ import annotations

import json
import os

import pytest

from setvi.cli import main

from conftest import INSTANCES

GOLDEN = INSTANCES / "golden"
# set SETVI_REGEN=1 to rewrite the golden reports after an intended change
REGEN = os.environ.get("SETVI_REGEN") == "1"

CASES = [
    ("check", "minty_triangle", ["--point", "0", "--report", "structured"]),
    ("check", "minty_triangle", ["--point", "1", "--report", "structured"]),
    ("check", "identity_grid", ["--point", "-2,0", "--report", "structured"]),
    ("check", "oscillation_r3", ["--point", "0", "--report", "structured"]),
    ("check", "jump", ["--point", "0", "--report", "structured"]),
    ("enumerate", "identity_grid", []),
    ("enumerate", "affine_segment", []),
    ("enumerate", "oscillation_r3", []),
    ("audit", "affine_segment", []),
    ("audit", "minty_triangle", []),
    ("audit", "oscillation_r3", []),
    ("audit", "jump", []),
    ("audit", "circle", []),
    ("audit", "tangent_truncation", []),
]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def golden_name(cmd, name, extra):
    tag = extra[1].replace(",", "_").replace("/", "-") if extra else ""
    return f"{name}.{cmd}{'.' + tag if cmd == 'check' else ''}.json"


@pytest.mark.parametrize("cmd,name,extra", CASES)
def test_golden_reports(capsys, cmd, name, extra):
    code, out, err = run(capsys, cmd, "--instance", str(INSTANCES / f"{name}.json"), *extra)
    assert code == 0, err
    path = GOLDEN / golden_name(cmd, name, extra)
    if REGEN:
        GOLDEN.mkdir(exist_ok=True)
        path.write_text(out)
    assert out == path.read_text()


def test_output_is_deterministic(capsys):
    args = ["audit", "--instance", str(INSTANCES / "minty_triangle.json")]
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_check_table_and_expectations(capsys):
    inst = str(INSTANCES / "minty_triangle.json")
    code, out, _ = run(capsys, "check", "--instance", inst, "--point", "0", "--expect", "W-MVI=Fails", "--expect", "W-Min=Holds")
    assert code == 0
    assert "W-MVI      Fails   (1)" in out
    assert "W-MVI witness derivative: {(1, 1)} + cone{(0, 1), (1, 0)}" in out
    code, _, err = run(capsys, "check", "--instance", inst, "--point", "0", "--expect", "W-MVI=Holds")
    assert code == 1 and "expectation failed: W-MVI" in err
    code, _, err = run(capsys, "check", "--instance", inst, "--point", "0", "--expect", "W-MVI")
    assert code == 2


def test_check_structured_fields(capsys):
    code, out, _ = run(capsys, "check", "--instance", str(INSTANCES / "minty_triangle.json"), "--point", "0", "--report", "structured")
    rep = json.loads(out)
    mvi = next(r for r in rep["results"] if r["predicate"] == "W-MVI")
    assert set(mvi) >= {"predicate", "status", "witness_point", "certificate_dual", "exact"}
    assert mvi["witness_derivative"] == {"kind": "set", "vertices": [["1", "1"]], "rays": [["0", "1"], ["1", "0"]], "lines": []}


def test_distinct_diagnostics(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    doc = json.loads((INSTANCES / "affine_segment.json").read_text())
    doc["function"]["domain"][0]["offset"] = "1.5"
    bad.write_text(json.dumps(doc))
    code, _, err = run(capsys, "check", "--instance", str(bad), "--point", "0")
    assert code == 2 and "parse error" in err
    code, _, err = run(capsys, "audit", "--instance", str(INSTANCES / "corrupted_cone.json"))
    assert code == 2 and "invalid cone" in err
    doc = json.loads((INSTANCES / "affine_segment.json").read_text())
    doc["candidates"].append([2])
    out_of_dom = tmp_path / "dom.json"
    out_of_dom.write_text(json.dumps(doc))
    code, _, err = run(capsys, "check", "--instance", str(out_of_dom), "--point", "2")
    assert code == 2 and "point not in domain" in err
    code, _, err = run(capsys, "check", "--instance", str(INSTANCES / "affine_segment.json"), "--point", "1/3")
    assert code == 2 and "not among the instance candidates" in err
    code, _, err = run(capsys, "check", "--instance", str(INSTANCES / "affine_segment.json"), "--point", "0.5")
    assert code == 2 and "parse error" in err
    code, _, err = run(capsys, "check", "--instance", str(tmp_path / "missing.json"), "--point", "0")
    assert code == 2 and "cannot read" in err


def test_backend_mismatch(capsys):
    code, _, err = run(capsys, "enumerate", "--instance", str(INSTANCES / "minty_triangle.json"))
    assert code == 2 and "backend mismatch" in err
    code, _, err = run(capsys, "check", "--instance", str(INSTANCES / "circle.json"), "--point", "0")
    assert code == 2 and "backend mismatch" in err


def test_enumerate_identity(capsys):
    code, out, _ = run(capsys, "enumerate", "--instance", str(INSTANCES / "identity_grid.json"))
    rep = json.loads(out)
    assert code == 0
    assert rep["oracle_weak_efficient"] == rep["W-SVI"] == rep["Sc-W-MVI"]
    assert len(rep["W-SVI"]) == 17 and all("-2" in p for p in rep["W-SVI"])
    assert rep["diff"] == []


def test_enumerate_nonconvex_diff_not_asserted(capsys, tmp_path):
    # psi(x) = (|x|, |x|) on {-1, 1}: the oracle keeps both points, the VI
    # sees the descent towards 0, and without convex segments nothing is asserted
    doc = {
        "name": "kink",
        "space_dim": 1,
        "cone": {"dual_base": [[-1, 0], [0, -1]]},
        "function": {
            "kind": "max_affine",
            "domain": [{"normal": [1], "offset": 1}, {"normal": [-1], "offset": 1}],
            "components": [[{"slope": [1], "offset": 0}, {"slope": [-1], "offset": 0}]] * 2,
        },
        "candidates": [[-1], [1]],
        "options": {"convex": True},
    }
    p = tmp_path / "kink.json"
    p.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "enumerate", "--instance", str(p))
    rep = json.loads(out)
    assert code == 0
    assert rep["oracle_weak_efficient"] == [["-1"], ["1"]] and rep["W-SVI"] == []
    assert all(not d["asserted"] for d in rep["diff"]) and len(rep["diff"]) == 2


def test_audit_random(capsys):
    code, out, _ = run(capsys, "audit", "--random", "2,3", "42", "60")
    rep = json.loads(out)
    assert code == 0
    assert rep["suites"]["adjunction"] == {"checked": 60, "violations": []}
    assert rep["suites"]["implications"]["checked"] > 0
    code, _, err = run(capsys, "audit", "--random", "x", "1", "2")
    assert code == 2


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["bogus"]) == 2
    capsys.readouterr()
