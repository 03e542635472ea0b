import csv
import io
import json
import subprocess
import sys

import pytest

from sqso import fixtures
from sqso.cli import run_command

MODELS = ["builtin:" + n for n in fixtures.BUILTIN_MODELS]
BFAM = "builtin:b-family"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def report(*argv):
    code, out, err = run(*argv)
    return code, json.loads(out) if out else None, err


def write_model(tmp_path, A, B, name="m.json"):
    path = tmp_path / name
    path.write_text(json.dumps({"m": len(A), "A": A, "B": B}))
    return str(path)


def test_classify_bfam():
    code, rep, _ = report("classify", BFAM)
    assert code == 0 and rep["results"] == {"case": "Nonlinear"}
    assert rep["command"] == "classify" and rep["status"] == 0


def test_lyapunov_b_side_empty():
    code, rep, _ = report("lyapunov", BFAM, "--side", "B")
    side = rep["results"]["sides"]["B"]
    assert code == 0 and side["rays"] == [] and side["count"] == 0 and side["note"]


def test_lyapunov_a_side():
    code, rep, _ = report("lyapunov", BFAM, "--side", "A")
    res = rep["results"]
    assert sorted(map(tuple, res["sides"]["A"]["rays"])) == [(0, 1, 2), (0, 7, 2), (9, 11, 10)]
    assert res["sides"]["A"]["rowsum_candidate"] is None and res["certified"] is True


def test_validate_weak():
    code, rep, _ = report("validate", "builtin:weak-example")
    assert code == 0 and rep["results"]["admissibility"] == "Weak"


def test_validate_invalid(tmp_path):
    path = write_model(tmp_path, [["1", "0"], ["0", "1"]], [["1", "0"], ["0", "1"]])
    code, rep, _ = report("validate", path)
    assert code == 2 and rep["results"]["admissibility"] == "Invalid"


def test_validate_reports_exact_determinants():
    _, rep, _ = report("validate", BFAM)
    assert rep["results"]["det_A"] == "0" and rep["results"]["in_script_A"] is True


def test_classify_constant_and_linear(tmp_path):
    path = write_model(tmp_path, [["1", "1"], ["1", "1"]], [["1/2", "1/2"], ["1/2", "1/2"]])
    _, rep, _ = report("classify", path)
    assert rep["results"] == {"case": "Constant", "point": ["1/2", "1/2"]}
    path = write_model(tmp_path, [["0", "1", "0"], ["0", "0", "1"], ["1", "0", "0"]],
                       [["1"] * 3] * 3)
    _, rep, _ = report("classify", path)
    assert rep["results"]["case"] == "Linear" and rep["results"]["matrix"][0] == ["0", "1", "0"]


def test_simulate_csv(tmp_path):
    out = tmp_path / "traj.csv"
    code, rep, _ = report("simulate", BFAM, "--x0", "1/3,1/3,1/3", "--tol", "1e-13",
                          "--out", str(out))
    assert code == 0
    res = rep["results"]
    assert res["stop_reason"] == "Converged" and res["limit"]["kind"] == "FixedPoint"
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["step", "x_1", "x_2", "x_3", "delta"]
    assert rows[1][0] == "0" and rows[1][-1] == ""
    assert len(rows) == res["steps"] + 2
    assert all(abs(sum(float(v) for v in r[1:4]) - 1) < 1e-12 for r in rows[1:])


def test_simulate_cycle(tmp_path):
    path = write_model(tmp_path, [["0", "1", "0"], ["0", "0", "1"], ["1", "0", "0"]],
                       [["1"] * 3] * 3)
    _, rep, _ = report("simulate", path, "--x0", "0.6,0.3,0.1")
    assert rep["results"]["limit"]["kind"] == "Cycle" and rep["results"]["period"] == 3


def test_omega_bfam():
    code, rep, _ = report("omega", BFAM, "--x0", "1/3,1/3,1/3")
    res = rep["results"]
    assert code == 0 and res["ray_matrix_rank"] == 3 and res["certified"]
    assert abs(res["resolved_point"][0] - 1) < 1e-8
    assert {tuple(item["ray"]) for item in res["lambdas"]} == {(0, 1, 2), (0, 7, 2), (9, 11, 10)}


def test_omega_uncertified():
    code, rep, err = report("omega", "builtin:weak-example", "--x0", "1/3,1/3,1/3")
    assert code == 2 and "certificate" in err
    code, rep, _ = report("omega", "builtin:weak-example", "--x0", "1/3,1/3,1/3",
                          "--allow-uncertified")
    assert code == 0 and rep["results"]["certified"] is False


def test_x0_rules():
    code, rep, _ = report("simulate", BFAM, "--x0", "0.3333333333,0.3333333333,0.3333333334")
    assert code == 0 and "x0_rescaled" not in rep["inputs"]
    code, rep, _ = report("simulate", BFAM, "--x0", "0.3333333333,0.3333333333,0.3333333333")
    assert code == 0 and rep["inputs"]["x0_rescaled"] is True
    for bad in ("0.5,0.5", "0.5,0.6,0.1", "-0.1,0.6,0.5", "a,b,c"):
        code, out, err = run("simulate", BFAM, "--x0", bad)
        assert code == 1 and out == "" and err.count("\n") == 1


@pytest.mark.parametrize("argv", [
    ["validate", "/nonexistent/model.json"],
    ["validate", "builtin:nope"],
    ["frobnicate"],
    ["simulate", BFAM],
    ["simulate", BFAM, "--x0", "1,0,0", "--steps", "0"],
    ["template", "b-family", "--b", "1/2,1,1"],
])
def test_usage_errors(argv):
    code, out, err = run(*argv)
    assert code == 1 and out == "" and "error" in err


def test_bad_model_files(tmp_path):
    (tmp_path / "broken.json").write_text("{not json")
    assert run("validate", str(tmp_path / "broken.json"))[0] == 1
    assert run("validate", write_model(tmp_path, [["1", "x"]], [["1"]]))[0] == 1
    assert run("validate", write_model(tmp_path, [["1", "0"], ["0", "1"]], [["1"]]))[0] == 1
    assert run("validate", write_model(tmp_path, [["1/0", "1"], ["1", "1"]],
                                       [["1", "1"], ["1", "1"]]))[0] == 1


@pytest.mark.parametrize("model", MODELS)
@pytest.mark.parametrize("cmd", [
    ["validate"], ["classify"], ["lyapunov"],
    ["simulate", "--x0", "1/3,1/3,1/3"],
    ["omega", "--x0", "1/3,1/3,1/3", "--allow-uncertified"],
])
def test_every_fixture_every_command(model, cmd):
    code, rep, err = report(cmd[0], model, *cmd[1:])
    # Weak pairs have no classification: a domain rejection, reported cleanly
    expected = 2 if (cmd[0] == "classify" and model.endswith("weak-example")) else 0
    assert code == expected and rep["status"] == expected
    assert "Traceback" not in err


@pytest.mark.parametrize("cmd", [["lyapunov", BFAM], ["omega", BFAM, "--x0", "0.2,0.3,0.5"],
                                 ["simulate", BFAM, "--x0", "0.2,0.3,0.5"]])
def test_golden_stability(cmd):
    first, second = run(*cmd)[1], run(*cmd)[1]
    assert first == second
    assert list(json.loads(first)) == ["command", "inputs", "results", "status"]


def test_float_format():
    out = run("simulate", BFAM, "--x0", "0.2,0.3,0.5", "--steps", "1")[1]
    rep = json.loads(out)
    assert rep["results"]["steps"] == 1
    # 17 significant digits round-trip exactly
    for v in rep["results"]["final_point"]:
        assert float(repr(v)) == v


def test_templates_round_trip(tmp_path):
    code, out, _ = run("template", "b-family", "--b", "1,3/4,2/3")
    model = json.loads(out)
    assert code == 0 and model["B"][0] == ["1", "5/6", "1"]
    path = tmp_path / "t.json"
    path.write_text(out)
    assert report("validate", str(path))[1]["results"]["admissibility"] == "Strict"
    code, out, _ = run("template", "y-family", "--b", "2", "--y", "0,1,1/2")
    assert code == 0


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sqso.cli", "validate", BFAM],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["admissibility"] == "Strict"
