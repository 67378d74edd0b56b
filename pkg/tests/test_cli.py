import json

import pytest

from yangbethe.cli import SchemaError, dumps, main, run

XXX = {"N": 2, "modules": [{"type": "vector"}, {"type": "vector"}], "z": ["0", "3"],
       "twist": {"model": "xxx", "diag": ["1", "1"]}, "xi": [1], "roots": [["1"]]}
GAUDIN = {"N": 2, "modules": [{"type": "vector"}, {"type": "vector"}], "z": ["0", "1"],
          "twist": {"model": "gaudin", "diag": ["0", "0"]}, "xi": [1], "roots": [["1/2"]]}


def _strip_runtime(obj):
    if isinstance(obj, dict):
        return {k: _strip_runtime(v) for k, v in obj.items() if k != "runtime_ms"}
    if isinstance(obj, list):
        return [_strip_runtime(v) for v in obj]
    return obj


def test_bethe_solve_finds_root_one():
    rep = run("bethe-solve", XXX)
    assert rep["status"] == "pass"
    best = max(rep["roots"], key=lambda r: r["hits"])
    assert best["rational"] == [["1/1"]]
    assert best["residual"] <= 1e-12


def test_gaudin_verify_passes():
    rep = run("gaudin-verify", GAUDIN)
    assert rep["status"] == "pass"
    ks = {c["k"] for c in rep["eigenpair"]["checks"]}
    assert ks == {1, 2}


def test_check_identities_all_zero():
    spec = dict(XXX, twist={"model": "xxx", "diag": ["2", "-3"]})
    rep = run("check-identities", spec)
    assert rep["status"] == "pass"
    assert all(c["max_abs_error"] == 0 for c in rep["checks"] if c["exact"])


def test_bethe_verify_and_forms_and_limits():
    assert run("bethe-verify", XXX)["status"] == "pass"
    spec = dict(XXX, z=["3", "0"])
    forms = run("forms-check", spec)
    assert forms["status"] == "pass" and forms["positivity_hypothesis"]
    lim = run("limit-check", dict(XXX, roots=[["1/2"]], twist={"model": "gaudin", "diag": ["1/3", "-1"]}))
    assert lim["status"] == "pass"


def test_transfer_eval_reports_operators():
    rep = run("transfer-eval", dict(XXX, u=["1/2"]))
    assert rep["status"] == "pass"
    ops = rep["transfers"][0]["operators"]
    assert len(ops) == 3 and ops[0][0][0] == "1/1"


def test_report_deterministic_and_round_trips():
    a = run("bethe-solve", XXX, seed=3)
    b = run("bethe-solve", XXX, seed=3)
    assert _strip_runtime(a) == _strip_runtime(b)
    assert json.loads(dumps(a)) == a


@pytest.mark.parametrize("spec,msg", [
    ({"N": 2, "modules": [{"type": "vector"}], "z": ["0", "1"]}, "z"),
    ({"N": 2, "modules": [{"type": "vector"}], "z": ["x"]}, "z"),
    (dict(XXX, xi=[1, 1]), "xi"),
    (dict(XXX, roots=[["1", "2"]]), "roots"),
    (dict(XXX, extra=1), "spec"),
])
def test_schema_errors(spec, msg):
    with pytest.raises(SchemaError, match=msg):
        run("bethe-solve", spec)


def test_wrong_model_is_input_error():
    with pytest.raises(SchemaError):
        run("gaudin-solve", XXX)


def test_main_exit_codes(tmp_path, capsys):
    good = tmp_path / "good.json"
    good.write_text(json.dumps(XXX))
    out = tmp_path / "out.json"
    assert main(["bethe-solve", "--spec", str(good), "--json-out", str(out)]) == 0
    assert json.loads(out.read_text())["command"] == "bethe-solve"
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["bethe-solve", "--spec", str(bad)]) == 2
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps(dict(XXX, roots=[["2"]])))
    assert main(["bethe-verify", "--spec", str(wrong)]) == 1
    capsys.readouterr()


def test_seed_and_tol_flags_are_echoed(tmp_path):
    good = tmp_path / "good.json"
    good.write_text(json.dumps(XXX))
    out = tmp_path / "out.json"
    main(["bethe-solve", "--spec", str(good), "--seed", "9", "--tol", "1e-9", "--json-out", str(out)])
    rep = json.loads(out.read_text())
    assert rep["inputs"]["seed"] == 9 and rep["inputs"]["tol"] == 1e-9
