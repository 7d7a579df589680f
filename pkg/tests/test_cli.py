import csv
import json
from importlib import resources

import pytest

from archzeta.cli import main
from archzeta.schemas import NAMES, load_schema, validate

WHITNEY = str(resources.files("archzeta") / "data" / "fixtures" / "whitney.json")
EX19 = "z2^2*z3^3*z4 + z1^2*z3*z4^3 + z1^2*z2^2*z3*z4"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_schemas_load():
    for name in NAMES:
        assert load_schema(name)["title"] == name


def test_newton_example(capsys):
    code, out, _ = run(capsys, "newton", "analyze", "--f", EX19)
    doc = json.loads(out)
    assert code == 0 and doc["t0"] == "3/2" and doc["codim"] == 2
    validate(doc, "newton")


def test_snc_cor17(capsys):
    code, out, _ = run(capsys, "snc", "analyze", WHITNEY, "--alpha", "1", "--mult", "2")
    doc = json.loads(out)
    assert code == 0 and doc["cor17"]["status"] == "pass" and doc["cor17"]["dual_complex_dim"] == 1
    assert doc["floor"] == "-4"


def test_snc_cor17_failure_exit_code(capsys):
    code, out, _ = run(capsys, "snc", "analyze", WHITNEY, "--alpha", "1", "--mult", "3", "--floor", "-2")
    assert code == 1 and json.loads(out)["cor17"]["status"] == "fail"


def test_zeta_eval_smooth(capsys):
    code, out, err = run(capsys, "zeta", "eval", "--f", "x", "--s", "1", "--samples", "1000000", "--seed", "7")
    doc = json.loads(out)
    assert code == 0
    assert abs(doc["re"] - 1.0) < 3 * doc["stderr"] and doc["im"] == 0
    assert err == ""


def test_zeta_eval_complex_s(capsys):
    code, out, _ = run(capsys, "zeta", "eval", "--f", "x*y", "--s", "0.5+0.5i", "--samples", "100000", "--seed", "1")
    assert code == 0 and json.loads(out)["s"] == [0.5, 0.5]


def test_default_seed_is_logged(capsys):
    code, out, err = run(capsys, "zeta", "eval", "--f", "x", "--s", "1", "--samples", "10000")
    assert code == 0 and "seed" in err
    json.loads(out)


def test_zeta_poles_with_csv(capsys, tmp_path):
    out_json, out_csv = tmp_path / "r.json", tmp_path / "fit.csv"
    code, out, _ = run(capsys, "zeta", "poles", "--f", "x*y", "--samples", "1000000", "--seed", "3",
                       "--window", "0.001,0.05", "--reduced", "--out", str(out_json), "--csv", str(out_csv))
    assert code == 0 and out == ""
    doc = json.loads(out_json.read_text())
    assert doc["reduced"] and doc["poles"][0] == {**doc["poles"][0], "location": "-1", "order": 1}
    rows = list(csv.reader(out_csv.open()))
    assert rows[0] == ["t", "F_empirical", "F_model"] and len(rows) == 1 + 129
    t, fe, fm = map(float, rows[64])
    assert abs(fe - fm) < 0.1 * fe


def test_zeta_poles_ladder_file(capsys, tmp_path):
    lad = tmp_path / "ladder.json"
    lad.write_text(json.dumps([["1", 1], ["2", 1]]))
    code, out, _ = run(capsys, "zeta", "poles", "--f", "x*y", "--ladder", str(lad), "--samples", "500000", "--seed", "2")
    doc = json.loads(out)
    assert code == 0 and doc["ladder"] == [["1", 1], ["2", 1]] and doc["poles"][0]["order"] == 2


def test_bfun(capsys):
    code, out, _ = run(capsys, "bfun", "--f", "x^2 + y^3")
    doc = json.loads(out)
    assert doc["route"] == "exact:brieskorn_pham" and doc["minimal_exponent"]["alpha_tilde"] == "5/6"
    code, out, _ = run(capsys, "bfun", "--f", EX19, "--name", "example_1_9")
    assert json.loads(out)["minimal_exponent"] == {"alpha_tilde": "2/3", "multiplicity": 2, "lct": "2/3"}


def test_verify_min_exponent(capsys):
    code, out, _ = run(capsys, "verify", "min-exponent", "--f", "x^2 + y^3", "--samples", "1000000", "--seed", "5")
    assert code == 0 and json.loads(out)[0]["status"] == "pass"


def test_verify_suite(capsys, tmp_path):
    cfg = {"cases": [
        {"f": "x^2 - y^2*z", "name": "whitney", "resolution": WHITNEY, "claims": ["cor17", "newton_consistency"]},
        {"f": "x^2 + y^3", "bfun_override": {"roots": [["1", 1], ["5/6", 2], ["7/6", 1]]},
         "plan": {"nsamples": 1000000, "seed": 11}, "claims": ["min_exponent_pole"]},
    ]}
    path = tmp_path / "suite.json"
    path.write_text(json.dumps(cfg))
    code, out, _ = run(capsys, "verify", "suite", "--config", str(path))
    doc = json.loads(out)
    assert code == 1
    assert [r["status"] for r in doc] == ["pass", "pass", "fail"]
    assert doc[2]["details"]["expected"] == {"location": "-5/6", "order": 2}


def test_suite_requires_seed(capsys, tmp_path):
    path = tmp_path / "suite.json"
    path.write_text(json.dumps({"cases": [{"f": "x", "plan": {"nsamples": 100000}, "claims": ["shift_identity"]}]}))
    code, _, err = run(capsys, "verify", "suite", "--config", str(path))
    assert code == 2 and "seed" in err


@pytest.mark.parametrize("argv, needle", [
    (["zeta", "eval", "--f", "x +", "--s", "1"], "offset"),
    (["zeta", "eval", "--f", "x"], "--s"),
    (["newton", "analyze", "--f", "1 + x"], "origin"),
    (["bfun", "--f", "x^3 + x*y^5"], "corpus"),
    (["snc", "analyze", "/nonexistent.json"], "error"),
    (["frobnicate"], "usage"),
    (["snc", "analyze", WHITNEY, "--alpha", "1"], "--mult"),
])
def test_usage_and_input_errors(capsys, argv, needle):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and needle in err


def test_rationals_are_strings(capsys):
    _, out, _ = run(capsys, "snc", "analyze", WHITNEY)
    doc = json.loads(out)
    assert all(isinstance(c["location"], str) for c in doc["candidates"])


def test_shipped_suite_config_loads():
    from pathlib import Path

    from archzeta.verify import load_suite_config

    path = Path(__file__).resolve().parents[1] / "configs" / "default_suite.json"
    cfg = json.loads(path.read_text())
    validate(cfg, "suite_config")
    cases = load_suite_config(cfg, base_dir=path.parent)
    assert {c.name for c in cases} >= {"x", "cusp", "whitney"}
    assert all(Path(c.resolution).exists() for c in cases if c.resolution)
