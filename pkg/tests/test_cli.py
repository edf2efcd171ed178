import json
from fractions import Fraction

import pytest

from finitary import cli
from finitary.rho import RhoTable, is_valid


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.lstrip().startswith("{") else out.out), out.err


def test_report_envelope(capsys):
    code, rep, _ = run(capsys, "cb-rank", "product(cube(2),schreier)")
    assert code == 0
    assert set(rep) == {"schema", "command", "config", "ok", "results", "violations"}
    assert rep["results"]["rank"] == "ω" and rep["ok"]


def test_rho_synthesize_writes_valid_table(capsys, tmp_path):
    out = tmp_path / "rho.json"
    code, rep, _ = run(capsys, "rho-synthesize", "--N", "5", "--M", "4", "--out", str(out))
    assert code == 0 and rep["results"]["found"]
    assert is_valid(RhoTable.from_json(out.read_text()))
    code, rep, _ = run(capsys, "rho-synthesize", "--N", "4", "--M", "2")
    assert code == 1 and not rep["results"]["found"]


def test_coloring_audit(capsys):
    code, rep, _ = run(capsys, "coloring-audit", "--n", "1", "--ground", "6", "--stacks", "2")
    assert code == 0 and len(rep["results"]["rows"]) == 2
    assert all(r["violations"] == 0 for r in rep["results"]["rows"])


def test_mr_demo(capsys):
    code, rep, _ = run(capsys, "mr-demo", "--k", "2", "4")
    assert code == 0
    rows = rep["results"]["rows"]
    assert [r["k"] for r in rows] == [2, 4]
    for r in rows:
        assert Fraction(r["x_upper"]["exact"]) <= 4
        assert Fraction(r["y_lower"]["exact"]) >= Fraction(r["k"], 2)


def test_mr_demo_from_instance_file(capsys, tmp_path):
    from finitary.mr_norm import generate_instance
    p = tmp_path / "inst.json"
    p.write_text(generate_instance(4, 1, rng=5).to_json())
    code, rep, _ = run(capsys, "mr-demo", "--k", "4", "--instance", f"@{p}")
    assert code == 0 and rep["results"]["rows"][0]["k"] == 4
    p.write_text('{"ground": 4, "n": 1, "weights": [4, 5]}')
    code, _, err = run(capsys, "mr-demo", "--k", "2", "--instance", f"@{p}")
    assert code == 2 and "error" in err


def test_tnorm_and_vector_file(capsys, tmp_path):
    code, rep, _ = run(capsys, "tnorm", "--theta", "1/2", "--family", "schreier", "--x", '{"3": 1, "4": 1, "5": 1}')
    assert code == 0 and rep["results"]["norm"]["exact"] == "3/2"
    p = tmp_path / "x.json"
    p.write_text('{"1": "1", "2": "1"}')
    code, rep, _ = run(capsys, "tnorm", "--theta", "1/2", "--vector", f"@{p}")
    assert rep["results"]["norm"]["exact"] == "1/1"


def test_bellenot(capsys):
    code, rep, _ = run(capsys, "bellenot", "--theta", "1/2", "--n", "4", "--m", "16")
    assert code == 0
    assert rep["results"]["rows"][-1]["norm"]["exact"] == "4/1"


def test_namba(capsys):
    code, rep, _ = run(capsys, "namba", "--family", "cube(3)", "--arena", "12", "--rounds", "3", "--n-max", "4")
    assert code == 0
    res = rep["results"]
    assert res["winner"] == "I" and res["alpha"] == 3


def test_projection_check(capsys):
    code, rep, _ = run(capsys, "projection-check", "--theta", "1/2", "--gamma", "2,4,6,8", "--x", '{"4": 1, "6": 1}')
    assert code == 0 and rep["results"]["lhs"] == rep["results"]["rhs"]


def test_ptak(capsys):
    code, rep, _ = run(capsys, "ptak", "--family", "cube(2)", "--window", "0..7")
    assert code == 0 and rep["results"]["bound"]["exact"] == "1/4"
    code, rep, _ = run(capsys, "ptak", "--family", "schreier", "--window", "4..11", "--eps", "1")
    assert code == 1 and rep["violations"]


def test_table_format(capsys):
    code, text, _ = run(capsys, "cb-rank", "cube(3)", "--format", "table")
    assert code == 0 and "rank: 3" in text


@pytest.mark.parametrize("argv", [
    ["tnorm", "--theta", "3/2", "--x", '{"1": 1}'],
    ["tnorm", "--theta", "1/2", "--x", "not json"],
    ["ptak", "--window", "9..3"],
    ["mr-demo", "--k", "2", "--tol", "banana"],
])
def test_bad_config_exits_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_family_errors(capsys):
    code, _, err = run(capsys, "cb-rank", "wat(3)")
    assert code == 2 and "unknown family" in err
    # a well-formed family the operation rejects is reported, not a crash
    code, rep, _ = run(capsys, "ptak", "--family", "schreier", "--window", "0..3")
    assert code == 1 and rep["violations"][0].startswith("families:")


def test_helpers():
    assert cli.parse_fraction("2^-40") == Fraction(1, 2**40)
    assert cli.parse_fraction("3/4") == Fraction(3, 4)
    assert cli.parse_points("2..5") == (2, 3, 4, 5)
    assert cli.parse_points("1,3") == (1, 3)
    assert cli.rational(Fraction(1, 3)) == {"exact": "1/3", "decimal": "0.333333333333"}
