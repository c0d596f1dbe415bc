import json
import subprocess
import sys

import pytest

from mixedcurves.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_plan_json(capsys):
    code, out, _ = run(capsys, "plan", "--genus", "5", "--degree", "1", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert (data["status"], data["q"], data["r"], data["j"]) == ("Twisted", 1, 5, 0)


def test_plan_unknown(capsys):
    code, out, _ = run(capsys, "plan", "--genus", "2", "--degree", "3")
    assert code == 0 and json.loads(out)["status"] == "Unknown"


def test_verify_link(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "link", "--q", "2", "--r", "3", "--j", "1", "--seed", "42")
    data = json.loads(out)
    assert code == 0 and data["passed"]
    assert "expected 6, found 6" in data["details"]


def test_verify_link_search_exhausted_is_failure(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "link", "--q", "1", "--r", "1", "--j", "0",
                       "--alpha", "20,0")
    assert code == 1 and not json.loads(out)["passed"]


def test_invariants_markdown(capsys):
    code, out, _ = run(capsys, "invariants", "--family", "twisted", "--q", "1", "--r", "2", "--j", "0",
                       "--format", "markdown")
    row = out.strip().splitlines()[-1]
    cells = [c.strip() for c in row.strip("|").split("|")]
    assert code == 0
    # family q r j chi_F chi_V g degree radial links zeta closed consistent
    assert cells[4] == "5" and cells[6] == "2" and cells[7] == "1"
    assert cells[10] == "(1-t)^{-5}"


def test_table_has_inconsistent_cells(capsys):
    code, out, _ = run(capsys, "table", "--family", "twisted", "--qmax", "3", "--rmax", "3", "--format", "markdown")
    assert code == 0
    assert "| false |" in out
    data_code, data, _ = run(capsys, "table", "--family", "twisted", "--qmax", "3", "--rmax", "3")
    rows = json.loads(data)
    for row in rows:
        p = row["params"]
        assert row["routes_consistent"] == (p["q"] == 1 or p["r"] == p["j"])


def test_construct(capsys):
    code, out, _ = run(capsys, "construct", "--family", "twisted", "--q", "1", "--r", "1", "--j", "0")
    data = json.loads(out)
    assert code == 0
    assert data["n_terms"] == 7 and data["homogeneity"] == "StronglyPolar"
    assert data["weights"]["d"] == 3 and data["one_convenient"]


def test_family_json(capsys):
    desc = '{"kind":"twisted","q":1,"r":2,"j":0,"alpha":[2,0],"beta":[3,0]}'
    code, out, _ = run(capsys, "invariants", "--family-json", desc)
    assert code == 0 and json.loads(out)["chi_F"] == 5


def test_zeta(capsys):
    code, out, _ = run(capsys, "zeta", "--chi", "-4", "--q", "2")
    assert code == 0 and json.loads(out)["factors"] == [[2, 2]]
    code, _, err = run(capsys, "zeta", "--chi", "5", "--q", "2")
    assert code == 2 and err.startswith("mixedcurves: error:")


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["plan", "--genus", "1"],
    ["verify", "--suite", "nope"],
    ["invariants", "--q", "1", "--r", "0", "--j", "1"],
    ["invariants", "--family", "base", "--r", "2", "--alpha", "1,0"],
    ["verify", "--suite", "zeros", "--family", "twisted"],
    ["verify", "--suite", "homogeneity", "--tol", "-1"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""
    assert len(err.strip().splitlines()) == 1


def test_verify_failure_exits_1(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"trials": 50}))
    code, out, _ = run(capsys, "verify", "--suite", "smoothness", "--family", "join", "--q", "1", "--r", "1",
                       "--j", "1", "--config", str(cfg))
    data = json.loads(out)
    assert data["samples_used"] == 50
    assert code == (0 if data["passed"] else 1)


def test_smoothness_inconclusive(capsys, monkeypatch):
    from mixedcurves import verify

    def no_points(f, cfg):
        raise verify.NoPointsFound("no zeros located")

    monkeypatch.setattr(verify, "sample_smoothness", no_points)
    code, out, _ = run(capsys, "verify", "--suite", "smoothness", "--family", "twisted")
    data = json.loads(out)
    assert code == 1 and data["inconclusive"] and not data["passed"]


def test_byte_identical_subprocess():
    argv = [sys.executable, "-m", "mixedcurves", "verify", "--suite", "homogeneity",
            "--family", "twisted", "--q", "2", "--r", "2", "--j", "1", "--seed", "42", "--trials", "100"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and a
