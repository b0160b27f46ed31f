import json
import math
import subprocess
import sys

import pytest

from conftest import ROOT
from tanglefree import cli, tangle
from tanglefree.domain import BudgetExceeded

SHORT = str(ROOT / "corpus" / "genus2_short_pants.json")
SYM = str(ROOT / "corpus" / "genus2_symmetric.json")


def run_json(capsys, argv):
    code = cli.run(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.lstrip().startswith("{") else out


def test_formulas_bavard(capsys):
    assert cli.run(["formulas", "--bavard", "2"]) == 0
    assert capsys.readouterr().out.strip().startswith("3.438")


def test_formulas_json(capsys):
    code, rep = run_json(capsys, ["formulas", "--figure-eight", "2,2,2", "--collar", "2", "--petri", "--json"])
    assert code == 0
    vals = rep["values"]
    assert vals["figure_eight_length(2.0,2.0,2.0)"] == pytest.approx(5.0563710812901, abs=1e-12)
    assert vals["petri_constant"] == pytest.approx(1.8433, abs=1e-3)


def test_formulas_nothing(capsys):
    assert cli.run(["formulas"]) == 1


def test_certify_witness(capsys):
    code, rep = run_json(capsys, ["certify", "--surface", SHORT, "--L", "1.05"])
    assert code == 0
    res = rep["result"]
    assert res["result"] == "witness"
    assert res["witness"]["total_boundary_length"] == pytest.approx(2.1)
    f8 = res["figure_eight"]
    assert f8["length"] <= f8["bound"]
    assert f8["margin"] - f8["margin_log6"] == pytest.approx(2 * math.pi - 2 * math.log(6))
    assert rep["schema_version"] and rep["command"] == "certify"
    assert rep["config"]["L"] == 1.05


def test_certify_certificate_and_determinism(capsys):
    argv = ["certify", "--fn", "g=2;l=2,2,2;t=0,0,0", "--L", "2", "--points", "5", "--seed", "3"]
    code1, a = run_json(capsys, argv)
    code2, b = run_json(capsys, argv)
    assert code1 == code2 == 0
    assert a["result"]["result"] == "certified-tangle-free-at-depth"
    assert a["result"] == b["result"]
    assert a["payload_sha256"] == b["payload_sha256"]


def test_missing_file(capsys):
    assert cli.run(["build", "--surface", "/nonexistent/x.json"]) == 1
    assert "not found" in capsys.readouterr().err


@pytest.mark.parametrize("tol", ["0", "0.01", "-1"])
def test_bad_tol(capsys, tol):
    assert cli.run(["build", "--surface", SYM, "--tol", tol]) == 1


def test_bad_flags(capsys):
    assert cli.run(["enum", "--surface", SYM]) == 1  # --L is required
    assert cli.run(["enum", "--surface", SYM, "--L", "-2"]) == 1
    assert cli.run(["build", "--fn", "g=2;l=2,2"]) == 1
    assert cli.run(["wp-bound", "--g", "2", "--a", "1.5"]) == 1


def test_enum_csv(capsys, tmp_path):
    assert cli.run(["enum", "--surface", SYM, "--L", "4.5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "# schema_version=1"
    assert lines[1] == "word,trace,length,primitive,simple"
    assert lines[2].startswith("a,")
    assert cli.run(["enum", "--surface", SYM, "--L", "4.5", "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "enum.json").read_text())
    assert (tmp_path / "inventory.csv").read_text().splitlines()[2:] == lines[2:]
    assert rep["result"]["classes"] == len(lines) - 2


def test_build(capsys):
    code, rep = run_json(capsys, ["build", "--surface", str(ROOT / "corpus" / "bolza.json")])
    assert code == 0
    assert rep["result"]["validation"]["discreteness_certified"] is False
    assert rep["inputs"]["surface_file_sha256"]


def test_wp_bound(capsys):
    code, rep = run_json(capsys, ["wp-bound", "--g", "2", "--a", "0.5,0.9"])
    assert code == 0
    rows = rep["result"]["rows"]
    assert rows[0]["bound"] == pytest.approx(0.0171929457, rel=1e-8)
    assert rows[0]["bound"] <= rows[1]["bound"]


def test_wp_bound_asymptotic(capsys):
    code, rep = run_json(capsys, ["wp-bound", "--g", "20", "--mode", "asymptotic", "--constants", "C=1,C0=0.2,C1=1"])
    assert code == 0 and all(r["conditional"] for r in rep["result"]["rows"])
    assert cli.run(["wp-bound", "--g", "20", "--mode", "asymptotic"]) == 1


def test_graph_csv(capsys, tmp_path):
    assert cli.run(["graph", "--n", "64,128", "--trials", "10", "--seed", "2", "--out", str(tmp_path)]) == 0
    text = (tmp_path / "graph.csv").read_text().splitlines()
    assert text[0] == "n,L,trials,tangle_free_count,fraction,ci_low,ci_high"
    assert len(text) == 3
    assert cli.run(["graph", "--n", "63", "--d", "3"]) == 1


def test_collars(capsys):
    code, rep = run_json(capsys, ["collars", "--surface", SYM, "--L", "2.9", "--points", "5"])
    assert code == 0
    assert all(c["embedded"] for c in rep["result"]["collars"])


def test_exit_inconclusive(capsys, monkeypatch):
    def boom(*a, **k):
        raise BudgetExceeded("orbit budget")

    monkeypatch.setattr(cli.G, "enumerate_geodesics", boom)
    assert cli.run(["certify", "--surface", SYM, "--L", "2"]) == 2


def test_exit_inconsistent(capsys, monkeypatch):
    def broken(*a, **k):
        return {"short_geodesics_simple": {"passed": False, "checked": 1, "failures": [{"word": "a"}]}}

    monkeypatch.setattr(tangle, "consequence_suite", broken)
    assert cli.run(["certify", "--surface", SYM, "--L", "2"]) == 3


def test_console_entry():
    out = subprocess.run([sys.executable, "-m", "tanglefree.cli", "formulas", "--trace", "3"],
                         capture_output=True, text=True, check=True).stdout
    assert float(out) == pytest.approx(1.9248473002384139, rel=1e-12)
