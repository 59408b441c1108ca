import csv
import io
import json
import shutil
import subprocess
import sys

import pytest

from codimlab import fixtures
from codimlab.cli import main
from codimlab.codim import codim_ordinary
from codimlab.oracle import oracle_codim


def fixture_path(name):
    return str(fixtures.data_dir() / f"{name}.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_check_passes_on_bundled_files(capsys):
    for name in fixtures.FIXTURE_NAMES:
        code, out, _ = run(capsys, "check", fixture_path(name))
        assert code == 0, (name, out)
        assert "FAIL" not in out


def test_check_reports_jacobi_triple(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"name": "bad", "dim": 3, "basis": ["x", "y", "z"], "brackets": [[0, 1, 1, "1"], [1, 2, 0, "1"]]}))
    code, out, _ = run(capsys, "check", str(p))
    assert code == 1
    assert "FAIL jacobi ('x', 'y', 'z')" in out


def test_check_syntax_error_exit_2(capsys, tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{"name": "x",\n "dim": }')
    code, _, err = run(capsys, "check", str(p))
    assert code == 2 and "line 2, column" in err


def test_codim_sl2_matches_oracle(capsys, sl2):
    code, out, _ = run(capsys, "codim", fixture_path("sl2"), "--mode", "ord", "--n", "4")
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["mode", "n", "value", "monomials", "millis"]
    assert [int(r["value"]) for r in table] == [oracle_codim(sl2.c, n) for n in range(1, 5)]


def test_codim_graded_equals_hopf(capsys):
    vals = {}
    for mode in ("gr", "hopf", "ie"):
        code, out, _ = run(capsys, "codim", fixture_path("gl2_z2graded"), "--mode", mode, "--n", "4", "--format", "json")
        assert code == 0
        vals[mode] = [r["value"] for r in json.loads(out)]
    assert vals["gr"] == vals["hopf"] == vals["ie"] == [2, 3, 8, 25]


def test_codim_heisenberg_zeros(capsys):
    _, out, _ = run(capsys, "codim", fixture_path("heisenberg_h3"), "--n", "5")
    assert [int(r["value"]) for r in rows(out)] == [1, 1, 0, 0, 0]


def test_codim_gaction(capsys):
    code, out, _ = run(capsys, "codim", fixture_path("gl2_psi_action"), "--mode", "gaction", "--n", "3")
    assert code == 0 and [int(r["value"]) for r in rows(out)] == [2, 3, 8]


def test_codim_needs_grading_for_gr(capsys):
    code, _, err = run(capsys, "codim", fixture_path("sl2"), "--mode", "gr", "--n", "2")
    assert code == 2 and "$.grading" in err


def test_threads_and_ordering_are_deterministic(capsys):
    outs = []
    for threads in ("1", "4"):
        code, out, _ = run(capsys, "codim", fixture_path("2gl2_s3graded"), "--mode", "gr", "--n", "4", "--threads", threads, "--no-timing")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]


def test_resource_ceiling_exit_3(capsys, monkeypatch):
    monkeypatch.setenv("CODIMLAB_CEILING", "100")
    code, _, err = run(capsys, "codim", fixture_path("sl2"), "--n", "5")
    assert code == 3 and "coordinates" in err


def test_input_errors_exit_2(capsys, tmp_path):
    assert run(capsys, "codim", str(tmp_path / "nope.json"), "--n", "2")[0] == 2
    assert run(capsys, "codim", fixture_path("sl2"), "--n", "0")[0] == 2
    assert run(capsys, "codim", fixture_path("sl2"), "--mode", "weird", "--n", "2")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_exponent_command(capsys):
    code, out, _ = run(capsys, "exponent", fixture_path("sl2"))
    rep = json.loads(out)
    assert code == 0 and rep["d"] == 3 and rep["exactness"] == "exact"
    _, out, _ = run(capsys, "exponent", fixture_path("heisenberg_h3"))
    rep = json.loads(out)
    assert rep["d"] == 0 and rep["exactness"] == "exact" and rep["certificate"] is None
    _, out, _ = run(capsys, "exponent", fixture_path("2gl2_s3graded"))
    assert json.loads(out)["d"] == 3


def test_exponent_certificate_round_trip(capsys, tmp_path):
    _, out, _ = run(capsys, "exponent", fixture_path("gl2"))
    cert = tmp_path / "cert.json"
    cert.write_text(out)
    code, out2, _ = run(capsys, "exponent", fixture_path("gl2"), "--certificate", str(cert))
    rep = json.loads(out2)
    assert code == 0 and rep["d"] == 3 and rep["method"] == "certificate"
    obj = json.loads(out)["certificate"]
    obj["powers"] = [-1]
    cert.write_text(json.dumps(obj))
    code, out3, _ = run(capsys, "exponent", fixture_path("gl2"), "--certificate", str(cert))
    assert code == 1 and json.loads(out3) == {"accepted": False, "reason": "q_1 is negative"}
    code, _, _ = run(capsys, "exponent", fixture_path("sl2"), "--certificate", str(tmp_path / "cert.json"))
    assert code == 2  # 4-dimensional vectors for a 3-dimensional algebra


def test_cocharacter_command(capsys):
    code, out, _ = run(capsys, "cocharacter", fixture_path("sl2"), "--n", "4")
    table = rows(out)
    assert code == 0
    assert sum(int(r["multiplicity"]) * int(r["hook_dim"]) for r in table) == codim_ordinary(fixtures.build("sl2").algebra, 4).value
    assert [r["partition"] for r in table] == ["3-1", "2-1-1"]
    code, out, _ = run(capsys, "cocharacter", fixture_path("abelian2"), "--n", "3")
    assert code == 0 and rows(out) == []
    code, out, err = run(capsys, "cocharacter", fixture_path("gl2_z2graded"), "--n", "3")
    assert code == 0 and err == ""


def test_identity_command(capsys, tmp_path):
    poly = tmp_path / "p.json"
    poly.write_text(json.dumps({"n": 2, "terms": [{"coeff": "1", "perm": [1, 2], "labels": ["e0", "e0"]}]}))
    code, out, _ = run(capsys, "identity", fixture_path("gl2_e0e1_action"), str(poly))
    assert code == 0 and json.loads(out) == {"identity": True}
    poly.write_text(json.dumps({"n": 2, "terms": [{"coeff": "1", "perm": [1, 2], "labels": ["e1", "e1"]}]}))
    code, out, _ = run(capsys, "identity", fixture_path("gl2_e0e1_action"), str(poly))
    res = json.loads(out)
    assert code == 1 and res["identity"] is False
    assert len(res["witness"]) == 2 and any(x != "0" for x in res["value"])
    poly.write_text(json.dumps({"n": 2, "terms": [{"coeff": "1", "perm": [1, 2], "labels": ["zz", "e1"]}]}))
    assert run(capsys, "identity", fixture_path("gl2_e0e1_action"), str(poly))[0] == 2


def test_verify_filter_identity(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "builtin", "--filter", "identity")
    lines = out.strip().splitlines()
    assert code == 0
    assert len(lines) == 2 and lines[0].startswith("PASS [1] identity")
    assert lines[-1] == "1 passed, 0 failed"


def test_verify_missing_fixture(capsys, tmp_path):
    for name in fixtures.FIXTURE_NAMES:
        if name != "gl2_z2graded":
            shutil.copy(fixture_path(name), tmp_path)
    code, out, _ = run(capsys, "verify", "--filter", "duality", "--fixtures", str(tmp_path))
    assert code == 1
    assert "missing fixture gl2_z2graded" in out


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "codimlab.cli", "codim", fixture_path("sl2"), "--n", "3", "--no-timing"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines() == ["mode,n,value,monomials,millis", "ordinary,1,1,1,", "ordinary,2,1,2,", "ordinary,3,2,6,"]


def test_version(capsys):
    with pytest.raises(SystemExit):
        from codimlab.cli import build_parser

        build_parser().parse_args(["--version"])
    assert "codimlab" in capsys.readouterr().out
