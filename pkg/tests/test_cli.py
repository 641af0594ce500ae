import csv
import json

import pytest

from dedekind_symbols.cli import run


def test_catalog_lists_constants(capsys):
    assert run(["catalog"]) == 0
    out = capsys.readouterr().out
    for name, A in [("sl2z", "1/12"), ("gamma0_11", "1/1"), ("g37plus", "19/12"), ("hecke_5", "3/20")]:
        line = next(l for l in out.splitlines() if l.startswith(name))
        assert f"A = {A}" in line


def test_symbol_eval_q(capsys):
    assert run(["symbol", "eval", "--group", "gamma0_11", "--word", "Q"]) == 0
    out = capsys.readouterr().out
    assert "S = -2/5" in out and "theta = 3/10" in out
    assert "H = -7/220" in out and "H* = 13/110" in out


def test_verify_three_term_exit_zero(capsys):
    assert run(["verify", "--group", "gamma0_11", "--law", "three-term", "--samples", "200", "--seed", "7"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_verify_csv_and_json(tmp_path, capsys):
    csv_path, json_path = tmp_path / "r.csv", tmp_path / "r.json"
    code = run([
        "verify", "--group", "g37plus", "--law", "printed", "--samples", "10",
        "--csv", str(csv_path), "--json", str(json_path),
    ])
    assert code == 0
    rows = list(csv.reader(csv_path.open()))
    assert rows[0] == ["law", "word", "defect", "tag"]
    assert all(r[2] == "0/1" and r[3] == "Exact" for r in rows[1:])
    report = json.loads(json_path.read_text())
    assert report["failures"] == [] and report["samples"] == 10


def test_verify_failure_exit_code(capsys):
    code = run([
        "verify", "--group", "gamma0_11", "--law", "three-term", "--samples", "5",
        "--pairing", "eta", "--tolerance", "1e-40",
    ])
    assert code == 1
    assert "FAIL" in capsys.readouterr().out


def test_gamma0_subcommands(tmp_path, capsys):
    assert run(["gamma0", "sum", "--level", "11", "--d", "1", "--c", "11"]) == 0
    assert run(["gamma0", "symbol", "--level", "11", "--matrix", "-7", "-1", "22", "3"]) == 0
    out = capsys.readouterr().out
    assert "= -3/44" in out and "= -2/5" in out
    path = tmp_path / "g.csv"
    assert run(["gamma0", "verify", "--law", "mobius", "--levels", "2-6", "--samples", "5", "--csv", str(path)]) == 0
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["law", "inputs", "defect"] and len(rows) == 26


def test_classical(capsys):
    assert run(["classical", "1", "11", "--reciprocity"]) == 0
    out = capsys.readouterr().out
    assert "s(1,11) = 15/22" in out and "reciprocity defect = 0/1" in out


def test_modsym_and_calibrate(capsys):
    assert run(["modsym", "--word", "Q"]) == 0
    assert run(["calibrate"]) == 0
    out = capsys.readouterr().out
    assert "-0.6346046521" in out and "V_f = 1.69674244" in out


def test_equidist_csv(tmp_path, capsys):
    path = tmp_path / "e.csv"
    assert run(["equidist", "--level", "11", "--xmax", "110", "--grid", "4", "--csv", str(path)]) == 0
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["u", "v"]
    assert rows[-1][0] == "discrepancy" and 0 <= float(rows[-1][1]) <= 1
    assert "t=40" in capsys.readouterr().out


def test_equidist_auto_t_needs_catalog_level(capsys):
    assert run(["equidist", "--level", "7", "--xmax", "70"]) == 2
    assert run(["equidist", "--level", "7", "--xmax", "70", "--t", "12"]) == 0


def test_sk(capsys):
    assert run(["sk", "--M", "0", "--N2", "0", "--cmax", "5"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("c,re,im")
    assert [float(l.split(",")[1]) for l in lines[1:]] == [1, 1, 2, 2, 4]


def test_unknown_subcommand_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["bogus"])
    assert exc.value.code != 0
    assert "usage" in capsys.readouterr().err


def test_unknown_group_reports_error(capsys):
    assert run(["symbol", "eval", "--group", "nope", "--word", "Q"]) == 2
    assert "error" in capsys.readouterr().err


def test_custom_catalog_dir(tmp_path, capsys):
    from dedekind_symbols.catalog import DEFAULT_CATALOG_DIR

    (tmp_path / "sl2z.yaml").write_text((DEFAULT_CATALOG_DIR / "sl2z.yaml").read_text())
    assert run(["--catalog-dir", str(tmp_path), "catalog"]) == 0
    assert capsys.readouterr().out.strip().startswith("sl2z")
