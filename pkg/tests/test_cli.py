import json

import pytest

from ahss.cli import main
from ahss.cw import loads_complex, validate


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def column(out, name):
    rows = json.loads(out)
    return [row[name] for row in rows]


def test_homology_rp3(capsys):
    code, out, _ = run(capsys, "homology", "--builder", "rp(3)", "--format", "json")
    assert code == 0
    assert column(out, "h_n(X)") == ["Z", "Z/2", "0", "Z"]


def test_homology_sphere(capsys):
    code, out, _ = run(capsys, "homology", "--builder", "sphere(2)", "--format", "csv")
    assert code == 0
    assert out.splitlines()[1:] == ["0,Z", "1,0", "2,Z"]


def test_format_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("AHSS_FORMAT", "csv")
    code, out, _ = run(capsys, "homology", "--builder", "sphere(1)")
    assert code == 0 and out.startswith("n,h_n(X)")
    monkeypatch.setenv("AHSS_FORMAT", "yaml")
    assert run(capsys, "homology", "--builder", "sphere(1)")[0] == 2


def test_malformed_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dimension": 1, "cells": [1, 1], "boundaries": [[[1, 2]]]}')
    code, _, err = run(capsys, "homology", "--complex", str(bad))
    assert code == 2 and "boundaries" in err
    bad.write_text('{"dimension": 1,\n "cells": [1, }')
    code, _, err = run(capsys, "homology", "--complex", str(bad))
    assert code == 2 and "line 2" in err
    assert run(capsys, "homology", "--complex", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "homology", "--builder", "rp(")[0] == 2
    assert run(capsys, "homology", "--builder", "rp(2)", "--coeffs", "0:Q")[0] == 2
    assert run(capsys, "nosuchcommand")[0] == 2


def test_pages_cp2_checkerboard(capsys):
    code, out, _ = run(capsys, "pages", "--builder", "cp(2)", "--r-max", "2", "--format", "json")
    assert code == 0
    assert column(out, "page") == ["Z", "0", "Z", "0", "Z"]
    code, out, _ = run(capsys, "pages", "--builder", "cp(2)", "--r-max", "2")
    assert "E^2" in out and out.splitlines()[-1].split() == ["0", "Z", "0", "Z", "0", "Z"]


def test_pages_graded_both_forms(capsys):
    code, out, _ = run(capsys, "pages", "--builder", "rp(3)", "--coeffs", "0:Z,1:Z/2",
                       "--r-max", "2", "--both-forms", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    cell = next(r for r in rows if (r["p"], r["q"]) == (1, 1))
    assert cell["couple"] == cell["truncation"] == "Z/2" and cell["agree"] == "yes"


def test_pages_empty_complex(capsys):
    code, out, _ = run(capsys, "pages", "--builder", "empty()", "--format", "json")
    assert code == 0 and json.loads(out) == []


def test_pages_reject_small_r(capsys):
    assert run(capsys, "pages", "--builder", "rp(2)", "--r-min", "1")[0] == 2


def test_pages_disagreement_sets_exit_status(capsys):
    code, out, _ = run(capsys, "pages", "--builder", "rp(3)", "--both-forms",
                       "--sabotage", "drop-denominator")
    assert code == 1 and "NO" in out


def test_filtration(capsys):
    code, out, _ = run(capsys, "filtration", "--builder", "rp(3)", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert all(r["equal"] == "yes" for r in rows)
    assert {r["couple"] for r in rows if r["p"] == 1} == {"Z/2"}


def test_gen(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "--budget", "0", "--seed", "3")
    assert code == 0 and loads_complex(out).cells == (1,)
    a = run(capsys, "gen", "--seed", "11")[1]
    b = run(capsys, "gen", "--seed", "11")[1]
    assert a == b and validate(loads_complex(a))
    path = tmp_path / "x.json"
    assert run(capsys, "gen", "--seed", "11", "-o", str(path))[0] == 0
    assert path.read_text() == a
    assert run(capsys, "gen", "--budget", "-1")[0] == 2


def test_verify_single_complex(capsys):
    code, out, _ = run(capsys, "verify", "--builder", "rp(2)", "--theory", "Z+Z2[1]")
    assert code == 0 and "result: all checks passed" in out


def test_verify_sabotage_reports_les_failure(capsys):
    code, out, _ = run(capsys, "verify", "--builder", "rp(3)", "--theory", "Z2",
                       "--sabotage", "drop-relation", "--format", "json")
    assert code == 1
    report = json.loads(out)
    assert report["violations"][0]["statement"] == "postnikov LES"


def test_verify_deterministic(capsys):
    args = ("verify", "--seed", "42", "--random", "2", "--no-builders", "--theory", "Z2")
    first = run(capsys, *args)
    second = run(capsys, *args)
    assert first == second and first[0] == 0


def test_verify_unknown_theory(capsys):
    assert run(capsys, "verify", "--builder", "rp(2)", "--theory", "KO")[0] == 2
