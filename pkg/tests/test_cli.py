from __future__ import annotations

import json
import subprocess
import sys

import pytest

from regmaps.cli import main
from regmaps.cosetenum import LIMIT_ENV


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def pgl27_file(tmp_path):
    path = tmp_path / "pre1.txt"
    assert main(["export-presentation", "--reduced", "PGL27_pre1", "--out", str(path)]) == 0
    return path


def test_order_reduced(capsys, pgl27_file):
    code, out, _ = run(capsys, "order", str(pgl27_file))
    assert code == 0 and "order: 336" in out and "cosets defined" in out


def test_order_trivial(capsys, tmp_path):
    f = tmp_path / "c2.txt"
    f.write_text("generators: a\nrelators: a^2\n")
    code, out, _ = run(capsys, "order", str(f), "--format", "json")
    assert code == 0 and json.loads(out)["order"] == 2


def test_order_parse_error(capsys, tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("generators: a\nrelators: a^\n")
    code, _, err = run(capsys, "order", str(f))
    assert code == 2 and "error" in err


def test_order_missing_file(capsys, tmp_path):
    assert run(capsys, "order", str(tmp_path / "nope.txt"))[0] == 2


def test_order_capacity(capsys, pgl27_file):
    code, _, err = run(capsys, "order", str(pgl27_file), "--limit", "50")
    assert code == 3 and "limit" in err


def test_env_limit(capsys, pgl27_file, monkeypatch):
    monkeypatch.setenv(LIMIT_ENV, "50")
    assert run(capsys, "order", str(pgl27_file))[0] == 3
    monkeypatch.setenv(LIMIT_ENV, "abc")
    assert run(capsys, "order", str(pgl27_file))[0] == 2


def test_bad_arguments(capsys):
    assert run(capsys, "order")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "classify", "--limit", "0")[0] == 2
    assert run(capsys, "classify", "--family", "9")[0] == 2
    assert run(capsys, "classify", "--p", "11")[0] == 2
    assert run(capsys, "classify", "--p", "5", "--family", "4")[0] == 2
    assert run(capsys, "map-info", "4", "0,0,0")[0] == 2
    assert run(capsys, "map-info", "4", "1,2")[0] == 2
    assert run(capsys, "census-check")[0] == 2
    assert run(capsys, "census-check", "--jk", "2,5")[0] == 2
    assert run(capsys, "census-check", "--m", "10")[0] == 2
    assert run(capsys, "lemmas", "--p", "2:3")[0] == 2
    assert run(capsys, "export-presentation")[0] == 2
    assert run(capsys, "export-presentation", "--reduced", "PSL27")[0] == 2


def test_help_is_success(capsys):
    assert run(capsys, "--help")[0] == 0


def test_table1(capsys):
    code, out, _ = run(capsys, "table1")
    rows = out.strip().splitlines()
    assert code == 0 and len(rows) == 15
    assert rows[0] == "{3,7}  k = 21" and rows[-1] == "{8,8}  k = 2"
    code, out, _ = run(capsys, "table1", "--format", "json")
    assert json.loads(out)["count"] == 15


def test_lemmas(capsys):
    code, out, _ = run(capsys, "lemmas", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["primes"] == [5, 97]
    row11 = next(r for r in doc["rows"] if r["p"] == 11)
    assert row11["lemma_noi"]["d=2,k=2"] == [[3, 8]]
    assert all(r["no_Mm"] and r["no_Mjk"] for r in doc["rows"])


def test_census_check(capsys):
    code, out, _ = run(capsys, "census-check", "--jk", "3,5")
    assert code == 0 and "chi = -7" in out
    code, out, _ = run(capsys, "census-check", "--m", "15", "--format", "json")
    assert code == 0 and json.loads(out)["descriptor"]["chi"] == -11


def test_export_family(capsys, tmp_path):
    code, out, _ = run(capsys, "export-presentation", "4", "1,1,4")
    assert code == 0 and out.startswith("# G_4(1,1,4) over F_7")
    f = tmp_path / "g4.txt"
    f.write_text(out)
    code, out, _ = run(capsys, "order", str(f))
    assert code == 0 and "order: 115248" in out


def test_map_info(capsys):
    code, out, _ = run(capsys, "map-info", "6", "1,1,3")
    assert code == 0
    assert "type {3,8}" in out and "chi = -2401" in out and "non-orientable" in out and "genus 2403" in out


def test_map_info_not_admissible(capsys):
    code, out, _ = run(capsys, "map-info", "4", "1,0,0")
    assert code == 1 and "not an admissible point" in out


def test_map_info_no_map(capsys):
    code, out, _ = run(capsys, "map-info", "1", "1,3,4")
    assert code == 1 and "no regular map" in out


def test_classify_eigen_verify(capsys, tmp_path):
    out_path = tmp_path / "r.json"
    code, _, _ = run(capsys, "classify", "--p", "7", "--mode", "eigen", "--verify", "--format", "json", "--out", str(out_path))
    doc = json.loads(out_path.read_text())
    assert code == 0 and doc["verification"]["ok"]
    assert [f["admissible"] for f in doc["families"]] == [[], [[1, 1, 4]], [], [[1, 1, 3]]]


def test_classify_capacity(capsys):
    assert run(capsys, "classify", "--family", "4", "--mode", "eigen", "--limit", "1000")[0] == 3


def test_classify_p5_verify_reports_family1(capsys):
    # G_1(1,3,4) reaches the target order but carries no regular map
    code, out, _ = run(capsys, "classify", "--p", "5", "--verify")
    assert code == 1
    assert "admissible: (1,3,4)" in out
    assert "FAIL family 1 (1,3,4): regular map exists" in out


def test_classify_without_verify_succeeds(capsys):
    code, out, _ = run(capsys, "classify", "--family", "2")
    assert code == 0 and "admissible: none" in out


@pytest.mark.slow
def test_map_info_g7(capsys):
    code, out, _ = run(capsys, "map-info", "7", "1,7,6")
    assert code == 0
    for s in ("type {3,7}", "chi = -28561", "non-orientable", "genus 28563", "|G| = 2399124"):
        assert s in out


@pytest.mark.slow
def test_order_g7_export(capsys, tmp_path):
    f = tmp_path / "g7.txt"
    assert main(["export-presentation", "7", "1,7,6", "--out", str(f)]) == 0
    code, out, _ = run(capsys, "order", str(f))
    assert code == 0 and "order: 2399124" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "regmaps", "table1"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.count("k =") == 15
