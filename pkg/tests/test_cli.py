import json
import subprocess
import sys
from types import SimpleNamespace

import pytest

from cmnorm import analysis
from cmnorm.arith import Factorization
from cmnorm.cli import OutputRecord, UsageError, cmd_check, main, read_table
from conftest import DATA


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def cache(tmp_path):
    return str(tmp_path / "cache")


@pytest.mark.parametrize("D, text", [(4, "x - 1728"), (3, "x"), (11, "x + 32768"), (19, "x + 884736")])
def test_hilbert_command(capsys, cache, D, text):
    code, out, _ = run(capsys, "hilbert", str(D), "--cache-dir", cache)
    assert code == 0
    assert f"polynomial: {text}" in out


def test_hilbert_populates_cache(capsys, tmp_path):
    code, _, _ = run(capsys, "hilbert", "23", "--cache-dir", str(tmp_path))
    assert code == 0
    assert (tmp_path / "hd_23.txt").read_text().splitlines()[0] == "23 3"


def test_cache_dir_from_environment(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("CMNORM_CACHE", str(tmp_path / "env"))
    assert run(capsys, "hilbert", "31")[0] == 0
    assert (tmp_path / "env" / "hd_31.txt").exists()
    code, out, _ = run(capsys, "cache", "info", "--format", "json")
    assert code == 0 and json.loads(out)["result"]["files"] >= 1
    run(capsys, "cache", "clear")
    assert not list((tmp_path / "env").glob("hd_*.txt"))


def test_no_cache_flag(capsys, tmp_path):
    assert run(capsys, "hilbert", "39", "--cache-dir", str(tmp_path), "--no-cache")[0] == 0
    assert not tmp_path.joinpath("hd_39.txt").exists()


@pytest.mark.parametrize("argv", [["hilbert", "5"], ["hilbert", "6"], ["witness", "2,4"], ["witness", "x"],
                                  ["table", "--f-max", "0"], ["check", "ss-census", "--primes", "53"]])
def test_usage_errors_exit_2(capsys, cache, argv):
    code, _, err = run(capsys, *argv, "--cache-dir", cache)
    assert code == 2
    assert "error" in err


@pytest.mark.parametrize("argv", [["check", "foo"], ["frobnicate"], []])
def test_argparse_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as e:
        main(argv)
    assert e.value.code == 2


def test_table_small(capsys, cache):
    code, out, _ = run(capsys, "table", "--f-max", "2", "--cache-dir", cache)
    assert code == 0
    assert out.splitlines() == ["1: 0", "2: 2^4 * 3^3 * 5^3"]
    code, out, _ = run(capsys, "table", "--f-max", "1", "--cache-dir", cache)
    assert out.splitlines() == ["1: 0"]


def test_table_row_10(capsys, cache):
    code, out, _ = run(capsys, "table", "--f-max", "10", "--format", "csv", "--cache-dir", cache)
    assert code == 0
    assert out.splitlines()[0] == "f,norm"
    assert out.splitlines()[-1] == "10,2^24 * 3^30 * 5^3 * 11^6 * 17^6 * 23^6 * 29^3"


def test_table_csv_matches_golden(capsys, cache, tmp_path):
    code, out, _ = run(capsys, "table", "--f-max", "50", "--format", "csv", "--jobs", "2", "--cache-dir", cache)
    assert code == 0
    csv_path = tmp_path / "table.csv"
    csv_path.write_text(out)
    computed = read_table(csv_path)
    golden = read_table(DATA / "eisenstein_norms.txt")
    assert sorted(computed) == list(range(1, 51))
    assert {f: fac.recompose() for f, fac in computed.items()} == {f: fac.recompose() for f, fac in golden.items()}
    assert computed == golden


def test_table_golden_comparison_status(capsys, cache, tmp_path):
    code, out, _ = run(capsys, "table", "--f-max", "5", "--golden", str(DATA / "eisenstein_norms.txt"), "--cache-dir", cache)
    assert code == 0 and "[PASS]" in out
    bad = tmp_path / "bad.txt"
    bad.write_text("2: 2^5 * 3^3 * 5^3\n")
    code, out, _ = run(capsys, "table", "--f-max", "2", "--golden", str(bad), "--cache-dir", cache)
    assert code == 1
    assert "VIOLATION f=2" in out


@pytest.mark.parametrize("which, extra", [("claim235", ["--f-max", "12"]), ("lv-oracle", []), ("ss-census", []),
                                          ("mod3", ["--d-max", "100"]), ("j1728", ["--d-max", "100"]),
                                          ("squares", ["--d-max", "100"]), ("conjecture", ["--f-max", "20"])])
def test_checks_pass(capsys, cache, which, extra):
    code, out, _ = run(capsys, "check", which, *extra, "--cache-dir", cache, "--format", "json")
    rec = OutputRecord.from_json(out)
    assert code == 0 and rec.status == "PASS"
    assert rec.violations == []
    assert rec.provenance


def test_lv_oracle_lists_pairs(capsys, cache):
    code, out, _ = run(capsys, "check", "lv-oracle", "--cache-dir", cache, "--format", "json")
    pairs = json.loads(out)["result"]["pairs"]
    assert [(r["p"], r["n"], r["formula"], r["direct"]) for r in pairs] == [(2, 2, 4, 4), (5, 2, 1, 1), (7, 2, 1, 1)]


def test_ss_census_output(capsys, cache):
    code, out, _ = run(capsys, "check", "ss-census", "--cache-dir", cache, "--format", "json")
    assert json.loads(out)["result"]["census"] == {"2": [0], "3": [0], "5": [0], "7": [6]}


def test_check_failure_exits_1(capsys, monkeypatch):
    def failing(d_max, jobs, cache_dir):
        rep = analysis.CheckReport("mod3", checked=1)
        rep.violations.append(analysis.Violation(7, "prime 13 = 1 mod 3 divides the norm"))
        return rep

    monkeypatch.setattr(analysis, "check_mod3_obstruction", failing)
    code, out, _ = run(capsys, "check", "mod3", "--no-cache")
    assert code == 1
    assert "[FAIL]" in out and "VIOLATION D=7" in out


def test_cmd_check_unknown_is_usage_error():
    with pytest.raises(UsageError):
        cmd_check("nope", SimpleNamespace(jobs=1), None)


@pytest.mark.parametrize("spec, q", [("2,3", 23), ("2", 7), ("3", 23), ("2,3,5", 239)])
def test_witness_command(capsys, cache, spec, q):
    code, out, _ = run(capsys, "witness", spec, "--cache-dir", cache, "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["status"] == "PASS"
    assert rec["result"]["q"] == q
    assert set(rec["result"]["symbols"].values()) == {1}
    assert rec["result"]["coprime_to_S"] is True


@pytest.mark.parametrize(
    "argv",
    [["hilbert", "23"], ["witness", "2,3"], ["check", "claim235", "--f-max", "6"], ["table", "--f-max", "3"],
     ["check", "ss-census", "--primes", "2,7"]],
)
def test_json_round_trip_is_byte_identical(capsys, cache, argv):
    code, out, _ = run(capsys, *argv, "--cache-dir", cache, "--format", "json")
    text = out.rstrip("\n")
    assert OutputRecord.from_json(text).to_json() == text
    assert set(json.loads(text)) == {"command", "inputs", "result", "status", "provenance"}


def test_text_record_layout():
    rec = OutputRecord("check x", {"d_max": 7}, {"checked": 3, "violations": ["D=7: bad"]}, "FAIL", "claim")
    assert rec.to_text().splitlines() == ["[FAIL] check x (d_max=7)", "  claim: claim", "  checked: 3",
                                          "  VIOLATION D=7: bad"]


def test_read_table_formats(tmp_path):
    p = tmp_path / "t.txt"
    p.write_text("# comment\n1: 0\n2: 2^4 * 3^3 * 5^3\n")
    assert read_table(p) == {1: Factorization.zero(), 2: Factorization.parse("2^4 * 3^3 * 5^3")}


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "cmnorm", "hilbert", "7", "--cache-dir", str(tmp_path)],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert "x + 3375" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "cmnorm", "hilbert", "1"], capture_output=True, text=True)
    assert proc.returncode == 2
