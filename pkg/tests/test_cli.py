from __future__ import annotations

import csv
import json

import numpy as np
import pytest

from conic_schemes.cli import EXIT_CACHE, EXIT_FAIL, EXIT_USAGE, ConfigError, RunConfig, main
from conic_schemes.report import edgelist, matrix_csv


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_build_elliptic_q8(capsys):
    code, out, _ = _run(capsys, "build", "--q", "8", "--variant", "elliptic")
    d = json.loads(out)
    assert code == 0 and d["n"] == 28 and d["rank"] == 4 and d["classes"] == 3


def test_build_full_reports_both_fibres(capsys):
    code, out, _ = _run(capsys, "build", "--q", "5")
    d = json.loads(out)
    assert code == 0 and set(d["classes"]) == {"hyperbolic", "elliptic"}


def test_not_a_prime_power(capsys):
    code, _, err = _run(capsys, "build", "--q", "6")
    assert code == EXIT_USAGE and "6 is not a prime power" in err


@pytest.mark.parametrize("argv", [
    ["build", "--q", "9", "--fusion", "five"],
    ["build", "--q", "9", "--poly", "0x13"],
    ["build", "--q", "13", "--variant", "cyclotomic"],
    ["check", "--q", "4", "--checks", "speed"],
])
def test_usage_errors(capsys, argv):
    assert _run(capsys, *argv)[0] == EXIT_USAGE


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["build", "--q", "4", "--seed", str(2**64)])
    assert exc.value.code == 2


def test_validate_direct():
    with pytest.raises(ConfigError):
        RunConfig(q=1).validate()
    assert RunConfig(q=16, poly=0x13, fusion="frobenius").validate() == (2, 4)


def test_check_pass_and_fail(capsys):
    code, out, err = _run(capsys, "check", "--q", "8", "--variant", "elliptic", "--checks", "pseudocyclic")
    assert code == 0 and json.loads(out)["passed"] and "pseudocyclic: pass" in err
    code, out, err = _run(capsys, "check", "--q", "8", "--variant", "hyperbolic", "--checks", "pseudocyclic")
    assert code == EXIT_FAIL and not json.loads(out)["passed"] and "FAIL" in err


def test_check_json_deterministic(capsys):
    argv = ["check", "--q", "8", "--variant", "elliptic", "--checks", "axioms,closed-forms,pseudocyclic",
            "--seed", "11"]
    _, a, _ = _run(capsys, *argv)
    _, b, _ = _run(capsys, *argv, "--no-cache")
    assert a == b
    d = json.loads(a)
    assert list(d) == sorted(d)
    assert d["multiplicities"] == [1, 9, 9, 9] and d["seed"] == 11 and d["schema"] == 1


def test_corrupt_cache_exit_code(capsys, tmp_path):
    _run(capsys, "build", "--q", "4", "--cache-dir", str(tmp_path))
    (binp,) = tmp_path.glob("*.bin")
    binp.write_bytes(binp.read_bytes()[:-1])
    code, _, err = _run(capsys, "build", "--q", "4", "--cache-dir", str(tmp_path))
    assert code == EXIT_CACHE and "truncated" in err
    code, out, _ = _run(capsys, "clean-cache", "--cache-dir", str(tmp_path))
    assert code == 0 and "removed" in out
    assert _run(capsys, "build", "--q", "4", "--cache-dir", str(tmp_path))[0] == 0


def test_cross_check_q16(capsys):
    code, out, _ = _run(capsys, "build", "--q", "16", "--cross-check", "--no-cache")
    d = json.loads(out)
    assert code == 0 and d["cross_check"]["pass"]


def test_report_csv_tables(capsys, tmp_path):
    code, out, _ = _run(capsys, "report", "--q", "4", "--fusion", "five", "--checks", "tables",
                        "--format", "csv", "--out", str(tmp_path))
    assert code == 0
    rows = list(csv.DictReader(open(tmp_path / "tables.csv")))
    assert rows and all(r["match"] == "true" for r in rows)
    assert {"eps", "k", "i", "j", "counted", "formula", "expected", "match"} == set(rows[0])
    assert json.loads((tmp_path / "report.json").read_text())["passed"]


def test_report_csv_eigenmatrices(capsys, tmp_path):
    code, _, _ = _run(capsys, "report", "--q", "8", "--variant", "elliptic", "--checks", "pseudocyclic",
                      "--format", "csv", "--out", str(tmp_path))
    P = np.loadtxt(tmp_path / "P.csv", delimiter=",")
    assert code == 0 and P.shape == (4, 4)
    assert np.allclose(P[:, 0], 1)


def test_report_edgelist_q4(capsys, tmp_path):
    code, _, _ = _run(capsys, "report", "--q", "4", "--variant", "elliptic", "--fusion", "srg",
                      "--checks", "srg", "--format", "edgelist", "--out", str(tmp_path))
    assert code == 0
    lines = (tmp_path / "srg-elliptic.edgelist").read_text().splitlines()
    assert len(lines) == 120 * 51 // 2
    meta = json.loads((tmp_path / "srg-elliptic.json").read_text())
    assert meta["parameters"] == [120, 51, 18, 24] and meta["passed"]


def test_edgelist_requires_srg_fusion(capsys, tmp_path):
    code, _, _ = _run(capsys, "report", "--q", "4", "--format", "edgelist", "--out", str(tmp_path))
    assert code == EXIT_USAGE


def test_cyclotomic_check(capsys):
    code, out, _ = _run(capsys, "check", "--q", "13", "--variant", "cyclotomic", "--e", "3",
                        "--checks", "axioms,pseudocyclic")
    assert code == 0 and json.loads(out)["multiplicities"] == [1, 4, 4, 4]


def test_format_helpers():
    assert edgelist(np.array([[0, 1, 1], [1, 0, 0], [1, 0, 0]])) == "0 1\n0 2\n"
    assert matrix_csv(np.array([[1.0, -0.0]])) == "1.0,0.0\n"


@pytest.mark.parametrize("argv,names", [
    (["--q", "13", "--variant", "cyclotomic", "--e", "3"], ["axioms", "pseudocyclic", "eigen"]),
    (["--q", "8", "--variant", "hyperbolic"], ["axioms", "closed-forms", "eigen"]),
    (["--q", "4", "--fusion", "srg"], ["axioms", "tables", "srg"]),
])
def test_all_selects_applicable_checks(capsys, argv, names):
    code, out, _ = _run(capsys, "check", *argv, "--checks", "all")
    assert code == 0 and [c["name"] for c in json.loads(out)["checks"]] == names


def test_explicit_inapplicable_check_fails(capsys):
    code, _, err = _run(capsys, "check", "--q", "4", "--checks", "srg")
    assert code == EXIT_FAIL and "needs --fusion srg" in err
