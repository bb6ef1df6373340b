import subprocess
import sys

import numpy as np
import pytest

from matrixless import CoefficientTable
from matrixless.cli import main
from conftest import coefficient_table


@pytest.fixture(scope="module")
def kms_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("coeffs") / "kms.txt"
    coefficient_table("kms:rho=0.5").save(path)
    return path


def test_precompute_writes_table(tmp_path):
    out = tmp_path / "t.txt"
    assert main(["--eig-method", "lapack", "precompute", "--symbol", "rctp:l=1", "--n1", "20", "--alpha", "3",
                 "--out", str(out)]) == 0
    t = CoefficientTable.load(out)
    assert t.grid.n1 == 20 and t.grid.alpha == 3 and t.symbol.spec == "rctp:l=1"


def test_approximate_csv(tmp_path, kms_file):
    out = tmp_path / "a.csv"
    rc = main(["approximate", "--symbol", "kms:rho=0.5", "--n", "200", "--levels", "1..4",
               "--coeffs", str(kms_file), "--format", "csv", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 4 * 200


def test_approximate_is_deterministic(tmp_path, kms_file):
    outs = []
    for name in ("x.csv", "y.csv"):
        out = tmp_path / name
        main(["approximate", "--symbol", "kms:rho=0.5", "--n", "150", "--levels", "2,4", "--methods", "NAS,SL",
              "--coeffs", str(kms_file), "--out", str(out)])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_approximate_table_to_stdout(capsys, kms_file):
    assert main(["approximate", "--symbol", "kms:rho=0.5", "--n", "256", "--coeffs", str(kms_file),
                 "--format", "table"]) == 0
    out = capsys.readouterr().out
    assert "3.0897e-03" in out and "1.3575e-05" in out


def test_approximate_without_reference(tmp_path, kms_file):
    out = tmp_path / "noref.csv"
    assert main(["approximate", "--symbol", "kms:rho=0.5", "--n", "5000", "--levels", "4", "--ref", "none",
                 "--coeffs", str(kms_file), "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "method,n,n1,alpha,level,j,theta,lambda_approx" and len(lines) == 5001


def test_approximate_with_reference_file(tmp_path, capsys):
    n = 80
    ref = tmp_path / "ref.txt"
    np.savetxt(ref, 2 - 2 * np.cos(np.arange(1, n + 1) * np.pi / (n + 1)))
    coeffs = tmp_path / "l1.txt"
    coefficient_table("rctp:l=1").save(coeffs)
    assert main(["approximate", "--symbol", "rctp:l=1", "--n", str(n), "--coeffs", str(coeffs),
                 "--ref", str(ref), "--format", "table"]) == 0
    assert "eps[NAS] k=4" in capsys.readouterr().out


def test_run_with_config(tmp_path, capsys):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("symbol = kms:rho=0.5\nns = 64\nlevels = 1..2\nmethods = NAS,SL\neig_method = lapack\n")
    assert main(["run", "--config", str(cfg), "--levels", "1"]) == 0
    out = capsys.readouterr().out
    assert "eps[SL] k=1" in out and "k=2" not in out


@pytest.mark.parametrize(
    "argv",
    [
        ["approximate", "--symbol", "kms:rho=0.5", "--n", "4096", "--levels", "1"],  # beyond the ceiling
        ["approximate", "--symbol", "rctp:l=2", "--n", "64", "--methods", "SL", "--levels", "1", "--ref-ceiling", "64",
         "--alpha", "2", "--n1", "4"],
        ["approximate", "--symbol", "kms:rho=0.5", "--n", "64", "--coeffs", "/nonexistent/table.txt"],
        ["approximate", "--symbol", "kms:rho=2", "--n", "64"],
        ["approximate", "--symbol", "kms:rho=0.5", "--n", "64", "--levels", "7", "--n1", "4", "--alpha", "2"],
        ["run", "--config", "/nonexistent.cfg"],
    ],
)
def test_error_exit_codes(argv):
    assert main(argv) != 0


def test_unwritable_output_exits_nonzero(tmp_path, kms_file):
    out = tmp_path / "no" / "such" / "dir.csv"
    assert main(["approximate", "--symbol", "kms:rho=0.5", "--n", "64", "--coeffs", str(kms_file),
                 "--out", str(out)]) != 0


def test_coefficient_symbol_mismatch(kms_file):
    assert main(["approximate", "--symbol", "rctp:l=2", "--n", "64", "--coeffs", str(kms_file)]) != 0


def test_bad_arguments_exit_nonzero():
    assert main(["approximate", "--symbol", "kms:rho=0.5", "--n", "64", "--levels", ""]) != 0
    assert main(["reproduce", "--paper-table", "9"]) != 0
    assert main([]) != 0


def test_module_entry_point(tmp_path):
    out = tmp_path / "t.txt"
    proc = subprocess.run(
        [sys.executable, "-m", "matrixless", "--eig-method", "lapack", "precompute", "--symbol", "fdep:a0=3,a1=2",
         "--n1", "10", "--alpha", "3", "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.read_text().startswith("10 3 fdep:a0=3,a1=2")
    bad = subprocess.run([sys.executable, "-m", "matrixless", "approximate", "--symbol", "bogus", "--n", "5"],
                         capture_output=True, text=True)
    assert bad.returncode != 0 and "error" in bad.stderr
