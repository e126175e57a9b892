import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from latsamp import __version__
from latsamp.cli import main, read_points
from latsamp.lattices import fibonacci_points


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_rows(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.reader(io.StringIO("\n".join(lines))))


def test_gen_points_fibonacci_5(capsys):
    code, out, _ = run(capsys, "gen-points", "--fibonacci", "5")
    assert code == 0
    rows = csv_rows(out)
    assert rows[0] == ["u1", "u2"]
    assert len(rows[1:]) == 8 and all(len(r) == 2 for r in rows[1:])
    u = np.array(rows[1:], dtype=float)
    assert np.allclose(np.sort(u[:, 0]), np.arange(8) / 8)


def test_gamma_scan_small(capsys):
    code, out, _ = run(capsys, "gamma-scan", "--n-min", "3", "--n-max", "5")
    assert code == 0
    rows = csv_rows(out)
    assert rows[0] == ["n", "b_n", "N_max", "ratio"]
    assert [int(r[2]) for r in rows[1:]] == [0, 1, 2]


def test_korobov_search_json(capsys):
    code, out, _ = run(capsys, "korobov-search", "--L", "2", "--d", "3")
    assert code == 0
    obj = json.loads(out)
    assert obj["m"] == 251 and obj["verified"] is True
    assert obj["cardGamma"] == 81


def test_header_records_seed_version_flags(capsys):
    _, out, _ = run(capsys, "gamma-scan", "--n-min", "3", "--n-max", "4", "--seed", "5", "--format", "json")
    meta = json.loads(out)["meta"]
    assert meta["version"] == __version__ and meta["seed"] == 5
    assert meta["flags"]["n_max"] == 4 and "PCG64" in meta["rng"]
    _, out, _ = run(capsys, "gen-points", "--fibonacci", "4", "--seed", "5")
    head = [ln for ln in out.splitlines() if ln.startswith("#")]
    assert __version__ in head[0] and "seed=5" in head[1]
    assert json.loads(head[2].split("=", 1)[1])["fibonacci"] == 4


def test_points_file_round_trip(capsys, tmp_path):
    for fmt in ("csv", "json"):
        path = tmp_path / f"pts.{fmt}"
        assert run(capsys, "gen-points", "--fibonacci", "10", "--format", fmt, "--out", str(path))[0] == 0
        pts = read_points(path)
        ref = fibonacci_points(10)
        assert pts.modulus == ref.modulus
        assert np.array_equal(pts.numerators, ref.numerators)
        a = json.loads(run(capsys, "verify-convolution", "--points", str(path), "--j", "3,3")[1])
        b = json.loads(run(capsys, "verify-convolution", "--fibonacci", "10", "--j", "3,3")[1])
        assert a["rows"] == b["rows"] and a["passed"] and b["passed"]


def test_verify_norms_and_op_norm_scan(capsys):
    code, out, _ = run(capsys, "verify-norms", "--kind", "fejer", "--params", "2")
    assert code == 0 and json.loads(out)["passed"]
    code, out, _ = run(capsys, "op-norm-scan", "--fibonacci", "12", "--r-max", "3")
    assert code == 0
    rows = csv_rows(out)
    assert len(rows) > 1


def test_dump_kernel(capsys):
    code, out, _ = run(capsys, "dump-kernel", "--kind", "vallee_poussin", "--params", "1")
    assert code == 0
    obj = json.loads(out)
    assert obj["columns"] == ["k1", "re", "im"]
    assert obj["rows"] == [[-1, 1.0, 0.0], [0, 1.0, 0.0], [1, 1.0, 0.0]]


def test_assertion_failure_exit_1(capsys):
    code, out, _ = run(capsys, "verify-convolution", "--fibonacci", "10", "--j", "3,3", "--tol", "1e-300")
    assert code == 1
    assert json.loads(out)["passed"] is False


@pytest.mark.parametrize("argv", [
    ["gen-points", "--bogus"],
    ["no-such-command"],
    ["gen-points"],
    ["gen-points", "--fibonacci", "5", "--korobov", "7", "--h", "1,3"],
    ["korobov-search", "--L", "-1", "--d", "2"],
    ["run-suite", "--criteria", "42"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_console_entry_point_module():
    proc = subprocess.run([sys.executable, "-m", "latsamp", "gamma-scan", "--n-min", "3", "--n-max", "5"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert [int(r[2]) for r in csv_rows(proc.stdout)[1:]] == [0, 1, 2]
    proc = subprocess.run([sys.executable, "-m", "latsamp", "--bogus"], capture_output=True, text=True)
    assert proc.returncode == 2 and "usage" in proc.stderr
