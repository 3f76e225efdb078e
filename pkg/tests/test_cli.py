import csv
import io
import json
import shutil
import subprocess
import sys
from fractions import Fraction

import pytest

from genkloosterman.characters import ThetaChar
from genkloosterman.cli import GP_COLUMNS, main
from genkloosterman.genkl import gp

INERT = ["--p", "5", "--kind", "inert", "--cond", "2"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_gp_single_row(capsys):
    code, out, _ = run(capsys, "gp", *INERT, "--k", "3")
    assert code == 0
    (row,) = rows(out)
    assert list(row) == GP_COLUMNS
    assert float(row["re"]) == pytest.approx(-19.317914881970907, abs=1e-9)
    want = complex(gp(ThetaChar.make(5, "inert", 2), 1, 1, Fraction(1, 5**6)))
    assert float(row["abs"]) == pytest.approx(abs(want))
    assert float(row["abs_over_sqrt"]) == pytest.approx(abs(want) / 5**1.5)


def test_gp_grid_and_json(capsys):
    code, out, _ = run(capsys, "gp", *INERT, "--k", "3", "--grid-units")
    assert code == 0
    assert [int(r["m1"]) for r in rows(out)] == [a for a in range(1, 125) if a % 5]
    code, out, _ = run(capsys, "gp", *INERT, "--k", "3", "--format", "json", "--mode", "stationary")
    assert code == 0
    data = json.loads(out)
    rec = data[0] if isinstance(data, list) else data
    assert rec["mode"] == "stationary"
    assert rec["re"] == pytest.approx(-19.317914881970907, abs=1e-9)


def test_bad_prime_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gp", "--p", "4", "--kind", "inert", "--cond", "2", "--k", "3"])
    assert exc.value.code == 2


def test_domain_error_exit_1(capsys):
    code, _, err = run(capsys, "gp", "--p", "5", "--kind", "inert", "--cond", "1", "--k", "3")
    assert code == 1 and "ValueError" in err


@pytest.mark.parametrize("suite", ["average", "classical"])
def test_verify_passes(capsys, suite):
    code, out, _ = run(capsys, "verify", suite)
    report = json.loads(out)
    assert code == 0 and report["passed"] is True


def test_verify_unknown_suite(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "bogus"])
    assert exc.value.code == 2


def test_verify_failure_exit_1(capsys):
    # the k = c(pi) support check of the dual sum fails, see the acceptance tests
    code, out, _ = run(capsys, "verify", "dualsum", "--k", "4")
    report = json.loads(out)
    assert report["passed"] is False and code == 1


def test_bench_small(capsys):
    code, out, _ = run(capsys, "bench", "--p", "5", "--kind", "split", "--cond", "2", "--k", "3",
                       "--repeat", "1", "--check-threads", "1,8")
    rep = json.loads(out)
    assert code == 0
    assert rep["values_equal"] is True and rep["threads_bit_identical"] is True
    assert rep["terms_evaluated"] <= rep["brute"]["terms_evaluated"]


def test_dualsum_csv(capsys):
    code, out, _ = run(capsys, "dualsum", *INERT, "--k", "3", "--grid")
    assert code == 0
    rs = rows(out)
    assert list(rs[0]) == ["m1", "in_support", "re", "im", "abs", "bound_ratio"]
    assert len(rs) == 100
    assert all(float(r["abs"]) < 1e-8 for r in rs if r["in_support"] == "false")


def test_trace_geometric(capsys):
    code, out, _ = run(capsys, "trace", "geometric", *INERT, "--l", "1", "--m1", "1", "--m2", "2",
                       "--kappa", "4", "--cmax", "375", "--json")
    js = json.loads(out)
    assert code == 0
    assert set(js) == {"delta", "sum_re", "sum_im", "tail_bound", "terms"}
    code, out, _ = run(capsys, "trace", "geometric", *INERT, "--l", "1", "--kappa", "4",
                       "--cmax", "375", "--csv")
    assert [int(r["c"]) for r in rows(out)] == [125, 250, 375]


def test_trace_residual(capsys, tmp_path):
    data = tmp_path / "d.json"
    data.write_text(json.dumps({"p": 5, "level": 625, "weight": 4, "entries": []}))
    code, out, _ = run(capsys, "trace", "residual", *INERT, "--l", "1", "--kappa", "4",
                       "--cmax", "250", "--data", str(data))
    js = json.loads(out)
    assert code == 0 and js["lhs"] == 0
    code, _, err = run(capsys, "trace", "residual", *INERT, "--l", "1", "--kappa", "4", "--cmax", "250")
    assert code == 2 and "--data" in err
    data.write_text("{")
    code, _, err = run(capsys, "trace", "residual", *INERT, "--l", "1", "--kappa", "4",
                       "--cmax", "250", "--data", str(data))
    assert code == 1 and "SchemaError" in err


@pytest.mark.skipif(shutil.which("genkl") is None, reason="console script not installed")
def test_console_script():
    r = subprocess.run(["genkl", "gp", *INERT, "--k", "2"], capture_output=True, text=True)
    assert r.returncode == 0
    (row,) = rows(r.stdout)
    assert float(row["abs"]) == 0.0
    r = subprocess.run([sys.executable, "-m", "genkloosterman.cli", "verify", "classical"],
                       capture_output=True, text=True)
    assert r.returncode == 0
