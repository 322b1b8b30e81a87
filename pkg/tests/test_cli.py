import json
import pathlib
import shlex

import pytest
from click.testing import CliRunner

from degen_laguerre import cli, laguerre
from degen_laguerre.exact_core import MultiPoly

ROOT = pathlib.Path(__file__).parent
DATA_PATHS = sorted(ROOT.glob("data/*.args"))


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture(params=DATA_PATHS, ids=lambda p: p.stem)
def golden(request):
    args = shlex.split(request.param.read_text())
    return args, request.param.with_suffix(".out").read_text()


def test_golden(runner, golden):
    args, expected = golden
    result = runner.invoke(cli.main, args, catch_exceptions=False)
    assert result.exit_code == 0
    assert result.output == expected


def test_lah_table_last_row(runner):
    out = runner.invoke(cli.main, ["table", "lah", "--n-max", "3"]).output
    assert out.splitlines()[-1] == "3,3,1"


def _csv_poly(out, n):
    rows = [r.split(",") for r in out.splitlines()[1:]]
    return MultiPoly.from_csv("\n".join(",".join(r[1:]) for r in rows if int(r[0]) == n))


def test_laguerre_table_encodes_polynomials(runner):
    out = runner.invoke(cli.main, ["table", "laguerre", "--n-max", "1"]).output
    x, alpha = MultiPoly.var("x"), MultiPoly.var("alpha")
    assert _csv_poly(out, 1) == alpha + 1 - x
    out = runner.invoke(cli.main, ["table", "laguerre", "--n-max", "2", "--lambda", "0", "--alpha", "0"]).output
    assert [_csv_poly(out, n) for n in range(3)] == [1, 1 - x, x**2 / 2 - 2 * x + 1]


def test_laguerre_json_round_trips(runner):
    out = runner.invoke(cli.main, ["--format", "json", "table", "laguerre", "--n-max", "4"]).output
    doc = json.loads(out)
    assert doc["schema"] == 1
    for entry in doc["polys"]:
        assert MultiPoly.from_records(entry["terms"]) == laguerre.explicit(entry["n"]).poly


def test_rational_flags_reject_decimals(runner):
    result = runner.invoke(cli.main, ["table", "laguerre", "--n-max", "2", "--lambda", "0.5"])
    assert result.exit_code == 2


def test_unknown_suite_is_usage_error(runner):
    assert runner.invoke(cli.main, ["verify", "thm9"]).exit_code == 2


def test_out_flag_writes_file(runner, tmp_path):
    target = tmp_path / "lah.csv"
    result = runner.invoke(cli.main, ["--out", str(target), "table", "lah", "--n-max", "2"])
    assert result.exit_code == 0 and result.output == ""
    assert target.read_text().splitlines()[-1] == "2,2,1"


def test_verify_thm4_all_pass(runner):
    result = runner.invoke(cli.main, ["verify", "thm4", "--n-max", "12"])
    rep = json.loads(result.output)
    assert result.exit_code == 0
    assert rep["summary"] == {"total": 13, "passed": 13}


def test_verify_lah_ids(runner):
    result = runner.invoke(cli.main, ["verify", "lah_ids"])
    rep = json.loads(result.output)
    assert result.exit_code == 0
    kinds = {c["params"]["identity"] for c in rep["cases"]}
    assert kinds == {"rising_to_falling", "generating_series", "binomial_product"}
    assert rep["summary"]["passed"] == rep["summary"]["total"] == len(rep["cases"])


def test_verify_rodrigues_report(runner):
    result = runner.invoke(cli.main, ["verify", "rodrigues", "--n-max", "3", "--alpha-max", "1"])
    rep = json.loads(result.output)
    assert result.exit_code == 0
    assert len(rep["cases"]) == 8
    case = rep["cases"][-1]
    assert case["case"] == "n=3,alpha=1" and case["residual_zero"] is True and case["max_order_checked"] == 16


def test_verify_all_is_deterministic(runner):
    a = runner.invoke(cli.main, ["verify", "all", "--seed", "7"])
    b = runner.invoke(cli.main, ["--seed", "7", "verify", "all"])
    assert a.exit_code == 0
    assert a.output == b.output
    rep = json.loads(a.output)
    assert {c["suite"] for c in rep["cases"]} == set(cli.SUITES[1:])


def test_failing_case_sets_exit_code(runner, monkeypatch):
    monkeypatch.setattr(laguerre, "theorem4_poly", lambda n: MultiPoly.var("x") ** (n + 1))
    result = runner.invoke(cli.main, ["verify", "thm4", "--n-max", "2"])
    assert result.exit_code == 1
    assert json.loads(result.output)["summary"]["passed"] == 0


def test_thread_env_does_not_change_results(runner, monkeypatch):
    args = ["verify", "rodrigues", "--n-max", "2", "--alpha-max", "1"]
    monkeypatch.setenv(cli.THREADS_ENV, "1")
    serial = runner.invoke(cli.main, args).output
    monkeypatch.setenv(cli.THREADS_ENV, "2")
    parallel = runner.invoke(cli.main, args).output
    assert serial == parallel
    monkeypatch.setenv(cli.THREADS_ENV, "many")
    assert runner.invoke(cli.main, args).exit_code == 2


def test_poisson_moments(runner):
    rep = json.loads(runner.invoke(cli.main, ["poisson", "moments", "--n", "1", "--alpha", "1", "--lambda", "-0.5"]).output)
    assert rep["exact"] == 2.0
    assert rep["series"] == pytest.approx(2.0, rel=1e-10)
    assert rep["mc_estimate"] is None
    rep = json.loads(runner.invoke(cli.main, ["poisson", "moments", "--n", "2", "--mc", "200000", "--seed", "42"]).output)
    assert abs(rep["mc_estimate"] - rep["exact"]) <= 4 * rep["mc_stderr"]


def test_poisson_moments_positive_lambda_is_formal(runner):
    result = runner.invoke(cli.main, ["poisson", "moments", "--n", "2", "--alpha", "1", "--lambda", "0.5"])
    rep = json.loads(result.output)
    assert rep["series"] is None and rep["exact"] == pytest.approx(0.5 / 1.5**2)
    result = runner.invoke(cli.main, ["poisson", "moments", "--n", "2", "--lambda", "0.5", "--mc", "10"])
    assert result.exit_code == 2


def test_poisson_sample_bytes_repeat(runner):
    a = runner.invoke(cli.main, ["poisson", "sample", "--count", "3", "--seed", "1"]).output
    b = runner.invoke(cli.main, ["poisson", "sample", "--count", "3", "--seed", "1"]).output
    assert a == b and len(a.splitlines()) == 3
    assert runner.invoke(cli.main, ["poisson", "sample", "--count", "3", "--alpha", "4", "--lambda", "-0.5"]).exit_code == 2
