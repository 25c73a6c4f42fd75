"""Command-line interface: subcommand artifacts, manifests, exit codes."""

import hashlib
import json

import numpy as np
import pytest

import evtrisk as ev
from evtrisk.cli import main


def _run(*argv):
    return main([str(a) for a in argv])


def _read_json(path):
    return json.loads(path.read_text())


def _sha(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


@pytest.fixture()
def pareto_csv(tmp_path):
    out = tmp_path / "gen"
    assert _run("sim", "--model", "pareto", "--alpha", 3, "--n", 3000,
                "--seed", 7, "--out", "pareto.csv", "--out-dir", out) == 0
    return out / "pareto.csv"


@pytest.fixture()
def argarch_csv(tmp_path):
    out = tmp_path / "gen"
    assert _run("sim", "--model", "argarch", "--mu", -0.05, "--phi", 0.066,
                "--omega", 0.011, "--a", 0.099, "--b", 0.894,
                "--n", 1200, "--seed", 3, "--out", "garch.csv",
                "--out-dir", out) == 0
    return out / "garch.csv"


def test_no_arguments_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err.lower()


def test_missing_input_exits_1(tmp_path, capsys):
    code = _run("tail", "--input", tmp_path / "absent.csv",
                "--k-alpha", 50, "--out-dir", tmp_path)
    assert code == 1
    err = capsys.readouterr().err.strip()
    assert err and "\n" not in err  # single-line diagnostic


def test_domain_error_exits_1(pareto_csv, tmp_path, capsys):
    code = _run("theta", "--input", pareto_csv, "--out-dir", tmp_path)
    assert code == 1  # neither --block-size nor --block-grid given
    assert capsys.readouterr().err.strip()


def test_sim_is_byte_identical_across_runs(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert _run("sim", "--model", "pareto", "--alpha", 2, "--n", 100,
                    "--seed", 7, "--out", "x.csv", "--out-dir", out) == 0
    assert (a / "x.csv").read_bytes() == (b / "x.csv").read_bytes()
    assert (a / "sim_report.json").read_bytes() == (b / "sim_report.json").read_bytes()


def test_rerun_into_same_dir_is_stable(pareto_csv, tmp_path):
    out = tmp_path / "tail"
    args = ("tail", "--input", pareto_csv, "--k-alpha", 100, "--p", 0.99,
            "--k", 100, "--out-dir", out)
    assert _run(*args) == 0
    first = {p.name: _sha(p) for p in out.iterdir()}
    assert _run(*args) == 0
    second = {p.name: _sha(p) for p in out.iterdir()}
    assert first == second  # no timestamps or other run-varying content


def test_commands_do_not_mutate_input(pareto_csv, tmp_path):
    before = _sha(pareto_csv)
    _run("tail", "--input", pareto_csv, "--k-alpha", 100,
         "--out-dir", tmp_path / "o")
    assert _sha(pareto_csv) == before


def test_tail_report_estimates_alpha(pareto_csv, tmp_path):
    out = tmp_path / "tail"
    assert _run("tail", "--input", pareto_csv, "--method", "hill",
                "--k-alpha", 150, "--p", 0.99, "--k", 150,
                "--k-grid", "50:250:50", "--out-dir", out) == 0
    report = _read_json(out / "tail_report.json")
    assert report["schema_version"] == 1
    assert report["alpha"] == pytest.approx(3.0, rel=0.25)
    assert report["quantile"] == pytest.approx((1 - 0.99) ** (-1 / 3), rel=0.3)
    trace = (out / "tail_trace.csv").read_text().splitlines()
    assert len(trace) == 1 + 5  # header + one row per grid point
    manifest = _read_json(out / "tail_manifest.json")
    assert manifest["inputs"][str(pareto_csv)] == _sha(pareto_csv)
    assert manifest["outputs"] == [
        "tail_report.json", "tail_trace.csv"]
    assert manifest["flags"]["k_alpha"] == 150


def test_tail_bootstrap_ci(pareto_csv, tmp_path):
    out = tmp_path / "tailci"
    assert _run("tail", "--input", pareto_csv, "--k-alpha", 150, "--ci",
                "--boot-reps", 99, "--boot-mean-block", 20,
                "--out-dir", out) == 0
    report = _read_json(out / "tail_report.json")
    ci = report["alpha_ci"]
    assert ci["lower"] < report["alpha"] < ci["upper"]
    assert ci["level"] == 0.90


def test_theta_single_block_and_sweep(pareto_csv, tmp_path):
    out = tmp_path / "theta"
    assert _run("theta", "--input", pareto_csv, "--block-size", 100,
                "--out-dir", out) == 0
    report = _read_json(out / "theta_report.json")
    assert report["theta"] == pytest.approx(1.0, abs=0.15)
    assert report["ci"]["lower"] <= report["theta"]
    out2 = tmp_path / "sweep"
    assert _run("theta", "--input", pareto_csv, "--block-grid", "50:150:50",
                "--out-dir", out2) == 0
    rows = (out2 / "theta_trace.csv").read_text().splitlines()
    assert len(rows) == 1 + 3


def test_decluster_weekday_and_gap(argarch_csv, tmp_path):
    out = tmp_path / "wd"
    assert _run("decluster", "--input", argarch_csv, "--method", "weekday",
                "--weekday", "wed", "--out-dir", out) == 0
    report = _read_json(out / "decluster_report.json")
    assert 0 < report["kept"] < 1200
    assert report["kept"] + report["removed"] == 1200
    retained = (out / "decluster_retained.csv").read_text().splitlines()
    assert len(retained) == 1 + report["kept"]

    out2 = tmp_path / "gap"
    assert _run("decluster", "--input", argarch_csv, "--method", "gap",
                "--gap-days", 9, "--out-dir", out2) == 0
    report2 = _read_json(out2 / "decluster_report.json")
    assert report2["kept"] < 1200
    assert report2["gap_days"] == 9


def test_garch_fit_filter_forecast(argarch_csv, tmp_path):
    out = tmp_path / "garch"
    assert _run("garch", "--input", argarch_csv, "--filter-out", "resid.csv",
                "--forecast", "--p", 0.99, "--resid-method", "empirical",
                "--out-dir", out) == 0
    report = _read_json(out / "garch_report.json")
    params = report["params"]
    assert params["a"] + params["b_coef"] < 1
    assert params["omega"] > 0
    assert report["se"]["a"] > 0
    assert report["forecast"]["sigma_next"] > 0
    assert report["forecast"]["quantile"] > report["forecast"]["mu_next"]
    resid = ev.load_returns(out / "resid.csv")
    assert len(resid) == 1200 - 1


def test_backtest_uncond_artifacts(pareto_csv, tmp_path):
    out = tmp_path / "bu"
    assert _run("backtest-uncond", "--input", pareto_csv, "--window", 1000,
                "--step", 250, "--test-len", "250", "--methods",
                "hill,empirical", "--out-dir", out) == 0
    report = _read_json(out / "backtest_uncond_report.json")
    assert report["windows"] == 8
    for m in ("hill", "empirical"):
        assert report["mean_counts"][m]["250"] > 0
        tests = report["tests"][m]["250"]
        assert tests["placements"] == 8 * 250 - 250 + 1
        assert 0.0 <= tests["reject_cc"] <= 1.0
    rows = (out / "backtest_uncond_windows.csv").read_text().splitlines()
    assert len(rows) == 1 + 8 * 2  # per window and method


def test_backtest_cond_artifacts(argarch_csv, tmp_path):
    out = tmp_path / "bc"
    assert _run("backtest-cond", "--input", argarch_csv, "--window", 1000,
                "--step", 25, "--test-len", "5", "--methods", "empirical",
                "--out-dir", out) == 0
    report = _read_json(out / "backtest_cond_report.json")
    assert report["days"] == 8
    assert report["refit_failures"] == 0
    assert report["tests"]["empirical"]["5"]["placements"] == 4
    rows = (out / "backtest_cond_days.csv").read_text().splitlines()
    assert len(rows) == 1 + 8


def test_chi_pair_with_ci(tmp_path):
    gen = tmp_path / "gen"
    for name, seed in (("a.csv", 1), ("b.csv", 1)):
        assert _run("sim", "--model", "frechet", "--alpha", 1, "--n", 2000,
                    "--seed", seed, "--out", name, "--out-dir", gen) == 0
    out = tmp_path / "chi"
    assert _run("chi", "--pair", gen / "a.csv", gen / "b.csv", "--k", 100,
                "--ci", "--boot-reps", 99, "--boot-mean-block", 20,
                "--k-grid", "50:150:50", "--out-dir", out) == 0
    report = _read_json(out / "chi_report.json")
    assert report["chi"] == 1.0  # identical margins
    assert report["chi_ci"]["lower"] <= 1.0 <= report["chi_ci"]["upper"]
    rows = (out / "chi_trace.csv").read_text().splitlines()
    assert len(rows) == 1 + 3
    manifest = _read_json(out / "chi_manifest.json")
    assert len(manifest["inputs"]) == 2


def test_acf_artifacts(pareto_csv, tmp_path):
    out = tmp_path / "acf"
    assert _run("acf", "--input", pareto_csv, "--max-lag", 10,
                "--out-dir", out) == 0
    report = _read_json(out / "acf_report.json")
    assert report["band"] == pytest.approx(3.0 / np.sqrt(3000))
    assert report["max_abs_acf"] < 0.1  # i.i.d. input
    rows = (out / "acf_trace.csv").read_text().splitlines()
    assert len(rows) == 1 + 10


def test_price_csv_is_accepted(tmp_path):
    rng = np.random.default_rng(0)
    prices = 100 * np.exp(np.cumsum(rng.normal(0, 0.01, 400)))
    dates = np.busday_offset(np.datetime64("2001-01-01"), np.arange(400),
                             roll="forward")
    csv_path = tmp_path / "prices.csv"
    csv_path.write_text("Date,Close\n" + "\n".join(
        f"{d},{p:.6f}" for d, p in zip(dates, prices)) + "\n")
    out = tmp_path / "o"
    assert _run("acf", "--input", csv_path, "--max-lag", 5,
                "--out-dir", out) == 0
    assert _read_json(out / "acf_report.json")["n"] == 399
