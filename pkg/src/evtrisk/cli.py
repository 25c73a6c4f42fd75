"""Command-line front end.

Subcommands: tail, theta, decluster, garch, backtest-uncond, backtest-cond,
chi, sim, acf.  Every run writes a JSON report (schema_version field), any
plot-data CSVs, and a run manifest recording the resolved flags, seeds and
SHA-256 checksums of the inputs, so each output is reproducible from its
manifest alone.  Outputs contain no timestamps; identical invocations give
byte-identical files.

Exit codes: 0 success, 1 domain error (single-line diagnostic on stderr),
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .argarch import ArGarchParams, fit_qmle, forecast_next
from .backtest import METHODS, roll_conditional, roll_unconditional, sliding_backtest
from .bootstrap import BootstrapSpec, percentile_ci
from .decluster import rank_gap_decluster, weekday_subsample
from .errors import EvtriskError
from .extremal import extremal_index_sliding, theta_ci, theta_sweep
from .ingest import ReturnSeries, acf, align_pairs, load_prices, load_returns, to_returns
from .simulate import sim_argarch, sim_duplicated, sim_frechet, sim_pareto
from .taildep import chi_ci, chi_hat, chi_trace, residual_pair
from .tailest import (empirical_quantile, hill, hill_corrected, pareto_qq_points,
                      qq_slope_alpha, tail_index_trace, weissman_quantile)

SCHEMA_VERSION = 1


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _load_series(path: str) -> ReturnSeries:
    """Load a return series; price files (a close column) are differenced."""
    with open(path, newline="") as fh:
        header = next(csv.reader(fh))
    names = [h.strip().lower() for h in header]
    date_col = header[names.index("date")] if "date" in names else header[0]
    if "value" in names:
        return load_returns(path)
    for candidate in ("close", "adj close", "adj_close", "price"):
        if candidate in names:
            price_col = header[names.index(candidate)]
            break
    else:
        price_col = header[1]
    prices = load_prices(path, date_col=date_col, price_col=price_col,
                         symbol=Path(path).stem)
    return to_returns(prices)


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _write_json(obj: dict, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True,
                               default=_json_default) + "\n")


def _write_csv(path: Path, header: list, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _emit(args, report: dict, plots: dict = None, extra_outputs=()) -> None:
    """Write the JSON report, plot CSVs and a run manifest under --out-dir."""
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    prefix = args.command.replace("-", "_")

    report = {"schema_version": SCHEMA_VERSION, "command": args.command, **report}
    report_path = out_dir / f"{prefix}_report.json"
    _write_json(report, report_path)

    outputs = [report_path.name]
    for name, (header, rows) in (plots or {}).items():
        plot_path = out_dir / f"{prefix}_{name}.csv"
        _write_csv(plot_path, header, rows)
        outputs.append(plot_path.name)
    outputs.extend(extra_outputs)

    flags = {k: v for k, v in vars(args).items() if k != "func" and not callable(v)}
    inputs = {}
    for key in ("input", "pair"):
        val = flags.get(key)
        paths = val if isinstance(val, list) else [val] if val else []
        for p in paths:
            inputs[p] = _sha256(p)
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "version": __version__,
        "flags": flags,
        "inputs": inputs,
        "outputs": sorted(outputs),
    }
    _write_json(manifest, out_dir / f"{prefix}_manifest.json")


def _parse_grid(text: str) -> np.ndarray:
    """Parse an inclusive lo:hi:step integer grid specification."""
    try:
        lo, hi, step = (int(part) for part in text.split(":"))
    except ValueError:
        raise ValueError(f"grid must be lo:hi:step, got {text!r}") from None
    if step < 1 or hi < lo:
        raise ValueError(f"grid must have step >= 1 and hi >= lo, got {text!r}")
    return np.arange(lo, hi + 1, step)


def _parse_methods(text: str) -> tuple:
    methods = tuple(m.strip() for m in text.split(",") if m.strip())
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise ValueError(f"unknown methods {unknown}; choose from {METHODS}")
    return methods


def _boot_spec(args) -> BootstrapSpec:
    return BootstrapSpec(replicates=args.boot_reps, mean_block=args.boot_mean_block,
                         seed=args.boot_seed, level=args.ci_level)


# --- subcommand handlers ---------------------------------------------------

def _cmd_tail(args) -> None:
    r = _load_series(args.input)
    x = r.values

    def fit_at(k_alpha):
        if args.method == "hill":
            return hill(x, k_alpha)
        if args.method == "corrected":
            return hill_corrected(x, k_alpha, rho=args.rho)
        return qq_slope_alpha(pareto_qq_points(x, k_alpha))

    fit = fit_at(args.k_alpha)
    report = {"input": args.input, "n": len(x), "method": args.method,
              "k_alpha": args.k_alpha, "gamma": fit.gamma, "alpha": fit.alpha}
    if args.method == "corrected":
        report["rho"] = args.rho

    if args.ci:
        spec = _boot_spec(args)
        lo, hi, _ = percentile_ci(x, lambda xs: fit_at_sample(xs, args), spec)
        report["alpha_ci"] = {"lower": lo, "upper": hi, "level": spec.level}

    if args.p is not None:
        k = args.k if args.k is not None else args.k_alpha
        if args.method == "empirical":
            report["quantile"] = empirical_quantile(x, args.p)
        else:
            report["quantile"] = weissman_quantile(x, args.p, k, fit).value
        report.update({"p": args.p, "k": k})

    plots = {}
    if args.k_grid:
        grid = _parse_grid(args.k_grid)
        trace = tail_index_trace(x, grid, method={"hill": "standard_hill",
                                                  "corrected": "corrected_hill",
                                                  "qq": "qq_regression"}[args.method],
                                 rho=args.rho)
        rows = [(f.k_alpha, f.alpha, f.gamma) for f in trace]
        plots["trace"] = (["k", "alpha", "gamma"], rows)
    _emit(args, report, plots)


def fit_at_sample(xs, args):
    """Tail index on a bootstrap resample (module-level for clarity in tracebacks)."""
    if args.method == "hill":
        return hill(xs, args.k_alpha).alpha
    if args.method == "corrected":
        return hill_corrected(xs, args.k_alpha, rho=args.rho).alpha
    return qq_slope_alpha(pareto_qq_points(xs, args.k_alpha)).alpha


def _cmd_theta(args) -> None:
    if args.block_size is None and not args.block_grid:
        raise ValueError("one of --block-size or --block-grid is required")
    r = _load_series(args.input)
    x = r.values
    method = {"lik": "exp_likelihood", "boot": "block_bootstrap"}[args.ci]
    spec = _boot_spec(args) if args.ci == "boot" else None

    plots = {}
    if args.block_grid:
        grid = _parse_grid(args.block_grid)
        fits = theta_sweep(x, grid, level=args.level, method=method, boot_spec=spec)
        if not fits:
            raise ValueError("extremal index degenerate at every grid block size")
        rows = [(f.block_size, f.theta, f.ci[0], f.ci[1]) for f in fits]
        plots["trace"] = (["b", "theta", "lo", "hi"], rows)
        pick = min(fits, key=lambda f: abs(f.block_size - args.block_size)) \
            if args.block_size else fits[-1]
    else:
        pick = extremal_index_sliding(x, args.block_size)
        lo, hi = theta_ci(pick, x, level=args.level, method=method, boot_spec=spec)
        pick = pick.with_ci(lo, hi, args.level)
    report = {"input": args.input, "n": pick.n, "theta": pick.theta,
              "theta_raw": pick.theta_raw, "b": pick.block_size,
              "ci": {"lower": pick.ci[0], "upper": pick.ci[1], "level": args.level}}
    _emit(args, report, plots)


def _cmd_decluster(args) -> None:
    r = _load_series(args.input)
    if args.method == "weekday":
        if args.weekday is None:
            raise ValueError("--weekday is required with --method weekday")
        kept = weekday_subsample(r, args.weekday)
    else:
        if args.gap_days is None:
            raise ValueError("--gap-days is required with --method gap")
        kept = rank_gap_decluster(r, args.gap_days)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    retained = out_dir / "decluster_retained.csv"
    kept.write_csv(retained)
    report = {"input": args.input, "method": args.method, "n": len(r),
              "kept": len(kept), "removed": len(r) - len(kept),
              "retained_csv": retained.name}
    if args.method == "weekday":
        report["weekday"] = args.weekday
    else:
        report["gap_days"] = args.gap_days
    _emit(args, report, extra_outputs=[retained.name])


def _cmd_garch(args) -> None:
    r = _load_series(args.input)
    fitted = fit_qmle(r.values)
    p = fitted.params
    report = {
        "input": args.input, "n": len(r),
        "params": {"mu": p.mu, "phi": p.phi, "omega": p.omega,
                   "a": p.a, "b_coef": p.b_coef},
        "se": fitted.se, "loglik": fitted.loglik, "flags": list(fitted.flags),
    }
    extra = []
    if args.filter_out:
        resid_series = ReturnSeries(dates=r.dates[1:], values=fitted.resid,
                                    symbol=r.symbol)
        out_path = Path(args.out_dir) / args.filter_out
        out_path.parent.mkdir(parents=True, exist_ok=True)
        resid_series.write_csv(out_path)
        report["filter_out"] = args.filter_out
        extra.append(args.filter_out)
    if args.forecast:
        rq = _resid_quantile(fitted.resid, args.p, args.resid_method)
        fc = forecast_next(fitted, float(r.values[-1]), rq)
        report["forecast"] = {"p": args.p, "resid_method": args.resid_method,
                              "resid_quantile": rq, "mu_next": fc.mu_next,
                              "sigma_next": fc.sigma_next, "quantile": fc.quantile}
    _emit(args, report, extra_outputs=extra)


def _resid_quantile(resid, p, method) -> float:
    from .backtest import method_quantile
    return method_quantile(resid, p, method)


def _cmd_backtest_uncond(args) -> None:
    r = _load_series(args.input)
    methods = _parse_methods(args.methods)
    test_lens = tuple(int(t) for t in args.test_len.split(","))
    res = roll_unconditional(r, window=args.window, step=args.step, p=args.p,
                             methods=methods, test_lens=test_lens)
    rows = []
    for j, s in enumerate(res.starts):
        for m in methods:
            for L in test_lens:
                c = res.counts[m][L][j]
                rows.append((int(s), m, repr(res.forecasts[m][j]), L,
                             "" if np.isnan(c) else int(c)))
    summary = {"windows": int(res.starts.size), "window": args.window,
               "step": args.step, "p": args.p, "mean_counts": {}, "tests": {}}
    for m in methods:
        summary["mean_counts"][m] = {str(L): res.mean_count(m, L) for L in test_lens}
        summary["tests"][m] = {}
        for L in test_lens:
            if res.daily[m].n >= L:
                sb = sliding_backtest(res.daily[m], L, level=args.level)
                summary["tests"][m][str(L)] = {
                    "reject_uc": sb.reject_uc, "reject_ind": sb.reject_ind,
                    "reject_cc": sb.reject_cc, "placements": sb.placements,
                    "mean_count": sb.mean_count, "max_count": sb.max_count}
    plots = {"windows": (["window_start", "method", "forecast", "test_len", "count"], rows)}
    _emit(args, {"input": args.input, **summary}, plots)


def _cmd_backtest_cond(args) -> None:
    r = _load_series(args.input)
    methods = _parse_methods(args.methods)
    test_lens = tuple(int(t) for t in args.test_len.split(","))
    res = roll_conditional(r, window=args.window, step=args.step, p=args.p,
                           methods=methods)
    rows = []
    for j, d in enumerate(res.days):
        for m in methods:
            rows.append((int(d), str(r.dates[d]), m, repr(res.forecasts[m][j]),
                         int(res.exceedances[m].indicators[j])))
    summary = {"days": int(res.days.size), "window": args.window, "step": args.step,
               "p": args.p, "refit_failures": int(res.refit_failures.size),
               "tests": {}}
    for m in methods:
        summary["tests"][m] = {}
        for L in test_lens:
            if res.exceedances[m].n >= L:
                sb = sliding_backtest(res.exceedances[m], L, level=args.level)
                summary["tests"][m][str(L)] = {
                    "reject_uc": sb.reject_uc, "reject_ind": sb.reject_ind,
                    "reject_cc": sb.reject_cc, "placements": sb.placements,
                    "mean_count": sb.mean_count, "max_count": sb.max_count}
    plots = {"days": (["day", "date", "method", "forecast", "exceed"], rows)}
    _emit(args, {"input": args.input, **summary}, plots)


def _cmd_chi(args) -> None:
    path_a, path_b = args.pair
    pair = align_pairs(_load_series(path_a), _load_series(path_b))
    if args.residuals:
        pair = residual_pair(pair)
    x, y = pair.values_a, pair.values_b

    report = {"pair": [path_a, path_b], "n": len(pair),
              "residuals": bool(args.residuals)}
    plots = {}
    spec = _boot_spec(args) if args.ci else None
    if args.k_grid:
        grid = _parse_grid(args.k_grid)
        fits = chi_trace(x, y, grid, boot_spec=spec)
        rows = [(f.k, f.chi, f.ci[0] if f.ci else "", f.ci[1] if f.ci else "")
                for f in fits]
        plots["trace"] = (["k", "chi", "lo", "hi"], rows)
    fit = chi_hat(x, y, args.k)
    report.update({"k": args.k, "chi": fit.chi})
    if spec is not None:
        lo, hi, _ = chi_ci(x, y, args.k, spec)
        report["chi_ci"] = {"lower": lo, "upper": hi, "level": spec.level}
    _emit(args, report, plots)


def _cmd_sim(args) -> None:
    if args.model == "argarch":
        params = ArGarchParams(args.mu, args.phi, args.omega, args.a, args.b)
        values = sim_argarch(params, args.n, args.seed,
                             innovation=args.innovation, df=args.df)
        model_desc = {"mu": args.mu, "phi": args.phi, "omega": args.omega,
                      "a": args.a, "b_coef": args.b,
                      "innovation": args.innovation, "df": args.df}
    elif args.model == "pareto":
        values = sim_pareto(args.alpha, args.n, args.seed)
        model_desc = {"alpha": args.alpha}
    elif args.model == "frechet":
        values = sim_frechet(args.alpha, args.n, args.seed)
        model_desc = {"alpha": args.alpha}
    else:  # dup
        alpha = args.alpha

        def base(count, seed):
            return sim_frechet(alpha, count, seed)

        values = sim_duplicated(base, args.m, args.n, args.seed)
        model_desc = {"alpha": args.alpha, "m": args.m, "base": "frechet"}

    # synthetic business-day dates so simulated files flow through any subcommand
    dates = np.busday_offset(np.datetime64("2000-01-03"), np.arange(args.n),
                             roll="forward")
    series = ReturnSeries(dates=dates, values=values, symbol=f"sim_{args.model}")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_name = args.out if args.out else "sim_series.csv"
    series.write_csv(out_dir / out_name)
    report = {"model": args.model, "n": args.n, "seed": args.seed,
              "params": model_desc, "out": out_name}
    _emit(args, report, extra_outputs=[out_name])


def _cmd_acf(args) -> None:
    r = _load_series(args.input)
    x = r.values
    lags = np.arange(1, args.max_lag + 1)
    raw = acf(x, args.max_lag)
    squared = acf(x ** 2, args.max_lag)
    band = 3.0 / np.sqrt(len(x))
    rows = list(zip(lags.tolist(), raw.tolist(), squared.tolist()))
    report = {"input": args.input, "n": len(x), "max_lag": args.max_lag,
              "band": band,
              "max_abs_acf": float(np.max(np.abs(raw))),
              "max_abs_acf_squared": float(np.max(np.abs(squared)))}
    _emit(args, report, {"trace": (["lag", "acf", "acf_squared"], rows)})


# --- parser ----------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evtrisk",
        description="Extreme-value tail risk analysis of financial return series.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out-dir", default=".", help="directory for reports and plot data")
    common.add_argument("--threads", type=int, default=1,
                        help="worker count hint; results do not depend on it")
    common.add_argument("--seed", type=int, default=0, help="base RNG seed")

    inp = argparse.ArgumentParser(add_help=False)
    inp.add_argument("--input", required=True,
                     help="CSV of prices (date + close column) or returns (date,value)")

    boot = argparse.ArgumentParser(add_help=False)
    boot.add_argument("--boot-reps", type=int, default=999)
    boot.add_argument("--boot-mean-block", type=float, default=200.0)
    boot.add_argument("--boot-seed", type=int, default=0)
    boot.add_argument("--ci-level", type=float, default=0.90)

    p = sub.add_parser("tail", parents=[common, inp, boot],
                       help="tail index and high quantile estimation")
    p.add_argument("--method", choices=["hill", "corrected", "qq"], default="hill")
    p.add_argument("--k-alpha", type=int, required=True,
                   help="number of top order statistics for the index")
    p.add_argument("--rho", type=float, default=-1.0,
                   help="second-order parameter for the bias correction")
    p.add_argument("--p", type=float, help="quantile level to extrapolate")
    p.add_argument("--k", type=int, help="anchor order statistics for the quantile")
    p.add_argument("--k-grid", help="lo:hi:step trace of estimates vs k")
    p.add_argument("--ci", action="store_true", help="attach a block-bootstrap CI")
    p.set_defaults(func=_cmd_tail)

    p = sub.add_parser("theta", parents=[common, inp, boot],
                       help="extremal index (sliding blocks)")
    p.add_argument("--block-size", type=int, help="block size b")
    p.add_argument("--block-grid", help="lo:hi:step sweep of block sizes")
    p.add_argument("--ci", choices=["lik", "boot"], default="lik")
    p.add_argument("--level", type=float, default=0.95)
    p.set_defaults(func=_cmd_theta)

    p = sub.add_parser("decluster", parents=[common, inp],
                       help="weekday subsampling or rank-ordered gap declustering")
    p.add_argument("--method", choices=["weekday", "gap"], required=True)
    p.add_argument("--weekday", help="Mon..Fri or 0..4")
    p.add_argument("--gap-days", type=int)
    p.set_defaults(func=_cmd_decluster)

    p = sub.add_parser("garch", parents=[common, inp],
                       help="AR(1)-GARCH(1,1) QMLE fit, filtering, forecasting")
    p.add_argument("--filter-out", help="write standardized residuals CSV here")
    p.add_argument("--forecast", action="store_true",
                   help="emit the day-ahead conditional quantile")
    p.add_argument("--p", type=float, default=0.99)
    p.add_argument("--resid-method", choices=list(METHODS), default="empirical")
    p.set_defaults(func=_cmd_garch)

    p = sub.add_parser("backtest-uncond", parents=[common, inp],
                       help="rolling unconditional quantile backtest")
    p.add_argument("--window", type=int, default=2000)
    p.add_argument("--step", type=int, default=250)
    p.add_argument("--test-len", default="250,2000",
                   help="comma-separated test span lengths")
    p.add_argument("--p", type=float, default=0.99)
    p.add_argument("--methods", default=",".join(METHODS))
    p.add_argument("--level", type=float, default=0.05,
                   help="test level for rejection fractions")
    p.set_defaults(func=_cmd_backtest_uncond)

    p = sub.add_parser("backtest-cond", parents=[common, inp],
                       help="daily AR-GARCH conditional quantile backtest")
    p.add_argument("--window", type=int, default=2000)
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--test-len", default="250,2000")
    p.add_argument("--p", type=float, default=0.99)
    p.add_argument("--methods", default=",".join(METHODS))
    p.add_argument("--level", type=float, default=0.05)
    p.set_defaults(func=_cmd_backtest_cond)

    p = sub.add_parser("chi", parents=[common, boot],
                       help="bivariate tail dependence coefficient")
    p.add_argument("--pair", nargs=2, required=True, metavar=("A", "B"))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--k-grid", help="lo:hi:step trace of chi vs k")
    p.add_argument("--residuals", action="store_true",
                   help="filter each margin by AR-GARCH first")
    p.add_argument("--ci", action="store_true", help="attach paired bootstrap CIs")
    p.set_defaults(func=_cmd_chi)

    p = sub.add_parser("sim", parents=[common],
                       help="reference samplers (AR-GARCH, Pareto, Frechet, duplicated)")
    p.add_argument("--model", choices=["argarch", "pareto", "frechet", "dup"],
                   required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--m", type=int, default=2, help="duplication factor for dup")
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, default=0.0)
    p.add_argument("--innovation", choices=["gaussian", "student_t"],
                   default="gaussian")
    p.add_argument("--df", type=float)
    p.add_argument("--out", help="output CSV name (under --out-dir)")
    p.set_defaults(func=_cmd_sim)

    p = sub.add_parser("acf", parents=[common, inp],
                       help="autocorrelations of the series and its square")
    p.add_argument("--max-lag", type=int, default=20)
    p.set_defaults(func=_cmd_acf)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (EvtriskError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
