"""Quantile-forecast backtesting: exceedance bookkeeping, coverage tests,
and rolling-window forecast harnesses.

A forecast of the level-p quantile of the loss distribution should be
exceeded with probability 1 - p.  The unconditional coverage (UC) test
checks the exceedance frequency, the independence (IND) test checks for
first-order clustering of exceedances via the transition matrix of the
indicator series, and the conditional coverage (CC) statistic is their sum
(chi-square with 2 degrees of freedom).

Two harnesses produce the indicator series:

* roll_unconditional re-estimates the stationary quantile on windows of
  `window` observations stepped by `step` days and counts exceedances over
  following test spans;
* roll_conditional refits AR(1)-GARCH(1,1) daily on a trailing window,
  estimates the residual quantile, and forecasts the next day's conditional
  quantile mu_next + sigma_next * q_resid.

Quantile methods on a window (or residual) sample: "hill" (Hill fit at
k_alpha = 50 + tail extrapolation with k = 50), "corrected" (bias-corrected
Hill at k_alpha = 200, same extrapolation), "empirical" (order statistic).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy
from scipy.stats import chi2

from .argarch import filter_series, fit_qmle, forecast_next
from .errors import ConvergenceError, EstimationError, NegativeGammaError
from .ingest import ReturnSeries
from .tailest import empirical_quantile, hill, hill_corrected, weissman_quantile

__all__ = [
    "ExceedanceSeries",
    "TransitionCounts",
    "BacktestReport",
    "SlidingBacktestSummary",
    "UncondRollResult",
    "CondRollResult",
    "exceedances",
    "uc_test",
    "ind_test",
    "cc_test",
    "sliding_backtest",
    "method_quantile",
    "roll_unconditional",
    "roll_conditional",
    "METHODS",
]

METHODS = ("hill", "corrected", "empirical")

K_ALPHA_HILL = 50
K_ALPHA_CORRECTED = 200
K_WEISSMAN = 50


@dataclass(frozen=True, eq=False)
class ExceedanceSeries:
    """0/1 exceedance indicators with the intended exceedance probability p."""

    indicators: np.ndarray
    p: float

    def __post_init__(self):
        ind = np.asarray(self.indicators, dtype=np.int8)
        if ind.size and not np.isin(ind, (0, 1)).all():
            raise ValueError("indicators must be 0/1")
        if not 0 < self.p < 1:
            raise ValueError(f"p must be in (0, 1), got {self.p}")
        object.__setattr__(self, "indicators", ind)

    @property
    def n(self) -> int:
        return int(self.indicators.size)

    @property
    def n1(self) -> int:
        return int(self.indicators.sum())


@dataclass(frozen=True)
class TransitionCounts:
    """Counts of consecutive-day transitions i -> j of the indicator series."""

    n00: int
    n01: int
    n10: int
    n11: int

    @classmethod
    def from_indicators(cls, indicators) -> "TransitionCounts":
        ind = np.asarray(indicators, dtype=np.int8)
        if ind.size < 2:
            raise ValueError("need at least two indicators to count transitions")
        a, b = ind[:-1], ind[1:]
        return cls(n00=int(np.sum((a == 0) & (b == 0))),
                   n01=int(np.sum((a == 0) & (b == 1))),
                   n10=int(np.sum((a == 1) & (b == 0))),
                   n11=int(np.sum((a == 1) & (b == 1))))


@dataclass(frozen=True)
class BacktestReport:
    """UC/IND/CC likelihood-ratio statistics and chi-square p-values."""

    lr_uc: float
    lr_ind: float
    lr_cc: float
    p_uc: float
    p_ind: float
    p_cc: float
    n: int
    n1: int


def exceedances(realized, forecasts, p: float) -> ExceedanceSeries:
    """Indicator series of realized losses strictly above their forecasts."""
    realized = np.asarray(realized, dtype=float)
    forecasts = np.asarray(forecasts, dtype=float)
    if realized.shape != forecasts.shape:
        raise ValueError(
            f"length mismatch: {realized.shape} realized vs {forecasts.shape} forecasts")
    return ExceedanceSeries(indicators=(realized > forecasts).astype(np.int8), p=p)


def _safe_div(num, den):
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    return np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)


def _lr_uc(n1, n, p_exc):
    """Vectorized UC likelihood ratio; 0*log(0) = 0 throughout."""
    n1 = np.asarray(n1, dtype=float)
    n0 = n - n1
    pi = n1 / n
    ll_null = xlogy(n0, 1.0 - p_exc) + xlogy(n1, p_exc)
    ll_hat = xlogy(n0, 1.0 - pi) + xlogy(n1, pi)
    return np.maximum(-2.0 * (ll_null - ll_hat), 0.0)


def _lr_ind(n00, n01, n10, n11):
    """Vectorized IND likelihood ratio from transition counts."""
    n00, n01, n10, n11 = (np.asarray(c, dtype=float) for c in (n00, n01, n10, n11))
    total = n00 + n01 + n10 + n11
    pi = _safe_div(n01 + n11, total)
    pi01 = _safe_div(n01, n00 + n01)
    pi11 = _safe_div(n11, n10 + n11)
    ll_null = xlogy(n00 + n10, 1.0 - pi) + xlogy(n01 + n11, pi)
    ll_hat = (xlogy(n00, 1.0 - pi01) + xlogy(n01, pi01)
              + xlogy(n10, 1.0 - pi11) + xlogy(n11, pi11))
    return np.maximum(2.0 * (ll_hat - ll_null), 0.0)


def uc_test(e: ExceedanceSeries) -> tuple:
    """Unconditional coverage LR test: (lr_uc, p-value), chi-square df 1."""
    if e.n < 1:
        raise ValueError("need at least one indicator")
    lr = float(_lr_uc(e.n1, e.n, e.p))
    return lr, float(chi2.sf(lr, 1))


def ind_test(e: ExceedanceSeries) -> tuple:
    """First-order independence LR test: (lr_ind, p-value), chi-square df 1."""
    if e.n < 2:
        raise ValueError("need at least two indicators")
    t = TransitionCounts.from_indicators(e.indicators)
    lr = float(_lr_ind(t.n00, t.n01, t.n10, t.n11))
    return lr, float(chi2.sf(lr, 1))


def cc_test(e: ExceedanceSeries) -> BacktestReport:
    """Conditional coverage test: LR_cc = LR_uc + LR_ind, chi-square df 2."""
    lr_uc, p_uc = uc_test(e)
    lr_ind, p_ind = ind_test(e)
    lr_cc = lr_uc + lr_ind
    return BacktestReport(lr_uc=lr_uc, lr_ind=lr_ind, lr_cc=lr_cc,
                          p_uc=p_uc, p_ind=p_ind, p_cc=float(chi2.sf(lr_cc, 2)),
                          n=e.n, n1=e.n1)


@dataclass(frozen=True)
class SlidingBacktestSummary:
    """Coverage-test results aggregated over daily-stepped test windows."""

    test_len: int
    level: float
    placements: int
    mean_count: float
    max_count: int
    reject_uc: float
    reject_ind: float
    reject_cc: float


def _moving_sum(a, length: int) -> np.ndarray:
    c = np.concatenate([[0], np.cumsum(np.asarray(a, dtype=np.int64))])
    return c[length:] - c[:-length]


def sliding_backtest(e: ExceedanceSeries, test_len: int,
                     level: float = 0.05) -> SlidingBacktestSummary:
    """UC/IND/CC tests over every test_len-day window stepped one day at a time.

    Returns the fraction of windows on which each test rejects at `level`,
    along with the mean and max exceedance count per window.
    """
    ind = e.indicators
    if test_len < 2 or test_len > ind.size:
        raise ValueError(f"test_len must be in [2, {ind.size}], got {test_len}")
    n1 = _moving_sum(ind, test_len)
    lr_uc = _lr_uc(n1, test_len, e.p)

    a, b = ind[:-1], ind[1:]
    pair_len = test_len - 1
    n11 = _moving_sum(a & b, pair_len)
    n10 = _moving_sum(a & (1 - b), pair_len)
    n01 = _moving_sum((1 - a) & b, pair_len)
    n00 = _moving_sum((1 - a) & (1 - b), pair_len)
    lr_ind = _lr_ind(n00, n01, n10, n11)

    crit1 = chi2.ppf(1.0 - level, 1)
    crit2 = chi2.ppf(1.0 - level, 2)
    return SlidingBacktestSummary(
        test_len=test_len,
        level=level,
        placements=int(n1.size),
        mean_count=float(np.mean(n1)),
        max_count=int(np.max(n1)),
        reject_uc=float(np.mean(lr_uc > crit1)),
        reject_ind=float(np.mean(lr_ind > crit1)),
        reject_cc=float(np.mean(lr_uc + lr_ind > crit2)),
    )


def method_quantile(x, p: float, method: str,
                    k_alpha_hill: int = K_ALPHA_HILL,
                    k_alpha_corrected: int = K_ALPHA_CORRECTED,
                    k_weissman: int = K_WEISSMAN) -> float:
    """Level-p quantile of a sample by one of the three tail methods.

    A bias correction that turns nonpositive falls back to the plain Hill
    fit carried by the error.
    """
    if method == "hill":
        fit = hill(x, k_alpha_hill)
        return weissman_quantile(x, p, k_weissman, fit).value
    if method == "corrected":
        try:
            fit = hill_corrected(x, k_alpha_corrected)
        except NegativeGammaError as err:
            fit = err.fallback
        return weissman_quantile(x, p, k_weissman, fit).value
    if method == "empirical":
        return empirical_quantile(x, p)
    raise ValueError(f"unknown quantile method {method!r}")


def _series_values(r) -> np.ndarray:
    if isinstance(r, ReturnSeries):
        return r.values
    return np.asarray(r, dtype=float)


@dataclass(frozen=True, eq=False)
class UncondRollResult:
    """Per-window stationary-quantile forecasts and their exceedance counts.

    `counts[method][test_len]` holds the exceedance count of each window's
    forecast over the following test_len days (NaN where the data end before
    the span completes).  `daily[method]` stitches each window's forecast
    over its own `step` following days into one daily indicator series
    starting at index `daily_start` of the input.
    """

    window: int
    step: int
    p: float
    starts: np.ndarray
    forecasts: dict
    counts: dict
    daily: dict
    daily_forecasts: dict
    daily_start: int

    def mean_count(self, method: str, test_len: int) -> float:
        return float(np.nanmean(self.counts[method][test_len]))


def roll_unconditional(r, window: int = 2000, step: int = 250, p: float = 0.99,
                       methods=METHODS, test_lens=(250, 2000)) -> UncondRollResult:
    """Rolling unconditional quantile forecasts with exceedance counts.

    Each window of `window` observations (stepped by `step`) yields one
    level-p quantile forecast per method; exceedances are counted over the
    following spans in `test_lens`.
    """
    x = _series_values(r)
    n = x.size
    if n < window + step:
        raise EstimationError(
            f"need at least window + step = {window + step} observations, got {n}")
    starts = np.arange(0, n - window - step + 1, step)

    forecasts = {m: np.empty(starts.size) for m in methods}
    counts = {m: {L: np.full(starts.size, np.nan) for L in test_lens} for m in methods}
    for j, s in enumerate(starts):
        xwin = x[s:s + window]
        for m in methods:
            q = method_quantile(xwin, p, m)
            forecasts[m][j] = q
            for L in test_lens:
                if s + window + L <= n:
                    counts[m][L][j] = float(np.sum(x[s + window:s + window + L] > q))

    p_exc = 1.0 - p
    daily = {}
    daily_forecasts = {}
    for m in methods:
        fc = np.repeat(forecasts[m], step)
        realized = x[window:window + fc.size]
        daily_forecasts[m] = fc
        daily[m] = exceedances(realized, fc, p_exc)
    return UncondRollResult(window=window, step=step, p=p, starts=starts,
                            forecasts=forecasts, counts=counts, daily=daily,
                            daily_forecasts=daily_forecasts, daily_start=window)


@dataclass(frozen=True, eq=False)
class CondRollResult:
    """Day-ahead conditional quantile forecasts from daily AR-GARCH refits.

    `days` are the forecast target indices into the input series;
    `refit_failures` lists target days whose window was filtered with the
    previous day's parameters after a failed fit.
    """

    window: int
    step: int
    p: float
    days: np.ndarray
    forecasts: dict
    exceedances: dict
    refit_failures: np.ndarray

    def mean_count(self, method: str, test_len: int) -> float:
        return float(np.mean(_moving_sum(self.exceedances[method].indicators, test_len)))


def roll_conditional(r, window: int = 2000, step: int = 1, p: float = 0.99,
                     methods=METHODS, compute_se: bool = False) -> CondRollResult:
    """Daily AR(1)-GARCH(1,1) refits with day-ahead conditional quantiles.

    For each day t (stepped by `step`) the model is fit by QMLE on the
    trailing `window` observations, the residual level-p quantile is
    estimated per method, and the forecast for day t+1 is
    mu_next + sigma_next * q_resid.  A failed fit reuses the previous day's
    parameters and records the day in `refit_failures`.
    """
    x = _series_values(r)
    n = x.size
    if n < window + 1:
        raise EstimationError(
            f"need at least window + 1 = {window + 1} observations, got {n}")
    fit_days = np.arange(window - 1, n - 1, step)

    forecasts = {m: np.empty(fit_days.size) for m in methods}
    failures = []
    prev_params = None
    for j, t in enumerate(fit_days):
        xwin = x[t - window + 1:t + 1]
        try:
            fitted = fit_qmle(xwin, compute_se=compute_se)
        except (ConvergenceError, EstimationError):
            if prev_params is None:
                raise
            fitted = filter_series(xwin, prev_params)
            failures.append(t + 1)
        prev_params = fitted.params
        base = forecast_next(fitted, x[t])
        for m in methods:
            rq = method_quantile(fitted.resid, p, m)
            forecasts[m][j] = base.mu_next + base.sigma_next * rq

    days = fit_days + 1
    realized = x[days]
    p_exc = 1.0 - p
    exc = {m: exceedances(realized, forecasts[m], p_exc) for m in methods}
    return CondRollResult(window=window, step=step, p=p, days=days,
                          forecasts=forecasts, exceedances=exc,
                          refit_failures=np.asarray(failures, dtype=np.int64))
