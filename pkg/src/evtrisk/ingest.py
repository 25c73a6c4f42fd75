"""Price ingestion, negative log-return construction, and serial-dependence diagnostics.

Input data are daily adjusted closing prices P_0, ..., P_n.  Losses are
represented throughout the package as negative log-returns in percent,

    X_i = -100 * log(P_i / P_{i-1}),

so that a large positive X_i is a large daily loss.  All downstream
estimators (tail index, extremal index, GARCH filtering, ...) consume the
``values`` array of a :class:`ReturnSeries`.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError

__all__ = [
    "PriceSeries",
    "ReturnSeries",
    "load_prices",
    "load_returns",
    "to_returns",
    "align_pairs",
    "acf",
]


def _as_dates(dates) -> np.ndarray:
    return np.asarray(dates, dtype="datetime64[D]")


def _check_dates_increasing(dates: np.ndarray, what: str) -> None:
    if len(dates) >= 2:
        diffs = np.diff(dates.astype("int64"))
        if np.any(diffs == 0):
            i = int(np.argmax(diffs == 0))
            raise DataError(f"duplicate date {dates[i]} in {what}")
        if np.any(diffs < 0):
            i = int(np.argmax(diffs < 0))
            raise DataError(f"dates not sorted at {dates[i + 1]} in {what}")


@dataclass(frozen=True, eq=False)
class PriceSeries:
    """Daily adjusted closing prices with strictly increasing dates."""

    dates: np.ndarray
    prices: np.ndarray
    symbol: str = ""

    def __post_init__(self):
        object.__setattr__(self, "dates", _as_dates(self.dates))
        object.__setattr__(self, "prices", np.asarray(self.prices, dtype=float))
        if self.dates.shape != self.prices.shape:
            raise DataError("dates and prices must have equal length")
        if len(self.prices) < 2:
            raise DataError("need at least 2 prices")
        if not np.all(np.isfinite(self.prices)) or np.any(self.prices <= 0):
            raise DataError(f"non-positive or non-finite price in {self.symbol!r}")
        _check_dates_increasing(self.dates, f"prices {self.symbol!r}")

    def __len__(self) -> int:
        return len(self.prices)


@dataclass(frozen=True, eq=False)
class ReturnSeries:
    """Negative log-returns (percent units by default), one value per trading day.

    The date attached to return i is the date of the *later* price of the
    pair that produced it.
    """

    dates: np.ndarray
    values: np.ndarray
    symbol: str = ""

    def __post_init__(self):
        object.__setattr__(self, "dates", _as_dates(self.dates))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.dates.shape != self.values.shape:
            raise DataError("dates and values must have equal length")
        if len(self.values) == 0:
            raise DataError("empty return series")
        _check_dates_increasing(self.dates, f"returns {self.symbol!r}")

    def __len__(self) -> int:
        return len(self.values)

    def weekdays(self) -> np.ndarray:
        """Weekday per observation, 0 = Monday ... 6 = Sunday."""
        # days since 1970-01-01 (a Thursday); +3 shifts so Monday -> 0
        return (self.dates.astype("datetime64[D]").view("int64") + 3) % 7

    def take(self, index) -> "ReturnSeries":
        """Subseries at the given positions (order preserved)."""
        return ReturnSeries(self.dates[index], self.values[index], self.symbol)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["date", "value"])
            for d, v in zip(self.dates, self.values):
                w.writerow([str(d), repr(float(v))])

    def to_json_dict(self) -> dict:
        return {
            "symbol": self.symbol,
            "dates": [str(d) for d in self.dates],
            "values": [float(v) for v in self.values],
        }

    def write_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh)


@dataclass(frozen=True, eq=False)
class PairedReturns:
    """Two return series restricted to their common dates."""

    dates: np.ndarray
    values_a: np.ndarray
    values_b: np.ndarray
    symbol_a: str = ""
    symbol_b: str = ""

    def __len__(self) -> int:
        return len(self.dates)


def load_prices(path, date_col: str = "Date", price_col: str = "Close",
                symbol: str = "") -> PriceSeries:
    """Load a price CSV with a header row and ISO-8601 dates.

    Rows are sorted by date.  Duplicate dates and non-positive prices are
    hard errors rather than silently repaired.
    """
    dates: list = []
    prices: list = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise DataError(f"{path}: empty file, header row required")
        missing = {date_col, price_col} - set(reader.fieldnames)
        if missing:
            raise DataError(f"{path}: missing column(s) {sorted(missing)}")
        for lineno, row in enumerate(reader, start=2):
            raw_date = (row[date_col] or "").strip()
            raw_price = (row[price_col] or "").strip()
            if not raw_date and not raw_price:
                continue
            try:
                d = np.datetime64(raw_date, "D")
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: bad date {raw_date!r}") from exc
            try:
                p = float(raw_price)
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: bad price {raw_price!r}") from exc
            dates.append(d)
            prices.append(p)
    if len(dates) < 2:
        raise DataError(f"{path}: need at least 2 parseable rows")
    order = np.argsort(np.asarray(dates, dtype="datetime64[D]"), kind="stable")
    name = symbol or str(path)
    return PriceSeries(np.asarray(dates, dtype="datetime64[D]")[order],
                       np.asarray(prices, dtype=float)[order], name)


def load_returns(path, symbol: str = "") -> ReturnSeries:
    """Load a return CSV written by :meth:`ReturnSeries.write_csv` (date,value)."""
    dates: list = []
    values: list = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"date", "value"} <= set(reader.fieldnames):
            raise DataError(f"{path}: expected header with 'date' and 'value'")
        for lineno, row in enumerate(reader, start=2):
            try:
                dates.append(np.datetime64(row["date"].strip(), "D"))
                values.append(float(row["value"]))
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: bad row") from exc
    if not dates:
        raise DataError(f"{path}: no rows")
    return ReturnSeries(np.asarray(dates, dtype="datetime64[D]"),
                        np.asarray(values, dtype=float), symbol or str(path))


def to_returns(p: PriceSeries, scale: float = 100.0) -> ReturnSeries:
    """Negative log-returns -scale*log(P_i / P_{i-1}), dated at the later price."""
    values = -scale * np.diff(np.log(p.prices))
    return ReturnSeries(p.dates[1:], values, p.symbol)


def align_pairs(a: ReturnSeries, b: ReturnSeries) -> PairedReturns:
    """Restrict two return series to the dates present in both.

    Uses strict date intersection: a day survives only if both series have an
    observation for it.
    """
    common, ia, ib = np.intersect1d(a.dates, b.dates, return_indices=True)
    if len(common) == 0:
        raise DataError(f"no common dates between {a.symbol!r} and {b.symbol!r}")
    return PairedReturns(common, a.values[ia], b.values[ib], a.symbol, b.symbol)


def acf(x, max_lag: int) -> np.ndarray:
    """Sample autocorrelation at lags 1..max_lag (biased denominator).

    r_h = sum_{t<=n-h} (x_t - xbar)(x_{t+h} - xbar) / sum_t (x_t - xbar)^2
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    if max_lag < 1:
        raise ValueError("max_lag must be >= 1")
    if n <= max_lag:
        raise ValueError(f"series length {n} must exceed max_lag {max_lag}")
    centered = x - x.mean()
    denom = float(centered @ centered)
    if denom == 0.0:
        raise DataError("zero-variance series has no autocorrelation")
    out = np.empty(max_lag)
    for h in range(1, max_lag + 1):
        out[h - 1] = float(centered[:-h] @ centered[h:]) / denom
    return out
