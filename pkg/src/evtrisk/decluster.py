"""Declustering procedures that thin serial dependence among extremes.

Two schemes:

* weekday subsampling: keep only the observations falling on one weekday
  (every fifth trading day), shrinking clusters of consecutive extremes;
* rank-ordered gap declustering: walk the positive observations from
  largest to smallest, greedily keeping a day unless it falls within
  `gap_days` trading days of an already-kept day of the same pass, then do
  the same for the negative observations from most negative upward.  Days
  removed in either pass are dropped; zero values are always retained.

Both return subsequences of the input in original order.
"""

from __future__ import annotations

from bisect import bisect_left, insort

import numpy as np

from .errors import DataError
from .ingest import ReturnSeries

__all__ = [
    "weekday_subsample",
    "rank_gap_decluster",
    "rank_gap_keep_mask",
    "WEEKDAY_NAMES",
]

WEEKDAY_NAMES = ("mon", "tue", "wed", "thu", "fri", "sat", "sun")


def _weekday_number(weekday) -> int:
    try:
        day = int(weekday)
    except (TypeError, ValueError):
        key = str(weekday).strip().lower()[:3]
        if key not in WEEKDAY_NAMES:
            raise ValueError(f"unknown weekday {weekday!r}") from None
        return WEEKDAY_NAMES.index(key)
    if not 0 <= day <= 6:
        raise ValueError(f"weekday number must be 0 (Mon) .. 6 (Sun), got {day}")
    return day


def weekday_subsample(r: ReturnSeries, weekday) -> ReturnSeries:
    """Observations whose date falls on the given weekday, order preserved.

    `weekday` is 0..6 (Monday = 0) or a name like "Wed".
    """
    day = _weekday_number(weekday)
    index = np.flatnonzero(r.weekdays() == day)
    if index.size == 0:
        raise DataError(f"no observations fall on weekday {weekday!r}")
    return r.take(index)


def _greedy_gap_pass(order: np.ndarray, days: np.ndarray, gap_days: int,
                     removed: np.ndarray) -> None:
    """Mark days removed by one greedy pass.

    `order` lists candidate positions in priority order, `days` maps each
    position to its day ordinal; a candidate is removed when within
    gap_days of any day this pass already kept.
    """
    kept: list = []
    for i in order:
        d = days[i]
        pos = bisect_left(kept, d)
        near_left = pos > 0 and d - kept[pos - 1] <= gap_days
        near_right = pos < len(kept) and kept[pos] - d <= gap_days
        if near_left or near_right:
            removed[i] = True
        else:
            insort(kept, d)


def rank_gap_keep_mask(values, gap_days: int, day_index=None) -> np.ndarray:
    """Boolean mask of days retained by rank-ordered gap declustering.

    Day distance is measured on `day_index` (default: position, i.e.
    trading-day index).  The positive pass visits values > 0 in descending
    order, the negative pass values < 0 in ascending order; ties visit the
    earlier day first.  The passes are independent and a day survives only
    if removed by neither.
    """
    if gap_days < 1:
        raise ValueError(f"gap_days must be >= 1, got {gap_days}")
    v = np.asarray(values, dtype=float)
    if day_index is None:
        days = np.arange(len(v), dtype=np.int64)
    else:
        days = np.asarray(day_index, dtype=np.int64)
        if days.shape != v.shape:
            raise ValueError("day_index must have one ordinal per value")
    removed_pos = np.zeros(len(v), dtype=bool)
    removed_neg = np.zeros(len(v), dtype=bool)

    pos_idx = np.flatnonzero(v > 0)
    if pos_idx.size:
        order = pos_idx[np.lexsort((pos_idx, -v[pos_idx]))]
        _greedy_gap_pass(order, days, gap_days, removed_pos)
    neg_idx = np.flatnonzero(v < 0)
    if neg_idx.size:
        order = neg_idx[np.lexsort((neg_idx, v[neg_idx]))]
        _greedy_gap_pass(order, days, gap_days, removed_neg)

    return ~(removed_pos | removed_neg)


def rank_gap_decluster(r: ReturnSeries, gap_days: int) -> ReturnSeries:
    """Rank-ordered gap declustering of both tails of a return series.

    Day ordinals come from the business-day calendar of the dates (equal to
    plain position for a series on consecutive business days), so distances
    survive subsampling and reapplying the procedure is a no-op.
    """
    days = np.busday_count(r.dates[0], r.dates.astype("datetime64[D]"))
    keep = rank_gap_keep_mask(r.values, gap_days, day_index=days)
    return r.take(np.flatnonzero(keep))
