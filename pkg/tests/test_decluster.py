"""Weekday subsampling and rank-ordered gap declustering."""

import numpy as np
import pytest

import evtrisk as ev
from evtrisk.errors import DataError


def _business_series(values, start="2015-01-05"):
    dates = np.busday_offset(np.datetime64(start), np.arange(len(values)),
                             roll="forward")
    return ev.ReturnSeries(dates.astype("datetime64[D]"),
                           np.asarray(values, dtype=float), "TST")


def test_weekday_partition():
    rng = np.random.default_rng(0)
    r = _business_series(rng.normal(size=500))
    parts = [ev.weekday_subsample(r, d) for d in range(5)]
    assert sum(len(p) for p in parts) == len(r)
    for d, p in enumerate(parts):
        assert np.all(p.weekdays() == d)
    recovered = np.sort(np.concatenate([p.dates for p in parts]))
    np.testing.assert_array_equal(recovered, r.dates)


def test_weekday_accepts_names_and_numbers():
    rng = np.random.default_rng(1)
    r = _business_series(rng.normal(size=50))
    np.testing.assert_array_equal(ev.weekday_subsample(r, "Wed").values,
                                  ev.weekday_subsample(r, 2).values)
    np.testing.assert_array_equal(ev.weekday_subsample(r, "friday").values,
                                  ev.weekday_subsample(r, 4).values)


def test_weekday_rejects_bad_input():
    r = _business_series(np.ones(10))
    with pytest.raises(ValueError):
        ev.weekday_subsample(r, "noday")
    with pytest.raises(ValueError):
        ev.weekday_subsample(r, 7)
    with pytest.raises(DataError):
        ev.weekday_subsample(r, "sun")  # business days only


def test_gap_mask_small_example():
    # positive pass keeps 6 (day 4) then 5 (day 0), drops 4 (day 1, too close);
    # the zero and the lone negative survive
    mask = ev.rank_gap_keep_mask([5.0, 4.0, 0.0, -3.0, 6.0], 2)
    np.testing.assert_array_equal(mask, [True, False, True, True, True])


def test_gap_tie_prefers_earlier_day():
    mask = ev.rank_gap_keep_mask([2.0, 0.0, 2.0], 2)
    np.testing.assert_array_equal(mask, [True, True, False])


def test_gap_passes_are_independent():
    # the negative day survives between two close positive days: each sign
    # runs its own pass and only same-sign neighbours can remove a day
    mask = ev.rank_gap_keep_mask([3.0, -5.0, 1.0], 2)
    np.testing.assert_array_equal(mask, [True, True, False])


def test_retained_days_respect_gap_within_each_sign():
    rng = np.random.default_rng(2)
    v = rng.standard_t(3, size=2000)
    for gap in (2, 9, 19):
        mask = ev.rank_gap_keep_mask(v, gap)
        for sign in (1, -1):
            kept = np.flatnonzero(mask & (np.sign(v) == sign))
            if kept.size > 1:
                assert np.diff(kept).min() > gap


def test_declustering_is_idempotent():
    rng = np.random.default_rng(3)
    r = _business_series(rng.standard_t(3, size=1500))
    once = ev.rank_gap_decluster(r, 9)
    twice = ev.rank_gap_decluster(once, 9)
    np.testing.assert_array_equal(once.values, twice.values)
    np.testing.assert_array_equal(once.dates, twice.dates)


def test_declustered_series_is_subsequence():
    rng = np.random.default_rng(4)
    r = _business_series(rng.standard_t(3, size=800))
    out = ev.rank_gap_decluster(r, 2)
    assert len(out) < len(r)
    pos = np.searchsorted(r.dates, out.dates)
    np.testing.assert_array_equal(r.dates[pos], out.dates)
    np.testing.assert_array_equal(r.values[pos], out.values)


def test_zeros_always_survive():
    v = np.array([0.0, 5.0, 0.0, -5.0, 0.0])
    mask = ev.rank_gap_keep_mask(v, 4)
    assert mask[[0, 2, 4]].all()


def test_gap_must_be_positive():
    with pytest.raises(ValueError):
        ev.rank_gap_keep_mask([1.0, 2.0], 0)


def test_declustering_weakens_serial_dependence_in_extremes():
    x = ev.sim_argarch(ev.ArGarchParams(-0.05, 0.066, 0.011, 0.099, 0.894),
                       15_605, 0)
    raw = ev.extremal_index_sliding(x, 500).theta
    kept = x[ev.rank_gap_keep_mask(x, 9)]
    after = ev.extremal_index_sliding(kept, 150).theta
    assert after > raw
    assert after < 1.0
