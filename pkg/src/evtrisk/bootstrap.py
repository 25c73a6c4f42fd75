"""Stationary block bootstrap for serial-dependence-robust confidence intervals.

Resamples concatenate circular blocks whose lengths are geometric with a
given mean, so resampled series preserve short-range dependence while the
random block boundaries restore approximate stationarity of the scheme.
Each replicate draws from its own counter-based substream, making replicate
r reproducible in isolation and the whole set independent of evaluation
order or parallel scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EstimationError, EvtriskError

__all__ = ["BootstrapSpec", "resample_indices", "resample", "percentile_ci"]


@dataclass(frozen=True)
class BootstrapSpec:
    """Replicate count, expected block length, seed and two-sided CI level."""

    replicates: int = 999
    mean_block: float = 200.0
    seed: int = 0
    level: float = 0.90

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        if not self.mean_block >= 1:
            raise ValueError(f"mean_block must be >= 1, got {self.mean_block}")
        if not 0 < self.level < 1:
            raise ValueError(f"level must be in (0, 1), got {self.level}")


def resample_indices(n: int, spec: BootstrapSpec, replicate_index: int) -> np.ndarray:
    """Index vector of one stationary-bootstrap resample of length n.

    Block starts are uniform on 0..n-1, lengths geometric with mean
    spec.mean_block (support 1, 2, ...), indexing wraps circularly.  The
    randomness is drawn from the substream keyed by (seed, replicate_index).
    """
    if n < 2:
        raise ValueError(f"need n >= 2 to resample, got {n}")
    rng = np.random.default_rng([int(spec.seed), int(replicate_index)])
    p = 1.0 / spec.mean_block

    lengths = np.empty(0, dtype=np.int64)
    starts = np.empty(0, dtype=np.int64)
    total = 0
    while total < n:
        m = max(int((n - total) * p * 1.5) + 16, 16)
        ls = rng.geometric(p, size=m)
        ss = rng.integers(0, n, size=m)
        lengths = np.concatenate([lengths, ls])
        starts = np.concatenate([starts, ss])
        total += int(ls.sum())

    ends = np.cumsum(lengths)
    n_blocks = int(np.searchsorted(ends, n, side="left")) + 1
    lengths = lengths[:n_blocks]
    starts = starts[:n_blocks]
    used = int(lengths.sum())
    within = np.arange(used) - np.repeat(np.cumsum(lengths) - lengths, lengths)
    idx = (np.repeat(starts, lengths) + within) % n
    return idx[:n]


def resample(x, spec: BootstrapSpec, replicate_index: int) -> np.ndarray:
    """One bootstrap resample of x (length preserved)."""
    x = np.asarray(x)
    return x[resample_indices(len(x), spec, replicate_index)]


def percentile_ci(x, statistic, spec: BootstrapSpec) -> tuple:
    """Percentile bootstrap CI (lower, upper, point) for statistic(x).

    Replicates on which the statistic raises a domain error are dropped;
    more than 20% failures aborts with an error since the statistic is then
    too unstable under resampling for a percentile interval to mean much.
    """
    x = np.asarray(x)
    point = float(statistic(x))
    n = len(x)
    values = []
    failures = 0
    budget = 0.2 * spec.replicates
    for r in range(spec.replicates):
        xs = x[resample_indices(n, spec, r)]
        try:
            values.append(float(statistic(xs)))
        except (EvtriskError, ValueError, FloatingPointError):
            failures += 1
            if failures > budget:
                raise EstimationError(
                    f"statistic failed on {failures} of {r + 1} bootstrap replicates; "
                    "unstable under resampling")
    tail = (1.0 - spec.level) / 2.0
    # weibull positions (R+1)q are exact integers for e.g. 999 replicates
    lower, upper = np.quantile(values, [tail, 1.0 - tail], method="weibull")
    return float(lower), float(upper), point
