"""AR(1)-GARCH(1,1) estimation by Gaussian quasi-maximum likelihood.

The model for a return series x_t is

    x_t     = mu + phi * x_{t-1} + a_t,          a_t = sigma_t * eps_t,
    sigma_t^2 = omega + a * a_{t-1}^2 + b_coef * sigma_{t-1}^2,

with eps_t i.i.d. mean zero, unit variance.  The Gaussian likelihood is
used for estimation only; consistency of the QMLE does not require
Gaussian innovations.  After fitting, the conditional volatilities and
standardized residuals eps_hat_t = (x_t - mu - phi x_{t-1}) / sigma_t are
filtered out for downstream tail analysis, and one-step-ahead mean and
volatility forecasts are formed from the last filtered state.

Conventions: the first observation is consumed by the AR lag, so filtered
series have length n - 1.  The recursion starts from sigma_1^2 = Var(x)
and a_1 = x_1 - mean(x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.optimize import minimize
from scipy.signal import lfilter
from scipy.special import expit, logit

from .errors import ConvergenceError, EstimationError

__all__ = [
    "ArGarchParams",
    "FilteredSeries",
    "Forecast",
    "fit_qmle",
    "filter_series",
    "forecast_next",
]

_LOG_2PI = math.log(2.0 * math.pi)
_MAX_PERSISTENCE = 1.0 - 1e-6
PARAM_NAMES = ("mu", "phi", "omega", "a", "b_coef")


@dataclass(frozen=True)
class ArGarchParams:
    """Parameters (mu, phi, omega, a, b_coef) of an AR(1)-GARCH(1,1) model."""

    mu: float
    phi: float
    omega: float
    a: float
    b_coef: float

    def __post_init__(self):
        if not self.omega > 0:
            raise EstimationError(f"omega must be positive, got {self.omega}")
        if self.a < 0 or self.b_coef < 0:
            raise EstimationError(f"ARCH/GARCH coefficients must be nonnegative, "
                                  f"got a={self.a}, b_coef={self.b_coef}")
        if not self.a + self.b_coef < 1:
            raise EstimationError(
                f"covariance stationarity requires a + b_coef < 1, got {self.a + self.b_coef}")

    @property
    def persistence(self) -> float:
        return self.a + self.b_coef

    def as_array(self) -> np.ndarray:
        return np.array([self.mu, self.phi, self.omega, self.a, self.b_coef])


@dataclass(frozen=True, eq=False)
class FilteredSeries:
    """Fitted volatilities and standardized residuals for observations 2..n.

    `sigma` and `resid` have length n - 1.  `se` holds QMLE sandwich
    standard errors when computed; `flags` carries fit diagnostics such as
    "near_igarch" (persistence clamped just below 1).
    """

    sigma: np.ndarray
    resid: np.ndarray
    params: ArGarchParams
    loglik: float
    se: Optional[dict] = None
    flags: tuple = ()


@dataclass(frozen=True)
class Forecast:
    """One-step-ahead conditional mean/volatility and optional quantile."""

    mu_next: float
    sigma_next: float
    quantile: Optional[float] = None


def _recursion(x, mu, phi, omega, a, b_coef):
    """Innovations a_t and conditional variances sigma_t^2 for t = 2..n."""
    innov = x[1:] - mu - phi * x[:-1]
    prev_sq = np.empty_like(innov)
    prev_sq[0] = (x[0] - x.mean()) ** 2
    np.square(innov[:-1], out=prev_sq[1:])
    u = omega + a * prev_sq
    s1sq = float(np.var(x))
    # sigma2_t = u_t + b_coef * sigma2_{t-1} is a linear IIR recursion
    sigma2, _ = lfilter([1.0], [1.0, -b_coef], u, zi=np.array([b_coef * s1sq]))
    return innov, sigma2


def _loglik_terms(x, mu, phi, omega, a, b_coef) -> np.ndarray:
    """Per-observation Gaussian loglikelihood terms (no parameter validation)."""
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        innov, sigma2 = _recursion(x, mu, phi, omega, a, b_coef)
        return -0.5 * (_LOG_2PI + np.log(sigma2) + innov * innov / sigma2)


def filter_series(x, params: ArGarchParams) -> FilteredSeries:
    """Run the volatility recursion at fixed parameters.

    Deterministic; returns conditional volatilities, standardized residuals
    and the Gaussian quasi-loglikelihood evaluated at `params`.
    """
    x = np.asarray(x, dtype=float)
    if x.size < 2:
        raise EstimationError("need at least two observations to filter")
    innov, sigma2 = _recursion(x, params.mu, params.phi, params.omega,
                               params.a, params.b_coef)
    sigma = np.sqrt(sigma2)
    resid = innov / sigma
    ll = float(np.sum(-0.5 * (_LOG_2PI + np.log(sigma2) + innov * innov / sigma2)))
    return FilteredSeries(sigma=sigma, resid=resid, params=params, loglik=ll)


def _unpack(z) -> tuple:
    """Map the unconstrained optimizer vector to (mu, phi, omega, a, b_coef)."""
    mu, phi, wt, st, ft = z
    omega = float(np.logaddexp(0.0, wt))  # softplus keeps omega > 0
    total = min(float(expit(st)), _MAX_PERSISTENCE)
    frac = float(expit(ft))
    return mu, phi, omega, total * frac, total * (1.0 - frac)


def _pack(p: ArGarchParams) -> np.ndarray:
    def _logit(u):
        return float(logit(min(max(u, 1e-8), 1.0 - 1e-8)))

    wt = math.log(math.expm1(p.omega)) if p.omega < 30 else p.omega
    total = p.persistence
    frac = p.a / total if total > 0 else 0.5
    return np.array([p.mu, p.phi, wt, _logit(total), _logit(frac)])


def _starts(x) -> list:
    """Three fixed data-derived starting points (plus caller-supplied init)."""
    m = float(np.mean(x))
    v = float(np.var(x))
    r1 = float(np.corrcoef(x[:-1], x[1:])[0, 1])
    r1 = min(max(r1, -0.5), 0.5)
    return [
        ArGarchParams(m, 0.0, 0.05 * v, 0.05, 0.90),
        ArGarchParams(m, r1, 0.05 * v, 0.10, 0.85),
        ArGarchParams(m, 0.0, 0.03 * v, 0.02, 0.95),
    ]


def fit_qmle(x, init: Optional[ArGarchParams] = None,
             compute_se: bool = True) -> FilteredSeries:
    """Fit AR(1)-GARCH(1,1) by Gaussian QMLE.

    Derivative-free simplex search over a reparameterized space enforcing
    omega > 0, a >= 0, b_coef >= 0 and a + b_coef < 1, multistarted from
    three fixed data-derived points (plus `init` when given).  A boundary
    solution with persistence at 1 - 1e-6 is returned with a "near_igarch"
    flag rather than rejected.

    Parameters
    ----------
    x : array-like
        Return series, length >= 200, non-constant.
    init : ArGarchParams, optional
        Extra starting point for the multistart.
    compute_se : bool
        Attach QMLE sandwich standard errors (skipped in bulk rolling fits).

    Returns
    -------
    FilteredSeries
    """
    x = np.asarray(x, dtype=float)
    if x.size < 200:
        raise EstimationError(f"need at least 200 observations to fit, got {x.size}")
    if np.ptp(x) == 0:
        raise EstimationError("constant series: GARCH parameters unidentifiable")

    def objective(z):
        ll = float(np.sum(_loglik_terms(x, *_unpack(z))))
        return -ll if math.isfinite(ll) else 1e300

    starts = _starts(x)
    if init is not None:
        starts.append(init)

    results = []
    for p0 in starts:
        res = minimize(objective, _pack(p0), method="Nelder-Mead",
                       options={"maxiter": 10000, "maxfev": 10000,
                                "xatol": 1e-6, "fatol": 1e-8})
        if math.isfinite(res.fun):
            results.append(res)
    converged = [r for r in results if r.success]
    if not converged:
        raise ConvergenceError("QMLE simplex search failed to converge from any start")
    best = min(converged, key=lambda r: r.fun)

    mu, phi, wt, st, ft = best.x
    omega = float(np.logaddexp(0.0, wt))
    raw_total = float(expit(st))
    flags = ()
    if raw_total > _MAX_PERSISTENCE:
        flags = ("near_igarch",)
    total = min(raw_total, _MAX_PERSISTENCE)
    frac = float(expit(ft))
    params = ArGarchParams(float(mu), float(phi), omega,
                           total * frac, total * (1.0 - frac))

    fitted = filter_series(x, params)
    se = _sandwich_se(x, params) if compute_se else None
    return replace(fitted, se=se, flags=flags)


def _sandwich_se(x, params: ArGarchParams) -> dict:
    """QMLE sandwich standard errors H^-1 S H^-1 by central differences.

    H is the Hessian of the total loglikelihood and S the outer product of
    per-observation scores, both at the fitted parameters in the original
    coordinates.  Boundary fits can yield NaN entries; that is reported
    honestly rather than patched.
    """
    theta = params.as_array()
    d = len(theta)
    h = 1e-4 * np.maximum(np.abs(theta), 1e-2)

    def terms(th):
        return _loglik_terms(x, *th)

    scores = np.empty((x.size - 1, d))
    for i in range(d):
        tp, tm = theta.copy(), theta.copy()
        tp[i] += h[i]
        tm[i] -= h[i]
        scores[:, i] = (terms(tp) - terms(tm)) / (2.0 * h[i])
    s_mat = scores.T @ scores

    def grad(th):
        g = np.empty(d)
        for i in range(d):
            tp, tm = th.copy(), th.copy()
            tp[i] += h[i]
            tm[i] -= h[i]
            g[i] = float(np.sum(terms(tp)) - np.sum(terms(tm))) / (2.0 * h[i])
        return g

    hess = np.empty((d, d))
    for i in range(d):
        tp, tm = theta.copy(), theta.copy()
        tp[i] += h[i]
        tm[i] -= h[i]
        hess[:, i] = (grad(tp) - grad(tm)) / (2.0 * h[i])
    hess = 0.5 * (hess + hess.T)

    with np.errstate(invalid="ignore"):
        hinv = np.linalg.pinv(hess)
        cov = hinv @ s_mat @ hinv
        se = np.sqrt(np.diag(cov))
    return dict(zip(PARAM_NAMES, (float(s) for s in se)))


def forecast_next(f: FilteredSeries, x_last: float,
                  resid_quantile: Optional[float] = None) -> Forecast:
    """One-step-ahead forecast from the last filtered state.

    mu_next = mu + phi * x_last; sigma_next^2 = omega + a * a_T^2 +
    b_coef * sigma_T^2 with (a_T, sigma_T) from the final filtered step.
    When `resid_quantile` is given, the conditional quantile
    mu_next + sigma_next * resid_quantile is attached.
    """
    if f.sigma.size == 0:
        raise EstimationError("cannot forecast from an empty filtered series")
    p = f.params
    sigma_t = float(f.sigma[-1])
    a_t = float(f.resid[-1]) * sigma_t
    mu_next = p.mu + p.phi * float(x_last)
    sigma_next = math.sqrt(p.omega + p.a * a_t * a_t + p.b_coef * sigma_t * sigma_t)
    quantile = None if resid_quantile is None else mu_next + sigma_next * float(resid_quantile)
    return Forecast(mu_next=mu_next, sigma_next=sigma_next, quantile=quantile)
