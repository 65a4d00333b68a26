"""Stationarity diagnostics: correlograms and the augmented Dickey-Fuller test."""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .core import Series
from .errors import ConstantSeries, LagTooLarge, SingularRegression, TooShort

# Percentiles of the Dickey-Fuller t-ratio distribution (Fuller 1976, Table
# 8.5.2) for the no-constant, constant and constant+trend regressions.
DF_PROBS = np.array([0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99])
DF_SIZES = np.array([25.0, 50.0, 100.0, 250.0, 500.0, np.inf])
DF_TABLES = {
    "n": np.array([
        [-2.66, -2.26, -1.95, -1.60, 0.92, 1.33, 1.70, 2.16],
        [-2.62, -2.25, -1.95, -1.61, 0.91, 1.31, 1.66, 2.08],
        [-2.60, -2.24, -1.95, -1.61, 0.90, 1.29, 1.64, 2.03],
        [-2.58, -2.23, -1.95, -1.62, 0.89, 1.29, 1.63, 2.01],
        [-2.58, -2.23, -1.95, -1.62, 0.89, 1.28, 1.62, 2.00],
        [-2.58, -2.23, -1.95, -1.62, 0.89, 1.28, 1.62, 2.00],
    ]),
    "c": np.array([
        [-3.75, -3.33, -3.00, -2.63, -0.37, 0.00, 0.34, 0.72],
        [-3.58, -3.22, -2.93, -2.60, -0.40, -0.03, 0.29, 0.66],
        [-3.51, -3.17, -2.89, -2.58, -0.42, -0.05, 0.26, 0.63],
        [-3.46, -3.14, -2.88, -2.57, -0.42, -0.06, 0.24, 0.62],
        [-3.44, -3.13, -2.87, -2.57, -0.43, -0.07, 0.24, 0.61],
        [-3.43, -3.12, -2.86, -2.57, -0.44, -0.07, 0.23, 0.60],
    ]),
    "ct": np.array([
        [-4.38, -3.95, -3.60, -3.24, -1.14, -0.80, -0.50, -0.15],
        [-4.15, -3.80, -3.50, -3.18, -1.19, -0.87, -0.58, -0.24],
        [-4.04, -3.73, -3.45, -3.15, -1.22, -0.90, -0.62, -0.28],
        [-3.99, -3.69, -3.43, -3.13, -1.23, -0.92, -0.64, -0.31],
        [-3.98, -3.68, -3.42, -3.13, -1.24, -0.93, -0.65, -0.32],
        [-3.96, -3.66, -3.41, -3.12, -1.25, -0.94, -0.66, -0.33],
    ]),
}
REGRESSIONS = ("n", "c", "ct")
P_MIN, P_MAX = 0.001, 0.999
SIGNIFICANCE = 0.05


@dataclass(frozen=True)
class CorrelogramPoint:
    lag: int
    value: float
    band: float


@dataclass(frozen=True)
class AdfResult:
    statistic: float
    lags: int
    regression: str
    pvalue: float
    critical_values: dict
    nobs: int

    @property
    def stationary(self) -> bool:
        return self.pvalue < SIGNIFICANCE

    def to_dict(self) -> dict:
        out = asdict(self)
        out["stationary"] = self.stationary
        return out


def _clean(s) -> np.ndarray:
    y = s.values if isinstance(s, Series) else np.asarray(s, dtype=float)
    if np.isnan(y).any():
        raise ValueError("diagnostics need a series without missing values")
    return y


def _autocorr(y: np.ndarray, max_lag: int) -> np.ndarray:
    z = y - y.mean()
    denom = z @ z
    if denom == 0.0:
        raise ConstantSeries("series is constant; autocorrelation undefined")
    return np.array([z[k:] @ z[:z.size - k] for k in range(max_lag + 1)]) / denom


def acf(s, max_lag: int) -> list[CorrelogramPoint]:
    """Sample autocorrelations for lags ``0..max_lag`` (lag 0 is exactly 1)."""
    y = _clean(s)
    if not 0 <= max_lag < y.size:
        raise LagTooLarge(f"max_lag {max_lag} must be in [0, {y.size})")
    r = _autocorr(y, max_lag)
    r[0] = 1.0
    band = 1.96 / math.sqrt(y.size)
    return [CorrelogramPoint(k, float(v), band) for k, v in enumerate(r)]


def durbin_levinson(r: np.ndarray) -> np.ndarray:
    """Partial autocorrelations from autocorrelations ``r[0..K]`` (``r[0] == 1``)."""
    K = r.size - 1
    out = np.zeros(K + 1)
    out[0] = 1.0
    phi = np.zeros(K + 1)
    v = r[0]
    for k in range(1, K + 1):
        a = (r[k] - phi[1:k] @ r[1:k][::-1]) / v
        phi[1:k] = phi[1:k] - a * phi[1:k][::-1]
        phi[k] = a
        v *= 1.0 - a * a
        out[k] = a
    return out


def _pacf_regression(y: np.ndarray, max_lag: int) -> np.ndarray:
    # Zero-padded (autocorrelation-method) design: the normal equations are the
    # sample Yule-Walker system, so the lag-1 coefficient is exactly acf(1).
    z = y - y.mean()
    n = z.size
    out = np.zeros(max_lag + 1)
    out[0] = 1.0
    padded = np.concatenate([z, np.zeros(max_lag)])
    for k in range(1, max_lag + 1):
        X = np.column_stack([np.concatenate([np.zeros(j), padded[:n + k - j]]) for j in range(1, k + 1)])
        target = padded[:n + k]
        coef, _, rank, _ = np.linalg.lstsq(X, target, rcond=None)
        if rank < k:
            raise SingularRegression(f"lag-{k} regression is rank deficient")
        out[k] = coef[-1]
    return out


def pacf(s, max_lag: int) -> list[CorrelogramPoint]:
    """Partial autocorrelations: coefficient on ``Y[t-k]`` in a k-lag regression."""
    y = _clean(s)
    if not 0 <= max_lag < y.size / 2:
        raise LagTooLarge(f"max_lag {max_lag} must be below half the length {y.size}")
    reg = _pacf_regression(y, max_lag)
    dl = durbin_levinson(_autocorr(y, max_lag))
    if np.max(np.abs(reg - dl)) > 1e-6:
        warnings.warn("regression and Durbin-Levinson partial autocorrelations disagree",
                      RuntimeWarning, stacklevel=2)
    band = 1.96 / math.sqrt(y.size)
    return [CorrelogramPoint(k, float(v), band) for k, v in enumerate(reg)]


def schwert_max_lag(n: int) -> int:
    return int(math.floor(12.0 * (n / 100.0) ** 0.25))


def critical_values(regression: str, nobs: int) -> np.ndarray:
    """Tabulated quantiles at ``DF_PROBS``, interpolated linearly in 1/T."""
    table = DF_TABLES[regression]
    inv = 1.0 / DF_SIZES  # 1/inf == 0
    x = 1.0 / max(nobs, 1)
    # inv is decreasing; np.interp wants increasing abscissae
    return np.array([np.interp(x, inv[::-1], table[::-1, j]) for j in range(DF_PROBS.size)])


def df_pvalue(stat: float, regression: str, nobs: int) -> float:
    """Log-linear interpolation of the tabulated distribution, clamped to [0.001, 0.999]."""
    q = critical_values(regression, nobs)
    logp = np.log(DF_PROBS)
    if stat <= q[0]:
        j = 0
    elif stat >= q[-1]:
        j = q.size - 2
    else:
        j = int(np.searchsorted(q, stat) - 1)
    slope = (logp[j + 1] - logp[j]) / (q[j + 1] - q[j])
    p = math.exp(logp[j] + slope * (stat - q[j]))
    return float(min(P_MAX, max(P_MIN, p)))


def _ols(X: np.ndarray, y: np.ndarray):
    XtX = X.T @ X
    try:
        cond = np.linalg.cond(XtX)
    except np.linalg.LinAlgError:
        cond = np.inf
    if not np.isfinite(cond) or cond > 1e14:
        raise SingularRegression("ADF regression design is singular")
    beta = np.linalg.solve(XtX, X.T @ y)
    resid = y - X @ beta
    ssr = float(resid @ resid)
    return beta, ssr, np.linalg.inv(XtX)


def _adf_design(y: np.ndarray, lags: int, regression: str, start: int):
    """Rows for Delta y[t], t >= start (index into the differenced series)."""
    dy = np.diff(y)
    rows = np.arange(start, dy.size)
    cols = []
    if regression in ("c", "ct"):
        cols.append(np.ones(rows.size))
    if regression == "ct":
        cols.append(rows + 1.0)
    level_col = len(cols)
    cols.append(y[rows])  # y[t] is the level lagged once relative to dy[t] = y[t+1] - y[t]
    for i in range(1, lags + 1):
        cols.append(dy[rows - i])
    return np.column_stack(cols), dy[rows], level_col


def adf_test(s, regression: str = "ct", max_lag: int | None = None,
             autolag: bool = True) -> AdfResult:
    """Augmented Dickey-Fuller test of a unit root.

    The lag order minimises AIC over ``0..max_lag`` on a common sample
    (smaller lag wins ties), then the chosen regression is re-run on its
    full sample. With ``autolag=False`` exactly ``max_lag`` lags are used.
    """
    if regression not in REGRESSIONS:
        raise ValueError(f"regression must be one of {REGRESSIONS}")
    y = _clean(s)
    n = y.size
    if max_lag is None:
        max_lag = schwert_max_lag(n)
    if n < 20 + max_lag:
        raise TooShort(f"ADF needs at least {20 + max_lag} observations, got {n}")

    if autolag:
        best, best_aic = 0, np.inf
        for p in range(max_lag + 1):
            X, dy, _ = _adf_design(y, p, regression, max_lag)
            _, ssr, _ = _ols(X, dy)
            m = dy.size
            aic = m * (math.log(2 * math.pi) + math.log(ssr / m) + 1) + 2 * X.shape[1]
            if aic < best_aic - 1e-12:
                best, best_aic = p, aic
        lags = best
    else:
        lags = max_lag

    X, dy, col = _adf_design(y, lags, regression, lags)
    beta, ssr, xtx_inv = _ols(X, dy)
    dof = dy.size - X.shape[1]
    if dof <= 0:
        raise TooShort("not enough observations for the ADF regression")
    se = math.sqrt(ssr / dof * xtx_inv[col, col])
    if se == 0.0:
        raise SingularRegression("zero standard error on the lagged level")
    stat = float(beta[col] / se)
    nobs = int(dy.size)
    crit = critical_values(regression, nobs)
    cv = {"1%": float(crit[0]), "5%": float(crit[2]), "10%": float(crit[3])}
    return AdfResult(stat, int(lags), regression, df_pvalue(stat, regression, nobs), cv, nobs)
