"""ARIMA / SARIMA / ARIMAX by conditional sum of squares, plus simple
exponential smoothing.

Exogenous regressors use the regression-with-ARIMA-errors form::

    y[t] = x[t] @ beta + u[t],   phi(B) Phi(B^s) (w[t] - c) = theta(B) Theta(B^s) e[t]

where ``w`` is ``(1 - B)^d (1 - B^s)^D u`` and ``c`` is the intercept on the
differenced scale (the series mean when no differencing is applied).
"""
from __future__ import annotations

import itertools
import logging
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import optimize, signal

from .core import ExogMatrix, Forecast, Series
from .diagnostics import adf_test
from .errors import (
    AlphaOutOfRange,
    MissingFutureExog,
    NoConvergenceWarning,
    NonInvertible,
    NoValidModel,
    PowercastError,
    SingularExog,
    TooShort,
)
from .preprocess import TransformChain, difference, integrate

log = logging.getLogger(__name__)

ROOT_MARGIN = 1.001
PENALTY = 1e6
INIT_COEF = 0.1
FD_STEP = 1e-5
MAXITER = 500
REL_TOL = 1e-9


@dataclass(frozen=True, order=True)
class ArimaOrder:
    p: int = 0
    d: int = 0
    q: int = 0
    P: int = 0
    D: int = 0
    Q: int = 0
    s: int = 1

    def __post_init__(self):
        if min(self.p, self.d, self.q, self.P, self.D, self.Q) < 0:
            raise ValueError("orders must be non-negative")
        if self.s < 1:
            raise ValueError("season length must be >= 1")
        if self.s == 1 and (self.P or self.D or self.Q):
            raise ValueError("seasonal orders need a season length > 1")

    @property
    def seasonal(self) -> bool:
        return self.s > 1 and (self.P + self.D + self.Q) > 0

    @property
    def n_diff(self) -> int:
        return self.d + self.D * self.s

    @property
    def n_ar(self) -> int:
        """Lag span of the expanded AR polynomial."""
        return self.p + self.P * self.s

    def label(self) -> str:
        base = f"({self.p},{self.d},{self.q})"
        if self.seasonal:
            base += f"({self.P},{self.D},{self.Q})[{self.s}]"
        return base

    @classmethod
    def parse(cls, text: str, seasonal: str | None = None) -> "ArimaOrder":
        p, d, q = (int(v) for v in text.split(","))
        if not seasonal:
            return cls(p, d, q)
        P, D, Q, s = (int(v) for v in seasonal.split(","))
        return cls(p, d, q, P, D, Q, s)


@dataclass(frozen=True, eq=False)
class ArimaFit:
    order: ArimaOrder
    ar: np.ndarray
    ma: np.ndarray
    sar: np.ndarray
    sma: np.ndarray
    intercept: float
    exog_coef: np.ndarray
    exog_names: tuple
    include_mean: bool
    sigma2: float
    loglik: float
    aic: float
    bic: float
    n_cond: int
    residuals: np.ndarray
    y: np.ndarray
    exog: np.ndarray | None
    start: int = 0
    name: str = "y"
    converged: bool = True
    chain: TransformChain = field(default_factory=TransformChain)
    family: str = "ARIMA"
    search: tuple = ()

    @property
    def n_eff(self) -> int:
        return self.residuals.size

    @property
    def sse(self) -> float:
        return float(self.residuals @ self.residuals)

    @property
    def k_params(self) -> int:
        return _n_coef(self.order, self.include_mean, self.exog_coef.size) + 1

    @property
    def label(self) -> str:
        lab = f"{self.family}{self.order.label()}"
        if self.exog_names:
            lab += "+[" + ",".join(self.exog_names) + "]"
        return lab

    def criterion(self, name: str) -> float:
        return {"aic": self.aic, "bic": self.bic}[name]

    def roots(self) -> dict:
        """Moduli of the AR and MA polynomial roots (all should exceed 1)."""
        return {k: [float(abs(r)) for r in v] for k, v in _poly_roots(self.ar, self.ma, self.sar, self.sma).items()}

    def one_step(self) -> np.ndarray:
        """In-sample one-step predictions on the fit scale (NaN where conditioned away)."""
        e = np.full(self.y.size, np.nan)
        e[self.y.size - self.n_eff:] = self.residuals
        return self.y - e

    def to_dict(self) -> dict:
        o = self.order
        return {
            "kind": "arima",
            "family": self.family,
            "order": [o.p, o.d, o.q], "seasonal_order": [o.P, o.D, o.Q, o.s],
            "ar": self.ar.tolist(), "ma": self.ma.tolist(),
            "sar": self.sar.tolist(), "sma": self.sma.tolist(),
            "intercept": self.intercept, "include_mean": self.include_mean,
            "exog_names": list(self.exog_names), "exog_coef": self.exog_coef.tolist(),
            "sigma2": self.sigma2, "loglik": self.loglik, "aic": self.aic, "bic": self.bic,
            "k_params": self.k_params, "n_cond": self.n_cond, "n_eff": self.n_eff,
            "converged": self.converged,
            "name": self.name, "start": self.start,
            "y": self.y.tolist(), "exog": None if self.exog is None else self.exog.tolist(),
            "residuals": self.residuals.tolist(),
            "chain": self.chain.to_dict(),
            "search": list(self.search),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ArimaFit":
        arr = lambda k: np.array(d[k], dtype=float)  # noqa: E731
        exog = None if d["exog"] is None else np.array(d["exog"], dtype=float).reshape(len(d["y"]), -1)
        return cls(
            order=ArimaOrder(*d["order"], *d["seasonal_order"]),
            ar=arr("ar"), ma=arr("ma"), sar=arr("sar"), sma=arr("sma"),
            intercept=float(d["intercept"]), exog_coef=arr("exog_coef"),
            exog_names=tuple(d["exog_names"]), include_mean=bool(d["include_mean"]),
            sigma2=float(d["sigma2"]), loglik=float(d["loglik"]), aic=float(d["aic"]), bic=float(d["bic"]),
            n_cond=int(d["n_cond"]), residuals=arr("residuals"), y=arr("y"), exog=exog,
            start=int(d["start"]), name=d["name"], converged=bool(d["converged"]),
            chain=TransformChain.from_dict(d["chain"]), family=d["family"], search=tuple(d["search"]),
        )


def _n_coef(order: ArimaOrder, include_mean: bool, k_exog: int) -> int:
    return int(include_mean) + k_exog + order.p + order.q + order.P + order.Q


def _expand(coefs: np.ndarray, seasonal: np.ndarray, s: int, sign: float) -> np.ndarray:
    """Coefficients of ``(1 + sign*a(B)) (1 + sign*A(B^s))`` in increasing powers."""
    a = np.concatenate([[1.0], sign * coefs])
    A = np.zeros(seasonal.size * s + 1)
    A[0] = 1.0
    A[s::s] = sign * seasonal
    return np.convolve(a, A)


def _poly_roots(ar, ma, sar, sma) -> dict:
    out = {}
    for key, coefs, sign in (("ar", ar, -1.0), ("ma", ma, 1.0), ("sar", sar, -1.0), ("sma", sma, 1.0)):
        if coefs.size and np.any(coefs != 0):
            poly = np.concatenate([[1.0], sign * coefs])
            out[key] = np.roots(poly[::-1])
        else:
            out[key] = np.array([])
    return out


def _clearly_outside(coefs: np.ndarray) -> bool:
    # sum |a_i| r^i < 1 rules out any root of 1 + sum a_i z^i inside |z| <= r
    powers = ROOT_MARGIN ** np.arange(1, coefs.size + 1)
    return float(np.abs(coefs) @ powers) < 1.0


def _overshoot(ar, ma, sar, sma) -> float:
    if all(_clearly_outside(c) for c in (ar, ma, sar, sma)):
        return 0.0
    total = 0.0
    for roots in _poly_roots(ar, ma, sar, sma).values():
        if roots.size:
            total += float(np.sum(np.maximum(0.0, ROOT_MARGIN - np.abs(roots))))
    return total


class _CssProblem:
    """Parameter packing and the CSS residual recursion for one order."""

    def __init__(self, w: np.ndarray, wX: np.ndarray | None, order: ArimaOrder,
                 include_mean: bool, n_cond: int):
        self.w, self.wX, self.order = w, wX, order
        self.include_mean = include_mean
        self.k = 0 if wX is None else wX.shape[1]
        self.n_cond = n_cond
        o = order
        self.sizes = (int(include_mean), self.k, o.p, o.q, o.P, o.Q)

    def unpack(self, theta: np.ndarray):
        parts, pos = [], 0
        for size in self.sizes:
            parts.append(theta[pos:pos + size])
            pos += size
        c, beta, ar, ma, sar, sma = parts
        return (float(c[0]) if c.size else 0.0), beta, ar, ma, sar, sma

    def residuals(self, theta: np.ndarray) -> np.ndarray:
        """Residual recursion over the whole differenced sample (zeros before the AR span)."""
        c, beta, ar, ma, sar, sma = self.unpack(theta)
        return css_residuals(self.w, self.wX, c, beta, ar, ma, sar, sma, self.order.s)

    def objective(self, theta: np.ndarray) -> float:
        with np.errstate(over="ignore", invalid="ignore"):
            e = self.residuals(theta)[self.n_cond:]
            sse = float(e @ e)
        if not math.isfinite(sse):
            return 1e300
        _, _, ar, ma, sar, sma = self.unpack(theta)
        return sse + PENALTY * _overshoot(ar, ma, sar, sma)


def css_residuals(w, wX, c, beta, ar, ma, sar, sma, s) -> np.ndarray:
    u = w - c
    if wX is not None and len(beta):
        u = u - wX @ beta
    arp = _expand(ar, sar, s, -1.0)
    map_ = _expand(ma, sma, s, 1.0)
    r = arp.size - 1
    e = np.zeros(u.size)
    if u.size <= r:
        return e
    v = np.convolve(u, arp, mode="valid")  # v[t-r] = (AR poly applied to u)[t]
    e[r:] = signal.lfilter([1.0], map_, v)
    return e


def _central_grad(f, x: np.ndarray, h: float = FD_STEP) -> np.ndarray:
    g = np.empty_like(x)
    for i in range(x.size):
        step = np.zeros_like(x)
        step[i] = h
        g[i] = (f(x + step) - f(x - step)) / (2 * h)
    return g


def information_criteria(loglik: float, k_params: int, n_eff: int) -> tuple[float, float]:
    """Return ``(aic, bic)``."""
    if n_eff < 1:
        raise ValueError("n_eff must be >= 1")
    return -2.0 * loglik + 2.0 * k_params, -2.0 * loglik + k_params * math.log(n_eff)


def _values(s) -> tuple[np.ndarray, int, str]:
    if isinstance(s, Series):
        if s.has_missing():
            raise ValueError(f"{s.name}: interpolate missing values before fitting")
        return np.asarray(s.values, dtype=float), s.start, s.name
    y = np.asarray(s, dtype=float)
    if np.isnan(y).any():
        raise ValueError("series contains missing values")
    return y, 0, "y"


def _exog_values(exog, n: int):
    if exog is None:
        return None, ()
    if isinstance(exog, ExogMatrix):
        vals, names = np.asarray(exog.values, dtype=float), exog.names
    else:
        vals = np.asarray(exog, dtype=float)
        vals = vals[:, None] if vals.ndim == 1 else vals
        names = tuple(f"x{i + 1}" for i in range(vals.shape[1]))
    if vals.shape[0] != n:
        raise ValueError(f"exogenous matrix has {vals.shape[0]} rows for a series of length {n}")
    if np.isnan(vals).any():
        raise ValueError("exogenous matrix contains missing values")
    return vals, tuple(names)


def _difference_matrix(X: np.ndarray, order: ArimaOrder) -> np.ndarray:
    return np.column_stack([difference(X[:, j], order.d, order.D, order.s).values for j in range(X.shape[1])])


def fit_arima(s, order: ArimaOrder, exog=None, include_mean: bool | None = None,
              n_cond: int | None = None, enforce: str = "soft",
              chain: TransformChain | None = None, family: str | None = None) -> ArimaFit:
    """Estimate an ARIMA-family model by conditional sum of squares.

    Nelder-Mead from AR/MA = 0.1 and the differenced-series mean, then a
    BFGS polish using central-difference gradients. ``n_cond`` fixes the
    number of leading differenced observations excluded from the SSE
    (default: the expanded AR span ``p + P*s``); a common value makes
    criteria comparable across orders. ``enforce`` is ``"soft"`` (penalty
    only), ``"hard"`` (raise NonInvertible) or ``"off"``.
    """
    if enforce not in ("soft", "hard", "off"):
        raise ValueError("enforce must be 'soft', 'hard' or 'off'")
    y, start, name = _values(s)
    X, names = _exog_values(exog, y.size)
    if include_mean is None:
        include_mean = order.n_diff == 0
    if y.size <= order.n_diff:
        raise TooShort(f"series of length {y.size} cannot be differenced with {order.label()}")
    w = difference(y, order.d, order.D, order.s).values
    wX = _difference_matrix(X, order) if X is not None else None
    r = order.n_ar
    n_cond = r if n_cond is None else int(n_cond)
    if n_cond < r:
        raise ValueError(f"n_cond={n_cond} is shorter than the AR span {r}")
    n_eff = w.size - n_cond
    k_params = _n_coef(order, include_mean, len(names)) + 1
    if n_eff < 10 * k_params:
        raise TooShort(f"{n_eff} usable observations for {k_params} parameters (need 10x)")

    beta0 = np.zeros(0)
    c0 = float(w.mean()) if include_mean else 0.0
    if wX is not None:
        design = np.column_stack([np.ones(w.size), wX]) if include_mean else wX
        if np.linalg.matrix_rank(design) < design.shape[1]:
            raise SingularExog("exogenous regressors are collinear on the differenced scale")
        coef = np.linalg.lstsq(design, w, rcond=None)[0]
        beta0 = coef[1:] if include_mean else coef
        if include_mean:
            c0 = float(coef[0])

    problem = _CssProblem(w, wX, order, include_mean, n_cond)
    theta0 = np.concatenate([
        [c0] if include_mean else [],
        beta0,
        np.full(order.p + order.q + order.P + order.Q, INIT_COEF),
    ])
    converged = True
    if theta0.size:
        sse0 = max(problem.objective(theta0), 1e-300)
        f = lambda th: problem.objective(th) / sse0  # noqa: E731
        nm = optimize.minimize(f, theta0, method="Nelder-Mead",
                               options={"maxiter": MAXITER, "xatol": 1e-10, "fatol": REL_TOL,
                                        "adaptive": theta0.size > 4})
        best_x, best_f = nm.x, nm.fun
        bfgs = optimize.minimize(f, nm.x, method="BFGS", jac=lambda th: _central_grad(f, th),
                                 options={"maxiter": MAXITER, "gtol": 1e-9})
        if bfgs.fun <= best_f:
            best_x, best_f = bfgs.x, bfgs.fun
        if bfgs.status == 1 or (nm.status == 1 and not bfgs.success and bfgs.fun > nm.fun * (1 - REL_TOL)):
            converged = False
            warnings.warn(f"{order.label()}: iteration cap reached; returning best iterate",
                          NoConvergenceWarning, stacklevel=2)
        theta = best_x
    else:
        theta = theta0

    c, beta, ar, ma, sar, sma = problem.unpack(theta)
    if enforce == "hard" and _overshoot(ar, ma, sar, sma) > 0:
        raise NonInvertible(f"{order.label()}: estimate outside the stationary/invertible region")
    e = problem.residuals(theta)[n_cond:]
    sse = float(e @ e)
    sigma2 = sse / n_eff
    if sigma2 <= 0:
        sigma2 = np.finfo(float).tiny
    loglik = -0.5 * n_eff * (math.log(2 * math.pi) + math.log(sigma2) + 1.0)
    aic, bic = information_criteria(loglik, k_params, n_eff)
    if family is None:
        family = "ARIMAX" if names else ("SARIMA" if order.seasonal else "ARIMA")
    return ArimaFit(
        order=order, ar=np.array(ar), ma=np.array(ma), sar=np.array(sar), sma=np.array(sma),
        intercept=c, exog_coef=np.array(beta), exog_names=names, include_mean=include_mean,
        sigma2=sigma2, loglik=loglik, aic=aic, bic=bic, n_cond=n_cond, residuals=e,
        y=y, exog=X, start=start, name=name, converged=converged,
        chain=chain or TransformChain(), family=family,
    )


def apply_arima(fit: ArimaFit, s, exog=None) -> ArimaFit:
    """Re-run a fitted model's recursion on new data with the parameters held fixed."""
    y, start, name = _values(s)
    X, _ = _exog_values(exog, y.size)
    if (X is None) != (fit.exog is None):
        raise MissingFutureExog("exogenous regressors must match the fitted model")
    o = fit.order
    w = difference(y, o.d, o.D, o.s).values
    wX = _difference_matrix(X, o) if X is not None else None
    e = css_residuals(w, wX, fit.intercept, fit.exog_coef, fit.ar, fit.ma, fit.sar, fit.sma, o.s)
    return replace(fit, y=y, exog=X, start=start, name=name, residuals=e[fit.n_cond:])


def forecast_arima(fit: ArimaFit, horizon: int, future_exog=None) -> Forecast:
    """Recursive h-step forecast with future shocks at their zero mean."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    o = fit.order
    if fit.exog is not None:
        if future_exog is None:
            raise MissingFutureExog("model was fit with exogenous regressors; pass future_exog")
        Xf = future_exog.values if isinstance(future_exog, ExogMatrix) else np.asarray(future_exog, dtype=float)
        Xf = Xf[:, None] if Xf.ndim == 1 else Xf
        if Xf.shape[0] != horizon:
            raise MissingFutureExog(f"future_exog has {Xf.shape[0]} rows, horizon is {horizon}")
        u = fit.y - fit.exog @ fit.exog_coef
        xb_future = Xf @ fit.exog_coef
    else:
        u = fit.y
        xb_future = np.zeros(horizon)

    w = difference(u, o.d, o.D, o.s).values - fit.intercept
    arp = _expand(fit.ar, fit.sar, o.s, -1.0)
    map_ = _expand(fit.ma, fit.sma, o.s, 1.0)
    e_full = np.zeros(w.size)
    e_full[w.size - fit.n_eff:] = fit.residuals
    wb = np.concatenate([w, np.zeros(horizon)])
    eb = np.concatenate([e_full, np.zeros(horizon)])
    n = w.size
    for h in range(horizon):
        t = n + h
        acc = 0.0
        for k in range(1, arp.size):
            if t - k >= 0:
                acc -= arp[k] * wb[t - k]
        for j in range(1, map_.size):
            if t - j >= 0:
                acc += map_[j] * eb[t - j]
        wb[t] = acc
    diffs = wb[n:] + fit.intercept
    m = o.n_diff
    levels = integrate(u[u.size - m:], diffs, o.d, o.D, o.s) + xb_future
    origin = fit.start + fit.y.size - 1
    return Forecast(origin, fit.chain.inverse(levels), levels, fit.label)


def _order_grid(max_p, max_q, max_P, max_Q, d, D, s):
    for p, q, P, Q in itertools.product(range(max_p + 1), range(max_q + 1),
                                        range(max_P + 1), range(max_Q + 1)):
        yield ArimaOrder(p, d, q, P, D, Q, s if (P or D or Q) else 1)


def select_d(y: np.ndarray, max_d: int, regression: str = "c") -> int:
    """Smallest d whose d-th difference passes ADF at 5% (capped at ``max_d``)."""
    z = np.asarray(y, dtype=float)
    for d in range(max_d + 1):
        if d == max_d:
            return d
        try:
            if adf_test(z, regression).stationary:
                return d
        except PowercastError:
            return d
        z = np.diff(z)
    return max_d


def auto_arima(s, max_p: int = 3, max_q: int = 3, max_P: int = 0, max_Q: int = 0,
               max_d: int = 2, D: int = 0, period: int = 1, criterion: str = "aic",
               exog=None, chain: TransformChain | None = None) -> ArimaFit:
    """Exhaustive order search after choosing d by repeated ADF tests.

    All candidates share one conditioning span (the largest AR span in the
    grid) so their likelihoods cover the same observations. Ties go to
    fewer parameters, then to the lexicographically smaller ``(p, q, P, Q)``.
    """
    if criterion not in ("aic", "bic"):
        raise ValueError("criterion must be 'aic' or 'bic'")
    if min(max_p, max_q, max_P, max_Q, max_d, D) < 0:
        raise ValueError("bounds must be non-negative")
    y, _, _ = _values(s)
    seas_period = period if (max_P or max_Q or D) else 1
    if seas_period > 1 and D:
        yd = difference(y, 0, D, seas_period).values
    else:
        yd = y
    d = select_d(yd, max_d)
    n_cond = max_p + max_P * seas_period
    log_rows, fits = [], []
    for order in _order_grid(max_p, max_q, max_P, max_Q, d, D if seas_period > 1 else 0, seas_period):
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", NoConvergenceWarning)
                fit = fit_arima(s, order, exog=exog, n_cond=n_cond, chain=chain)
        except (PowercastError, np.linalg.LinAlgError, ValueError) as exc:
            log.info("auto_arima: %s skipped (%s)", order.label(), exc)
            log_rows.append({"order": order.label(), "error": str(exc)})
            continue
        value = fit.criterion(criterion)
        log_rows.append({"order": order.label(), criterion: value, "k_params": fit.k_params})
        fits.append((value, fit.k_params, (order.p, order.q, order.P, order.Q), fit))
    if not fits:
        raise NoValidModel("every candidate order failed to fit")
    best = min(fits, key=lambda t: (t[0], t[1], t[2]))
    return replace(best[3], search=tuple(log_rows))


@dataclass(frozen=True, eq=False)
class SesFit:
    alpha: float
    level: float
    fitted: np.ndarray
    y: np.ndarray
    start: int = 0
    chain: TransformChain = field(default_factory=TransformChain)

    @property
    def sse(self) -> float:
        err = self.y - self.fitted
        return float(err @ err)

    def to_dict(self) -> dict:
        return {"kind": "ses", "alpha": self.alpha, "level": self.level, "sse": self.sse,
                "fitted": self.fitted.tolist(), "y": self.y.tolist(), "start": self.start,
                "chain": self.chain.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "SesFit":
        return cls(float(d["alpha"]), float(d["level"]), np.array(d["fitted"], dtype=float),
                   np.array(d["y"], dtype=float), int(d["start"]), TransformChain.from_dict(d["chain"]))


def ses_filter(y: np.ndarray, alpha: float) -> tuple[np.ndarray, float]:
    """One-step forecasts ``yhat[0..T-1]`` (``yhat[0] = y[0]``) and the next-period level."""
    yhat = np.empty(y.size)
    level = y[0]
    for t in range(y.size):
        yhat[t] = level
        level = alpha * y[t] + (1.0 - alpha) * level
    return yhat, float(level)


def golden_section(f, lo: float, hi: float, tol: float = 1e-8, maxiter: int = 200) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if b - a < tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (a + b) / 2.0


def fit_ses(s, alpha: float | None = None, chain: TransformChain | None = None) -> SesFit:
    y, start, _ = _values(s)
    if alpha is None:
        def sse(a):
            yhat, _ = ses_filter(y, a)
            return float(((y - yhat) ** 2).sum())
        alpha = golden_section(sse, 1e-4, 1.0 - 1e-4)
    elif not 0.0 < alpha < 1.0:
        raise AlphaOutOfRange(f"alpha={alpha} must lie strictly inside (0, 1)")
    yhat, level = ses_filter(y, alpha)
    return SesFit(float(alpha), level, yhat, y, start, chain or TransformChain())


def ses_forecast(s, alpha: float | None = None, horizon: int = 1,
                 chain: TransformChain | None = None) -> tuple[SesFit, Forecast]:
    """Simple exponential smoothing; the horizon forecast is flat at the final level."""
    fit = fit_ses(s, alpha, chain)
    flat = np.full(horizon, fit.level)
    origin = fit.start + fit.y.size - 1
    return fit, Forecast(origin, fit.chain.inverse(flat), flat, f"SES(alpha={fit.alpha:.4g})")
