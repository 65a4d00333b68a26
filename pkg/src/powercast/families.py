"""Uniform fit / one-step / forecast adapters for every model family.

All adapters work on the transformed scale; the transform chain is
attached to the fitted model so forecasts come back in original units.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import ExogMatrix, Forecast, Series
from .errors import MissingFutureExog, UnknownFamily
from .ml.gbt import gbt_fit, gbt_forecast
from .ml.lstm import TrainConfig, lstm_fit, lstm_forecast
from .ml.windows import Climatology, make_windows
from .preprocess import TransformChain
from .stat_models import (
    ArimaOrder,
    apply_arima,
    auto_arima,
    fit_arima,
    fit_ses,
    forecast_arima,
    ses_filter,
)


@dataclass(frozen=True)
class Family:
    name: str
    fit: Callable
    one_step: Callable
    forecast: Callable
    n_params: Callable
    uses_exog: bool = False


def _order(params: dict) -> ArimaOrder:
    p, d, q = params.get("order", (1, 0, 0))
    if params.get("seasonal_order"):
        P, D, Q, s = params["seasonal_order"]
        return ArimaOrder(p, d, q, P, D, Q, s)
    return ArimaOrder(p, d, q)


# ---- ARIMA family -------------------------------------------------------

def _arima_fit(s: Series, params: dict, exog=None, chain=None, family_label=None):
    use_exog = exog if params.get("exog_names") or family_label == "ARIMAX" else None
    if params.get("auto"):
        a = params["auto"]
        return auto_arima(s, a.get("max_p", 3), a.get("max_q", 3), a.get("max_P", 0), a.get("max_Q", 0),
                          a.get("max_d", 2), a.get("D", 0), a.get("period", 1), a.get("criterion", "aic"),
                          exog=use_exog, chain=chain)
    return fit_arima(s, _order(params), exog=use_exog, include_mean=params.get("include_mean"),
                     chain=chain, family=family_label)


def _arima_one_step(fit, s: Series, exog=None):
    e = exog if fit.exog is not None else None
    return apply_arima(fit, s, e).one_step()


def _arima_forecast(fit, s: Series, horizon: int, future_exog=None, exog=None):
    refit = apply_arima(fit, s, exog if fit.exog is not None else None)
    return forecast_arima(refit, horizon, future_exog)


def _arima_n_params(params: dict) -> int:
    o = _order(params) if "order" in params else ArimaOrder()
    return o.p + o.q + o.P + o.Q + len(params.get("exog_names", ()))


def _make_arima(label: str, uses_exog: bool = False) -> Family:
    return Family(
        label.lower(),
        lambda s, params, exog=None, chain=None: _arima_fit(s, params, exog, chain, label),
        _arima_one_step,
        _arima_forecast,
        _arima_n_params,
        uses_exog,
    )


# ---- SES -----------------------------------------------------------------

def _ses_fit(s, params, exog=None, chain=None):
    return fit_ses(s, params.get("alpha"), chain)


def _ses_one_step(fit, s, exog=None):
    return ses_filter(s.values, fit.alpha)[0]


def _ses_forecast(fit, s, horizon, future_exog=None, exog=None):
    _, level = ses_filter(s.values, fit.alpha)
    flat = np.full(horizon, level)
    return Forecast(s.end, fit.chain.inverse(flat), flat, f"SES(alpha={fit.alpha:.4g})")


# ---- naive -----------------------------------------------------------------

@dataclass(frozen=True)
class NaiveModel:
    chain: TransformChain

    def to_dict(self) -> dict:
        return {"kind": "naive", "chain": self.chain.to_dict()}

    @classmethod
    def from_dict(cls, d) -> "NaiveModel":
        return cls(TransformChain.from_dict(d["chain"]))


def _naive_one_step(model, s, exog=None):
    out = np.full(len(s), np.nan)
    out[1:] = s.values[:-1]
    return out


def _naive_forecast(model, s, horizon, future_exog=None, exog=None):
    flat = np.full(horizon, s.values[-1])
    return Forecast(s.end, model.chain.inverse(flat), flat, "Naive")


# ---- windowed ML -------------------------------------------------------------

def _ml_exog(params, exog):
    return exog if (exog is not None and params.get("use_exog", True)) else None


def _lstm_fit(s, params, exog=None, chain=None):
    ex = _ml_exog(params, exog)
    data = make_windows(s, params.get("window", 30), ex, params.get("calendar", "sincos"))
    cfg = TrainConfig(
        epochs=params.get("epochs", 200), batch_size=params.get("batch_size"),
        lr=params.get("lr", 1e-3), clip=params.get("clip", 5.0), seed=params.get("seed", 0),
    )
    clim = Climatology.fit(ex) if ex is not None else None
    return lstm_fit(data, params.get("hidden", 100), cfg, chain, clim)


def _gbt_fit(s, params, exog=None, chain=None):
    ex = _ml_exog(params, exog)
    data = make_windows(s, params.get("window", 30), ex, params.get("calendar", "onehot"))
    clim = Climatology.fit(ex) if ex is not None else None
    return gbt_fit(data, params.get("n_trees", 200), params.get("eta", 0.01), params.get("max_depth", 3),
                   params.get("gamma", 0.0), params.get("lam", 1.0), chain, clim)


def _ml_one_step(model, s, exog=None):
    ex = exog if model.spec.exog_names else None
    if model.spec.exog_names and ex is None:
        raise MissingFutureExog("model was trained with exogenous inputs")
    data = make_windows(s, model.spec.window, ex, model.spec.calendar, scaler=model.scaler)
    out = np.full(len(s), np.nan)
    out[model.spec.window:] = model.scaler.inverse_y(model.predict_normalized(data.Xn))
    return out


def _lstm_forecast(model, s, horizon, future_exog=None, exog=None):
    return lstm_forecast(model, s, horizon, future_exog)


def _gbt_forecast(model, s, horizon, future_exog=None, exog=None):
    return gbt_forecast(model, s, horizon, future_exog)


def _lstm_n_params(params):
    H = params.get("hidden", 100)
    m = 1 + params.get("n_extra", 0)
    return 4 * H * (H + m) + 4 * H + H + 1


def _gbt_n_params(params):
    return params.get("n_trees", 200) * 2 ** params.get("max_depth", 3)


FAMILIES: dict[str, Family] = {
    "arima": _make_arima("ARIMA"),
    "sarima": _make_arima("SARIMA"),
    "arimax": _make_arima("ARIMAX", uses_exog=True),
    "ses": Family("ses", _ses_fit, _ses_one_step, _ses_forecast, lambda p: 0 if "alpha" in p else 1),
    "naive": Family("naive", lambda s, params, exog=None, chain=None: NaiveModel(chain or TransformChain()),
                    _naive_one_step, _naive_forecast, lambda p: 0),
    "lstm": Family("lstm", _lstm_fit, _ml_one_step, _lstm_forecast, _lstm_n_params, True),
    "gbt": Family("gbt", _gbt_fit, _ml_one_step, _gbt_forecast, _gbt_n_params, True),
}

DISPLAY_NAMES = {
    "lstm": "LSTM",
    "arima": "ARIMA",
    "gbt": "XGBoost",
    "arimax": "Dynamic ARIMA",
    "ses": "SES",
    "sarima": "SARIMA",
    "naive": "Naive",
}


def get_family(name: str) -> Family:
    try:
        return FAMILIES[name.lower()]
    except KeyError:
        raise UnknownFamily(f"unknown model family {name!r}; choose from {sorted(FAMILIES)}") from None


def future_exog_or_none(family: Family, exog: ExogMatrix | None, lo: int, hi: int):
    if exog is None or not family.uses_exog:
        return None
    return exog.slice(lo, hi)
