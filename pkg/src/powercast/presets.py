"""Named run configurations for the three plant targets.

Each preset fixes the cleaning chain, the held-out split, the horizon end
and one hyperparameter set per model family.
"""
from __future__ import annotations

import copy

from .errors import ConfigError

DEFAULT_SPLIT = "2023-05-01"
DEFAULT_HORIZON_END = "2025-12-31"

LSTM_UNITS_GRID = {"hidden": [50, 100, 200]}
GBT_GRID = {"eta": [0.01, 0.1], "max_depth": [3, 5], "n_trees": [100, 500]}

_LSTM = {"hidden": 100, "window": 30, "epochs": 200, "batch_size": 32, "lr": 1e-3,
         "calendar": "sincos", "use_exog": True}
_GBT = {"n_trees": 200, "eta": 0.01, "max_depth": 3, "gamma": 0.0, "lam": 1.0,
        "window": 30, "calendar": "onehot", "use_exog": True}


def _preset(target, arima, sarima, sarima_seasonal, arimax):
    return {
        "target": target,
        "interpolate": True,
        "savgol": [7, 2],
        "log": True,
        "log_offset": 0.0,
        "exog": ["temperature", "humidity"],
        "split_date": DEFAULT_SPLIT,
        "horizon_end": DEFAULT_HORIZON_END,
        "models": {
            "arima": {"order": arima},
            "sarima": {"order": sarima, "seasonal_order": sarima_seasonal},
            "arimax": {"order": arimax},
            "ses": {},
            "lstm": dict(_LSTM),
            "gbt": dict(_GBT),
        },
    }


PRESETS = {
    "paper-load": _preset("load", [2, 1, 2], [3, 0, 1], [1, 2, 0, 12], [1, 1, 0]),
    "paper-deficit": _preset("deficit", [2, 0, 1], [3, 0, 0], [0, 0, 1, 12], [1, 0, 2]),
    "paper-generation": _preset("generation", [1, 1, 1], [0, 1, 2], [1, 1, 0, 12], [2, 1, 0]),
}


def get_preset(name: str) -> dict:
    try:
        return copy.deepcopy(PRESETS[name])
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
