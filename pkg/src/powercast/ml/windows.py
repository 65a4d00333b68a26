"""Supervised lag-window construction shared by the LSTM and boosted trees."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..core import ExogMatrix, Series
from ..errors import LengthMismatch, MissingFutureExog, TooShort

CALENDAR_STYLES = (None, "sincos", "onehot")


def weekday(days) -> np.ndarray:
    """Monday=0 ... Sunday=6 (1970-01-01 was a Thursday)."""
    return (np.asarray(days, dtype=np.int64) + 3) % 7


def month(days) -> np.ndarray:
    d = np.asarray(days, dtype=np.int64).astype("datetime64[D]")
    return d.astype("datetime64[M]").astype(np.int64) % 12 + 1


def day_of_year(days) -> np.ndarray:
    d = np.asarray(days, dtype=np.int64).astype("datetime64[D]")
    return (d - d.astype("datetime64[Y]")).astype(np.int64) + 1


def calendar_features(days, style: str | None) -> tuple[np.ndarray, list[str]]:
    days = np.asarray(days, dtype=np.int64)
    if style is None:
        return np.zeros((days.size, 0)), []
    mon = 2 * np.pi * (month(days) - 1) / 12.0
    month_cols = [np.sin(mon), np.cos(mon)]
    if style == "sincos":
        dow = 2 * np.pi * weekday(days) / 7.0
        cols = [np.sin(dow), np.cos(dow), *month_cols]
        names = ["dow_sin", "dow_cos", "month_sin", "month_cos"]
    elif style == "onehot":
        onehot = np.eye(7)[weekday(days)]
        cols = [*onehot.T, *month_cols]
        names = [f"dow_{k}" for k in range(7)] + ["month_sin", "month_cos"]
    else:
        raise ValueError(f"calendar style must be one of {CALENDAR_STYLES}")
    return np.column_stack(cols), names


@dataclass(frozen=True)
class WindowSpec:
    window: int
    exog_names: tuple = ()
    calendar: str | None = None

    def feature_names(self) -> list[str]:
        lags = [f"lag_{self.window - j}" for j in range(self.window)]
        return lags + list(self.exog_names) + calendar_features(np.zeros(0, dtype=np.int64), self.calendar)[1]

    def feature_offsets(self) -> np.ndarray:
        """Day offset of each feature relative to its target (lags negative, covariates 0)."""
        n_extra = len(self.feature_names()) - self.window
        return np.concatenate([np.arange(-self.window, 0), np.zeros(n_extra, dtype=np.int64)])

    def to_dict(self) -> dict:
        return {"window": self.window, "exog_names": list(self.exog_names), "calendar": self.calendar}

    @classmethod
    def from_dict(cls, d) -> "WindowSpec":
        return cls(int(d["window"]), tuple(d["exog_names"]), d["calendar"])


@dataclass(frozen=True, eq=False)
class Scaler:
    """Per-column min/max scaling to [0, 1]; constant columns map to 0."""

    x_min: np.ndarray
    x_max: np.ndarray
    y_min: float
    y_max: float

    @classmethod
    def fit(cls, X: np.ndarray, y: np.ndarray) -> "Scaler":
        return cls(X.min(axis=0), X.max(axis=0), float(y.min()), float(y.max()))

    @property
    def x_range(self) -> np.ndarray:
        r = self.x_max - self.x_min
        return np.where(r > 0, r, 1.0)

    @property
    def y_range(self) -> float:
        r = self.y_max - self.y_min
        return r if r > 0 else 1.0

    def transform_x(self, X):
        return (np.asarray(X, dtype=float) - self.x_min) / self.x_range

    def inverse_x(self, Xn):
        return np.asarray(Xn, dtype=float) * self.x_range + self.x_min

    def transform_y(self, y):
        return (np.asarray(y, dtype=float) - self.y_min) / self.y_range

    def inverse_y(self, yn):
        return np.asarray(yn, dtype=float) * self.y_range + self.y_min

    def to_dict(self) -> dict:
        return {"x_min": self.x_min.tolist(), "x_max": self.x_max.tolist(),
                "y_min": self.y_min, "y_max": self.y_max}

    @classmethod
    def from_dict(cls, d) -> "Scaler":
        return cls(np.array(d["x_min"], dtype=float), np.array(d["x_max"], dtype=float),
                   float(d["y_min"]), float(d["y_max"]))


@dataclass(frozen=True, eq=False)
class SupervisedSet:
    X: np.ndarray
    y: np.ndarray
    target_days: np.ndarray
    spec: WindowSpec
    scaler: Scaler
    feature_names: list = field(default_factory=list)

    def __len__(self) -> int:
        return self.y.size

    @property
    def Xn(self) -> np.ndarray:
        return self.scaler.transform_x(self.X)

    @property
    def yn(self) -> np.ndarray:
        return self.scaler.transform_y(self.y)


def feature_rows(spec: WindowSpec, lag_values: np.ndarray, target_days: np.ndarray,
                 exog_rows: np.ndarray | None) -> np.ndarray:
    parts = [np.atleast_2d(lag_values)]
    if spec.exog_names:
        if exog_rows is None:
            raise MissingFutureExog("window spec expects exogenous features")
        parts.append(np.atleast_2d(exog_rows))
    if spec.calendar:
        parts.append(calendar_features(target_days, spec.calendar)[0])
    return np.hstack(parts)


def make_windows(s: Series, window: int, exog: ExogMatrix | None = None,
                 calendar: str | None = None, scaler: Scaler | None = None) -> SupervisedSet:
    """Sample i maps ``y[i : i+w]`` (+ covariates dated i+w) to target ``y[i+w]``.

    Min/max constants are fit on the returned samples unless ``scaler`` is
    given (e.g. to reuse training constants on a held-out span).
    """
    if calendar not in CALENDAR_STYLES:
        raise ValueError(f"calendar must be one of {CALENDAR_STYLES}")
    y = s.values
    if np.isnan(y).any():
        raise ValueError("make_windows needs a series without missing values")
    if window < 1:
        raise ValueError("window must be >= 1")
    if y.size <= window:
        raise TooShort(f"length {y.size} must exceed the window {window}")
    spec = WindowSpec(int(window), exog.names if exog is not None else (), calendar)
    n = y.size - window
    lags = np.lib.stride_tricks.sliding_window_view(y, window)[:n]
    target_days = s.start + window + np.arange(n)
    exog_rows = None
    if exog is not None:
        exog.check_aligned(s)
        if exog.has_missing():
            raise ValueError("exogenous matrix has missing values")
        exog_rows = exog.values[window:]
    X = feature_rows(spec, lags, target_days, exog_rows)
    targets = y[window:].copy()
    if scaler is None:
        scaler = Scaler.fit(X, targets)
    elif scaler.x_min.size != X.shape[1]:
        raise LengthMismatch("scaler was fit on a different feature layout")
    return SupervisedSet(X, targets, target_days, spec, scaler, spec.feature_names())


@dataclass(frozen=True, eq=False)
class Climatology:
    """Mean of each exogenous column per calendar day of year."""

    names: tuple
    table: np.ndarray  # shape (366, k), row 0 = 1 January

    @classmethod
    def fit(cls, exog: ExogMatrix) -> "Climatology":
        doy = day_of_year(np.arange(exog.start, exog.start + len(exog)))
        vals = exog.values
        overall = np.nanmean(vals, axis=0)
        table = np.tile(overall, (366, 1))
        for k in range(1, 367):
            sel = doy == k
            if sel.any():
                table[k - 1] = np.nanmean(vals[sel], axis=0)
        if not (doy == 366).any():
            table[365] = table[364]
        return cls(tuple(exog.names), table)

    def __call__(self, days) -> np.ndarray:
        return self.table[day_of_year(days) - 1]

    def to_dict(self) -> dict:
        return {"names": list(self.names), "table": self.table.tolist()}

    @classmethod
    def from_dict(cls, d) -> "Climatology":
        return cls(tuple(d["names"]), np.array(d["table"], dtype=float))


def recursive_predict(predict, spec: WindowSpec, scaler: Scaler, history: np.ndarray,
                      first_day: int, horizon: int, future_exog=None,
                      climatology: Climatology | None = None) -> np.ndarray:
    """Roll a one-step model forward, appending each prediction to the lag window.

    ``predict`` maps normalised feature rows to normalised targets.
    ``first_day`` is the date of the first forecast.
    """
    history = np.asarray(history, dtype=float)
    if history.size < spec.window:
        raise TooShort(f"need {spec.window} history values to seed the window")
    days = first_day + np.arange(horizon)
    exog_rows = None
    if spec.exog_names:
        if future_exog is not None:
            exog_rows = future_exog.values if isinstance(future_exog, ExogMatrix) else np.asarray(future_exog, dtype=float)
            exog_rows = exog_rows.reshape(horizon, -1)
        elif climatology is not None:
            exog_rows = climatology(days)
        else:
            raise MissingFutureExog("model uses exogenous inputs; pass future_exog or enable the climatology fallback")
    buf = list(history[-spec.window:])
    out = np.empty(horizon)
    for h in range(horizon):
        row = feature_rows(spec, np.array(buf[-spec.window:]), days[h:h + 1],
                           None if exog_rows is None else exog_rows[h:h + 1])
        pred = scaler.inverse_y(predict(scaler.transform_x(row)))[0]
        out[h] = pred
        buf.append(pred)
    return out
