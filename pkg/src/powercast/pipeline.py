"""End-to-end runs behind the CLI: prepare, fit, evaluate, forecast, compare.

Every function here returns plain dicts ready for JSON so the CLI only
has to choose file names.
"""
from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .core import DEFAULT_EXOG, TARGETS, Dataset, ExogMatrix, Series, iso, select_series, to_day
from .diagnostics import acf, adf_test, pacf
from .errors import ConfigError
from .evaluation import compute_metrics, expanding_folds, grid_search, train_test_split
from .families import DISPLAY_NAMES, FAMILIES, get_family
from .ml.windows import Climatology
from .preprocess import TransformChain, difference, interpolate_missing, preprocess
from .presets import DEFAULT_HORIZON_END, DEFAULT_SPLIT, get_preset
from .stat_models import ArimaFit, auto_arima

log = logging.getLogger(__name__)

MODES = ("fixed", "auto", "grid")
ARIMA_FAMILIES = ("arima", "sarima", "arimax")


@dataclass
class RunConfig:
    input: str | None = None
    target: str = "load"
    interpolate: bool = True
    savgol: list | None = None
    log: bool = True
    log_offset: float = 0.0
    exog: list = field(default_factory=lambda: list(DEFAULT_EXOG))
    family: str = "arima"
    params: dict = field(default_factory=dict)
    mode: str = "fixed"
    auto: dict = field(default_factory=dict)
    grid: dict | None = None
    folds: int = 5
    score: str = "mse"
    split_date: str | None = None
    horizon_end: str = DEFAULT_HORIZON_END
    multi_step: bool = False
    seed: int = 0
    models: dict | None = None

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.target not in TARGETS:
            raise ConfigError(f"target must be one of {TARGETS}")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}")
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}")
        if self.mode == "grid" and not self.grid:
            raise ConfigError("grid mode needs a non-empty grid")
        if self.mode != "grid" and self.grid:
            raise ConfigError("a grid was given but mode is not 'grid'")
        if self.mode == "auto" and self.family not in ARIMA_FAMILIES:
            raise ConfigError("auto mode applies to the ARIMA families only")
        if self.savgol is not None and len(self.savgol) != 2:
            raise ConfigError("savgol must be [window, polyorder]")
        for name in ("split_date", "horizon_end"):
            value = getattr(self, name)
            if value is not None:
                try:
                    to_day(value)
                except (TypeError, ValueError):
                    raise ConfigError(f"{name}: bad date {value!r}") from None

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**d)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_sources(cls, preset: str | None = None, config_text: str | None = None,
                     overrides: dict | None = None) -> "RunConfig":
        """Preset, then config JSON, then explicit overrides (later wins)."""
        merged: dict = {}
        if preset:
            merged.update(get_preset(preset))
        if config_text:
            try:
                raw = json.loads(config_text)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config is not valid JSON: {exc}") from None
            if not isinstance(raw, dict):
                raise ConfigError("config JSON must be an object")
            merged.update(raw)
        merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return cls.from_dict(merged)

    def to_dict(self) -> dict:
        return asdict(self)

    def family_params(self, family: str) -> dict:
        """Hyperparameters for ``family``: preset table, then explicit params, plus the seed."""
        base = dict((self.models or {}).get(family, {}))
        if family == self.family:
            base.update(self.params)
        if family in ("lstm", "gbt"):
            base.setdefault("seed", self.seed)
        return base


@dataclass
class Prepared:
    raw: Series
    series: Series
    chain: TransformChain
    exog: ExogMatrix | None


def prepare(ds: Dataset, cfg: RunConfig) -> Prepared:
    """Clean the target through the configured chain; exogenous columns are only interpolated."""
    raw = select_series(ds, cfg.target)
    savgol = tuple(cfg.savgol) if cfg.savgol else None
    series, chain = preprocess(raw, cfg.interpolate, savgol, cfg.log_offset if cfg.log else None)
    exog = None
    names = [n for n in cfg.exog if n in ds.columns]
    if names:
        cols = [interpolate_missing(ds.column(n)).values for n in names]
        exog = ExogMatrix(ds.start, tuple(names), np.column_stack(cols))
    return Prepared(raw, series, chain, exog)


def _slice_exog(exog, lo, hi=None):
    return None if exog is None else exog.slice(lo, hi)


def fit_family(cfg: RunConfig, family: str, s: Series, exog, chain) -> tuple[object, dict]:
    """Fit one family by the configured selection mode; returns (model, report)."""
    fam = get_family(family)
    params = cfg.family_params(family)
    report: dict = {"family": family, "mode": cfg.mode if family == cfg.family else "fixed"}
    if family == cfg.family and cfg.mode == "auto":
        a = {"max_p": 3, "max_q": 3, "max_P": 0, "max_Q": 0, "max_d": 2, "D": 0, "period": 1,
             "criterion": "aic", **cfg.auto}
        model = auto_arima(s, a["max_p"], a["max_q"], a["max_P"], a["max_Q"], a["max_d"], a["D"],
                           a["period"], a["criterion"], exog=exog if family == "arimax" else None, chain=chain)
        report["search"] = list(model.search)
    elif family == cfg.family and cfg.mode == "grid":
        plan = expanding_folds(len(s), cfg.folds)
        result = grid_search(family, cfg.grid, s, plan, cfg.score, exog=exog, base_params=params)
        report["folds"] = plan.to_dict()
        report["grid"] = result.to_dict()
        params = {**params, **result.best}
        model = fam.fit(s, params, exog, chain)
    else:
        model = fam.fit(s, params, exog, chain)
    report["params"] = params
    report["summary"] = model_summary(model)
    return model, report


def model_summary(model) -> dict:
    if isinstance(model, ArimaFit):
        return {"label": model.label, "aic": model.aic, "bic": model.bic, "sigma2": model.sigma2,
                "loglik": model.loglik, "k_params": model.k_params, "n_eff": model.n_eff,
                "converged": model.converged, "roots": model.roots()}
    d = model.to_dict() if hasattr(model, "to_dict") else {}
    kind = d.get("kind", "naive")
    out = {"kind": kind}
    if kind == "ses":
        out.update(alpha=model.alpha, sse=model.sse)
    if kind in ("lstm", "gbt"):
        out.update(final_loss=model.trace[-1] if model.trace else None, epochs=len(model.trace),
                   window=model.spec.window, features=model.spec.feature_names())
    return out


def model_artifact(cfg: RunConfig, family: str, model, prep: Prepared, train_end: int) -> dict:
    return {"family": family, "target": cfg.target, "train_end": iso(train_end),
            "config": cfg.to_dict(), "model": model.to_dict()}


def _split(cfg: RunConfig, s: Series):
    return train_test_split(s, cfg.split_date or DEFAULT_SPLIT)


def held_out_predictions(family: str, model, prep: Prepared, n_train: int, multi_step: bool) -> np.ndarray:
    """Predictions for every test day on the transformed scale.

    One-step mode re-runs the fitted model over the full series with its
    parameters frozen, so each prediction only sees data before its date.
    Multi-step mode forecasts the whole test span from the split origin.
    """
    fam = get_family(family)
    s = prep.series
    if not multi_step:
        return fam.one_step(model, s, prep.exog)[n_train:]
    train = s.slice(0, n_train)
    horizon = len(s) - n_train
    future = None
    if prep.exog is not None and fam.uses_exog:
        future = prep.exog.slice(n_train)
    fc = fam.forecast(model, train, horizon, future, _slice_exog(prep.exog, 0, n_train))
    return fc.transformed


def evaluate_family(cfg: RunConfig, family: str, prep: Prepared) -> tuple[dict, object, dict]:
    train, test = _split(cfg, prep.series)
    n_train = len(train)
    model, report = fit_family(cfg, family, train, _slice_exog(prep.exog, 0, n_train), prep.chain)
    pred_t = held_out_predictions(family, model, prep, n_train, cfg.multi_step)
    actual_t = test.values
    metrics = {
        "transformed": compute_metrics(actual_t, pred_t, "transformed").to_dict(),
        "original": compute_metrics(prep.chain.inverse(actual_t), prep.chain.inverse(pred_t), "original").to_dict(),
    }
    row = {
        "family": family,
        "model": DISPLAY_NAMES[family],
        "label": report["summary"].get("label", DISPLAY_NAMES[family]),
        "metrics": metrics,
    }
    return row, model, report


def diagnose(prep: Prepared, max_lag: int = 40, regression: str = "ct", d: int = 1) -> dict:
    s = prep.series
    max_lag = min(max_lag, len(s) // 2 - 1)
    a = acf(s, max_lag)
    p = pacf(s, max_lag)
    ds = difference(s, d=d).values if d > 0 else s.values
    return {
        "target": s.name,
        "n": len(s),
        "chain": prep.chain.to_dict(),
        "adf": adf_test(s, regression).to_dict(),
        "adf_differenced": {"d": d, **adf_test(ds, regression).to_dict()},
        "acf": [asdict(pt) for pt in a],
        "pacf": [asdict(pt) for pt in p],
    }


def horizon_days(last_day: int, horizon_end=None, horizon: int | None = None) -> int:
    if horizon is not None:
        if horizon < 1:
            raise ConfigError("horizon must be >= 1")
        return int(horizon)
    n = to_day(horizon_end) - last_day
    if n < 1:
        raise ConfigError(f"horizon end {horizon_end} is not after the last observation {iso(last_day)}")
    return n


def forecast_from(family: str, model, prep: Prepared, horizon: int):
    """Continue the prepared series ``horizon`` days; exogenous futures come from climatology."""
    fam = get_family(family)
    future = None
    if fam.uses_exog and prep.exog is not None and family in ARIMA_FAMILIES:
        if isinstance(model, ArimaFit) and model.exog is not None:
            days = prep.series.end + 1 + np.arange(horizon)
            future = Climatology.fit(prep.exog)(days)
    return fam.forecast(model, prep.series, horizon, future, prep.exog)


def compare(cfg: RunConfig, prep: Prepared, families=None) -> dict:
    """Hold-out metrics for every family plus the naive reference, sorted by display name."""
    families = list(families or ["arima", "arimax", "gbt", "lstm", "sarima", "ses"])
    rows, reports = [], {}
    for family in families + ["naive"]:
        log.info("compare: fitting %s", family)
        row, _, report = evaluate_family(cfg, family, prep)
        row["reference"] = family == "naive"
        rows.append(row)
        reports[family] = report
    rows.sort(key=lambda r: (r["reference"], r["model"]))
    train, _ = _split(cfg, prep.series)
    stationarity = {
        "before_differencing": adf_test(train, "ct").to_dict(),
        "after_differencing": adf_test(difference(train, d=1).values, "ct").to_dict(),
    }
    return {
        "target": cfg.target,
        "split_date": cfg.split_date or DEFAULT_SPLIT,
        "evaluation": "multi-step" if cfg.multi_step else "one-step",
        "n_train": len(train),
        "n_test": len(prep.series) - len(train),
        "chain": prep.chain.to_dict(),
        "rows": rows,
        "stationarity": stationarity,
        "fits": {k: {"params": v["params"], "summary": v["summary"]} for k, v in reports.items()},
    }


def _cell(v, width=12):
    return f"{'undefined':>{width}}" if v is None else f"{v:>{width}.6g}"


def compare_table(result: dict) -> str:
    """Aligned plain-text rendering of :func:`compare` output (both scales)."""
    lines = [f"target: {result['target']}  split: {result['split_date']}  "
             f"evaluation: {result['evaluation']}  train/test: {result['n_train']}/{result['n_test']}"]
    for scale in ("original", "transformed"):
        lines.append("")
        lines.append(f"[{scale} scale]")
        lines.append(f"{'Model':<16}" + "".join(f"{h:>12}" for h in ("MSE", "RMSE", "MAE", "MAPE%", "MAPA%")))
        for row in result["rows"]:
            m = row["metrics"][scale]
            name = row["model"] + (" *" if row.get("reference") else "")
            lines.append(f"{name:<16}" + "".join(_cell(m[k]) for k in ("mse", "rmse", "mae", "mape", "mapa")))
    st = result["stationarity"]
    lines.append("")
    lines.append("* reference baseline (previous value)")
    lines.append(f"ADF before differencing: stat={st['before_differencing']['statistic']:.4f} "
                 f"p={st['before_differencing']['pvalue']:.4g}")
    lines.append(f"ADF after differencing:  stat={st['after_differencing']['statistic']:.4f} "
                 f"p={st['after_differencing']['pvalue']:.4g}")
    return "\n".join(lines) + "\n"


def parse_order(text: str | None):
    if text is None:
        return None
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise ConfigError(f"bad order {text!r}; expected comma-separated integers") from None

