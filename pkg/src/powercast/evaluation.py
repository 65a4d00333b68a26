"""Forecast metrics, temporal splits, expanding-window folds and grid search."""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .core import Series, to_day
from .errors import (
    EmptyGrid,
    LengthMismatch,
    PowercastError,
    SplitOutOfRange,
    TooShort,
    UnknownFamily,
)

log = logging.getLogger(__name__)

SCORES = ("mse", "rmse", "mae", "mape")


@dataclass(frozen=True)
class Metrics:
    mse: float
    rmse: float
    mae: float
    mape: float | None
    mapa: float | None
    n: int
    scale: str = "original"

    @property
    def mape_defined(self) -> bool:
        return self.mape is not None

    def score(self, name: str) -> float:
        value = getattr(self, name)
        return math.inf if value is None else float(value)

    def to_dict(self) -> dict:
        return asdict(self)


def compute_metrics(actual, predicted, scale: str = "original") -> Metrics:
    """MSE, RMSE, MAE, MAPE (%) and MAPA = 100 - MAPE.

    MAPE and MAPA are ``None`` when any actual value is zero.
    """
    a = np.asarray(actual, dtype=float).ravel()
    p = np.asarray(predicted, dtype=float).ravel()
    if a.size != p.size:
        raise LengthMismatch(f"{a.size} actual values vs {p.size} predictions")
    if a.size == 0:
        raise LengthMismatch("no values to score")
    err = a - p
    mse = float(np.mean(err * err))
    mae = float(np.mean(np.abs(err)))
    if np.any(a == 0):
        mape = mapa = None
    else:
        mape = float(100.0 * np.mean(np.abs(err / a)))
        mapa = 100.0 - mape
    return Metrics(mse, math.sqrt(mse), mae, mape, mapa, int(a.size), scale)


def train_test_split(s: Series, split_date) -> tuple[Series, Series]:
    """Train is strictly before ``split_date``; test starts on it."""
    k = to_day(split_date) - s.start
    if k <= 0 or k >= len(s):
        raise SplitOutOfRange(f"split date must leave both parts non-empty (index {k} of {len(s)})")
    return s.slice(0, k), s.slice(k)


@dataclass(frozen=True)
class FoldPlan:
    folds: tuple  # ((train_lo, train_hi), (val_lo, val_hi)) half-open ranges

    def __len__(self) -> int:
        return len(self.folds)

    def __iter__(self):
        return iter(self.folds)

    def to_dict(self) -> list:
        return [{"train": list(tr), "validation": list(va)} for tr, va in self.folds]


def expanding_folds(n: int, k: int = 5, min_train: int | None = None) -> FoldPlan:
    """Fold i trains on ``[0, min_train + i*block)`` and validates on the next block.

    The last block absorbs the remainder so validation covers ``[min_train, n)``.
    """
    if min_train is None:
        min_train = n // 2
    if k < 1 or min_train < 1:
        raise ValueError("need k >= 1 folds and a positive training span")
    if n < min_train + k:
        raise TooShort(f"n={n} is too short for {k} folds after {min_train} training points")
    block = (n - min_train) // k
    folds = []
    for i in range(k):
        lo = min_train + i * block
        hi = n if i == k - 1 else lo + block
        folds.append(((0, lo), (lo, hi)))
    return FoldPlan(tuple(folds))


@dataclass
class GridResult:
    family: str
    score: str
    rows: list = field(default_factory=list)
    best: dict | None = None
    best_score: float = math.inf
    tie_break: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"family": self.family, "score": self.score, "rows": self.rows,
                "best": self.best, "best_score": self.best_score, "tie_break": self.tie_break}


def expand_grid(grid: dict) -> list[dict]:
    """Cartesian product in deterministic (sorted key, listed value) order."""
    if not grid or any(len(v) == 0 for v in grid.values()):
        raise EmptyGrid("grid must name at least one value for every parameter")
    keys = sorted(grid)
    return [dict(zip(keys, combo)) for combo in itertools.product(*(grid[k] for k in keys))]


def grid_search(family: str, grid: dict, s: Series, folds: FoldPlan, score: str = "mse",
                exog=None, base_params: dict | None = None) -> GridResult:
    """Score every configuration by its mean one-step validation metric over the folds.

    A configuration that fails on any fold scores +inf. The best is the
    minimum; ties go to fewer trainable parameters, then grid order.
    """
    from .families import get_family

    if score not in SCORES:
        raise ValueError(f"score must be one of {SCORES}")
    fam = get_family(family)
    configs = expand_grid(grid)
    result = GridResult(family, score)
    for pos, cfg in enumerate(configs):
        params = {**(base_params or {}), **cfg}
        fold_scores, error = [], None
        for (tr_lo, tr_hi), (va_lo, va_hi) in folds:
            try:
                model = fam.fit(s.slice(tr_lo, tr_hi), params,
                                None if exog is None else exog.slice(tr_lo, tr_hi))
                pred = fam.one_step(model, s.slice(0, va_hi),
                                    None if exog is None else exog.slice(0, va_hi))[va_lo:va_hi]
                m = compute_metrics(s.values[va_lo:va_hi], pred, "transformed")
                fold_scores.append(m.score(score))
            except (PowercastError, ValueError, np.linalg.LinAlgError, FloatingPointError) as exc:
                error = f"{type(exc).__name__}: {exc}"
                log.info("grid_search %s %s failed: %s", family, cfg, error)
                break
        mean = math.inf if error or not fold_scores else float(np.mean(fold_scores))
        if not math.isfinite(mean) and error is None:
            error = "non-finite score"
        result.rows.append({"position": pos, "config": cfg, "fold_scores": fold_scores,
                            "mean": mean, "n_params": fam.n_params(params), "error": error})
    ranked = sorted(result.rows, key=lambda r: (r["mean"], r["n_params"], r["position"]))
    best = ranked[0]
    result.best, result.best_score = best["config"], best["mean"]
    result.tie_break = [r["position"] for r in ranked if r["mean"] == best["mean"]]
    return result
