"""Windowed machine-learning forecasters: a single-layer LSTM and boosted trees."""
from .gbt import GbtModel, gbt_fit, gbt_forecast
from .lstm import LstmModel, LstmParams, TrainConfig, lstm_cell_step, lstm_fit, lstm_forecast
from .windows import Climatology, Scaler, SupervisedSet, WindowSpec, make_windows

__all__ = [
    "Climatology", "GbtModel", "LstmModel", "LstmParams", "Scaler", "SupervisedSet", "TrainConfig",
    "WindowSpec", "gbt_fit", "gbt_forecast", "lstm_cell_step", "lstm_fit", "lstm_forecast", "make_windows",
]
