"""Daily electricity load, generation and deficit forecasting."""
__version__ = "0.1.0"

from .core import Dataset, ExogMatrix, Forecast, Series, parse_dataset, read_dataset, serialize_dataset
from .diagnostics import acf, adf_test, pacf
from .evaluation import compute_metrics, expanding_folds, grid_search, train_test_split
from .preprocess import TransformChain, difference, integrate, preprocess, savgol_smooth
from .stat_models import ArimaOrder, auto_arima, fit_arima, forecast_arima, ses_forecast
from .synth import SynthConfig, generate_synthetic

__all__ = [
    "ArimaOrder", "Dataset", "ExogMatrix", "Forecast", "Series", "SynthConfig", "TransformChain",
    "acf", "adf_test", "auto_arima", "compute_metrics", "difference", "expanding_folds", "fit_arima",
    "forecast_arima", "generate_synthetic", "grid_search", "integrate", "pacf", "parse_dataset",
    "preprocess", "read_dataset", "savgol_smooth", "serialize_dataset", "ses_forecast",
    "train_test_split",
]
