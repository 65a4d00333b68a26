"""Canonical JSON artifacts and atomic file writes.

Every file the CLI emits goes through :func:`write_text`, which writes a
sibling temp file and renames it into place. JSON is dumped with sorted
keys and a fixed float format so identical runs give identical bytes.
"""
from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import ConfigError


def _plain(obj):
    """Recursively convert numpy scalars/arrays and tuples; non-finite floats become None."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def dumps(obj) -> str:
    return json.dumps(_plain(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def save_json(path, obj) -> Path:
    return write_text(path, dumps(obj))


def load_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: not valid JSON ({exc})") from None


def model_from_dict(d: dict):
    """Rebuild a fitted model from its artifact dict (dispatch on ``kind``)."""
    from .families import NaiveModel
    from .ml.gbt import GbtModel
    from .ml.lstm import LstmModel
    from .stat_models import ArimaFit, SesFit

    kinds = {"arima": ArimaFit, "ses": SesFit, "lstm": LstmModel, "gbt": GbtModel, "naive": NaiveModel}
    kind = d.get("kind") if isinstance(d, dict) else None
    if kind not in kinds:
        raise ConfigError(f"not a model artifact (kind={kind!r})")
    return kinds[kind].from_dict(d)


def load_model(path):
    d = load_json(path)
    return model_from_dict(d.get("model", d))
