"""Cleaning chain (imputation, smoothing, log) and seasonal differencing.

Every invertible step has an exact inverse so forecasts made on the
transformed scale can be mapped back to MWh.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .core import Series
from .errors import (
    AllMissing,
    BadOrder,
    HeadMismatch,
    NoLogStep,
    NonPositiveAfterOffset,
    TooShort,
    WindowTooLarge,
)

log = logging.getLogger(__name__)

DEFAULT_SAVGOL_WINDOW = 7
DEFAULT_SAVGOL_ORDER = 2


def interpolate_missing(s: Series) -> Series:
    """Linear interpolation of interior gaps, nearest-value extension at the edges."""
    y = s.values
    ok = ~np.isnan(y)
    if not ok.any():
        raise AllMissing(f"series {s.name!r} has no observed values")
    if ok.all():
        return s
    idx = np.arange(y.size)
    first, last = idx[ok][0], idx[ok][-1]
    if first > 0 or last < y.size - 1:
        log.info("%s: extending %d leading / %d trailing missing values",
                 s.name, first, y.size - 1 - last)
    filled = np.interp(idx, idx[ok], y[ok])
    # np.interp recomputes observed points; keep them bit-identical
    filled[ok] = y[ok]
    return s.replace(values=filled)


def _savgol_weights(offsets: np.ndarray, polyorder: int, at: float = 0.0) -> np.ndarray:
    """Weights w such that w @ window equals the LSQ polynomial evaluated at ``at``."""
    deg = min(polyorder, offsets.size - 1)
    scale = max(1.0, float(np.abs(offsets).max()))
    A = np.vander(offsets / scale, deg + 1, increasing=True)
    e = np.vander(np.array([at / scale]), deg + 1, increasing=True)[0]
    return e @ np.linalg.pinv(A)


def savgol_smooth(s: Series, window: int = DEFAULT_SAVGOL_WINDOW,
                  polyorder: int = DEFAULT_SAVGOL_ORDER) -> Series:
    """Savitzky-Golay smoothing with truncated-window fits at the boundaries.

    Interior points use the centred ``window``-point least-squares
    polynomial; within ``window // 2`` of either end the same-degree
    polynomial is fit to whatever part of the window lies inside the
    series, so no data is invented past the edges.
    """
    if window < 3 or window % 2 == 0:
        raise WindowTooLarge(f"window must be an odd integer >= 3, got {window}")
    if polyorder < 0 or polyorder >= window:
        raise BadOrder(f"polyorder {polyorder} must be in [0, window)")
    y = s.values
    if np.isnan(y).any():
        raise ValueError("savgol_smooth needs a series without missing values")
    n = y.size
    if window > n:
        raise WindowTooLarge(f"window {window} exceeds series length {n}")
    half = window // 2
    out = np.empty(n)
    w = _savgol_weights(np.arange(-half, half + 1, dtype=float), polyorder)
    if n > 2 * half:
        # sliding dot product: out[i] = sum_j w[j] * y[i - half + j]
        out[half:n - half] = np.convolve(y, w[::-1], mode="valid")
    for i in list(range(min(half, n))) + list(range(max(n - half, half), n)):
        lo, hi = max(0, i - half), min(n, i + half + 1)
        wi = _savgol_weights(np.arange(lo - i, hi - i, dtype=float), polyorder)
        out[i] = wi @ y[lo:hi]
    return s.replace(values=out)


@dataclass(frozen=True)
class TransformChain:
    """Ordered record of the transforms applied to a series.

    Steps are plain dicts so the chain serialises straight into model
    artifacts. Only ``log`` steps are value-wise invertible; ``interpolate``
    and ``savgol`` are recorded for provenance.
    """

    steps: tuple = field(default_factory=tuple)

    def then(self, kind: str, **params) -> "TransformChain":
        return TransformChain(self.steps + ({"kind": kind, **params},))

    @property
    def log_step(self) -> dict | None:
        for step in reversed(self.steps):
            if step["kind"] == "log":
                return step
        return None

    def forward(self, values) -> np.ndarray:
        v = np.asarray(values, dtype=float)
        for step in self.steps:
            if step["kind"] == "log":
                v = np.log1p(v + step["offset"])
        return v

    def inverse(self, values) -> np.ndarray:
        v = np.asarray(values, dtype=float)
        for step in reversed(self.steps):
            if step["kind"] == "log":
                v = np.expm1(v) - step["offset"]
        return v

    def to_dict(self) -> list:
        return [dict(step) for step in self.steps]

    @classmethod
    def from_dict(cls, steps) -> "TransformChain":
        return cls(tuple(dict(step) for step in steps))


def log_transform(s: Series, offset: float = 0.0) -> Series:
    """``y -> ln(1 + y + offset)``; the offset defaults to zero."""
    shifted = s.values + offset
    if np.nanmin(shifted) <= -1.0:
        raise NonPositiveAfterOffset(
            f"{s.name}: min value {np.nanmin(s.values)} with offset {offset} is <= -1"
        )
    return s.replace(values=np.log1p(shifted))


def invert_log(s: Series, chain: TransformChain) -> Series:
    step = chain.log_step
    if step is None:
        raise NoLogStep("transform chain has no log step to invert")
    return s.replace(values=np.expm1(s.values) - step["offset"])


def preprocess(s: Series, interpolate: bool = True, savgol: tuple[int, int] | None = None,
               log_offset: float | None = 0.0) -> tuple[Series, TransformChain]:
    """Run the cleaning chain; returns the transformed series and its chain.

    ``savgol=None`` skips smoothing, ``log_offset=None`` skips the log.
    """
    chain = TransformChain()
    if interpolate:
        s = interpolate_missing(s)
        chain = chain.then("interpolate")
    if savgol is not None:
        s = savgol_smooth(s, *savgol)
        chain = chain.then("savgol", window=int(savgol[0]), polyorder=int(savgol[1]))
    if log_offset is not None:
        s = log_transform(s, log_offset)
        chain = chain.then("log", offset=float(log_offset))
    return s, chain


def difference_poly(d: int, D: int, period: int) -> np.ndarray:
    """Integer coefficients of ``(1 - B)^d (1 - B^s)^D`` in increasing powers of B."""
    poly = np.array([1], dtype=np.int64)
    seasonal = np.zeros(period + 1, dtype=np.int64)
    seasonal[0], seasonal[period] = 1, -1
    for _ in range(D):
        poly = np.convolve(poly, seasonal)
    for _ in range(d):
        poly = np.convolve(poly, np.array([1, -1], dtype=np.int64))
    return poly


@dataclass(frozen=True, eq=False)
class DifferencedSeries:
    values: np.ndarray
    head: np.ndarray
    tail: np.ndarray
    d: int
    D: int
    period: int
    start: int = 0

    @property
    def lost(self) -> int:
        return self.d + self.D * self.period

    def at_end(self) -> "DifferencedSeries":
        """The same series anchored on its last values, for forecasting."""
        return DifferencedSeries(np.empty(0), self.tail, self.tail, self.d, self.D,
                                 self.period, self.start + self.lost + self.values.size)


def difference(s: Series | np.ndarray, d: int = 1, D: int = 0, s_period: int = 1) -> DifferencedSeries:
    """Apply ``(1 - B^s)^D`` then ``(1 - B)^d``, keeping head and tail for inversion."""
    if d < 0 or D < 0 or s_period < 1:
        raise ValueError("orders must be non-negative and the period positive")
    start = s.start if isinstance(s, Series) else 0
    y = s.values if isinstance(s, Series) else np.asarray(s, dtype=float)
    if np.isnan(y).any():
        raise ValueError("cannot difference a series with missing values")
    m = d + D * s_period
    if y.size <= m:
        raise TooShort(f"length {y.size} must exceed d + D*s = {m}")
    w = y.copy()
    for _ in range(D):
        w = w[s_period:] - w[:-s_period]
    for _ in range(d):
        w = w[1:] - w[:-1]
    return DifferencedSeries(w, y[:m].copy(), y[y.size - m:].copy(), d, D, s_period, start)


def integrate(head, diffs, d: int, D: int, period: int) -> np.ndarray:
    """Rebuild levels from differences given the ``d + D*s`` values preceding them."""
    poly = difference_poly(d, D, period)
    m = poly.size - 1
    head = np.asarray(head, dtype=float)
    if head.size != m:
        raise HeadMismatch(f"need {m} preceding values for d={d}, D={D}, s={period}; got {head.size}")
    buf = np.concatenate([head, np.zeros(len(diffs))])
    coef = poly[1:][::-1].astype(float)
    for k, w in enumerate(np.asarray(diffs, dtype=float)):
        t = m + k
        buf[t] = w - coef @ buf[t - m:t] if m else w
    return buf[m:]


def invert_difference(ds: DifferencedSeries, future_diffs) -> np.ndarray:
    """Integrate ``future_diffs`` forward from the head values of ``ds``."""
    return integrate(ds.head, future_diffs, ds.d, ds.D, ds.period)
