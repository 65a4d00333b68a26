"""Dependency-free SVG line and bar plots."""
from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

W, H = 720, 360
MARGIN = (60, 20, 30, 40)  # left, right, top, bottom
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


def _frame(title: str, x_lo, x_hi, y_lo, y_hi, x_label: str, y_label: str):
    left, right, top, bottom = MARGIN
    pw, ph = W - left - right, H - top - bottom
    if y_hi <= y_lo:
        y_lo, y_hi = y_lo - 1.0, y_hi + 1.0
    if x_hi <= x_lo:
        x_hi = x_lo + 1.0

    def sx(x):
        return left + (np.asarray(x, dtype=float) - x_lo) / (x_hi - x_lo) * pw

    def sy(y):
        return top + ph - (np.asarray(y, dtype=float) - y_lo) / (y_hi - y_lo) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{W / 2}" y="18" text-anchor="middle" font-family="sans-serif" font-size="14">{escape(title)}</text>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for t in _ticks(y_lo, y_hi):
        y = float(sy(t))
        parts.append(f'<line x1="{left - 4}" y1="{_fmt(y)}" x2="{left}" y2="{_fmt(y)}" stroke="black"/>')
        parts.append(f'<text x="{left - 6}" y="{_fmt(y + 4)}" text-anchor="end" font-family="sans-serif" '
                     f'font-size="10">{t:.4g}</text>')
    parts.append(f'<text x="{left + pw / 2}" y="{H - 8}" text-anchor="middle" font-family="sans-serif" '
                 f'font-size="11">{escape(x_label)}</text>')
    parts.append(f'<text x="14" y="{top + ph / 2}" text-anchor="middle" font-family="sans-serif" font-size="11" '
                 f'transform="rotate(-90 14 {top + ph / 2})">{escape(y_label)}</text>')
    return parts, sx, sy


def _legend(parts: list, labels: list[str]):
    left, _, top, _ = MARGIN
    for k, label in enumerate(labels):
        y = top + 10 + 16 * k
        c = PALETTE[k % len(PALETTE)]
        parts.append(f'<line x1="{left + 10}" y1="{y}" x2="{left + 30}" y2="{y}" stroke="{c}" stroke-width="2"/>')
        parts.append(f'<text x="{left + 36}" y="{y + 4}" font-family="sans-serif" font-size="11">{escape(label)}</text>')


def line_plot(series: list[tuple[str, np.ndarray, np.ndarray]], title: str = "",
              x_label: str = "day", y_label: str = "") -> str:
    """``series`` is a list of ``(label, x, y)``; NaN points are skipped."""
    xs = np.concatenate([np.asarray(x, dtype=float) for _, x, _ in series])
    ys = np.concatenate([np.asarray(y, dtype=float) for _, _, y in series])
    ok = np.isfinite(ys)
    y_lo, y_hi = (float(ys[ok].min()), float(ys[ok].max())) if ok.any() else (0.0, 1.0)
    parts, sx, sy = _frame(title, float(xs.min()), float(xs.max()), y_lo, y_hi, x_label, y_label)
    for k, (label, x, y) in enumerate(series):
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        keep = np.isfinite(y)
        pts = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(sx(x[keep]), sy(y[keep])))
        parts.append(f'<polyline fill="none" stroke="{PALETTE[k % len(PALETTE)]}" stroke-width="1.2" '
                     f'points="{pts}"><title>{escape(label)}</title></polyline>')
    _legend(parts, [label for label, _, _ in series])
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def correlogram(acf_vals, pacf_vals, band: float, title: str = "Correlogram") -> str:
    """ACF and PACF stems side by side with a +/- band."""
    lags = np.arange(1, len(acf_vals) + 1, dtype=float)
    parts, sx, sy = _frame(title, 0.0, float(lags[-1]) + 1.0, -1.0, 1.0, "lag", "correlation")
    zero = float(sy(0.0))
    for sign in (1, -1):
        y = float(sy(sign * band))
        parts.append(f'<line x1="{_fmt(float(sx(0)))}" y1="{_fmt(y)}" x2="{_fmt(float(sx(lags[-1] + 1)))}" '
                     f'y2="{_fmt(y)}" stroke="gray" stroke-dasharray="4,3"/>')
    for k, (vals, dx) in enumerate(((acf_vals, -0.15), (pacf_vals, 0.15))):
        c = PALETTE[k]
        for lag, v in zip(lags, vals):
            x = float(sx(lag + dx))
            parts.append(f'<line x1="{_fmt(x)}" y1="{_fmt(zero)}" x2="{_fmt(x)}" y2="{_fmt(float(sy(v)))}" '
                         f'stroke="{c}" stroke-width="2"/>')
    _legend(parts, ["ACF", "PACF"])
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
