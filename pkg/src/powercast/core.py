"""Domain types, calendar handling and CSV ingestion.

Dates are held internally as integer days since 1970-01-01 so that window
and differencing arithmetic stays exact; conversion to ``datetime.date``
happens only at the edges (CSV, JSON, plots).
"""
from __future__ import annotations

import csv
import datetime as _dt
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DuplicateDate,
    LengthMismatch,
    MalformedCsv,
    NonNumericValue,
    UnknownTarget,
)

EPOCH = _dt.date(1970, 1, 1)

MISSING = float("nan")
MISSING_TOKENS = frozenset({"", "NA"})

COLUMNS = ("load", "generation", "deficit", "temperature", "humidity")
TARGETS = ("load", "generation", "deficit")
UNITS = {
    "load": "MWh",
    "generation": "MWh",
    "deficit": "MWh",
    "temperature": "degC",
    "humidity": "%",
}
DEFAULT_EXOG = ("temperature", "humidity")


def to_day(value) -> int:
    """Days since epoch for a ``date``, ISO string or integer."""
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, str):
        value = _dt.date.fromisoformat(value.strip())
    if isinstance(value, _dt.datetime):
        value = value.date()
    if isinstance(value, _dt.date):
        return (value - EPOCH).days
    raise TypeError(f"cannot interpret {value!r} as a date")


def from_day(day: int) -> _dt.date:
    return EPOCH + _dt.timedelta(days=int(day))


def iso(day: int) -> str:
    return from_day(day).isoformat()


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Series:
    """Uniform daily series. ``values`` uses NaN as the missing marker."""

    name: str
    start: int
    values: np.ndarray
    unit: str = "MWh"

    def __post_init__(self):
        object.__setattr__(self, "start", to_day(self.start))
        object.__setattr__(self, "values", _frozen(self.values))
        if self.values.ndim != 1 or self.values.size < 1:
            raise ValueError("a series needs at least one value")
        if not self.unit:
            raise ValueError("unit must be non-empty")

    def __len__(self) -> int:
        return self.values.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self.name == other.name
            and self.start == other.start
            and self.unit == other.unit
            and np.array_equal(self.values, other.values, equal_nan=True)
        )

    @property
    def end(self) -> int:
        """Day number of the last observation."""
        return self.start + len(self) - 1

    @property
    def days(self) -> np.ndarray:
        return np.arange(self.start, self.start + len(self), dtype=np.int64)

    @property
    def dates(self) -> list[_dt.date]:
        return [from_day(d) for d in self.days]

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(self.values)

    def has_missing(self) -> bool:
        return bool(self.missing.any())

    def replace(self, values=None, **changes) -> "Series":
        kwargs = dict(name=self.name, start=self.start, values=self.values, unit=self.unit)
        if values is not None:
            kwargs["values"] = values
        kwargs.update(changes)
        return Series(**kwargs)

    def slice(self, lo: int, hi: int | None = None) -> "Series":
        """Positional slice ``[lo, hi)`` keeping the calendar aligned."""
        hi = len(self) if hi is None else hi
        return Series(self.name, self.start + lo, self.values[lo:hi], self.unit)

    def index_of(self, day) -> int:
        return to_day(day) - self.start


@dataclass(frozen=True, eq=False)
class ExogMatrix:
    """Exogenous regressors aligned row-for-row with a target series."""

    start: int
    names: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "start", to_day(self.start))
        object.__setattr__(self, "names", tuple(self.names))
        vals = np.array(self.values, dtype=float)
        if vals.ndim == 1:
            vals = vals[:, None]
        if vals.shape[1] != len(self.names):
            raise LengthMismatch("column count does not match names")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.values.shape[0]

    def slice(self, lo: int, hi: int | None = None) -> "ExogMatrix":
        hi = len(self) if hi is None else hi
        return ExogMatrix(self.start + lo, self.names, self.values[lo:hi])

    def check_aligned(self, s: Series) -> None:
        if len(self) != len(s) or self.start != s.start:
            raise LengthMismatch(
                f"exogenous rows ({len(self)} from {iso(self.start)}) not aligned "
                f"with series ({len(s)} from {iso(s.start)})"
            )

    def has_missing(self) -> bool:
        return bool(np.isnan(self.values).any())


@dataclass(frozen=True, eq=False)
class Dataset:
    """Aligned daily columns sharing one index."""

    start: int
    columns: Mapping[str, np.ndarray]

    def __post_init__(self):
        object.__setattr__(self, "start", to_day(self.start))
        cols = {}
        length = None
        for name in COLUMNS:
            if name not in self.columns:
                continue
            arr = _frozen(self.columns[name])
            if length is None:
                length = arr.size
            elif arr.size != length:
                raise LengthMismatch("all columns must share one index")
            cols[name] = arr
        unknown = set(self.columns) - set(COLUMNS)
        if unknown:
            raise MalformedCsv(f"unknown columns: {sorted(unknown)}")
        if not cols:
            raise MalformedCsv("dataset has no value columns")
        with np.errstate(invalid="ignore"):
            if "deficit" in cols and np.any(cols["deficit"] < 0):
                raise ValueError("deficit must be non-negative")
            if "humidity" in cols and np.any((cols["humidity"] < 0) | (cols["humidity"] > 100)):
                raise ValueError("humidity must lie in [0, 100]")
        object.__setattr__(self, "columns", cols)

    def __len__(self) -> int:
        return next(iter(self.columns.values())).size

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.start == other.start
            and list(self.columns) == list(other.columns)
            and all(
                np.array_equal(self.columns[k], other.columns[k], equal_nan=True)
                for k in self.columns
            )
        )

    @property
    def days(self) -> np.ndarray:
        return np.arange(self.start, self.start + len(self), dtype=np.int64)

    def column(self, name: str) -> Series:
        if name not in self.columns:
            raise UnknownTarget(name)
        return Series(name, self.start, self.columns[name], UNITS[name])


def parse_dataset(csv_text: str) -> Dataset:
    """Parse the ``date,load,generation,...`` CSV into a gap-filled Dataset.

    Absent calendar days become rows of MISSING values; any subset of the
    known value columns may be present, and unknown columns are ignored.
    """
    reader = csv.reader(io.StringIO(csv_text))
    rows = [r for r in reader if r and any(cell.strip() for cell in r)]
    if not rows:
        raise MalformedCsv("empty input")
    header = [h.strip().lower() for h in rows[0]]
    if "date" not in header:
        raise MalformedCsv("header must contain a 'date' column")
    if len(set(header)) != len(header):
        raise MalformedCsv("duplicate header names")
    keep = [(i, h) for i, h in enumerate(header) if h in COLUMNS]
    if not keep:
        raise MalformedCsv("no known value columns in header")
    date_idx = header.index("date")

    records: dict[int, list[float]] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise MalformedCsv(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
        try:
            day = to_day(row[date_idx])
        except ValueError as exc:
            raise MalformedCsv(f"line {lineno}: bad date {row[date_idx]!r}") from exc
        if day in records:
            raise DuplicateDate(f"line {lineno}: repeated date {row[date_idx].strip()}")
        vals = []
        for i, name in keep:
            cell = row[i].strip()
            if cell in MISSING_TOKENS:
                vals.append(MISSING)
                continue
            try:
                v = float(cell)
            except ValueError:
                raise NonNumericValue(f"line {lineno}: {name}={cell!r}") from None
            if not math.isfinite(v):
                raise NonNumericValue(f"line {lineno}: {name}={cell!r}")
            vals.append(v)
        records[day] = vals
    if not records:
        raise MalformedCsv("no data rows")

    first, last = min(records), max(records)
    n = last - first + 1
    table = np.full((n, len(keep)), MISSING)
    for day, vals in records.items():
        table[day - first] = vals
    ordered = sorted(keep, key=lambda kv: COLUMNS.index(kv[1]))
    cols = {name: table[:, [k for k, _ in keep].index(i)] for i, name in ordered}
    return Dataset(first, cols)


def _fmt(v: float) -> str:
    if math.isnan(v):
        return "NA"
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(float(v))


def serialize_dataset(ds: Dataset) -> str:
    """CSV text that ``parse_dataset`` maps back to an identical Dataset."""
    out = io.StringIO()
    names = list(ds.columns)
    out.write(",".join(["date", *names]) + "\n")
    for k, day in enumerate(ds.days):
        cells = [iso(day)] + [_fmt(ds.columns[c][k]) for c in names]
        out.write(",".join(cells) + "\n")
    return out.getvalue()


def read_dataset(path) -> Dataset:
    with open(path, encoding="utf-8") as fh:
        return parse_dataset(fh.read())


def select_series(ds: Dataset, target: str) -> Series:
    if target not in TARGETS:
        raise UnknownTarget(f"{target!r} is not one of {TARGETS}")
    return ds.column(target)


def exog_matrix(ds: Dataset, names: Sequence[str] = DEFAULT_EXOG) -> ExogMatrix:
    missing = [n for n in names if n not in ds.columns]
    if missing:
        raise UnknownTarget(f"exogenous columns not in dataset: {missing}")
    return ExogMatrix(ds.start, tuple(names), np.column_stack([ds.columns[n] for n in names]))


@dataclass(frozen=True, eq=False)
class Forecast:
    """Point predictions continuing a daily index."""

    origin: int
    predictions: np.ndarray
    transformed: np.ndarray
    model: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "origin", to_day(self.origin))
        object.__setattr__(self, "predictions", _frozen(self.predictions))
        object.__setattr__(self, "transformed", _frozen(self.transformed))
        if self.predictions.shape != self.transformed.shape:
            raise LengthMismatch("original and transformed predictions differ in length")

    @property
    def horizon(self) -> int:
        return self.predictions.size

    @property
    def days(self) -> np.ndarray:
        """Forecast dates: the day after ``origin`` onward."""
        return np.arange(self.origin + 1, self.origin + 1 + self.horizon, dtype=np.int64)

    @property
    def dates(self) -> list[_dt.date]:
        return [from_day(d) for d in self.days]


def concat(parts: Iterable[Series]) -> Series:
    parts = list(parts)
    for a, b in zip(parts, parts[1:]):
        if b.start != a.end + 1:
            raise ValueError("series pieces are not contiguous")
    return parts[0].replace(values=np.concatenate([p.values for p in parts]))
