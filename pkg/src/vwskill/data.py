"""Time-series ingestion, event labels, lookback windows and chronological splits.

Missing cells are masked, never imputed; any lookback window touching a
masked cell is dropped and counted.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Sequence, Union

import numpy as np

from .core import ArrayLike
from .errors import AlignmentError, DomainError, OrderingError, ParseError, SplitError

DEFAULT_MISSING = ("", "NA", "N/A", "NaN", "nan", "null", "NULL")


@dataclass(frozen=True)
class CsvSchema:
    """Column layout of an input CSV; ``columns=None`` reads every non-timestamp column."""

    timestamp_column: str = "timestamp"
    columns: tuple[str, ...] | None = None
    missing_markers: tuple[str, ...] = DEFAULT_MISSING

    @classmethod
    def from_json(cls, fh) -> CsvSchema:
        doc = json.load(fh)
        cols = doc.get("columns")
        return cls(
            doc.get("timestamp_column", "timestamp"),
            None if cols is None else tuple(cols),
            tuple(doc.get("missing_markers", DEFAULT_MISSING)),
        )


@dataclass(frozen=True)
class TimeSeriesTable:
    timestamps: np.ndarray  # datetime64[s], UTC
    columns: dict[str, np.ndarray]  # float64, NaN where missing

    def __post_init__(self):
        n = len(self.timestamps)
        for name, col in self.columns.items():
            if len(col) != n:
                raise AlignmentError(f"column {name!r} has {len(col)} rows, expected {n}")
        if n > 1 and not np.all(np.diff(self.timestamps.astype("int64")) > 0):
            raise OrderingError("timestamps are not strictly increasing")

    def __len__(self) -> int:
        return len(self.timestamps)

    def mask(self, column: str) -> np.ndarray:
        """True where the cell is missing."""
        return np.isnan(self.columns[column])


def parse_timestamp(text: str) -> np.datetime64:
    """ISO 8601 to a UTC ``datetime64[s]``; naive stamps are taken as UTC."""
    s = text.strip()
    if s.endswith(("Z", "z")):
        s = s[:-1] + "+00:00"
    dt = datetime.fromisoformat(s)
    if dt.tzinfo is not None:
        dt = dt.astimezone(timezone.utc).replace(tzinfo=None)
    return np.datetime64(dt, "s")


def load_csv(path_or_fh, schema: CsvSchema = CsvSchema()) -> TimeSeriesTable:
    """Read a headed CSV into a :class:`TimeSeriesTable`.

    Row numbers in errors are 1-based file lines (the header is line 1).
    """
    if isinstance(path_or_fh, (str, bytes)) or hasattr(path_or_fh, "__fspath__"):
        with open(path_or_fh, newline="") as fh:
            return load_csv(fh, schema)
    reader = csv.reader(path_or_fh)
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise ParseError("empty file") from None
    if schema.timestamp_column not in header:
        raise ParseError(f"missing timestamp column {schema.timestamp_column!r}", row=1)
    wanted = schema.columns
    if wanted is None:
        wanted = tuple(h for h in header if h != schema.timestamp_column)
    for name in wanted:
        if name not in header:
            raise ParseError(f"missing column {name!r}", row=1)
    ts_pos = header.index(schema.timestamp_column)
    positions = [header.index(c) for c in wanted]
    missing = set(schema.missing_markers)

    stamps: list[np.datetime64] = []
    values: list[list[float]] = [[] for _ in wanted]
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, got {len(row)}", row=lineno)
        try:
            ts = parse_timestamp(row[ts_pos])
        except ValueError:
            raise ParseError(f"bad timestamp {row[ts_pos]!r}", row=lineno, column=schema.timestamp_column) from None
        if stamps and ts <= stamps[-1]:
            raise OrderingError(f"timestamp {row[ts_pos]!r} does not follow {stamps[-1]}", row=lineno,
                                column=schema.timestamp_column)
        stamps.append(ts)
        for j, (name, pos) in enumerate(zip(wanted, positions)):
            cell = row[pos].strip()
            if cell in missing:
                values[j].append(math.nan)
                continue
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(f"bad number {cell!r}", row=lineno, column=name) from None
            values[j].append(v if math.isfinite(v) else math.nan)
    return TimeSeriesTable(
        np.array(stamps, dtype="datetime64[s]"),
        {name: np.array(col, dtype=np.float64) for name, col in zip(wanted, values)},
    )


@dataclass(frozen=True)
class PriceSeries:
    closes: np.ndarray
    dates: np.ndarray | None = None

    def __post_init__(self):
        closes = np.asarray(self.closes, dtype=np.float64)
        if closes.ndim != 1 or len(closes) == 0:
            raise DomainError("closes must be a non-empty 1-d series")
        if not np.all(np.isfinite(closes)) or np.any(closes <= 0):
            raise DomainError("prices must be finite and positive")
        object.__setattr__(self, "closes", closes)
        if self.dates is not None:
            dates = np.asarray(self.dates)
            if len(dates) != len(closes):
                raise AlignmentError("dates and closes differ in length")
            if len(dates) > 1 and not np.all(dates[1:] > dates[:-1]):
                raise OrderingError("dates are not strictly increasing")
            object.__setattr__(self, "dates", dates)

    def __len__(self) -> int:
        return len(self.closes)

    @classmethod
    def from_table(cls, table: TimeSeriesTable, column: str = "close") -> PriceSeries:
        if np.any(table.mask(column)):
            raise DomainError(f"price column {column!r} has missing values")
        return cls(table.columns[column], table.timestamps)


def daily_percentage_change(prices: PriceSeries | ArrayLike) -> np.ndarray:
    """``100 * (P[t] - P[t-1]) / P[t-1]`` for t = 1..n-1."""
    if not isinstance(prices, PriceSeries):
        prices = PriceSeries(np.asarray(prices, dtype=np.float64))
    p = prices.closes
    if len(p) < 2:
        raise DomainError("need at least two prices")
    return (p[1:] - p[:-1]) / p[:-1] * 100.0


@dataclass(frozen=True)
class ExceedsThreshold:
    """Label at time t is 1 iff ``column`` exceeds ``threshold`` at t + horizon."""

    column: str
    threshold: float
    horizon: int = 1

    def __post_init__(self):
        if self.horizon < 1:
            raise DomainError("horizon must be >= 1")
        if not math.isfinite(self.threshold):
            raise DomainError("threshold must be finite")


@dataclass(frozen=True)
class DownMovement:
    """Label 1 iff the daily percentage change is strictly below ``level``."""

    level: float = -1.0


LabelRule = Union[ExceedsThreshold, DownMovement]


@dataclass(frozen=True)
class LabelResult:
    labels: np.ndarray  # int8; 0 where the target is missing
    missing: np.ndarray  # bool
    dropped_tail: int = 0


def make_labels(source: TimeSeriesTable | ArrayLike, rule: LabelRule) -> LabelResult:
    if isinstance(rule, DownMovement):
        if isinstance(source, TimeSeriesTable):
            raise DomainError("DownMovement labels need a percentage-change series")
        eta = np.asarray(source, dtype=np.float64)
        missing = np.isnan(eta)
        return LabelResult(((eta < rule.level) & ~missing).astype(np.int8), missing, 0)

    if isinstance(source, TimeSeriesTable):
        target = source.columns[rule.column]
    else:
        target = np.asarray(source, dtype=np.float64)
    h = rule.horizon
    ahead = target[h:]
    missing = np.isnan(ahead)
    labels = ((ahead > rule.threshold) & ~missing).astype(np.int8)
    return LabelResult(labels, missing, min(h, len(target)))


@dataclass(frozen=True)
class WindowResult:
    features: np.ndarray  # (rows, lookback * n_columns)
    end_index: np.ndarray  # time index of the newest observation in each row
    dropped: int
    names: tuple[str, ...] = field(default_factory=tuple)


def windowed_features(
    source: TimeSeriesTable | ArrayLike, lookback: int, feature_columns: Sequence[str] | None = None
) -> WindowResult:
    """Stack the ``lookback`` most recent values of each column, oldest first.

    Row layout is column-major: all lags of the first column, then the
    second, and so on.
    """
    if lookback < 1:
        raise DomainError("lookback must be >= 1")
    if isinstance(source, TimeSeriesTable):
        names = tuple(feature_columns) if feature_columns is not None else tuple(source.columns)
        cols = [source.columns[c] for c in names]
    else:
        arr = np.asarray(source, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr[:, None]
        names = tuple(feature_columns) if feature_columns is not None else tuple(f"x{j}" for j in range(arr.shape[1]))
        cols = [arr[:, j] for j in range(arr.shape[1])]
    n = len(cols[0])
    if n < lookback:
        raise DomainError(f"series of length {n} is shorter than the lookback {lookback}")
    ends = np.arange(lookback - 1, n)
    blocks = [np.lib.stride_tricks.sliding_window_view(c, lookback) for c in cols]
    x = np.concatenate(blocks, axis=1)
    keep = ~np.any(np.isnan(x), axis=1)
    if not keep.any():
        raise DomainError("no complete windows")
    lag_names = tuple(f"{c}_lag{lookback - 1 - j}" for c in names for j in range(lookback))
    return WindowResult(x[keep], ends[keep], int(np.count_nonzero(~keep)), lag_names)


@dataclass(frozen=True)
class Dataset:
    x: np.ndarray
    y: np.ndarray
    end_index: np.ndarray  # time index of the newest feature observation
    dropped: int


def build_dataset(window: WindowResult, labels: LabelResult) -> Dataset:
    """Pair each window with the label of the event after its newest observation.

    ``labels.labels[t]`` must describe the event following time t.  Rows
    without a label, or with a missing target, are dropped.
    """
    ok = window.end_index < len(labels.labels)
    ends = window.end_index[ok]
    ok2 = ~labels.missing[ends]
    ends = ends[ok2]
    x = window.features[ok][ok2]
    dropped = window.dropped + int(np.count_nonzero(~ok)) + int(np.count_nonzero(~ok2))
    return Dataset(x, labels.labels[ends].astype(np.int8), ends, dropped)


def stock_dataset(prices: PriceSeries | ArrayLike, lookback: int = 5, level: float = -1.0) -> Dataset:
    """Features: ``lookback`` days of percentage change up to day t; label: day t+1 is a down day.

    ``end_index`` refers to positions in the percentage-change series, which
    is one shorter than the price series (change index t is price day t+1).
    """
    eta = daily_percentage_change(prices)
    win = windowed_features(eta, lookback, ("eta",))
    down = make_labels(eta, DownMovement(level))
    # label for window ending at t is the move on the following day
    shifted = LabelResult(down.labels[1:], down.missing[1:], 1)
    return build_dataset(win, shifted)


def chronological_split(
    n: int, boundaries: tuple[float, float] | tuple[np.datetime64 | str, np.datetime64 | str],
    timestamps: np.ndarray | None = None,
) -> tuple[range, range, range]:
    """Contiguous train/validation/test ranges (0-based, half-open).

    Fractional boundaries ``(f1, f2)`` cut at ``floor(f * n)``.  Timestamp
    boundaries ``(t1, t2)`` put ``ts < t1`` in train, ``t1 <= ts < t2`` in
    validation and the rest in test.
    """
    b1, b2 = boundaries
    if isinstance(b1, (int, float)) and isinstance(b2, (int, float)) and not isinstance(b1, bool):
        if not 0.0 <= b1 <= b2 <= 1.0:
            raise DomainError(f"split fractions {boundaries} must satisfy 0 <= f1 <= f2 <= 1")
        i1 = math.floor(b1 * n + 1e-9)
        i2 = math.floor(b2 * n + 1e-9)
    else:
        if timestamps is None:
            raise DomainError("timestamp boundaries need the timestamps")
        ts = np.asarray(timestamps, dtype="datetime64[s]")
        if len(ts) != n:
            raise AlignmentError(f"{len(ts)} timestamps for {n} rows")
        t1 = parse_timestamp(b1) if isinstance(b1, str) else np.datetime64(b1, "s")
        t2 = parse_timestamp(b2) if isinstance(b2, str) else np.datetime64(b2, "s")
        if t2 < t1:
            raise DomainError("split boundaries are out of order")
        i1 = int(np.searchsorted(ts, t1, side="left"))
        i2 = int(np.searchsorted(ts, t2, side="left"))
    parts = (range(0, i1), range(i1, i2), range(i2, n))
    for name, r in zip(("train", "validation", "test"), parts):
        if len(r) == 0:
            raise SplitError(name)
    return parts


@dataclass(frozen=True)
class Standardizer:
    mean: np.ndarray
    std: np.ndarray

    @classmethod
    def fit(cls, x: np.ndarray) -> Standardizer:
        x = np.asarray(x, dtype=np.float64)
        std = x.std(axis=0)
        return cls(x.mean(axis=0), np.where(std > 0, std, 1.0))

    def transform(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=np.float64) - self.mean) / self.std

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "std": self.std.tolist()}


def read_series(path_or_fh, column: str | None = None) -> np.ndarray:
    """Read a single numeric series from CSV.

    A header row is optional.  With a header, ``column`` picks the column;
    otherwise a column named ``value`` is used, else the last column.
    """
    if isinstance(path_or_fh, (str, bytes)) or hasattr(path_or_fh, "__fspath__"):
        with open(path_or_fh, newline="") as fh:
            return read_series(fh, column)
    rows = [r for r in csv.reader(path_or_fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise ParseError("empty series file")
    header = None
    try:
        float(rows[0][-1])
    except ValueError:
        header = [h.strip() for h in rows[0]]
        rows = rows[1:]
    if header is None:
        if column is not None:
            raise ParseError(f"file has no header, cannot select column {column!r}")
        pos = len(rows[0]) - 1
    elif column is not None:
        if column not in header:
            raise ParseError(f"missing column {column!r}", row=1)
        pos = header.index(column)
    else:
        pos = header.index("value") if "value" in header else len(header) - 1
    out = np.empty(len(rows))
    first = 2 if header else 1
    for k, row in enumerate(rows):
        try:
            out[k] = float(row[pos])
        except (ValueError, IndexError):
            raise ParseError("bad number", row=first + k, column=None if header is None else header[pos]) from None
    if len(out) == 0:
        raise ParseError("series file has no values")
    return out


def write_series(fh, values: ArrayLike, name: str = "value", index: Sequence | None = None) -> None:
    values = np.asarray(values)
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["index", name])
    idx = range(len(values)) if index is None else index
    for i, v in zip(idx, values.tolist()):
        writer.writerow([i, repr(v) if isinstance(v, float) else v])
