"""Data ingestion: price CSVs, exchange-rate construction, panel alignment.

Builds the aligned T x n observation matrix the rest of the pipeline
consumes. Dates are plain calendar days; keeping all inputs in one time
zone is the caller's responsibility.
"""

from __future__ import annotations

import csv
import datetime as dt
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    AlignmentError,
    DomainError,
    DuplicateDateError,
    EmptyInputError,
    EmptySliceError,
    GapError,
    InsufficientDataError,
    RowParseError,
    SchemaError,
)

__all__ = [
    "RawSeries",
    "Panel",
    "SeriesStats",
    "StatsTable",
    "load_price_csv",
    "compute_cer",
    "weekend_fill",
    "log_transform",
    "align_panel",
    "slice_period",
    "summary_stats",
    "read_panel_csv",
    "write_panel_csv",
]


@dataclass(frozen=True)
class RawSeries:
    """A single named time series of daily observations."""

    name: str
    dates: tuple[dt.date, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "dates", tuple(self.dates))
        if len(self.dates) != values.size:
            raise ValueError(
                f"{self.name}: {len(self.dates)} dates but {values.size} values"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError(f"{self.name}: non-finite values")
        for prev, cur in zip(self.dates, self.dates[1:]):
            if cur == prev:
                raise DuplicateDateError(f"{self.name}: duplicate date {cur}")
            if cur < prev:
                raise ValueError(f"{self.name}: dates not increasing at {cur}")

    def __len__(self) -> int:
        return len(self.dates)


@dataclass(frozen=True)
class Panel:
    """Aligned observation matrix: T dates by n named variables."""

    names: tuple[str, ...]
    dates: tuple[dt.date, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "dates", tuple(self.dates))
        t, n = values.shape if values.ndim == 2 else (0, 0)
        if values.ndim != 2:
            raise ValueError("panel values must be a 2-D matrix")
        if len(self.names) != n:
            raise ValueError(f"{len(self.names)} names for {n} columns")
        if len(self.dates) != t:
            raise ValueError(f"{len(self.dates)} dates for {t} rows")
        if t < n + 1:
            raise InsufficientDataError(
                f"panel needs at least n+1 = {n + 1} rows to be estimable, got {t}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("panel contains non-finite cells")
        for prev, cur in zip(self.dates, self.dates[1:]):
            if cur <= prev:
                raise ValueError(f"panel dates not strictly increasing at {cur}")

    @property
    def n_obs(self) -> int:
        return self.values.shape[0]

    @property
    def n_vars(self) -> int:
        return self.values.shape[1]

    def column(self, name: str) -> RawSeries:
        j = self.names.index(name)
        return RawSeries(name, self.dates, self.values[:, j].copy())


@dataclass(frozen=True)
class SeriesStats:
    """Descriptive statistics of one variable."""

    name: str
    n: int
    min: float
    q1: float
    median: float
    mean: float
    q3: float
    max: float
    sd: float
    skewness: float
    kurtosis: float


@dataclass(frozen=True)
class StatsTable:
    """Per-variable descriptive statistics for a panel."""

    rows: tuple[SeriesStats, ...]

    CSV_HEADER = (
        "Variables,N,Min,Q1,Median,Mean,Q3,Max,S.D.,Skewness,Kurtosis"
    )

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for r in self.rows:
            lines.append(
                f"{r.name},{r.n},"
                + ",".join(
                    format(v, ".6g")
                    for v in (r.min, r.q1, r.median, r.mean, r.q3, r.max, r.sd, r.skewness, r.kurtosis)
                )
            )
        return "\n".join(lines) + "\n"


def _parse_date(text: str, line: int) -> dt.date:
    text = text.strip()
    try:
        return dt.date.fromisoformat(text[:10]) if "T" in text else dt.date.fromisoformat(text)
    except ValueError:
        raise RowParseError(f"unparseable date {text!r}", line) from None


def load_price_csv(path, date_column: str = "Date", value_column: str = "Close") -> RawSeries:
    """Read one (date, value) series from a CSV file with a header row.

    Rows are returned sorted by date; a duplicated date is an error.
    """
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot open {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyInputError(f"{path}: file is empty") from None
        header = [h.strip() for h in header]
        for col in (date_column, value_column):
            if col not in header:
                raise SchemaError(f"{path}: missing column {col!r} in header {header}")
        d_idx = header.index(date_column)
        v_idx = header.index(value_column)

        points: list[tuple[dt.date, float]] = []
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) <= max(d_idx, v_idx):
                raise RowParseError(f"expected {len(header)} fields, got {len(row)}", line_no)
            date = _parse_date(row[d_idx], line_no)
            raw = row[v_idx].strip()
            try:
                value = float(raw)
            except ValueError:
                raise RowParseError(f"unparseable value {raw!r}", line_no) from None
            if not math.isfinite(value):
                raise RowParseError(f"non-finite value {raw!r}", line_no)
            points.append((date, value))

    if not points:
        raise EmptyInputError(f"{path}: no data rows")
    points.sort(key=lambda p: p[0])
    for (d1, _), (d2, _) in zip(points, points[1:]):
        if d1 == d2:
            raise DuplicateDateError(f"{path}: duplicate date {d1}")
    name = str(path)
    dates, values = zip(*points)
    return RawSeries(name, dates, np.array(values))


def compute_cer(p_eur: RawSeries, p_usd: RawSeries, name: str | None = None) -> RawSeries:
    """Exchange rate implied by one asset priced in two currencies.

    For every date both series share, the value is the EUR price divided
    by the USD price, which cancels the asset's own price level.
    """
    if len(p_eur) == 0 or len(p_usd) == 0:
        raise EmptyInputError("both input series must be nonempty")
    usd_by_date = dict(zip(p_usd.dates, p_usd.values))
    shared = [d for d in p_eur.dates if d in usd_by_date]
    if not shared:
        raise AlignmentError(f"{p_eur.name} and {p_usd.name} share no dates")
    eur_by_date = dict(zip(p_eur.dates, p_eur.values))
    out = []
    for d in shared:
        denom = usd_by_date[d]
        if denom <= 0:
            raise DomainError(f"USD price must be positive on {d}, got {denom}")
        out.append(eur_by_date[d] / denom)
    if name is None:
        name = f"{p_eur.name}/{p_usd.name}"
    return RawSeries(name, shared, np.array(out))


def weekend_fill(series: RawSeries, start: dt.date, end: dt.date) -> RawSeries:
    """Forward-fill a series onto every calendar day in [start, end].

    Days without an observation carry the most recent preceding value
    (the Friday close covers the weekend); observed values are kept.
    """
    if len(series) == 0:
        raise EmptyInputError(f"{series.name}: empty series")
    if start > end:
        raise ValueError(f"start {start} after end {end}")
    if start < series.dates[0]:
        raise GapError(
            f"{series.name}: range starts {start} but first observation is {series.dates[0]}"
        )
    by_date = dict(zip(series.dates, series.values))
    dates: list[dt.date] = []
    values: list[float] = []
    # seed the carry with the last observation at or before `start`
    carry = None
    for d, v in zip(series.dates, series.values):
        if d > start:
            break
        carry = v
    day = start
    while day <= end:
        if day in by_date:
            carry = by_date[day]
        dates.append(day)
        values.append(carry)
        day += dt.timedelta(days=1)
    return RawSeries(series.name, dates, np.array(values))


def log_transform(series: RawSeries) -> RawSeries:
    """Natural log of every value; values must be positive."""
    bad = np.nonzero(series.values <= 0)[0]
    if bad.size:
        d = series.dates[bad[0]]
        raise DomainError(f"{series.name}: nonpositive value {series.values[bad[0]]} on {d}")
    return RawSeries(series.name, series.dates, np.log(series.values))


def align_panel(series_list: list[RawSeries]) -> Panel:
    """Intersect the date sets of two or more series into one panel."""
    if len(series_list) < 2:
        raise ValueError("align_panel needs at least two series")
    shared = set(series_list[0].dates)
    for s in series_list[1:]:
        shared &= set(s.dates)
    if not shared:
        raise AlignmentError(
            "series share no dates: " + ", ".join(s.name for s in series_list)
        )
    dates = sorted(shared)
    columns = []
    for s in series_list:
        by_date = dict(zip(s.dates, s.values))
        columns.append([by_date[d] for d in dates])
    values = np.array(columns).T
    return Panel(tuple(s.name for s in series_list), dates, values)


def slice_period(panel: Panel, start: dt.date, end: dt.date) -> Panel:
    """Rows of the panel with start <= date <= end."""
    if start > end:
        raise ValueError(f"start {start} after end {end}")
    keep = [i for i, d in enumerate(panel.dates) if start <= d <= end]
    if not keep:
        raise EmptySliceError(f"no observations in [{start}, {end}]")
    dates = tuple(panel.dates[i] for i in keep)
    return Panel(panel.names, dates, panel.values[keep, :])


def _column_stats(name: str, x: np.ndarray) -> SeriesStats:
    n = x.size
    if n < 2:
        raise InsufficientDataError(f"{name}: need at least 2 observations, got {n}")
    q1, med, q3 = np.percentile(x, [25, 50, 75])  # linear interpolation
    sd = float(np.std(x, ddof=1))
    centered = x - x.mean()
    m2 = float(np.mean(centered**2))
    if m2 == 0.0:
        skew, kurt = 0.0, 0.0  # constant column: defined as 0 so the table is total
    else:
        skew = float(np.mean(centered**3) / m2**1.5)
        kurt = float(np.mean(centered**4) / m2**2 - 3.0)
    return SeriesStats(
        name=name,
        n=n,
        min=float(x.min()),
        q1=float(q1),
        median=float(med),
        mean=float(x.mean()),
        q3=float(q3),
        max=float(x.max()),
        sd=sd,
        skewness=skew,
        kurtosis=kurt,
    )


def summary_stats(panel: Panel) -> StatsTable:
    """Count, range, quartiles, moments per panel column.

    Quartiles use linear interpolation between order statistics, the
    standard deviation uses the N-1 divisor, and skewness/kurtosis are
    the divisor-N standardized third and fourth moments (kurtosis in
    excess of 3).
    """
    rows = tuple(
        _column_stats(name, panel.values[:, j]) for j, name in enumerate(panel.names)
    )
    return StatsTable(rows)


def write_panel_csv(panel: Panel, path) -> None:
    """Panel as CSV: a "date" column followed by one column per variable."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["date", *panel.names])
        for i, d in enumerate(panel.dates):
            writer.writerow([d.isoformat(), *(repr(float(v)) for v in panel.values[i])])


def read_panel_csv(path) -> Panel:
    """Read a panel previously written by write_panel_csv."""
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot open {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyInputError(f"{path}: file is empty") from None
        if not header or header[0].strip() != "date":
            raise SchemaError(f"{path}: first column must be 'date', got {header[:1]}")
        names = [h.strip() for h in header[1:]]
        if not names:
            raise SchemaError(f"{path}: no variable columns")
        dates: list[dt.date] = []
        rows: list[list[float]] = []
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise RowParseError(f"expected {len(header)} fields, got {len(row)}", line_no)
            dates.append(_parse_date(row[0], line_no))
            try:
                rows.append([float(c) for c in row[1:]])
            except ValueError:
                raise RowParseError("unparseable value", line_no) from None
    if not rows:
        raise EmptyInputError(f"{path}: no data rows")
    return Panel(names, dates, np.array(rows))
