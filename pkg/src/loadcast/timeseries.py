"""Timestamped load series: the carrier type for measurements and forecasts.

Timestamps are timezone-naive local time counted in integer seconds since
1970-01-01 00:00. Days are always 86400 s (no DST arithmetic).
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError

SECONDS_PER_DAY = 86400
SECONDS_PER_WEEK = 7 * SECONDS_PER_DAY

_EPOCH = _dt.datetime(1970, 1, 1)
# 1970-01-01 was a Thursday, i.e. 3 days after a Monday midnight.
_EPOCH_WEEKDAY_OFFSET = 3


@dataclass(frozen=True, order=True)
class Timestamp:
    """Naive local-time instant, integer seconds since 1970-01-01 00:00."""

    epoch_seconds: int

    @classmethod
    def of(cls, year: int, month: int, day: int,
           hour: int = 0, minute: int = 0, second: int = 0) -> "Timestamp":
        dt = _dt.datetime(year, month, day, hour, minute, second)
        return cls(int((dt - _EPOCH).total_seconds()))

    @classmethod
    def from_datetime(cls, dt: _dt.datetime) -> "Timestamp":
        return cls(int((dt.replace(tzinfo=None) - _EPOCH).total_seconds()))

    @classmethod
    def from_date(cls, d: _dt.date) -> "Timestamp":
        return cls.of(d.year, d.month, d.day)

    def to_datetime(self) -> _dt.datetime:
        return _EPOCH + _dt.timedelta(seconds=self.epoch_seconds)

    def date(self) -> _dt.date:
        return self.to_datetime().date()

    @property
    def weekday(self) -> int:
        """ISO weekday, Monday=1 .. Sunday=7."""
        day_index = self.epoch_seconds // SECONDS_PER_DAY
        return (day_index + _EPOCH_WEEKDAY_OFFSET) % 7 + 1

    @property
    def second_of_day(self) -> int:
        return self.epoch_seconds % SECONDS_PER_DAY

    @property
    def second_of_week(self) -> int:
        """Seconds since the most recent Monday 00:00."""
        shifted = self.epoch_seconds + _EPOCH_WEEKDAY_OFFSET * SECONDS_PER_DAY
        return shifted % SECONDS_PER_WEEK

    def __add__(self, seconds: int) -> "Timestamp":
        return Timestamp(self.epoch_seconds + int(seconds))

    def __sub__(self, other):
        if isinstance(other, Timestamp):
            return self.epoch_seconds - other.epoch_seconds
        return Timestamp(self.epoch_seconds - int(other))

    def isoformat(self) -> str:
        return self.to_datetime().isoformat(sep="T")

    def __str__(self) -> str:  # pragma: no cover - convenience
        return self.isoformat()


def weekday_of_epoch(epoch_seconds) -> np.ndarray:
    """Vectorized ISO weekday (1..7) for arrays of epoch seconds."""
    day_index = np.asarray(epoch_seconds, dtype=np.int64) // SECONDS_PER_DAY
    return ((day_index + _EPOCH_WEEKDAY_OFFSET) % 7 + 1).astype(np.int64)


def second_of_week_of_epoch(epoch_seconds) -> np.ndarray:
    """Vectorized seconds-since-Monday-00:00 for arrays of epoch seconds."""
    shifted = (np.asarray(epoch_seconds, dtype=np.int64)
               + _EPOCH_WEEKDAY_OFFSET * SECONDS_PER_DAY)
    return shifted % SECONDS_PER_WEEK


@dataclass(frozen=True)
class GapReport:
    """Outcome of regularization: how much of the grid had to be filled."""

    total_slots: int
    missing_slots: int
    longest_missing_run: int
    duplicate_timestamps: int
    invalid_values: int

    @property
    def missing_pct(self) -> float:
        return 100.0 * self.missing_slots / self.total_slots if self.total_slots else 0.0


@dataclass(frozen=True)
class LoadSeries:
    """Uniformly spaced power sequence; value i sits at start + i*step_seconds."""

    start: Timestamp
    step_seconds: int
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.step_seconds <= 0:
            raise DataError(f"step_seconds must be positive, got {self.step_seconds}")
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise DataError("values must be a non-empty 1-D sequence")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def end(self) -> Timestamp:
        """Exclusive end of the covered span."""
        return self.start + len(self.values) * self.step_seconds

    def timestamps(self) -> np.ndarray:
        """Epoch seconds of every slot as int64."""
        return (self.start.epoch_seconds
                + self.step_seconds * np.arange(len(self.values), dtype=np.int64))

    def timestamp_at(self, i: int) -> Timestamp:
        return self.start + i * self.step_seconds

    def index_of(self, ts: Timestamp) -> int:
        """Slot index of a grid-aligned timestamp inside the covered span."""
        delta = ts - self.start
        if delta % self.step_seconds != 0:
            raise DataError(f"{ts} is not aligned to the {self.step_seconds}s grid")
        i = delta // self.step_seconds
        if not 0 <= i < len(self.values):
            raise DataError(f"{ts} outside covered span [{self.start}, {self.end})")
        return i

    def value_at(self, ts: Timestamp) -> float:
        return float(self.values[self.index_of(ts)])

    def covers(self, ts_from: Timestamp, ts_to: Timestamp) -> bool:
        """Whether [ts_from, ts_to) lies inside the covered span."""
        return self.start <= ts_from and ts_to <= self.end

    def slice(self, ts_from: Timestamp, ts_to: Timestamp) -> "LoadSeries":
        """Sub-series over [ts_from, ts_to); bounds must be grid-aligned."""
        if ts_to <= ts_from:
            raise DataError("empty slice requested")
        i0 = self.index_of(ts_from)
        n = (ts_to - ts_from) // self.step_seconds
        if (ts_to - ts_from) % self.step_seconds != 0:
            raise DataError("slice end not grid-aligned")
        if i0 + n > len(self.values):
            raise DataError(f"slice end {ts_to} beyond covered span {self.end}")
        return LoadSeries(ts_from, self.step_seconds, self.values[i0:i0 + n])

    def window_values(self, ts_from: Timestamp, n: int) -> np.ndarray:
        """n consecutive values starting at a grid-aligned timestamp."""
        i0 = self.index_of(ts_from)
        if i0 + n > len(self.values):
            raise DataError("window extends beyond covered span")
        return self.values[i0:i0 + n]

    def mean_w(self) -> float:
        return float(np.mean(self.values))

    def max_w(self) -> float:
        return float(np.max(self.values))

    def energy_kwh(self) -> float:
        """Integral assuming constant power within each step."""
        return float(np.sum(self.values) * self.step_seconds / 3600.0 / 1000.0)

    def points(self) -> list[tuple[int, float]]:
        return list(zip(self.timestamps().tolist(), self.values.tolist()))


def regularize(raw, step_seconds: int) -> tuple[LoadSeries, GapReport]:
    """Place irregular (timestamp, watts) readings onto a uniform grid.

    Duplicate timestamps collapse last-wins; non-finite or negative readings
    count as missing. Grid slots between valid readings are filled by linear
    interpolation; leading/trailing slots take the nearest valid value. A slot
    counts as missing in the report when no valid reading falls inside
    [slot, slot + step).
    """
    if step_seconds <= 0:
        raise DataError(f"step_seconds must be positive, got {step_seconds}")
    ts_list, val_list = [], []
    for t, v in raw:
        ts_list.append(t.epoch_seconds if isinstance(t, Timestamp) else int(t))
        val_list.append(float(v))
    if not ts_list:
        raise DataError("cannot regularize empty input")

    ts = np.asarray(ts_list, dtype=np.int64)
    vals = np.asarray(val_list, dtype=np.float64)
    order = np.argsort(ts, kind="stable")
    ts, vals = ts[order], vals[order]

    # last occurrence wins for exact duplicate timestamps
    keep = np.ones(len(ts), dtype=bool)
    keep[:-1] = ts[:-1] != ts[1:]
    duplicates = int(len(ts) - keep.sum())
    ts, vals = ts[keep], vals[keep]

    valid = np.isfinite(vals) & (vals >= 0.0)
    invalid = int((~valid).sum())
    if not valid.any():
        raise DataError("all readings missing or invalid")
    vts, vvals = ts[valid], vals[valid]

    # the grid spans every reported timestamp; invalid readings leave gaps
    grid_start = (int(ts[0]) // step_seconds) * step_seconds
    grid_end = -(-int(ts[-1]) // step_seconds) * step_seconds
    n = (grid_end - grid_start) // step_seconds + 1
    grid = grid_start + step_seconds * np.arange(n, dtype=np.int64)

    filled = np.interp(grid, vts.astype(np.float64), vvals)

    # coverage: a valid reading inside [slot, slot+step) claims the slot
    slot_of = (vts - grid_start) // step_seconds
    covered = np.zeros(n, dtype=bool)
    covered[slot_of] = True
    missing = int((~covered).sum())
    longest = _longest_false_run(covered)

    series = LoadSeries(Timestamp(grid_start), step_seconds, filled)
    report = GapReport(total_slots=n, missing_slots=missing,
                       longest_missing_run=longest,
                       duplicate_timestamps=duplicates, invalid_values=invalid)
    return series, report


def _longest_false_run(mask: np.ndarray) -> int:
    longest = run = 0
    for ok in mask:
        run = 0 if ok else run + 1
        longest = max(longest, run)
    return longest


def resample(series: LoadSeries, new_step_seconds: int) -> LoadSeries:
    """Aggregate to a coarser grid by arithmetic mean over each new slot.

    new_step must be an integer multiple of the series step; a trailing
    partial window is dropped.
    """
    if new_step_seconds % series.step_seconds != 0:
        raise DataError(
            f"new step {new_step_seconds}s is not a multiple of {series.step_seconds}s")
    ratio = new_step_seconds // series.step_seconds
    if ratio == 1:
        return series
    n_out = len(series.values) // ratio
    if n_out == 0:
        raise DataError("series shorter than one output slot")
    out = series.values[:n_out * ratio].reshape(n_out, ratio).mean(axis=1)
    return LoadSeries(series.start, new_step_seconds, out)
