"""Feature construction for the neural forecasters.

Ten inputs per timestamp: the load one week and one day earlier, ambient
temperature, day-of-week number, weekend and holiday indicators, and sine/
cosine pairs with one full cycle per week and per day (zero phase at Monday
00:00 and local midnight).
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass, field

import numpy as np

from .errors import ColdStartError, DataError
from .timeseries import (SECONDS_PER_DAY, SECONDS_PER_WEEK, LoadSeries,
                         Timestamp, second_of_week_of_epoch, weekday_of_epoch)

FEATURE_NAMES = (
    "lag_week_w", "lag_day_w", "temperature_c", "day_indicator",
    "weekend_flag", "holiday_flag", "sin_week", "cos_week", "sin_day", "cos_day",
)
N_FEATURES = len(FEATURE_NAMES)


@dataclass(frozen=True)
class FeatureMatrix:
    """Per-timestamp feature rows plus the target load (NaN when unknown)."""

    timestamps: np.ndarray = field(repr=False)  # int64 epoch seconds
    X: np.ndarray = field(repr=False)           # (n, N_FEATURES)
    y: np.ndarray = field(repr=False)           # (n,)

    def __post_init__(self):
        ts = np.asarray(self.timestamps, dtype=np.int64)
        X = np.asarray(self.X, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.float64)
        if X.shape != (len(ts), N_FEATURES) or y.shape != (len(ts),):
            raise DataError("inconsistent feature matrix shapes")
        for name, arr in (("timestamps", ts), ("X", X), ("y", y)):
            arr = arr.copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return len(self.timestamps)

    def month_keys(self) -> list[tuple[int, int]]:
        """Distinct (year, month) pairs in chronological order."""
        seen, keys = set(), []
        for t in self.timestamps:
            d = Timestamp(int(t)).date()
            key = (d.year, d.month)
            if key not in seen:
                seen.add(key)
                keys.append(key)
        return keys

    def month_mask(self, key: tuple[int, int]) -> np.ndarray:
        year, month = key
        lo = Timestamp.of(year, month, 1).epoch_seconds
        nxt = (year + 1, 1) if month == 12 else (year, month + 1)
        hi = Timestamp.of(nxt[0], nxt[1], 1).epoch_seconds
        return (self.timestamps >= lo) & (self.timestamps < hi)

    def rows_between(self, ts_from: Timestamp, ts_to: Timestamp) -> "FeatureMatrix":
        mask = ((self.timestamps >= ts_from.epoch_seconds)
                & (self.timestamps < ts_to.epoch_seconds))
        return FeatureMatrix(self.timestamps[mask], self.X[mask], self.y[mask])


def holiday_flags(epoch_seconds: np.ndarray, holidays) -> np.ndarray:
    """Vectorized holiday indicator for an array of epoch seconds."""
    if not holidays:
        return np.zeros(len(epoch_seconds), dtype=np.float64)
    days = np.asarray(epoch_seconds, dtype=np.int64) // SECONDS_PER_DAY
    unique_days = np.unique(days)
    flag_of = {d: float(Timestamp(int(d) * SECONDS_PER_DAY).date() in holidays)
               for d in unique_days}
    return np.array([flag_of[d] for d in days])


def build_features(load: LoadSeries, temperature: LoadSeries, holidays,
                   start: Timestamp, steps: int,
                   include_target: bool = True) -> FeatureMatrix:
    """Feature rows for `steps` timestamps from `start` at the load's step.

    The load history must reach back 7 days before `start` for the weekly lag;
    temperature must cover the requested range. With include_target=False the
    lag lookups only need history up to one day before the last row, so rows
    may extend past the end of the measured load (forecast-horizon features).
    """
    if steps <= 0:
        raise DataError("steps must be positive")
    step = load.step_seconds
    if temperature.step_seconds != step:
        raise DataError("temperature series must share the load's step")

    lag_week_start = start - SECONDS_PER_WEEK
    if lag_week_start < load.start:
        raise ColdStartError(
            "need 7 days of load history before the first feature row",
            first_feasible=load.start + SECONDS_PER_WEEK)

    ts = start.epoch_seconds + step * np.arange(steps, dtype=np.int64)
    lag_week = load.window_values(lag_week_start, steps)
    lag_day = load.window_values(start - SECONDS_PER_DAY, steps)
    temp = temperature.window_values(start, steps)

    day_ind = weekday_of_epoch(ts).astype(np.float64)
    weekend = (day_ind >= 6).astype(np.float64)
    holiday = holiday_flags(ts, holidays)

    sod = (ts % SECONDS_PER_DAY).astype(np.float64)
    sow = second_of_week_of_epoch(ts).astype(np.float64)
    ang_day = 2.0 * np.pi * sod / SECONDS_PER_DAY
    ang_week = 2.0 * np.pi * sow / SECONDS_PER_WEEK

    X = np.column_stack([
        lag_week, lag_day, temp, day_ind, weekend, holiday,
        np.sin(ang_week), np.cos(ang_week), np.sin(ang_day), np.cos(ang_day),
    ])
    if include_target:
        y = np.asarray(load.window_values(start, steps), dtype=np.float64)
    else:
        y = np.full(steps, np.nan)
    return FeatureMatrix(ts, X, y)
