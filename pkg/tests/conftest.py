import datetime as dt

import numpy as np
import pytest

from loadcast.timeseries import SECONDS_PER_DAY, SECONDS_PER_WEEK, LoadSeries, Timestamp

MONDAY = dt.date(2019, 1, 7)  # a Monday, used as the default span start


def make_series(days, step_s=300, start_date=MONDAY, fn=None, seed=0):
    """Uniform series over `days`; fn(second_of_week) -> watts, default smooth
    weekly pattern. Deterministic per seed when noise is requested via fn."""
    start = Timestamp.from_date(start_date)
    n = days * SECONDS_PER_DAY // step_s
    ts = start.epoch_seconds + step_s * np.arange(n, dtype=np.int64)
    sow = (ts + 3 * SECONDS_PER_DAY) % SECONDS_PER_WEEK
    if fn is None:
        values = 20_000.0 + 8_000.0 * np.sin(2 * np.pi * sow / SECONDS_PER_WEEK)
    else:
        values = fn(sow.astype(np.float64))
    return LoadSeries(start, step_s, values)


def weekly_pattern(sow):
    """Smooth strictly positive load shape, exactly 7-day periodic."""
    sod = sow % SECONDS_PER_DAY
    day = sow // SECONDS_PER_DAY
    daily = 1.0 + 0.8 * np.sin(2 * np.pi * (sod - 6 * 3600) / SECONDS_PER_DAY)
    weekend = np.where(day >= 5, 0.45, 1.0)
    return 20_000.0 * daily * weekend + 4_000.0


def periodic_noisy_series(days, noise=0.05, seed=0, step_s=300,
                          start_date=MONDAY):
    """Exact 7-day periodic pattern with multiplicative noise."""
    rng = np.random.default_rng(seed)
    start = Timestamp.from_date(start_date)
    n = days * SECONDS_PER_DAY // step_s
    ts = start.epoch_seconds + step_s * np.arange(n, dtype=np.int64)
    sow = ((ts + 3 * SECONDS_PER_DAY) % SECONDS_PER_WEEK).astype(np.float64)
    base = weekly_pattern(sow)
    values = base * (1.0 + noise * rng.standard_normal(n))
    return LoadSeries(start, step_s, np.maximum(values, 0.0))


def flat_temperature(series, value=12.0):
    return LoadSeries(series.start, series.step_seconds,
                      np.full(len(series), value))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
