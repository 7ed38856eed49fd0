"""Synthetic commercial-building load and temperature generation.

Produces a weekday plateau with seeded noise and occasional peaks over a
night base, with quiet weekends. Component amplitudes are solved so the
generated series lands on the requested mean/max/base statistics.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .timeseries import (SECONDS_PER_DAY, LoadSeries, Timestamp,
                         weekday_of_epoch)


@dataclass(frozen=True)
class SyntheticBuildingSpec:
    mean_kw: float = 19.89
    max_kw: float = 84.74
    base_kw: float = 3.5
    open_second: int = 8 * 3600
    close_second: int = 18 * 3600
    weekend_factor: float = 0.05   # weekend plateau as a share of the weekday one
    noise_level: float = 0.05
    start: _dt.date = _dt.date(2019, 1, 7)  # a Monday
    days: int = 28
    step_s: int = 300
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.base_kw < self.mean_kw < self.max_kw:
            raise ConfigError("need 0 < base < mean < max")
        if not 0 <= self.open_second < self.close_second <= SECONDS_PER_DAY:
            raise ConfigError("working hours must satisfy 0 <= open < close <= 24h")
        if self.days < 1 or self.step_s <= 0:
            raise ConfigError("days and step_s must be positive")
        if not 0.0 <= self.noise_level < 0.3:
            raise ConfigError("noise_level must be in [0, 0.3)")


def _work_envelope(sod: np.ndarray, open_s: int, close_s: int) -> np.ndarray:
    """Trapezoid: 0 at night, 1 during working hours, 1 h ramps."""
    ramp = 3600.0
    up = np.clip((sod - (open_s - ramp)) / ramp, 0.0, 1.0)
    down = np.clip((close_s + ramp - sod) / ramp, 0.0, 1.0)
    return np.minimum(up, down)


def gen_building_load(spec: SyntheticBuildingSpec) -> LoadSeries:
    """Deterministic synthetic load in watts for the given spec and seed."""
    rng = np.random.default_rng(spec.seed)
    start = Timestamp.from_date(spec.start)
    n = spec.days * SECONDS_PER_DAY // spec.step_s
    ts = start.epoch_seconds + spec.step_s * np.arange(n, dtype=np.int64)
    sod = (ts % SECONDS_PER_DAY).astype(np.float64)
    weekday = weekday_of_epoch(ts)
    is_work = weekday <= 5

    envelope = _work_envelope(sod, spec.open_second, spec.close_second)
    work = np.where(is_work, envelope, spec.weekend_factor * envelope)

    # short triangular peaks during weekday working hours; one peak per
    # workday is forced to full amplitude so the max statistic is pinned
    peaks = np.zeros(n)
    day_index = np.unique(ts // SECONDS_PER_DAY)
    for d in day_index:
        day_start = int(d) * SECONDS_PER_DAY
        if weekday_of_epoch(np.array([day_start]))[0] > 5:
            continue
        n_peaks = int(rng.integers(1, 4))
        for p in range(n_peaks):
            raw_center = day_start + rng.uniform(spec.open_second + 1800,
                                                 spec.close_second - 1800)
            # snap to the grid so the full peak amplitude is actually sampled
            center = round(raw_center / spec.step_s) * spec.step_s
            width = rng.uniform(600.0, 2400.0)
            amp = 1.0 if p == 0 else rng.uniform(0.4, 0.9)
            bump = amp * np.clip(1.0 - np.abs(ts - center) / width, 0.0, 1.0)
            np.maximum(peaks, bump, out=peaks)

    w_mean = float(work.mean())
    p_mean = float(peaks.mean())
    span = spec.max_kw - spec.base_kw
    alpha = ((spec.mean_kw - spec.base_kw) - span * p_mean) / (w_mean - p_mean)
    if not 0.0 < alpha <= span:
        raise ConfigError(
            "infeasible spec: mean/max/base targets do not admit a plateau")
    gamma = span - alpha

    shape_kw = spec.base_kw + alpha * work
    noise = np.clip(rng.standard_normal(n), -2.0, 2.0)
    kw = shape_kw * (1.0 + spec.noise_level * noise) + gamma * peaks
    return LoadSeries(start, spec.step_s, np.maximum(kw, 0.0) * 1000.0)


def gen_temperature(start: Timestamp, steps: int, step_s: int = 300,
                    seed: int = 0) -> LoadSeries:
    """Plain seasonal plus diurnal temperature curve in deg C."""
    rng = np.random.default_rng(seed)
    ts = start.epoch_seconds + step_s * np.arange(steps, dtype=np.int64)
    day_of_year = (ts % (365 * SECONDS_PER_DAY)) / SECONDS_PER_DAY
    sod = (ts % SECONDS_PER_DAY).astype(np.float64)
    seasonal = 10.0 + 8.0 * np.sin(2.0 * np.pi * (day_of_year - 110.0) / 365.0)
    diurnal = 4.0 * np.sin(2.0 * np.pi * (sod - 9.0 * 3600.0) / SECONDS_PER_DAY)
    temp = seasonal + diurnal + 0.5 * rng.standard_normal(steps)
    return LoadSeries(start, step_s, temp)
