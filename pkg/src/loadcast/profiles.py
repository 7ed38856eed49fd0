"""Fixed and personalized standardized load profiles.

A profile set holds nine daily curves (3 seasons x 3 day classes) of 96
quarter-hour power values, normalized so that applying them over a full
reference year yields 1000 kWh. Forecasts scale the curves by the building's
annual consumption. The personalized variant learns the nine curves as
running means of the building's own 5-minute measurements, refit once a day
at noon.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass, field, replace

import numpy as np

from .calendars import DayClass, Season, classify_day
from .errors import ColdStartError, DataError
from .timeseries import SECONDS_PER_DAY, LoadSeries, Timestamp

QH_PER_DAY = 96
QH_SECONDS = 900
PSLP_STEP_SECONDS = 300
PSLP_SLOTS = SECONDS_PER_DAY // PSLP_STEP_SECONDS  # 288

REFERENCE_YEAR = 2019

SEASONS = (Season.WINTER, Season.TRANSITION, Season.SUMMER)
DAY_CLASSES = (DayClass.WEEKDAY, DayClass.SATURDAY, DayClass.SUNDAY)

# fallback ring when a season has no data: Winter -> Transition -> Summer -> Winter
_NEXT_SEASON = {Season.WINTER: Season.TRANSITION,
                Season.TRANSITION: Season.SUMMER,
                Season.SUMMER: Season.WINTER}


def season_fallback_chain(season: Season) -> tuple[Season, Season, Season]:
    second = _NEXT_SEASON[season]
    return (season, second, _NEXT_SEASON[second])


@dataclass(frozen=True)
class SlpProfileSet:
    """Nine 96-slot quarter-hour curves in watts per 1000 kWh/a."""

    label: str
    curves: dict = field(repr=False)  # (Season, DayClass) -> np.ndarray[96]

    def __post_init__(self):
        fixed = {}
        for season in SEASONS:
            for day_class in DAY_CLASSES:
                key = (season, day_class)
                if key not in self.curves:
                    raise DataError(f"profile set missing curve for {key}")
                arr = np.asarray(self.curves[key], dtype=np.float64).copy()
                if arr.shape != (QH_PER_DAY,):
                    raise DataError(f"curve for {key} must have {QH_PER_DAY} values")
                if not np.all(np.isfinite(arr)) or np.any(arr < 0):
                    raise DataError(f"curve for {key} has invalid values")
                arr.setflags(write=False)
                fixed[key] = arr
        object.__setattr__(self, "curves", fixed)

    def curve(self, season: Season, day_class: DayClass) -> np.ndarray:
        return self.curves[(season, day_class)]

    def annual_energy_kwh(self, year: int = REFERENCE_YEAR,
                          holidays=frozenset()) -> float:
        """Energy of the raw curves applied over one calendar year."""
        total_wh = 0.0
        d = _dt.date(year, 1, 1)
        while d.year == year:
            season, day_class = classify_day(d, holidays)
            total_wh += self.curve(season, day_class).sum() * QH_SECONDS / 3600.0
            d += _dt.timedelta(days=1)
        return total_wh / 1000.0


def _workday_shape(plateau: float, night: float, morning_qh: int,
                   evening_qh: int, ramp_qh: int) -> np.ndarray:
    shape = np.full(QH_PER_DAY, night)
    for i in range(QH_PER_DAY):
        if morning_qh <= i < evening_qh:
            shape[i] = plateau
        elif morning_qh - ramp_qh <= i < morning_qh:
            f = (i - (morning_qh - ramp_qh) + 1) / (ramp_qh + 1)
            shape[i] = night + f * (plateau - night)
        elif evening_qh <= i < evening_qh + ramp_qh:
            f = 1.0 - (i - evening_qh + 1) / (ramp_qh + 1)
            shape[i] = night + f * (plateau - night)
    return shape


def builtin_g1_profile() -> SlpProfileSet:
    """Bundled commercial profile: working hours 08-18, low weekends.

    Synthetic stand-in for licensed profile tables, normalized to exactly
    1000 kWh over the reference year so the usual scaling applies.
    """
    night = 60.0
    season_plateau = {Season.WINTER: 265.0, Season.TRANSITION: 230.0,
                      Season.SUMMER: 205.0}
    morning, evening, ramp = 32, 72, 6  # 08:00, 18:00, 1.5 h ramps
    curves = {}
    for season in SEASONS:
        plateau = season_plateau[season]
        curves[(season, DayClass.WEEKDAY)] = _workday_shape(
            plateau, night, morning, evening, ramp)
        curves[(season, DayClass.SATURDAY)] = _workday_shape(
            night + 0.35 * (plateau - night), night, morning, 56, 4)
        curves[(season, DayClass.SUNDAY)] = _workday_shape(
            night + 0.10 * (plateau - night), night, 40, 64, 4)
    raw = SlpProfileSet("G1-like", curves)
    scale = 1000.0 / raw.annual_energy_kwh(REFERENCE_YEAR)
    return SlpProfileSet("G1-like", {k: v * scale for k, v in raw.curves.items()})


def estimate_annual_kwh(series: LoadSeries) -> float:
    """Annual consumption extrapolated from the mean power of a partial record."""
    return series.mean_w() * 8760.0 / 1000.0


def slp_forecast(profiles: SlpProfileSet, annual_kwh: float, start: Timestamp,
                 steps: int, holidays=frozenset(),
                 step_seconds: int = PSLP_STEP_SECONDS) -> LoadSeries:
    """Apply the season/day-class curve over the horizon, scaled to annual_kwh.

    Each 5-minute step holds the value of the covering quarter hour.
    """
    if annual_kwh <= 0:
        raise DataError("annual_kwh must be positive")
    if steps <= 0:
        raise DataError("steps must be positive")
    scale = annual_kwh / 1000.0
    out = np.empty(steps)
    cached_date, cached_curve = None, None
    for i in range(steps):
        ts = start + i * step_seconds
        d = ts.date()
        if d != cached_date:
            season, day_class = classify_day(d, holidays)
            cached_curve = profiles.curve(season, day_class)
            cached_date = d
        out[i] = cached_curve[ts.second_of_day // QH_SECONDS]
    return LoadSeries(start, step_seconds, out * scale)


def _noon_after(ts: Timestamp) -> Timestamp:
    midnight = ts.epoch_seconds - ts.second_of_day
    noon = midnight + SECONDS_PER_DAY // 2
    if noon <= ts.epoch_seconds:
        noon += SECONDS_PER_DAY
    return Timestamp(noon)


@dataclass(frozen=True)
class PslpState:
    """Running per-slot sums and counts for the nine (season, class) buckets.

    Between refits the fitted sums/counts are frozen; new measurements wait in
    a pending buffer until the clock crosses the next noon boundary.
    """

    sums: np.ndarray = field(repr=False)    # (3, 3, 288)
    counts: np.ndarray = field(repr=False)  # (3, 3, 288) int64
    pending: tuple = field(repr=False, default=())
    last_refit: Timestamp | None = None
    next_refit: Timestamp | None = None
    holidays: frozenset = frozenset()
    version: int = 0

    @classmethod
    def empty(cls, holidays=frozenset()) -> "PslpState":
        shape = (len(SEASONS), len(DAY_CLASSES), PSLP_SLOTS)
        return cls(sums=np.zeros(shape), counts=np.zeros(shape, dtype=np.int64),
                   holidays=frozenset(holidays))

    def bucket_index(self, season: Season, day_class: DayClass) -> tuple[int, int]:
        return SEASONS.index(season), DAY_CLASSES.index(day_class)

    def bucket_counts(self, season: Season, day_class: DayClass) -> np.ndarray:
        s, c = self.bucket_index(season, day_class)
        return self.counts[s, c]

    def bucket_mean(self, season: Season, day_class: DayClass) -> np.ndarray:
        """Per-slot mean; NaN where the slot has no observations."""
        s, c = self.bucket_index(season, day_class)
        with np.errstate(invalid="ignore"):
            return np.where(self.counts[s, c] > 0,
                            self.sums[s, c] / np.maximum(self.counts[s, c], 1),
                            np.nan)

    @property
    def observed_any(self) -> bool:
        return bool(self.counts.sum() > 0)


def _fold(sums: np.ndarray, counts: np.ndarray, points, holidays) -> None:
    cached_date, idx = None, None
    for epoch, value in points:
        ts = Timestamp(epoch)
        d = ts.date()
        if d != cached_date:
            season, day_class = classify_day(d, holidays)
            idx = (SEASONS.index(season), DAY_CLASSES.index(day_class))
            cached_date = d
        slot = ts.second_of_day // PSLP_STEP_SECONDS
        sums[idx[0], idx[1], slot] += value
        counts[idx[0], idx[1], slot] += 1


def pslp_refit(state: PslpState, measurements, clock: Timestamp) -> PslpState:
    """Advance the profile state with new measurements under the noon schedule.

    measurements: LoadSeries at 5-minute steps, or (epoch_seconds, watts)
    pairs. On the very first call everything up to `clock` is folded at once
    (the pre-window history is "initially present"); afterwards folding only
    happens when `clock` crosses a 12:00 boundary, consuming measurements
    timestamped before that boundary.
    """
    if isinstance(measurements, LoadSeries):
        if measurements.step_seconds != PSLP_STEP_SECONDS:
            raise DataError("profile measurements must be at 5-minute steps")
        points = measurements.points()
    else:
        points = [(t.epoch_seconds if isinstance(t, Timestamp) else int(t), float(v))
                  for t, v in measurements]

    pending = list(state.pending) + points
    sums, counts = state.sums.copy(), state.counts.copy()
    last_refit, next_refit = state.last_refit, state.next_refit
    version = state.version

    if next_refit is None:
        fold_now = [p for p in pending if p[0] < clock.epoch_seconds]
        pending = [p for p in pending if p[0] >= clock.epoch_seconds]
        if fold_now:
            _fold(sums, counts, fold_now, state.holidays)
            version += 1
        last_refit = clock
        next_refit = _noon_after(clock)
    while clock >= next_refit:
        boundary = next_refit.epoch_seconds
        fold_now = [p for p in pending if p[0] < boundary]
        pending = [p for p in pending if p[0] >= boundary]
        if fold_now:
            _fold(sums, counts, fold_now, state.holidays)
            version += 1
        last_refit = next_refit
        next_refit = next_refit + SECONDS_PER_DAY

    return replace(state, sums=sums, counts=counts, pending=tuple(pending),
                   last_refit=last_refit, next_refit=next_refit, version=version)


def _resolve_slot(state: PslpState, season: Season, day_class: DayClass,
                  slot: int) -> tuple[float, bool]:
    """Mean for one slot, walking the season ring then the class order."""
    s0, c0 = state.bucket_index(season, day_class)
    for s in season_fallback_chain(season):
        si = SEASONS.index(s)
        if state.counts[si, c0, slot] > 0:
            return state.sums[si, c0, slot] / state.counts[si, c0, slot], si != s0
    for day_cls in DAY_CLASSES:
        ci = DAY_CLASSES.index(day_cls)
        if ci == c0:
            continue
        for s in season_fallback_chain(season):
            si = SEASONS.index(s)
            if state.counts[si, ci, slot] > 0:
                return state.sums[si, ci, slot] / state.counts[si, ci, slot], True
    total_c = state.counts.sum(axis=(0, 1))[slot]
    if total_c > 0:
        return state.sums.sum(axis=(0, 1))[slot] / total_c, True
    # slot never observed anywhere: overall mean of all observations
    return float(state.sums.sum() / state.counts.sum()), True


def resolve_profile(state: PslpState, season: Season, day_class: DayClass
                    ) -> tuple[np.ndarray, np.ndarray]:
    """288-slot profile for a (season, class), with per-slot fallback flags."""
    if not state.observed_any:
        raise ColdStartError("personalized profile state holds no observations")
    values = np.empty(PSLP_SLOTS)
    flags = np.zeros(PSLP_SLOTS, dtype=bool)
    for slot in range(PSLP_SLOTS):
        values[slot], flags[slot] = _resolve_slot(state, season, day_class, slot)
    return values, flags


def pslp_forecast(state: PslpState, start: Timestamp, steps: int,
                  holidays=frozenset()) -> tuple[LoadSeries, np.ndarray]:
    """Forecast from the frozen state; returns the series and fallback flags."""
    if not state.observed_any:
        raise ColdStartError("cannot forecast from an empty profile state")
    if steps <= 0:
        raise DataError("steps must be positive")
    out = np.empty(steps)
    flags = np.zeros(steps, dtype=bool)
    cache: dict = {}
    for i in range(steps):
        ts = start + i * PSLP_STEP_SECONDS
        d = ts.date()
        key = classify_day(d, holidays)
        if key not in cache:
            cache[key] = resolve_profile(state, *key)
        values, slot_flags = cache[key]
        slot = ts.second_of_day // PSLP_STEP_SECONDS
        out[i] = values[slot]
        flags[i] = slot_flags[slot]
    return LoadSeries(start, PSLP_STEP_SECONDS, out), flags
