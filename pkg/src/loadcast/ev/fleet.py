"""Synthetic drivers and charging sessions for the case study.

Ten randomly designed commuter profiles: the first arrives when the building
load rises, the last leaves when it falls, each with a per-day random offset
and a fixed vehicle. Weekday entry state of charge follows the commuting
distance at 18 kWh / 100 km. On weekends (and public holidays) private
visitors arrive per hour between 08:00 and 22:00 with a small probability,
entering with 5-20 % charge.
"""

from __future__ import annotations

import datetime as _dt
from dataclasses import dataclass, replace

import numpy as np

from ..calendars import DayClass, day_class_of
from ..errors import ConfigError
from ..timeseries import SECONDS_PER_DAY, Timestamp

BATTERY_KWH_RANGE = (18.7, 100.0)
CHARGE_POWER_CHOICES_W = (11_000.0, 22_000.0)
CONSUMPTION_KWH_PER_KM = 0.18
WEEKEND_SOC_RANGE = (0.05, 0.20)
WEEKEND_HOURS = (8, 22)


@dataclass(frozen=True)
class Vehicle:
    battery_kwh: float
    max_charge_w: float

    def __post_init__(self):
        lo, hi = BATTERY_KWH_RANGE
        if not lo <= self.battery_kwh <= hi:
            raise ConfigError(f"battery capacity outside [{lo}, {hi}] kWh")
        if self.max_charge_w not in CHARGE_POWER_CHOICES_W:
            raise ConfigError(f"charge power must be one of {CHARGE_POWER_CHOICES_W}")

    @property
    def battery_wh(self) -> float:
        return self.battery_kwh * 1000.0


@dataclass
class Session:
    """One plug-in visit; runtime fields are filled by the simulation."""

    vehicle: Vehicle
    arrival: Timestamp
    departure: Timestamp
    soc_in: float
    profile_id: int | None = None
    # runtime state
    station: int | None = None
    soc: float = 0.0
    delivered_kwh: float = 0.0
    charging_seconds: int = 0

    def __post_init__(self):
        if self.arrival >= self.departure:
            raise ConfigError("session arrival must precede departure")
        if not 0.0 <= self.soc_in <= 1.0:
            raise ConfigError("soc_in must lie in [0, 1]")
        self.soc = self.soc_in

    def fresh_copy(self) -> "Session":
        return Session(self.vehicle, self.arrival, self.departure,
                       self.soc_in, self.profile_id)

    @property
    def connected(self) -> bool:
        return self.station is not None

    def remaining_wh(self) -> float:
        return max(0.0, (1.0 - self.soc) * self.vehicle.battery_wh)


@dataclass(frozen=True)
class DriverProfile:
    profile_id: int
    commute_km_daily: float
    arrival_offset_s: int     # relative to the building's load-rise time
    departure_offset_s: int   # relative to the load-fall time (<= 0)
    daily_jitter_s: int
    vehicle: Vehicle


def _random_vehicle(rng: np.random.Generator) -> Vehicle:
    battery = float(rng.uniform(*BATTERY_KWH_RANGE))
    power = float(rng.choice(CHARGE_POWER_CHOICES_W))
    return Vehicle(round(battery, 1), power)


def design_driver_profiles(n_profiles: int = 10, seed: int = 0) -> list[DriverProfile]:
    """Randomly design the commuter pool; profile 0 arrives at load rise and
    the last profile departs at load fall."""
    rng = np.random.default_rng(seed)
    profiles = []
    for i in range(n_profiles):
        arrival_off = 0 if i == 0 else int(rng.uniform(0, 2 * 3600))
        departure_off = 0 if i == n_profiles - 1 else -int(rng.uniform(0, 2 * 3600))
        profiles.append(DriverProfile(
            profile_id=i,
            commute_km_daily=float(round(rng.uniform(20.0, 120.0), 1)),
            arrival_offset_s=arrival_off,
            departure_offset_s=departure_off,
            daily_jitter_s=int(rng.uniform(600, 1800)),
            vehicle=_random_vehicle(rng)))
    return profiles


def _commuter_soc(profile: DriverProfile) -> float:
    used_kwh = profile.commute_km_daily * CONSUMPTION_KWH_PER_KM
    soc = 1.0 - used_kwh / profile.vehicle.battery_kwh
    return float(np.clip(soc, 0.05, 0.95))


def generate_sessions(profiles, start: _dt.date, days: int,
                      working_hours: tuple[int, int], seed: int = 0,
                      weekend_arrival_prob: float = 0.05,
                      weekend_pool: int | None = None,
                      holidays=frozenset()) -> list[Session]:
    """Deterministic session list over the calendar span.

    working_hours are (rise, fall) seconds of day from the building's load
    shape. Weekdays produce one session per commuter profile; weekend days
    draw visitor arrivals per hour in 08:00-22:00 with the given probability
    per pool member.
    """
    if days < 1:
        raise ConfigError("span must cover at least one day")
    rise_s, fall_s = working_hours
    if not 0 <= rise_s < fall_s <= SECONDS_PER_DAY:
        raise ConfigError("working hours must satisfy 0 <= rise < fall <= 24h")
    rng = np.random.default_rng(seed)
    pool = weekend_pool if weekend_pool is not None else len(profiles)
    sessions: list[Session] = []

    for day_i in range(days):
        d = start + _dt.timedelta(days=day_i)
        day_ts = Timestamp.from_date(d)
        if day_class_of(d, holidays) == DayClass.WEEKDAY:
            for prof in profiles:
                jitter = rng.uniform(-prof.daily_jitter_s, prof.daily_jitter_s)
                arr = rise_s + prof.arrival_offset_s + int(jitter)
                jitter = rng.uniform(-prof.daily_jitter_s, prof.daily_jitter_s)
                dep = fall_s + prof.departure_offset_s + int(jitter)
                arr = int(np.clip(arr, 0, SECONDS_PER_DAY - 3600))
                dep = int(np.clip(dep, arr + 3600, SECONDS_PER_DAY - 1))
                sessions.append(Session(
                    vehicle=prof.vehicle, arrival=day_ts + arr,
                    departure=day_ts + dep, soc_in=_commuter_soc(prof),
                    profile_id=prof.profile_id))
        else:
            lo_h, hi_h = WEEKEND_HOURS
            for hour in range(lo_h, hi_h):
                for visitor in range(pool):
                    if rng.random() >= weekend_arrival_prob:
                        continue
                    arr = hour * 3600 + int(rng.uniform(0, 3600))
                    stay = int(rng.uniform(1.0, 5.0) * 3600)
                    dep = min(arr + stay, hi_h * 3600)
                    if dep <= arr:
                        continue
                    soc_in = float(rng.uniform(*WEEKEND_SOC_RANGE))
                    sessions.append(Session(
                        vehicle=_random_vehicle(rng), arrival=day_ts + arr,
                        departure=day_ts + dep, soc_in=soc_in))
    sessions.sort(key=lambda s: (s.arrival.epoch_seconds,
                                 s.departure.epoch_seconds))
    return sessions
