"""Charging strategies and the physical simulation against the grid limit.

Uncontrolled charging always draws the maximum possible power. Grid-oriented
charging plans inside the forecasted free capacity (limit minus forecast
load), splitting each slot's budget between connected vehicles by iterative
water-filling with weight (1 - soc) * (1 + hours connected), capped per
vehicle; the schedule is recomputed at every forecast issuance. Charging
power is constant within a slot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError, DataError
from ..timeseries import LoadSeries, Timestamp
from .fleet import Session

STATION_MAX_W = 22_000.0


def derive_grid_limit(building: LoadSeries, peak_share: float = 0.8,
                      granularity_w: float = 10_000.0) -> float:
    """Limit such that the measured peak equals `peak_share` of it, rounded
    up to the next `granularity_w` (84.74 kW peak -> 110 kW limit)."""
    if len(building) == 0:
        raise DataError("empty building history")
    raw = round(building.max_w()) / peak_share
    return math.ceil(round(raw, 6) / granularity_w) * granularity_w


def session_cap_w(session: Session, step_s: int) -> float:
    """Per-slot power cap: vehicle limit, station limit, and remaining need."""
    fill_rate = session.remaining_wh() * 3600.0 / step_s
    return min(session.vehicle.max_charge_w, STATION_MAX_W, fill_rate)


def allocate_capacity(budget_w: float, weights, caps) -> np.ndarray:
    """Water-filling: split a budget by weight with per-recipient caps.

    Capped recipients release their leftover share, which is redistributed
    over the remaining ones until the budget or the demand is exhausted.
    """
    weights = np.asarray(weights, dtype=np.float64)
    caps = np.asarray(caps, dtype=np.float64)
    if weights.shape != caps.shape:
        raise DataError("weights and caps must align")
    n = len(weights)
    alloc = np.zeros(n)
    if budget_w <= 0.0 or n == 0:
        return alloc
    active = (weights > 0.0) & (caps > 0.0)
    budget = float(budget_w)
    while active.any() and budget > 1e-9:
        share = budget * weights / weights[active].sum()
        share[~active] = 0.0
        over = active & (alloc + share >= caps)
        if not over.any():
            alloc[active] += share[active]
            break
        grant = caps[over] - alloc[over]
        alloc[over] = caps[over]
        budget -= float(grant.sum())
        active &= ~over
    return alloc


@dataclass(frozen=True)
class Schedule:
    """Planned per-session power over the horizon, feasible by construction."""

    issued_at: Timestamp
    step_s: int
    session_powers: np.ndarray = field(repr=False)  # (n_sessions, horizon)

    @property
    def horizon(self) -> int:
        return self.session_powers.shape[1]

    def slot_total(self, s: int) -> float:
        return float(self.session_powers[:, s].sum())


def grid_oriented_schedule(forecast: LoadSeries, sessions: list[Session],
                           limit_w: float) -> Schedule:
    """Plan charging for the currently connected sessions over the forecast.

    Per slot, free capacity is max(0, limit - forecast); it is split by
    water-filling with priority (1 - soc) * (1 + hours connected). State of
    charge is advanced along the plan so later slots see the earlier energy.
    """
    if len(forecast) == 0:
        raise DataError("empty forecast")
    step = forecast.step_seconds
    h = len(forecast)
    n = len(sessions)
    powers = np.zeros((n, h))
    soc = np.array([s.soc for s in sessions])
    battery_wh = np.array([s.vehicle.battery_wh for s in sessions])
    vmax = np.array([min(s.vehicle.max_charge_w, STATION_MAX_W)
                     for s in sessions])
    arrival = np.array([s.arrival.epoch_seconds for s in sessions])
    departure = np.array([s.departure.epoch_seconds for s in sessions])

    for s in range(h):
        t = forecast.start.epoch_seconds + s * step
        free = max(0.0, limit_w - float(forecast.values[s]))
        present = (t < departure) & (soc < 1.0)
        if not present.any() or free <= 0.0:
            continue
        hours_connected = np.maximum(t - arrival, 0) / 3600.0
        weights = np.where(present, (1.0 - soc) * (1.0 + hours_connected), 0.0)
        fill_rate = (1.0 - soc) * battery_wh * 3600.0 / step
        caps = np.where(present, np.minimum(vmax, fill_rate), 0.0)
        alloc = allocate_capacity(free, weights, caps)
        powers[:, s] = alloc
        soc = np.minimum(soc + alloc * (step / 3600.0) / battery_wh, 1.0)

    free_per_slot = np.maximum(0.0, limit_w - forecast.values)
    if np.any(powers.sum(axis=0) > free_per_slot + 1e-6):
        raise DataError("planned schedule exceeds the forecasted free capacity")
    return Schedule(forecast.start, step, powers)


@dataclass(frozen=True)
class OverloadStats:
    """Per-scenario outcome, matching the case-study report columns.

    Overloads count 5-minute steps where building plus charging power
    exceeds the limit.
    """

    overload_count: int
    max_overload_w: float
    mean_overload_w: float
    avg_energy_kwh: float
    avg_duration_h: float
    sessions_total: int
    sessions_served: int
    total_energy_kwh: float


@dataclass
class ScenarioResult:
    strategy: str
    n_stations: int
    limit_w: float
    stats: OverloadStats
    sessions: list[Session]
    total_power_w: np.ndarray = field(repr=False)  # building + charging per slot


def simulate_charging(building: LoadSeries, sessions: list[Session],
                      n_stations: int, strategy: str, limit_w: float,
                      forecast_fn=None, horizon_steps: int = 288,
                      sim_start: Timestamp | None = None,
                      sim_end: Timestamp | None = None) -> ScenarioResult:
    """Run one scenario: queueing, per-slot charging, overload statistics.

    A station serves one session at a time from plug-in to departure;
    overlapping sessions queue by arrival order. The controlled strategy
    needs forecast_fn(t) -> np.ndarray of horizon watts and replans at every
    slot; uncontrolled charging ignores the limit entirely.
    """
    if strategy not in ("uncontrolled", "controlled"):
        raise ConfigError(f"unknown strategy {strategy!r}")
    if strategy == "controlled" and forecast_fn is None:
        raise ConfigError("controlled strategy needs a forecast source")
    if n_stations < 1:
        raise ConfigError("need at least one station")

    step = building.step_seconds
    start = sim_start or building.start
    end = sim_end or building.end
    if not building.covers(start, end):
        raise DataError("simulation span outside the building series")

    sessions = [s.fresh_copy() for s in sessions]
    upcoming = sorted(sessions,
                      key=lambda s: (s.arrival.epoch_seconds,
                                     s.departure.epoch_seconds))
    next_arrival = 0
    waiting: list[Session] = []
    stations: list[Session | None] = [None] * n_stations

    n_slots = (end - start) // step
    total_power = np.empty(n_slots)
    overloads: list[float] = []

    for k in range(n_slots):
        t = start + k * step
        te = t.epoch_seconds

        for i, occupant in enumerate(stations):
            if occupant is not None and te >= occupant.departure.epoch_seconds:
                stations[i] = None
        waiting = [s for s in waiting if te < s.departure.epoch_seconds]
        while next_arrival < len(upcoming) \
                and upcoming[next_arrival].arrival.epoch_seconds <= te:
            s = upcoming[next_arrival]
            next_arrival += 1
            if te < s.departure.epoch_seconds:
                waiting.append(s)
        for i in range(n_stations):
            if stations[i] is None and waiting:
                session = waiting.pop(0)
                session.station = i
                stations[i] = session

        connected = [s for s in stations if s is not None]
        powers = np.zeros(len(connected))
        if connected:
            if strategy == "uncontrolled":
                powers = np.array([session_cap_w(s, step) for s in connected])
            else:
                horizon = np.asarray(forecast_fn(t), dtype=np.float64)
                if horizon.ndim != 1 or len(horizon) < 1:
                    raise DataError("forecast source returned no horizon")
                fc = LoadSeries(t, step, horizon[:horizon_steps])
                schedule = grid_oriented_schedule(fc, connected, limit_w)
                powers = schedule.session_powers[:, 0]

        for s, p in zip(connected, powers):
            if p <= 0.0:
                continue
            delta_wh = p * step / 3600.0
            s.delivered_kwh += delta_wh / 1000.0
            s.soc = min(1.0, s.soc + delta_wh / s.vehicle.battery_wh)
            s.charging_seconds += step

        total = float(building.value_at(t)) + float(powers.sum())
        total_power[k] = total
        # micro-watt tolerance so an exactly-filled limit does not register
        if total - limit_w > 1e-6:
            overloads.append(total - limit_w)

    served = [s for s in sessions if s.charging_seconds > 0]
    stats = OverloadStats(
        overload_count=len(overloads),
        max_overload_w=max(overloads) if overloads else 0.0,
        mean_overload_w=float(np.mean(overloads)) if overloads else 0.0,
        avg_energy_kwh=float(np.mean([s.delivered_kwh for s in served]))
        if served else 0.0,
        avg_duration_h=float(np.mean([s.charging_seconds for s in served]))
        / 3600.0 if served else 0.0,
        sessions_total=len(sessions),
        sessions_served=len(served),
        total_energy_kwh=float(sum(s.delivered_kwh for s in sessions)))
    return ScenarioResult(strategy, n_stations, limit_w, stats, sessions,
                          total_power)
