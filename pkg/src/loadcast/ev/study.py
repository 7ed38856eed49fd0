"""Scenario matrix for the case study: station counts x charging strategies.

Each scenario shares the same building actuals, session list, and grid
limit; controlled scenarios plan against a forecast source (a completed
rolling-simulation run, or the actuals themselves for a perfect-forecast
baseline).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError
from ..timeseries import LoadSeries, Timestamp
from .charging import ScenarioResult, derive_grid_limit, simulate_charging
from .fleet import Session


def perfect_forecast_fn(building: LoadSeries, horizon_steps: int = 288):
    """Forecast source that returns the actuals (clipped at the data end)."""
    def fn(t: Timestamp) -> np.ndarray:
        i0 = building.index_of(t)
        return building.values[i0:i0 + horizon_steps]
    return fn


def run_forecast_fn(run, forecaster: str):
    """Forecast source backed by a completed rolling-simulation run."""
    if forecaster not in run.forecaster_names:
        raise DataError(f"run holds no forecaster named {forecaster!r}")
    if not run.forecasts.get(forecaster):
        raise DataError(f"run stored no forecasts for {forecaster!r}")
    first = run.first_emit_index[forecaster]
    step = run.config.step_s
    issued = run.forecasts[forecaster]

    def fn(t: Timestamp) -> np.ndarray:
        k = (t - run.sim_start) // step
        if (t - run.sim_start) % step != 0 or not first <= k < run.n_steps:
            raise DataError(f"no forecast issued at {t}")
        return issued[k - first]
    return fn


@dataclass(frozen=True)
class EvStudyResult:
    limit_w: float
    scenarios: tuple[ScenarioResult, ...]

    def scenario(self, n_stations: int, strategy: str) -> ScenarioResult:
        for sc in self.scenarios:
            if sc.n_stations == n_stations and sc.strategy == strategy:
                return sc
        raise KeyError((n_stations, strategy))

    def station_counts(self) -> tuple[int, ...]:
        return tuple(sorted({sc.n_stations for sc in self.scenarios}))


def run_ev_study(building: LoadSeries, sessions: list[Session],
                 station_counts=(2, 5, 10),
                 strategies=("controlled", "uncontrolled"),
                 limit_w: float | None = None, forecast_fn=None,
                 horizon_steps: int = 288,
                 sim_start: Timestamp | None = None,
                 sim_end: Timestamp | None = None) -> EvStudyResult:
    """Simulate every (stations, strategy) scenario on shared inputs.

    With limit_w=None the limit is derived from the building history
    (measured peak = 80 % of the limit). With forecast_fn=None controlled
    scenarios plan against the actuals.
    """
    limit = derive_grid_limit(building) if limit_w is None else float(limit_w)
    fn = forecast_fn or perfect_forecast_fn(building, horizon_steps)
    results = []
    for n_stations in station_counts:
        for strategy in strategies:
            results.append(simulate_charging(
                building, sessions, n_stations, strategy, limit,
                forecast_fn=fn if strategy == "controlled" else None,
                horizon_steps=horizon_steps,
                sim_start=sim_start, sim_end=sim_end))
    return EvStudyResult(limit_w=limit, scenarios=tuple(results))
