from .fleet import (DriverProfile, Session, Vehicle, design_driver_profiles,
                    generate_sessions)
from .charging import (STATION_MAX_W, OverloadStats, Schedule, ScenarioResult,
                       allocate_capacity, derive_grid_limit,
                       grid_oriented_schedule, simulate_charging)
from .study import (EvStudyResult, perfect_forecast_fn, run_ev_study,
                    run_forecast_fn)

__all__ = [
    "DriverProfile", "EvStudyResult", "OverloadStats", "STATION_MAX_W",
    "ScenarioResult", "Schedule", "Session", "Vehicle", "allocate_capacity",
    "derive_grid_limit", "design_driver_profiles", "generate_sessions",
    "grid_oriented_schedule", "perfect_forecast_fn", "run_ev_study",
    "run_forecast_fn", "simulate_charging",
]
