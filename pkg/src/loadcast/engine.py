"""The rolling simulation: one 24-hour forecast per forecaster per 5-minute
step, over a training window that slides with the simulation clock.

At each step t the engine slices three regions of the measured load: data
older than t - window (unused), the training window [t - window, t), and the
forecast horizon [t, t + horizon). Forecasters refit on their own schedules,
always strictly from data before t, and every ready forecaster issues a
forecast whose errors are evaluated against the actuals and cached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError, DataError
from .forecasters import RefitRecord
from .metrics import ErrorReport, evaluate
from .timeseries import SECONDS_PER_DAY, SECONDS_PER_WEEK, LoadSeries, Timestamp


@dataclass(frozen=True)
class EngineConfig:
    step_s: int = 300
    horizon_steps: int = 288
    window_days: float = 60.0
    nn_refit: str = "daily"            # or "per_step"
    nn_refit_second_of_day: int = 0    # 00:00
    pslp_refit: str = "daily"          # fixed daily at 12:00
    forecasters: tuple[str, ...] = ("slp", "pslp", "ffnn")
    seed: int = 0
    lead_in_days: float = 7.0
    mape_mode: str = "forecast"
    store_forecasts: bool = True

    def __post_init__(self):
        if self.step_s <= 0:
            raise ConfigError("step_s must be positive")
        if self.horizon_steps < 2:
            raise ConfigError("horizon_steps must be at least 2")
        window_s = self.window_days * SECONDS_PER_DAY
        if window_s < SECONDS_PER_WEEK + self.horizon_steps * self.step_s:
            raise ConfigError("window must cover 7 days plus the horizon")
        if self.lead_in_days < 7.0:
            raise ConfigError("lead-in must be at least the 7-day lag depth")
        if self.nn_refit not in ("daily", "per_step"):
            raise ConfigError(f"unknown nn_refit {self.nn_refit!r}")
        if self.pslp_refit != "daily":
            raise ConfigError("pslp refit schedule is fixed daily at 12:00")
        if self.nn_refit_second_of_day % self.step_s != 0:
            raise ConfigError("nn refit time must align to the step grid")

    @property
    def window_seconds(self) -> int:
        return int(round(self.window_days * SECONDS_PER_DAY))

    @property
    def lead_in_seconds(self) -> int:
        return int(round(self.lead_in_days * SECONDS_PER_DAY))


@dataclass(frozen=True)
class Dataset:
    """Regularized 5-minute measurements plus the exogenous inputs."""

    load: LoadSeries
    temperature: LoadSeries
    holidays: frozenset = frozenset()

    def __post_init__(self):
        if self.temperature.step_seconds != self.load.step_seconds:
            raise DataError("temperature must share the load's step")
        if not (self.temperature.start <= self.load.start
                and self.load.end <= self.temperature.end):
            raise DataError("temperature must cover the load span")


@dataclass(frozen=True)
class StepContext:
    """Everything a forecaster may see at one simulation step."""

    step_index: int
    now: Timestamp
    step_seconds: int
    horizon_steps: int
    history: LoadSeries    # all measurements in [data_start, now)
    region_b: LoadSeries   # training window [max(data_start, now - window), now)
    temperature: LoadSeries
    holidays: frozenset


@dataclass(frozen=True)
class FailureRecord:
    step_index: int
    forecaster: str
    phase: str  # "refit" | "forecast"
    message: str


@dataclass
class SimulationRun:
    config: EngineConfig
    sim_start: Timestamp
    sim_end: Timestamp
    n_steps: int
    forecaster_names: tuple[str, ...]
    reports: dict[str, list[ErrorReport]] = field(default_factory=dict)
    forecasts: dict[str, list[np.ndarray]] = field(default_factory=dict)
    first_emit_index: dict[str, int] = field(default_factory=dict)
    ready_from_index: dict[str, int] = field(default_factory=dict)
    refit_log: list[RefitRecord] = field(default_factory=list)
    failures: list[FailureRecord] = field(default_factory=list)

    def step_time(self, k: int) -> Timestamp:
        return self.sim_start + k * self.config.step_s

    def issuance_times(self, name: str) -> np.ndarray:
        return np.array([r.issued_at for r in self.reports[name]], dtype=np.int64)

    def mae_series(self, name: str) -> np.ndarray:
        return np.array([r.mae_w for r in self.reports[name]])


@dataclass(frozen=True)
class ColdStartDecision:
    ready: bool
    first_feasible: Timestamp | None = None


def cold_start_policy(kind: str, history: LoadSeries | None) -> ColdStartDecision:
    """Whether a forecaster kind has enough history to forecast meaningfully.

    Fixed profiles are always ready; personalized profiles need one observed
    day; the neural forecasters need the 7-day lag depth. Not-ready
    forecasters abstain rather than emit placeholders.
    """
    thresholds = {"slp": 0, "pslp": SECONDS_PER_DAY,
                  "ffnn": SECONDS_PER_WEEK, "lstm": SECONDS_PER_WEEK,
                  "nn": SECONDS_PER_WEEK}
    if kind not in thresholds:
        raise ConfigError(f"unknown forecaster kind {kind!r}")
    need = thresholds[kind]
    have = 0 if history is None else len(history) * history.step_seconds
    if have >= need:
        return ColdStartDecision(ready=True)
    start = history.start if history is not None else Timestamp(0)
    return ColdStartDecision(ready=False, first_feasible=start + need)


def run(dataset: Dataset, config: EngineConfig, forecasters) -> SimulationRun:
    """Execute the rolling simulation over the dataset's full usable span."""
    load = dataset.load
    if load.step_seconds != config.step_s:
        raise DataError(f"dataset step {load.step_seconds}s != config {config.step_s}s")
    step = config.step_s
    horizon = config.horizon_steps
    data_start, data_end = load.start, load.end

    sim_start = data_start + config.lead_in_seconds
    sim_end = data_end - horizon * step
    n_steps = (sim_end - sim_start) // step
    if n_steps < 1:
        raise DataError(
            "dataset too short: needs lead-in plus horizon plus at least one step")

    names = tuple(fc.name for fc in forecasters)
    if len(set(names)) != len(names):
        raise ConfigError("forecaster names must be unique")
    result = SimulationRun(config=config, sim_start=sim_start, sim_end=sim_end,
                           n_steps=n_steps, forecaster_names=names)
    for name in names:
        result.reports[name] = []
        result.forecasts[name] = []

    for k in range(n_steps):
        now = sim_start + k * step
        history = load.slice(data_start, now)
        b_start = max(data_start, now - config.window_seconds)
        region_b = load.slice(b_start, now) if b_start > data_start else history
        ctx = StepContext(step_index=k, now=now, step_seconds=step,
                          horizon_steps=horizon, history=history,
                          region_b=region_b, temperature=dataset.temperature,
                          holidays=dataset.holidays)

        for fc in forecasters:
            try:
                record = fc.refit(ctx)
            except Exception as exc:
                result.failures.append(FailureRecord(k, fc.name, "refit", str(exc)))
                continue
            if record is not None:
                result.refit_log.append(record)

        actual = load.window_values(now, horizon)
        naive = load.window_values(now - SECONDS_PER_WEEK, horizon)
        for fc in forecasters:
            if not fc.ready(ctx):
                continue
            if fc.name not in result.ready_from_index:
                result.ready_from_index[fc.name] = k
            try:
                values = np.asarray(fc.forecast(ctx), dtype=np.float64)
            except Exception as exc:
                result.failures.append(
                    FailureRecord(k, fc.name, "forecast", str(exc)))
                continue
            if values.shape != (horizon,):
                result.failures.append(FailureRecord(
                    k, fc.name, "forecast",
                    f"bad forecast shape {values.shape}, expected ({horizon},)"))
                continue
            result.first_emit_index.setdefault(fc.name, k)
            result.reports[fc.name].append(
                evaluate(now.epoch_seconds, values, actual, naive,
                         config.mape_mode))
            if config.store_forecasts:
                result.forecasts[fc.name].append(values)
    return result


@dataclass(frozen=True)
class AdaptationPhases:
    """Error trajectory around one calendar event, split into phases."""

    event_epoch: int
    baseline_mae: float
    times: np.ndarray = field(repr=False)
    mae: np.ndarray = field(repr=False)       # smoothed
    raw_mae: np.ndarray = field(repr=False)
    spike_at: int | None = None               # epoch seconds, None = no spike
    adapted_at: int | None = None

    @property
    def spike_detected(self) -> bool:
        return self.spike_at is not None


def adaptation_report(run: SimulationRun, events, forecaster: str,
                      pre_days: float = 3.0, post_days: float = 7.0,
                      spike_factor: float = 2.0, adapted_factor: float = 1.5,
                      smooth_steps: int = 288) -> list[AdaptationPhases]:
    """Label the spike / adaptation / adapted phases around each event date.

    The baseline is the mean issuance MAE over `pre_days` before the event;
    a spike starts when the smoothed MAE first exceeds spike_factor times the
    baseline, and the forecaster counts as adapted when it falls back below
    adapted_factor times the baseline.
    """
    times = run.issuance_times(forecaster)
    raw = run.mae_series(forecaster)
    if len(raw) == 0:
        raise DataError(f"no issuances recorded for {forecaster!r}")
    kernel = np.ones(min(smooth_steps, len(raw))) / min(smooth_steps, len(raw))
    smoothed = np.convolve(raw, kernel, mode="same")

    out = []
    for event in events:
        event_ts = event if isinstance(event, Timestamp) \
            else Timestamp.from_date(event)
        e = event_ts.epoch_seconds
        pre_lo = e - int(pre_days * SECONDS_PER_DAY)
        post_hi = e + int(post_days * SECONDS_PER_DAY)
        if e < times[0] or e > times[-1]:
            raise DataError(f"event {event} outside the simulated span")
        pre_mask = (times >= pre_lo) & (times < e)
        win_mask = (times >= pre_lo) & (times <= post_hi)
        if not pre_mask.any():
            raise DataError(f"no pre-event issuances before {event}")
        baseline = float(raw[pre_mask].mean())

        spike_at = adapted_at = None
        post_idx = np.flatnonzero((times >= e) & (times <= post_hi))
        for i in post_idx:
            if spike_at is None and smoothed[i] > spike_factor * baseline:
                spike_at = int(times[i])
            elif spike_at is not None and smoothed[i] <= adapted_factor * baseline:
                adapted_at = int(times[i])
                break
        out.append(AdaptationPhases(
            event_epoch=e, baseline_mae=baseline, times=times[win_mask],
            mae=smoothed[win_mask], raw_mae=raw[win_mask],
            spike_at=spike_at, adapted_at=adapted_at))
    return out
