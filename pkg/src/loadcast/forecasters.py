"""Forecaster adapters driven by the sliding-window engine.

Each adapter issues a 24-hour forecast at every simulation step and handles
its own refit schedule: the profile state refits daily at noon, the neural
networks daily at a configurable time of day (or every step), and the fixed
profile never refits. A forecaster only sees measurements strictly before
the issuance time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .features import build_features
from .nn.models import (NetworkConfig, TrainConfig, build_network,
                        sliding_windows)
from .profiles import (PslpState, SlpProfileSet, builtin_g1_profile,
                       estimate_annual_kwh, pslp_forecast, pslp_refit,
                       slp_forecast)
from .timeseries import SECONDS_PER_DAY, SECONDS_PER_WEEK, Timestamp


@dataclass(frozen=True)
class RefitRecord:
    """One refit event, with the audit fields for the no-lookahead checks."""

    step_index: int
    issued_at: int            # epoch seconds of the simulation step
    forecaster: str
    event: str                # "initial_fit" | "refit"
    n_rows: int
    train_min_ts: int | None  # oldest feature-row / folded timestamp
    train_max_ts: int | None  # newest, always < issued_at
    epochs: int | None = None
    final_loss: float | None = None
    duration_s: float | None = None


class ForecasterBase:
    """Interface the engine drives once per simulation step."""

    name: str = "base"

    def required_history_seconds(self) -> int:
        return 0

    def ready(self, ctx) -> bool:
        """May this forecaster emit at ctx.now? Never emits placeholders."""
        return len(ctx.history) * ctx.history.step_seconds \
            >= self.required_history_seconds()

    def refit(self, ctx) -> RefitRecord | None:
        return None

    def forecast(self, ctx) -> np.ndarray:
        raise NotImplementedError


class SlpForecaster(ForecasterBase):
    """Fixed standardized profile scaled by the building's annual consumption.

    With annual_kwh=None the consumption is estimated once, from the history
    available at the first issuance, and frozen afterwards.
    """

    def __init__(self, profiles: SlpProfileSet | None = None,
                 annual_kwh: float | None = None, name: str = "slp"):
        self.name = name
        self.profiles = profiles or builtin_g1_profile()
        self.annual_kwh = annual_kwh

    def forecast(self, ctx) -> np.ndarray:
        if self.annual_kwh is None:
            self.annual_kwh = estimate_annual_kwh(ctx.history)
        series = slp_forecast(self.profiles, self.annual_kwh, ctx.now,
                              ctx.horizon_steps, ctx.holidays,
                              step_seconds=ctx.step_seconds)
        return series.values


class PslpForecaster(ForecasterBase):
    """Personalized profile: per-class running means, refit daily at noon."""

    def __init__(self, name: str = "pslp"):
        self.name = name
        self.state: PslpState | None = None
        self._fed_until: Timestamp | None = None
        self.last_fallback_flags: np.ndarray | None = None

    def required_history_seconds(self) -> int:
        return SECONDS_PER_DAY

    def ready(self, ctx) -> bool:
        return self.state is not None and self.state.observed_any

    def refit(self, ctx) -> RefitRecord | None:
        if self.state is None:
            self.state = PslpState.empty(ctx.holidays)
            self._fed_until = ctx.history.start
        if self._fed_until < ctx.now:
            new = ctx.history.slice(self._fed_until, ctx.now)
            self._fed_until = ctx.now
        else:
            new = []
        before_version = self.state.version
        before_count = int(self.state.counts.sum())
        self.state = pslp_refit(self.state, new, clock=ctx.now)
        if self.state.version == before_version:
            return None
        folded_until = self.state.last_refit.epoch_seconds
        return RefitRecord(
            step_index=ctx.step_index, issued_at=ctx.now.epoch_seconds,
            forecaster=self.name,
            event="initial_fit" if before_version == 0 else "refit",
            n_rows=int(self.state.counts.sum()) - before_count,
            train_min_ts=ctx.history.start.epoch_seconds,
            train_max_ts=min(folded_until, ctx.now.epoch_seconds)
            - ctx.step_seconds)

    def forecast(self, ctx) -> np.ndarray:
        series, flags = pslp_forecast(self.state, ctx.now, ctx.horizon_steps,
                                      ctx.holidays)
        self.last_fallback_flags = flags
        return series.values


class NeuralForecaster(ForecasterBase):
    """FFNN or LSTM regression over the ten engineered features.

    The network is built once; refits warm-start from the previous weights.
    Training rows are chosen so every referenced measurement (including the
    7-day lag) stays inside the engine's window region.
    """

    def __init__(self, kind: str, net_config: NetworkConfig | None = None,
                 train_config: TrainConfig | None = None,
                 refit_mode: str = "daily", refit_second_of_day: int = 0,
                 name: str | None = None):
        if kind not in ("ffnn", "lstm"):
            raise ConfigError(f"unknown neural forecaster kind {kind!r}")
        if refit_mode not in ("daily", "per_step"):
            raise ConfigError(f"unknown refit mode {refit_mode!r}")
        self.name = name or kind
        self.kind = kind
        net_config = net_config or NetworkConfig(kind)
        if net_config.kind != kind:
            raise ConfigError("net_config.kind does not match forecaster kind")
        self.model = build_network(net_config, train_config)
        self.refit_mode = refit_mode
        self.refit_second_of_day = refit_second_of_day
        self._next_scheduled: Timestamp | None = None

    def required_history_seconds(self) -> int:
        return SECONDS_PER_WEEK

    def ready(self, ctx) -> bool:
        # the cold-start policy threshold, plus a completed first fit so the
        # cached scalers exist; never emits placeholder forecasts
        return super().ready(ctx) and self.model.is_fitted

    def _training_range(self, ctx) -> tuple[Timestamp, int]:
        rows_lo = ctx.region_b.start + SECONDS_PER_WEEK
        n_rows = (ctx.now - rows_lo) // ctx.step_seconds
        return rows_lo, max(n_rows, 0)

    def _due(self, ctx, n_rows: int) -> bool:
        if n_rows < 1:
            return False
        if not self.model.is_fitted:
            return True
        if self.refit_mode == "per_step":
            return True
        return self._next_scheduled is not None and ctx.now >= self._next_scheduled

    def _schedule_next(self, now: Timestamp):
        midnight = now.epoch_seconds - now.second_of_day
        nxt = midnight + self.refit_second_of_day
        while nxt <= now.epoch_seconds:
            nxt += SECONDS_PER_DAY
        self._next_scheduled = Timestamp(nxt)

    def refit(self, ctx) -> RefitRecord | None:
        rows_lo, n_rows = self._training_range(ctx)
        if not self._due(ctx, n_rows):
            return None
        lookback = self.model.config.lookback if self.kind == "lstm" else 1
        context = lookback - 1
        feat_lo = rows_lo - context * ctx.step_seconds
        history_floor = ctx.history.start + SECONDS_PER_WEEK
        if feat_lo < history_floor:
            feat_lo = history_floor
        n_feat = (ctx.now - feat_lo) // ctx.step_seconds
        if n_feat < lookback:
            return None
        matrix = build_features(ctx.history, ctx.temperature, ctx.holidays,
                                feat_lo, n_feat, include_target=True)
        if self.kind == "lstm":
            X = sliding_windows(matrix.X, lookback)
            y = matrix.y[context:]
        else:
            X, y = matrix.X, matrix.y
        event = "refit" if self.model.is_fitted else "initial_fit"
        report = self.model.fit(X, y)
        self._schedule_next(ctx.now)
        return RefitRecord(
            step_index=ctx.step_index, issued_at=ctx.now.epoch_seconds,
            forecaster=self.name, event=event, n_rows=len(y),
            train_min_ts=int(matrix.timestamps[0]),
            train_max_ts=int(matrix.timestamps[-1]),
            epochs=report.epochs, final_loss=report.best_loss,
            duration_s=report.duration_s)

    def forecast(self, ctx) -> np.ndarray:
        h = ctx.horizon_steps
        if self.kind == "lstm":
            context = self.model.config.lookback - 1
            start = ctx.now - context * ctx.step_seconds
            matrix = build_features(ctx.history, ctx.temperature, ctx.holidays,
                                    start, context + h, include_target=False)
            X = sliding_windows(matrix.X, self.model.config.lookback)
        else:
            matrix = build_features(ctx.history, ctx.temperature, ctx.holidays,
                                    ctx.now, h, include_target=False)
            X = matrix.X
        return self.model.predict(X)


def build_roster(names, engine_config, annual_kwh: float | None = None,
                 net_configs: dict | None = None,
                 train_config: TrainConfig | None = None) -> list:
    """Instantiate forecasters for the engine from roster names."""
    net_configs = net_configs or {}
    tc = train_config or TrainConfig(seed=engine_config.seed)
    roster = []
    for name in names:
        if name == "slp":
            roster.append(SlpForecaster(annual_kwh=annual_kwh))
        elif name == "pslp":
            roster.append(PslpForecaster())
        elif name in ("ffnn", "lstm"):
            roster.append(NeuralForecaster(
                name, net_configs.get(name), tc,
                refit_mode=engine_config.nn_refit,
                refit_second_of_day=engine_config.nn_refit_second_of_day))
        else:
            raise ConfigError(f"unknown forecaster {name!r}")
    return roster
