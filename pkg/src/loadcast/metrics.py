"""Forecast error metrics and their aggregation.

MAE, RMSE, MAPE and the scaled error MASE, which divides the forecast MAE by
the mean absolute difference between the actuals and their value one week
earlier (with a 1/(h-1) factor, so a pure 7-day persistence forecast scores
exactly (h-1)/h).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError, UndefinedMetricError


def _pair(forecast, actual) -> tuple[np.ndarray, np.ndarray]:
    f = np.asarray(forecast, dtype=np.float64)
    a = np.asarray(actual, dtype=np.float64)
    if f.shape != a.shape or f.ndim != 1 or len(f) == 0:
        raise DataError("forecast and actual must be equal-length 1-D sequences")
    return f, a


def mae(forecast, actual) -> float:
    f, a = _pair(forecast, actual)
    return float(np.mean(np.abs(f - a)))


def rmse(forecast, actual) -> float:
    f, a = _pair(forecast, actual)
    return float(np.sqrt(np.mean((f - a) ** 2)))


def mape(forecast, actual, mode: str = "forecast") -> float:
    """Mean absolute percentage error.

    mode="forecast" divides each residual by the forecast value (the default);
    mode="actual" is the conventional variant. Steps with a zero denominator
    are excluded; if all steps are excluded the metric is undefined.
    """
    pct, _ = mape_with_exclusions(forecast, actual, mode)
    return pct


def mape_with_exclusions(forecast, actual, mode: str = "forecast"
                         ) -> tuple[float, int]:
    """MAPE plus the number of zero-denominator steps that were excluded."""
    f, a = _pair(forecast, actual)
    if mode == "forecast":
        denom = f
    elif mode == "actual":
        denom = a
    else:
        raise DataError(f"unknown mape mode {mode!r}")
    keep = denom != 0.0
    excluded = int((~keep).sum())
    if not keep.any():
        raise UndefinedMetricError("all steps have zero denominator")
    pct = float(np.mean(np.abs((f[keep] - a[keep]) / denom[keep])) * 100.0)
    return pct, excluded


def mase(forecast, actual, naive_lag_values) -> float:
    """Forecast MAE over the scaled error of the 7-day persistence reference.

    naive_lag_values holds the measured load one week before each horizon
    step. The denominator uses a 1/(h-1) factor.
    """
    f, a = _pair(forecast, actual)
    lag = np.asarray(naive_lag_values, dtype=np.float64)
    if lag.shape != a.shape:
        raise DataError("naive lag values must match the horizon length")
    h = len(a)
    if h < 2:
        raise DataError("mase needs a horizon of at least 2 steps")
    denom = np.sum(np.abs(a - lag)) / (h - 1)
    if denom == 0.0:
        raise UndefinedMetricError(
            "actuals equal their 7-day lag everywhere; scaled error undefined")
    return mae(f, a) / denom


@dataclass(frozen=True)
class ErrorReport:
    """Metrics of one forecast issuance. Undefined metrics hold NaN."""

    issued_at: int  # epoch seconds
    h: int
    mae_w: float
    rmse_w: float
    mape_pct: float
    mase: float

    def __post_init__(self):
        if self.mae_w > self.rmse_w + 1e-9 * max(1.0, self.rmse_w):
            raise DataError("mae cannot exceed rmse")


def evaluate(issued_at: int, forecast, actual, naive_lag_values,
             mape_mode: str = "forecast") -> ErrorReport:
    """All four metrics for one issuance, NaN where a metric is undefined."""
    try:
        mape_pct = mape(forecast, actual, mape_mode)
    except UndefinedMetricError:
        mape_pct = math.nan
    try:
        scaled = mase(forecast, actual, naive_lag_values)
    except UndefinedMetricError:
        scaled = math.nan
    return ErrorReport(issued_at=issued_at, h=len(actual),
                       mae_w=mae(forecast, actual), rmse_w=rmse(forecast, actual),
                       mape_pct=mape_pct, mase=scaled)


METRIC_FIELDS = ("mae_w", "rmse_w", "mape_pct", "mase")


def aggregate(reports) -> dict[str, float]:
    """Arithmetic means per metric over all issuances, skipping NaN cells."""
    reports = list(reports)
    if not reports:
        raise DataError("no reports to aggregate")
    out: dict[str, float] = {"n_reports": float(len(reports))}
    for name in METRIC_FIELDS:
        col = np.array([getattr(r, name) for r in reports])
        defined = col[~np.isnan(col)]
        out[name] = float(defined.mean()) if len(defined) else math.nan
    return out


@dataclass(frozen=True)
class BoxplotSummary:
    q1: float
    median: float
    q3: float
    whisker_low: float
    whisker_high: float
    outliers: int
    n: int


def boxplot_summary(values) -> BoxplotSummary:
    """Quartiles by linear interpolation; whiskers at the last datum within
    1.5 IQR of the box; everything beyond counts as an outlier."""
    v = np.asarray(values, dtype=np.float64)
    v = v[~np.isnan(v)]
    if v.size == 0:
        raise DataError("boxplot of empty value set")
    q1, med, q3 = np.percentile(v, [25.0, 50.0, 75.0])
    iqr = q3 - q1
    lo_fence, hi_fence = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    inside = v[(v >= lo_fence) & (v <= hi_fence)]
    whisker_low, whisker_high = float(inside.min()), float(inside.max())
    outliers = int(((v < lo_fence) | (v > hi_fence)).sum())
    return BoxplotSummary(float(q1), float(med), float(q3),
                          whisker_low, whisker_high, outliers, int(v.size))
