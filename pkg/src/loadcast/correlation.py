"""Pearson correlation and the per-month feature/target correlation table."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError, UndefinedMetricError


def pearson(a, b) -> float:
    """Sample correlation cov(a,b) / (sd(a) * sd(b)) with 1/(n-1) covariance."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise DataError("pearson expects two equal-length 1-D sequences")
    n = len(a)
    if n < 2:
        raise DataError("pearson needs at least 2 samples")
    da, db = a - a.mean(), b - b.mean()
    cov = float(np.dot(da, db)) / (n - 1)
    sd_a = float(np.sqrt(np.dot(da, da) / (n - 1)))
    sd_b = float(np.sqrt(np.dot(db, db) / (n - 1)))
    if sd_a == 0.0 or sd_b == 0.0:
        raise UndefinedMetricError("correlation undefined for constant sequence")
    return cov / (sd_a * sd_b)


@dataclass(frozen=True)
class CorrelationReport:
    """Feature/target correlations per calendar month plus a whole-span column.

    values[i, j] is the correlation of feature i in month j; the final column
    is the whole dataset. Undefined cells hold NaN.
    """

    feature_names: tuple[str, ...]
    month_labels: tuple[str, ...]
    values: np.ndarray

    @property
    def column_labels(self) -> tuple[str, ...]:
        return self.month_labels + ("overall",)

    def rows(self) -> list[list]:
        out = []
        for i, name in enumerate(self.feature_names):
            out.append([name] + [None if np.isnan(v) else float(v)
                                 for v in self.values[i]])
        return out


def monthly_correlation_report(matrix) -> CorrelationReport:
    """Correlate every feature column against the target, per month and overall."""
    from .features import FEATURE_NAMES  # local import to avoid a cycle

    months = matrix.month_keys()
    labels = tuple(f"{y:04d}-{m:02d}" for y, m in months)
    n_feat = matrix.X.shape[1]
    values = np.full((n_feat, len(months) + 1), np.nan)

    groups = [(matrix.month_mask(key)) for key in months]
    groups.append(np.ones(len(matrix.y), dtype=bool))
    for j, mask in enumerate(groups):
        y = matrix.y[mask]
        if len(y) < 2:
            continue
        for i in range(n_feat):
            try:
                values[i, j] = pearson(matrix.X[mask, i], y)
            except UndefinedMetricError:
                pass  # constant column in this group: reported as missing
    return CorrelationReport(tuple(FEATURE_NAMES), labels, values)
