import math

import numpy as np
import pytest

from loadcast.correlation import monthly_correlation_report, pearson
from loadcast.errors import DataError, UndefinedMetricError
from loadcast.features import FEATURE_NAMES, FeatureMatrix
from loadcast.timeseries import Timestamp


def brute_force_pearson(a, b):
    """Independent evaluation of the covariance/correlation formulas."""
    n = len(a)
    mean_a = sum(a) / n
    mean_b = sum(b) / n
    cov = sum((x - mean_a) * (y - mean_b) for x, y in zip(a, b)) / (n - 1)
    sd_a = math.sqrt(sum((x - mean_a) ** 2 for x in a) / (n - 1))
    sd_b = math.sqrt(sum((y - mean_b) ** 2 for y in b) / (n - 1))
    return cov / (sd_a * sd_b)


class TestPearson:
    def test_self_correlation(self, rng):
        a = rng.uniform(0, 10, size=20)
        assert pearson(a, a) == pytest.approx(1.0)

    def test_sign_flip(self, rng):
        a = rng.uniform(0, 10, size=20)
        assert pearson(a, -a) == pytest.approx(-1.0)

    def test_hand_evaluated_case(self):
        a, b = [1.0, 2.0, 3.0], [2.0, 4.0, 7.0]
        assert pearson(a, b) == pytest.approx(brute_force_pearson(a, b), abs=1e-14)

    def test_matches_brute_force_on_random_pairs(self, rng):
        for _ in range(50):
            a = rng.normal(size=15)
            b = rng.normal(size=15)
            assert pearson(a, b) == pytest.approx(brute_force_pearson(a, b),
                                                  abs=1e-12)

    def test_symmetry_scale_invariance_bounds(self, rng):
        for _ in range(30):
            a = rng.normal(size=25)
            b = rng.normal(size=25)
            r = pearson(a, b)
            assert -1.0 - 1e-12 <= r <= 1.0 + 1e-12
            assert pearson(b, a) == pytest.approx(r, abs=1e-12)
            alpha, beta = rng.uniform(0.1, 5), rng.uniform(-3, 3)
            assert pearson(alpha * a + beta, b) == pytest.approx(r, abs=1e-9)
            assert pearson(-alpha * a + beta, b) == pytest.approx(-r, abs=1e-9)

    def test_constant_sequence_undefined(self):
        with pytest.raises(UndefinedMetricError):
            pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])

    def test_length_mismatch(self):
        with pytest.raises(DataError):
            pearson([1.0, 2.0], [1.0, 2.0, 3.0])


def _matrix_over_months(rng, months=("2019-02", "2019-03"), rows_per_month=40):
    ts, rows, target = [], [], []
    for label in months:
        year, month = map(int, label.split("-"))
        base = Timestamp.of(year, month, 1).epoch_seconds
        for i in range(rows_per_month):
            y = float(rng.uniform(100, 200))
            lag_week = y  # feature 0 equals the target exactly
            row = [lag_week, 2 * y + rng.normal() * 1e-3,
                   rng.uniform(-5, 20)] + list(rng.uniform(0, 1, 7))
            ts.append(base + 300 * i)
            rows.append(row)
            target.append(y)
    return FeatureMatrix(np.array(ts), np.array(rows), np.array(target))


class TestMonthlyReport:
    def test_identical_feature_scores_one_everywhere(self, rng):
        report = monthly_correlation_report(_matrix_over_months(rng))
        i = FEATURE_NAMES.index("lag_week_w")
        assert np.allclose(report.values[i], 1.0)
        assert report.column_labels == ("2019-02", "2019-03", "overall")

    def test_single_month_overall_equals_month(self, rng):
        report = monthly_correlation_report(
            _matrix_over_months(rng, months=("2019-05",)))
        assert np.allclose(report.values[:, 0], report.values[:, 1],
                           equal_nan=True)

    def test_noisy_linear_feature_strongly_correlated(self, rng):
        report = monthly_correlation_report(_matrix_over_months(rng))
        i = FEATURE_NAMES.index("lag_day_w")  # 2*target + tiny noise
        assert report.values[i, -1] > 0.99

    def test_constant_feature_reported_missing(self, rng):
        m = _matrix_over_months(rng, months=("2019-07",))
        X = m.X.copy()
        X[:, 5] = 0.0  # holiday flag constant
        report = monthly_correlation_report(FeatureMatrix(m.timestamps, X, m.y))
        assert math.isnan(report.values[5, 0])
        assert math.isnan(report.values[5, -1])
