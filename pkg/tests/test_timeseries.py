import numpy as np
import pytest

from loadcast.errors import DataError
from loadcast.timeseries import (LoadSeries, Timestamp, regularize, resample,
                                 weekday_of_epoch)


class TestTimestamp:
    def test_weekday_range_and_anchors(self):
        assert Timestamp.of(2019, 1, 7).weekday == 1  # Monday
        assert Timestamp.of(2019, 1, 12).weekday == 6
        assert Timestamp.of(2019, 1, 13).weekday == 7
        assert Timestamp(0).weekday == 4  # 1970-01-01 was a Thursday

    def test_second_of_day_and_week(self):
        ts = Timestamp.of(2019, 1, 7, 0, 0, 0)  # Monday midnight
        assert ts.second_of_day == 0
        assert ts.second_of_week == 0
        ts2 = Timestamp.of(2019, 1, 8, 1, 2, 3)
        assert ts2.second_of_day == 3723
        assert ts2.second_of_week == 86400 + 3723

    def test_bounds_over_random_instants(self, rng):
        for _ in range(200):
            ts = Timestamp(int(rng.integers(0, 2_000_000_000)))
            assert 1 <= ts.weekday <= 7
            assert 0 <= ts.second_of_day < 86400
            assert 0 <= ts.second_of_week < 604800

    def test_arithmetic(self):
        a = Timestamp.of(2019, 3, 2)
        assert (a + 300) - a == 300
        assert a - 300 == Timestamp(a.epoch_seconds - 300)

    def test_vectorized_weekday_matches_scalar(self, rng):
        epochs = rng.integers(0, 2_000_000_000, size=50)
        vec = weekday_of_epoch(epochs)
        for e, w in zip(epochs, vec):
            assert Timestamp(int(e)).weekday == w


class TestRegularize:
    def test_interior_linear_interpolation(self):
        series, report = regularize([(0, 10.0), (600, 30.0)], 300)
        assert series.values.tolist() == [10.0, 20.0, 30.0]
        assert report.missing_slots == 1
        assert report.longest_missing_run == 1

    def test_gap_free_series_unchanged(self):
        points = [(i * 300, float(10 + i)) for i in range(10)]
        series, report = regularize(points, 300)
        assert series.values.tolist() == [10.0 + i for i in range(10)]
        assert report.missing_slots == 0
        assert report.duplicate_timestamps == 0

    def test_duplicate_timestamp_last_wins(self):
        series, report = regularize([(0, 5.0), (0, 7.0), (300, 1.0)], 300)
        assert series.values[0] == 7.0
        assert report.duplicate_timestamps == 1

    def test_negative_and_nonfinite_treated_missing(self):
        series, report = regularize(
            [(0, 10.0), (300, -5.0), (600, float("nan")), (900, 40.0)], 300)
        assert report.invalid_values == 2
        # interior gap: linear between 10 and 40
        assert series.values.tolist() == [10.0, 20.0, 30.0, 40.0]

    def test_leading_trailing_gaps_take_nearest(self):
        series, _ = regularize([(600, 30.0), (900, 60.0)], 300)
        # grid starts at the first valid reading; now force edges via invalids
        series2, _ = regularize(
            [(0, -1.0), (600, 30.0), (900, 60.0), (1500, -2.0)], 300)
        assert series2.values.tolist() == [30.0, 30.0, 30.0, 60.0, 60.0, 60.0]
        assert series.values.tolist() == [30.0, 60.0]

    def test_idempotent(self, rng):
        points = [(int(t) * 300 + int(rng.integers(0, 200)), float(v))
                  for t, v in enumerate(rng.uniform(0, 100, size=50))]
        once, _ = regularize(points, 300)
        twice, report = regularize(once.points(), 300)
        assert np.array_equal(once.values, twice.values)
        assert report.missing_slots == 0

    def test_errors(self):
        with pytest.raises(DataError):
            regularize([], 300)
        with pytest.raises(DataError):
            regularize([(0, -1.0), (300, float("inf"))], 300)

    def test_off_grid_points_interpolate(self):
        series, _ = regularize([(0, 0.0), (450, 45.0), (900, 90.0)], 300)
        assert series.values.tolist() == [0.0, 30.0, 60.0, 90.0]


class TestResample:
    def test_constant_series(self):
        series = LoadSeries(Timestamp(0), 1, np.full(600, 4.0))
        out = resample(series, 300)
        assert out.values.tolist() == [4.0, 4.0]
        assert out.step_seconds == 300

    def test_mean_of_covered_values(self):
        series = LoadSeries(Timestamp(0), 300, np.array([10.0, 30.0]))
        out = resample(series, 600)
        assert out.values.tolist() == [20.0]

    def test_energy_preserved(self, rng):
        values = rng.uniform(0, 5000, size=1200)
        series = LoadSeries(Timestamp(0), 60, values)
        out = resample(series, 600)
        assert out.energy_kwh() == pytest.approx(series.energy_kwh(), rel=1e-9)
        assert out.mean_w() == pytest.approx(series.mean_w(), rel=1e-9)

    def test_non_divisible_step_rejected(self):
        series = LoadSeries(Timestamp(0), 300, np.arange(10.0))
        with pytest.raises(DataError):
            resample(series, 450)

    def test_trailing_partial_window_dropped(self):
        series = LoadSeries(Timestamp(0), 300, np.arange(5.0))
        out = resample(series, 600)
        assert len(out) == 2


class TestLoadSeries:
    def test_index_and_slicing(self):
        series = LoadSeries(Timestamp(0), 300, np.arange(10.0))
        assert series.index_of(Timestamp(900)) == 3
        sub = series.slice(Timestamp(600), Timestamp(1500))
        assert sub.values.tolist() == [2.0, 3.0, 4.0]
        assert sub.start == Timestamp(600)

    def test_misaligned_lookup_rejected(self):
        series = LoadSeries(Timestamp(0), 300, np.arange(10.0))
        with pytest.raises(DataError):
            series.index_of(Timestamp(450))
        with pytest.raises(DataError):
            series.value_at(Timestamp(3000))

    def test_values_immutable(self):
        series = LoadSeries(Timestamp(0), 300, np.arange(5.0))
        with pytest.raises(ValueError):
            series.values[0] = 99.0
