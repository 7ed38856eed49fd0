import datetime as dt

import pytest

from loadcast.calendars import DayClass, Season, classify_day, day_class_of, season_of


class TestSeasons:
    @pytest.mark.parametrize("date,season", [
        (dt.date(2019, 3, 20), Season.WINTER),
        (dt.date(2019, 3, 21), Season.TRANSITION),
        (dt.date(2019, 5, 14), Season.TRANSITION),
        (dt.date(2019, 5, 15), Season.SUMMER),
        (dt.date(2019, 9, 14), Season.SUMMER),
        (dt.date(2019, 9, 15), Season.TRANSITION),
        (dt.date(2019, 10, 31), Season.TRANSITION),
        (dt.date(2019, 11, 1), Season.WINTER),
        (dt.date(2019, 1, 1), Season.WINTER),
        (dt.date(2019, 12, 31), Season.WINTER),
    ])
    def test_boundaries(self, date, season):
        assert season_of(date) == season

    @pytest.mark.parametrize("year", [2019, 2020])  # plain and leap year
    def test_partition_is_total(self, year):
        d = dt.date(year, 1, 1)
        counts = {s: 0 for s in Season}
        while d.year == year:
            counts[season_of(d)] += 1
            d += dt.timedelta(days=1)
        assert sum(counts.values()) == (366 if year == 2020 else 365)
        assert all(c > 0 for c in counts.values())


class TestDayClass:
    def test_plain_weekdays(self):
        assert day_class_of(dt.date(2019, 3, 6)) == DayClass.WEEKDAY   # Wed
        assert day_class_of(dt.date(2019, 3, 9)) == DayClass.SATURDAY
        assert day_class_of(dt.date(2019, 3, 10)) == DayClass.SUNDAY

    def test_holiday_becomes_sunday(self):
        whit_monday = dt.date(2019, 6, 10)
        assert day_class_of(whit_monday, {whit_monday}) == DayClass.SUNDAY
        # a Wednesday holiday
        mayday = dt.date(2019, 5, 1)
        assert day_class_of(mayday, {mayday}) == DayClass.SUNDAY

    def test_christmas_rule(self):
        # 2019-12-25 was a Wednesday -> Saturday
        assert day_class_of(dt.date(2019, 12, 25)) == DayClass.SATURDAY
        # 2022-12-25 was a Sunday -> stays Sunday
        assert day_class_of(dt.date(2022, 12, 25)) == DayClass.SUNDAY
        # 2021-12-25 was a Saturday -> Saturday
        assert day_class_of(dt.date(2021, 12, 25)) == DayClass.SATURDAY

    def test_new_year_rule(self):
        assert day_class_of(dt.date(2019, 1, 1)) == DayClass.SATURDAY  # Tuesday
        assert day_class_of(dt.date(2023, 1, 1)) == DayClass.SUNDAY    # Sunday

    def test_classify_day_pairs(self):
        season, day_class = classify_day(dt.date(2019, 12, 25))
        assert (season, day_class) == (Season.WINTER, DayClass.SATURDAY)
        season, day_class = classify_day(dt.date(2019, 7, 16))
        assert (season, day_class) == (Season.SUMMER, DayClass.WEEKDAY)

    def test_total_and_deterministic(self):
        d = dt.date(2019, 1, 1)
        holidays = {dt.date(2019, 4, 19), dt.date(2019, 10, 3)}
        while d.year == 2019:
            first = classify_day(d, holidays)
            assert first == classify_day(d, holidays)
            assert isinstance(first[1], DayClass)
            d += dt.timedelta(days=1)
