"""Season and day-class calendar rules for profile-based forecasting.

Seasons partition the year: Summer 15/05-14/09, Transition 21/03-14/05 and
15/09-31/10, Winter 01/11-20/03. Public holidays count as Sundays, except
Christmas Day and New Year's Day, which count as Saturdays unless they fall
on a Sunday.
"""

from __future__ import annotations

import datetime as _dt
from enum import Enum


class Season(Enum):
    SUMMER = "summer"
    TRANSITION = "transition"
    WINTER = "winter"


class DayClass(Enum):
    WEEKDAY = "weekday"
    SATURDAY = "saturday"
    SUNDAY = "sunday"


def season_of(d: _dt.date) -> Season:
    md = (d.month, d.day)
    if (5, 15) <= md <= (9, 14):
        return Season.SUMMER
    if (3, 21) <= md <= (5, 14) or (9, 15) <= md <= (10, 31):
        return Season.TRANSITION
    return Season.WINTER


def _is_saturday_rule_holiday(d: _dt.date) -> bool:
    return (d.month, d.day) in ((12, 25), (1, 1))


def day_class_of(d: _dt.date, holidays: frozenset | set = frozenset()) -> DayClass:
    iso = d.isoweekday()
    if _is_saturday_rule_holiday(d):
        return DayClass.SUNDAY if iso == 7 else DayClass.SATURDAY
    if d in holidays:
        return DayClass.SUNDAY
    if iso == 6:
        return DayClass.SATURDAY
    if iso == 7:
        return DayClass.SUNDAY
    return DayClass.WEEKDAY


def classify_day(d: _dt.date, holidays: frozenset | set = frozenset()
                 ) -> tuple[Season, DayClass]:
    return season_of(d), day_class_of(d, holidays)
