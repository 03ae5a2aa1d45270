import pytest
from hypothesis import given
from hypothesis import strategies as st

from tourcast.model import (Instance, Weekday, Weights, as_tour, day_of_week, duplicate_cities, is_bad_day,
                            is_complete, is_good_day, missing_cities)

from .conftest import A, make_instance


def _calendar(n=42, start=Weekday.MON):
    return make_instance([[0]], days=n, start=start)


@pytest.mark.parametrize("start, i, expected", [
    (Weekday.MON, 0, Weekday.MON),
    (Weekday.MON, 7, Weekday.MON),
    (Weekday.MON, 10, Weekday.THU),
    (Weekday.SAT, 2, Weekday.MON),
])
def test_day_of_week(start, i, expected):
    assert day_of_week(_calendar(start=start), i) is expected


def test_day_of_week_out_of_range():
    inst = _calendar(n=5)
    with pytest.raises(IndexError):
        day_of_week(inst, 5)
    with pytest.raises(IndexError):
        day_of_week(inst, -1)


def test_good_and_bad_days():
    inst = _calendar()
    assert is_good_day(inst, 3) and not is_bad_day(inst, 3)
    assert is_bad_day(inst, 0) and not is_good_day(inst, 0)
    assert not is_good_day(inst, 5) and not is_bad_day(inst, 5)


@given(st.sampled_from(list(Weekday)), st.integers(0, 34))
def test_weekly_period_and_exclusive(start, i):
    inst = _calendar(start=start)
    assert day_of_week(inst, i) == day_of_week(inst, i + 7)
    assert not (is_good_day(inst, i) and is_bad_day(inst, i))


def test_is_complete():
    inst = make_instance([[0, 1], [1, 0]], days=3)
    assert is_complete([1, 2, 0], inst)
    assert not is_complete([1, 1, 0], inst)
    assert not is_complete([1, 0, 0], inst)
    with pytest.raises(ValueError):
        is_complete([1, 2], inst)


def test_appendix_tour1_complete(appendix, sample):
    assert is_complete(appendix["tours"]["1"], sample)
    assert duplicate_cities(appendix["tours"]["1"]) == []


def test_duplicates_and_missing():
    inst = make_instance([[0, 1, 1], [1, 0, 1], [1, 1, 0]], days=4)
    assert duplicate_cities([1, 1, 0, 2]) == [1]
    assert missing_cities([1, 1, 0, 2], inst) == [3]


def test_instance_invariants():
    with pytest.raises(ValueError):
        make_instance([[1]], days=2)  # non-zero diagonal
    with pytest.raises(ValueError):
        Instance(2, Weekday.MON, ["a"], [[0]], [[A]])  # availability rows != days
    inst = make_instance([[0, 3550], [499, 0]], days=2)
    assert inst.day == ((0, 7), (0, 0))


def test_instance_equality_is_structural():
    a = make_instance([[0, 700], [650, 0]], days=3)
    b = make_instance([(0, 700), (650, 0)], days=3)
    assert a == b


def test_as_tour_validates():
    inst = make_instance([[0, 1], [1, 0]], days=3)
    assert as_tour([1, 0, 2], inst) == (1, 0, 2)
    with pytest.raises(ValueError):
        as_tour([1, 0], inst)
    with pytest.raises(ValueError):
        as_tour([1, 0, 3], inst)


def test_weight_sign_warning(caplog):
    Weights(20, 200, 200).validate()
    assert "minimisation signs" in caplog.text


def test_weekday_parse():
    assert Weekday.parse("Thursday") is Weekday.THU
    with pytest.raises(ValueError):
        Weekday.parse("xyz")
