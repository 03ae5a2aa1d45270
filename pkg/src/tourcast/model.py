"""Core domain types: instances, tours, weights and calendar arithmetic."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Sequence

log = logging.getLogger(__name__)

DEFAULT_TRAVEL_LIMIT = 500


class Weekday(enum.IntEnum):
    MON = 0
    TUE = 1
    WED = 2
    THU = 3
    FRI = 4
    SAT = 5
    SUN = 6

    @property
    def label(self) -> str:
        return self.name.capitalize()

    @classmethod
    def parse(cls, text: str) -> "Weekday":
        key = text.strip().upper()[:3]
        try:
            return cls[key]
        except KeyError:
            raise ValueError(f"unknown weekday: {text!r}") from None


GOOD_DAYS = frozenset({Weekday.THU, Weekday.FRI})
BAD_DAYS = frozenset({Weekday.MON, Weekday.TUE})


class AvailabilityCode(enum.IntEnum):
    """Per-city, per-day availability after venue merging."""

    AVAILABLE = 1
    RELATIVE = 0
    ABSOLUTE = -1


def derive_day_matrix(mile: Sequence[Sequence[int]], travel_limit: int = DEFAULT_TRAVEL_LIMIT) -> tuple[tuple[int, ...], ...]:
    """Minimum desirable travel days: floor(miles / travel_limit), entrywise."""
    if travel_limit <= 0:
        raise ValueError(f"travel_limit must be positive, got {travel_limit}")
    out = []
    for row in mile:
        if any(x < 0 for x in row):
            raise ValueError("mile entries must be non-negative")
        out.append(tuple(int(x) // travel_limit for x in row))
    return tuple(out)


@dataclass(frozen=True)
class Instance:
    """One touring problem: calendar, cities, distances and availability.

    ``availability[d][c]`` is the code of city ``c + 1`` on day ``d``.
    """

    num_days: int
    start_weekday: Weekday
    city_names: tuple[str, ...]
    mile: tuple[tuple[int, ...], ...]
    availability: tuple[tuple[AvailabilityCode, ...], ...]
    travel_limit: int = DEFAULT_TRAVEL_LIMIT
    day: tuple[tuple[int, ...], ...] = field(default=(), compare=False)

    def __post_init__(self):
        # normalise containers so that equality is structural
        set_ = object.__setattr__
        set_(self, "start_weekday", Weekday(self.start_weekday))
        set_(self, "city_names", tuple(self.city_names))
        set_(self, "mile", tuple(tuple(int(x) for x in row) for row in self.mile))
        set_(self, "availability", tuple(tuple(AvailabilityCode(x) for x in row) for row in self.availability))
        m, n = len(self.city_names), self.num_days
        if n < 1:
            raise ValueError(f"num_days must be >= 1, got {n}")
        if len(self.mile) != m or any(len(row) != m for row in self.mile):
            raise ValueError(f"mile matrix must be {m}x{m}")
        for i in range(m):
            if self.mile[i][i] != 0:
                raise ValueError(f"mile[{i}][{i}] must be 0")
        if len(self.availability) != n or any(len(row) != m for row in self.availability):
            raise ValueError(f"availability must be {n}x{m}")
        set_(self, "day", derive_day_matrix(self.mile, self.travel_limit))

    @property
    def num_cities(self) -> int:
        return len(self.city_names)

    @property
    def n(self) -> int:
        return self.num_days

    @property
    def m(self) -> int:
        return len(self.city_names)

    def city_name(self, code: int) -> str:
        return self.city_names[code - 1]

    def availability_fraction(self) -> float:
        cells = [c for row in self.availability for c in row]
        if not cells:
            return 0.0
        return sum(c == AvailabilityCode.AVAILABLE for c in cells) / len(cells)


def _check_index(inst: Instance, day_index: int) -> None:
    if not 0 <= day_index < inst.num_days:
        raise IndexError(f"day index {day_index} outside [0, {inst.num_days})")


def day_of_week(inst: Instance, day_index: int) -> Weekday:
    _check_index(inst, day_index)
    return Weekday((inst.start_weekday + day_index) % 7)


def is_good_day(inst: Instance, day_index: int) -> bool:
    return day_of_week(inst, day_index) in GOOD_DAYS


def is_bad_day(inst: Instance, day_index: int) -> bool:
    return day_of_week(inst, day_index) in BAD_DAYS


Tour = tuple[int, ...]


def as_tour(values: Sequence[int], inst: Instance | None = None) -> Tour:
    """Coerce to a tuple of ints, checking length and code range against ``inst``."""
    tour = tuple(int(v) for v in values)
    if inst is not None:
        if len(tour) != inst.num_days:
            raise ValueError(f"tour length {len(tour)} != number of days {inst.num_days}")
        bad = [v for v in tour if not 0 <= v <= inst.num_cities]
        if bad:
            raise ValueError(f"unknown city code(s) {sorted(set(bad))} for m={inst.num_cities}")
    return tour


def is_complete(tour: Sequence[int], inst: Instance) -> bool:
    if len(tour) != inst.num_days:
        raise ValueError(f"tour length {len(tour)} != number of days {inst.num_days}")
    performed = [v for v in tour if v]
    return sorted(performed) == list(range(1, inst.num_cities + 1))


def duplicate_cities(tour: Sequence[int]) -> list[int]:
    seen, dups = set(), []
    for v in tour:
        if v:
            if v in seen and v not in dups:
                dups.append(v)
            seen.add(v)
    return dups


def missing_cities(tour: Sequence[int], inst: Instance) -> list[int]:
    performed = set(tour)
    return [k for k in range(1, inst.num_cities + 1) if k not in performed]


@dataclass(frozen=True)
class Weights:
    """Objective weights: per mile, per good day, per bad day."""

    w_mile: float = 20.0
    w_good: float = -200.0
    w_bad: float = 200.0

    def validate(self) -> "Weights":
        if not (self.w_mile > 0 and self.w_bad > 0 and self.w_good < 0):
            log.warning("weights %s do not follow the minimisation signs (mile>0, good<0, bad>0)", self)
        return self

    def scaled(self, k: float) -> "Weights":
        return Weights(self.w_mile * k, self.w_good * k, self.w_bad * k)


@dataclass(frozen=True)
class Penalties:
    """Per-violation penalties for the relaxed cost."""

    p_avail1: float = 10_000.0
    p_avail2: float = 1_000_000.0
    p_break: float = 10_000.0
    p_sep1: float = 10_000.0
    p_sep2: float = 2_000_000.0

    def __post_init__(self):
        for name in ("p_avail1", "p_avail2", "p_break", "p_sep1", "p_sep2"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.p_avail2 < self.p_avail1 or self.p_sep2 < self.p_sep1:
            log.info("type-2 penalties below type-1 penalties: %s", self)

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.p_avail1, self.p_avail2, self.p_break, self.p_sep1, self.p_sep2)

    def scaled(self, k: float) -> "Penalties":
        return Penalties(*(p * k for p in self.as_tuple()))


ZERO_PENALTIES = Penalties(0.0, 0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class Objectives:
    total_miles: int = 0
    good_days: int = 0
    bad_days: int = 0
