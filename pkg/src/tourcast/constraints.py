"""Violation counting and objective evaluation for a tour vector."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .model import BAD_DAYS, GOOD_DAYS, AvailabilityCode, Instance, Objectives

DEFAULT_BREAK_LIMIT = 4

AVAIL1 = "availability-1"
AVAIL2 = "availability-2"
BREAK = "break"
SEP1 = "separation-1"
SEP2 = "separation-2"
KINDS = (AVAIL1, AVAIL2, BREAK, SEP1, SEP2)


class Location(NamedTuple):
    kind: str
    day_index: int
    detail: str


@dataclass(frozen=True)
class ViolationReport:
    avail_type1: int = 0
    avail_type2: int = 0
    break_violations: int = 0
    sep_type1: int = 0
    sep_type2: int = 0
    locations: tuple[Location, ...] = field(default=(), compare=False)

    @property
    def counts(self) -> tuple[int, int, int, int, int]:
        return (self.avail_type1, self.avail_type2, self.break_violations, self.sep_type1, self.sep_type2)

    @property
    def total(self) -> int:
        return sum(self.counts)

    def at(self, kind: str) -> list[Location]:
        return [loc for loc in self.locations if loc.kind == kind]


@dataclass(frozen=True)
class Evaluation:
    objectives: Objectives
    violations: ViolationReport


def count_availability_violations(tour: Sequence[int], inst: Instance, *, record: bool = True):
    """Return ``(y1, y2, locations)`` for performances on unavailable cells."""
    y1 = y2 = 0
    locs = []
    avail = inst.availability
    for i, k in enumerate(tour):
        if not k:
            continue
        code = avail[i][k - 1]
        if code == AvailabilityCode.RELATIVE:
            y1 += 1
            if record:
                locs.append(Location(AVAIL1, i, f"city {k} relatively unavailable"))
        elif code == AvailabilityCode.ABSOLUTE:
            y2 += 1
            if record:
                locs.append(Location(AVAIL2, i, f"city {k} absolutely unavailable"))
    return y1, y2, locs


def count_break_violations(tour: Sequence[int], break_limit: int = DEFAULT_BREAK_LIMIT, *, record: bool = True):
    """Count windows of ``break_limit + 1`` consecutive performance days.

    Overlapping windows each count, so a run of ``L`` performances contributes
    ``max(0, L - break_limit)`` violations.
    """
    if break_limit < 1:
        raise ValueError("break limit must be >= 1")
    y3 = 0
    locs = []
    run = 0
    for i, k in enumerate(tour):
        run = run + 1 if k else 0
        if run > break_limit:
            y3 += 1
            if record:
                start = i - break_limit
                locs.append(Location(BREAK, start, f"performances on days {start}..{i}"))
    return y3, locs


def count_separation_violations(tour: Sequence[int], inst: Instance, *, record: bool = True):
    """Return ``(y4, y5, locations)``: deficits of exactly one day, and of two or more."""
    y4 = y5 = 0
    locs = []
    day = inst.day
    prev_i = -1
    prev_k = 0
    for j, k in enumerate(tour):
        if not k:
            continue
        if prev_k:
            need = day[prev_k - 1][k - 1]
            deficit = need - (j - prev_i)
            if deficit == 1:
                y4 += 1
            elif deficit >= 2:
                y5 += 1
            if deficit >= 1 and record:
                locs.append(Location(
                    SEP1 if deficit == 1 else SEP2, prev_i,
                    f"city {prev_k} -> city {k}: needs {need} days, has {j - prev_i}",
                ))
        prev_i, prev_k = j, k
    return y4, y5, locs


def objectives(tour: Sequence[int], inst: Instance) -> Objectives:
    miles = good = bad = 0
    mile = inst.mile
    start = int(inst.start_weekday)
    prev = 0
    for i, k in enumerate(tour):
        if not k:
            continue
        if prev:
            miles += mile[prev - 1][k - 1]
        prev = k
        wd = (start + i) % 7
        if wd in GOOD_DAYS:
            good += 1
        elif wd in BAD_DAYS:
            bad += 1
    return Objectives(miles, good, bad)


def evaluate(tour: Sequence[int], inst: Instance, break_limit: int = DEFAULT_BREAK_LIMIT,
             *, record: bool = True) -> Evaluation:
    if len(tour) != inst.num_days:
        raise ValueError(f"tour length {len(tour)} != number of days {inst.num_days}")
    y1, y2, la = count_availability_violations(tour, inst, record=record)
    y3, lb = count_break_violations(tour, break_limit, record=record)
    y4, y5, ls = count_separation_violations(tour, inst, record=record)
    locs = tuple(sorted(la + lb + ls, key=lambda loc: (loc.day_index, KINDS.index(loc.kind))))
    return Evaluation(objectives(tour, inst), ViolationReport(y1, y2, y3, y4, y5, locs))


def is_strictly_feasible(tour: Sequence[int], inst: Instance, break_limit: int = DEFAULT_BREAK_LIMIT) -> bool:
    """True when no hard rule is broken: every performance on an available cell,
    no over-long run of performances, and every gap at least the required travel days.

    Completeness is a separate question (see :func:`tourcast.model.is_complete`).
    """
    ev = evaluate(tour, inst, break_limit, record=False)
    if ev.violations.total:
        return False
    return all(inst.availability[i][k - 1] == AvailabilityCode.AVAILABLE for i, k in enumerate(tour) if k)
