"""Exhaustive reference solver for tiny instances.

Everything here is deliberately naive and shares no counting code with
:mod:`tourcast.constraints`, so the two can check each other.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from itertools import permutations
from typing import Iterator, Sequence

from .model import Instance, Objectives, Penalties, Tour, Weights

DEFAULT_CAP = 10**6
CAP_ENV = "TOURCAST_CAP"


class EnumerationCapExceeded(RuntimeError):
    pass


def enumeration_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    return int(raw) if raw else DEFAULT_CAP


def count_complete_tours(inst: Instance) -> int:
    n, m = inst.num_days, inst.num_cities
    return math.perm(n, m) if m <= n else 0


def enumerate_complete_tours(inst: Instance, cap: int | None = None) -> Iterator[Tour]:
    """Every assignment of cities 1..m to distinct days, in lexicographic tour order."""
    cap = enumeration_cap() if cap is None else cap
    total = count_complete_tours(inst)
    if total > cap:
        raise EnumerationCapExceeded(f"{total} tours exceeds the enumeration cap {cap}")
    return _enumerate(inst.num_days, inst.num_cities)


def _enumerate(n: int, m: int) -> Iterator[Tour]:
    tours = []
    for days in permutations(range(n), m):
        v = [0] * n
        for city, d in enumerate(days, start=1):
            v[d] = city
        tours.append(tuple(v))
    tours.sort()
    yield from tours


def recount(tour: Sequence[int], inst: Instance, break_limit: int = 4):
    """Return (Objectives, (y1..y5)) by direct transcription of the rules."""
    n = len(tour)
    days = [i for i in range(n) if tour[i] != 0]

    miles = 0
    for a, b in zip(days, days[1:]):
        miles += inst.mile[tour[a] - 1][tour[b] - 1]
    weekdays = [(int(inst.start_weekday) + i) % 7 for i in days]
    good = len([d for d in weekdays if d == 3 or d == 4])
    bad = len([d for d in weekdays if d == 0 or d == 1])

    y1 = len([i for i in days if inst.availability[i][tour[i] - 1] == 0])
    y2 = len([i for i in days if inst.availability[i][tour[i] - 1] == -1])

    # product of the window is non-zero iff every entry is non-zero
    y3 = 0
    for i in range(0, n - break_limit):
        product = 1
        for k in range(i, i + break_limit + 1):
            product *= tour[k]
        if product != 0:
            y3 += 1

    y4 = y5 = 0
    for i in days:
        later = [k for k in range(i + 1, n) if tour[k] != 0]
        if not later:
            continue
        j = later[0]
        short = inst.day[tour[i] - 1][tour[j] - 1] - (j - i)
        if short == 1:
            y4 += 1
        if short > 1:
            y5 += 1
    return Objectives(miles, good, bad), (y1, y2, y3, y4, y5)


def recount_cost(tour: Sequence[int], inst: Instance, w: Weights, p: Penalties, break_limit: int = 4) -> float:
    obj, y = recount(tour, inst, break_limit)
    objective = float(w.w_mile * obj.total_miles + w.w_good * obj.good_days + w.w_bad * obj.bad_days)
    penalty = float(p.p_avail1 * y[0] + p.p_avail2 * y[1] + p.p_break * y[2] + p.p_sep1 * y[3] + p.p_sep2 * y[4])
    return objective + penalty


@dataclass(frozen=True)
class OracleResult:
    best_tour: Tour
    best_cost: float
    num_enumerated: int
    ties: int


def brute_force_best(inst: Instance, w: Weights, p: Penalties, break_limit: int = 4,
                     cap: int | None = None) -> OracleResult:
    """Exact minimum of the relaxed cost over all complete tours.

    Ties keep the lexicographically smallest tour.
    """
    best_tour, best_cost, count, ties = None, math.inf, 0, 0
    for tour in enumerate_complete_tours(inst, cap):
        count += 1
        c = recount_cost(tour, inst, w, p, break_limit)
        if c < best_cost:
            best_tour, best_cost, ties = tour, c, 1
        elif c == best_cost:
            ties += 1
    if best_tour is None:
        raise ValueError("instance has no complete tour (more cities than days)")
    return OracleResult(best_tour, best_cost, count, ties)
