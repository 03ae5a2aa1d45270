"""Initial tour construction.

Cities are ordered greedily by travel days, the order is polished with
pairwise swaps, laid out on the calendar so every gap meets the required
travel time, and performances on unavailable days are then pushed to free
available days past the end of the tour.
"""

from __future__ import annotations

import logging
import random
from typing import Sequence

from .constraints import DEFAULT_BREAK_LIMIT, count_break_violations
from .model import AvailabilityCode, Instance, Tour

log = logging.getLogger(__name__)

CityOrder = tuple[int, ...]


class PlacementOverflow(RuntimeError):
    """The city order needs more days than the calendar has."""


def nearest_neighbor_order(inst: Instance, start_city: int) -> CityOrder:
    """Greedy chain over the day matrix; ties go to the lower city code."""
    m = inst.num_cities
    if not 1 <= start_city <= m:
        raise ValueError(f"start city {start_city} not in 1..{m}")
    day = inst.day
    order = [start_city]
    unvisited = set(range(1, m + 1)) - {start_city}
    cur = start_city
    while unvisited:
        # min over (distance, code) implements the lower-code tie-break
        nxt = min(unvisited, key=lambda c: (day[cur - 1][c - 1], c))
        order.append(nxt)
        unvisited.remove(nxt)
        cur = nxt
    return tuple(order)


def order_distance(order: Sequence[int], matrix: Sequence[Sequence[int]]) -> int:
    """Open-path length of ``order`` (no return leg)."""
    return sum(matrix[a - 1][b - 1] for a, b in zip(order, order[1:]))


def improve_order_two_exchange(order: Sequence[int], inst: Instance) -> CityOrder:
    """Swap pairs of positions while any swap shortens the order, to a fixed point."""
    order = list(order)
    day = inst.day
    best = order_distance(order, day)
    improved = True
    while improved:
        improved = False
        for i in range(len(order) - 1):
            for j in range(i + 1, len(order)):
                order[i], order[j] = order[j], order[i]
                d = order_distance(order, day)
                if d < best:
                    best = d
                    improved = True
                else:
                    order[i], order[j] = order[j], order[i]
    return tuple(order)


def place_by_separation(order: Sequence[int], inst: Instance) -> Tour:
    """Lay the order out from day 0, spacing consecutive cities by their travel days.

    A zero-day hop still advances one day, since a day holds one performance.
    """
    n = inst.num_days
    v = [0] * n
    if not order:
        return tuple(v)
    day = inst.day
    cd = 0
    v[0] = order[0]
    for prev, nxt in zip(order, order[1:]):
        cd += max(1, day[prev - 1][nxt - 1])
        if cd >= n:
            raise PlacementOverflow(f"order needs day {cd} but the calendar ends at day {n - 1}")
        v[cd] = nxt
    return tuple(v)


def backward_swap(tour: Sequence[int], inst: Instance, break_limit: int = DEFAULT_BREAK_LIMIT) -> Tour:
    """Move availability-violating performances to free available days after the tour's end.

    Performances are visited from the last to the first; each offender goes to
    the latest zero day beyond the current last performance on which its city
    is available. A move that would add a break violation is skipped.
    """
    v = list(tour)
    avail = inst.availability
    ok = AvailabilityCode.AVAILABLE
    for i in range(len(v) - 1, -1, -1):
        k = v[i]
        if not k or avail[i][k - 1] == ok:
            continue
        last = max(d for d, c in enumerate(v) if c)
        for target in range(len(v) - 1, last, -1):
            if v[target] == 0 and avail[target][k - 1] == ok:
                before = count_break_violations(v, break_limit, record=False)[0]
                v[i], v[target] = 0, k
                if count_break_violations(v, break_limit, record=False)[0] > before:
                    v[i], v[target] = k, 0
                    continue
                log.debug("backward swap: city %d day %d -> %d", k, i, target)
                break
    return tuple(v)


def construct_initial(inst: Instance, seed: int | None = 0, *, break_limit: int = DEFAULT_BREAK_LIMIT) -> Tour:
    """Nearest-neighbour order, pairwise polish, separation placement, backward swaps.

    The start city is drawn from ``seed``; if its order does not fit in the
    calendar the remaining start cities are tried in turn.
    """
    m = inst.num_cities
    if m == 0:
        return tuple([0] * inst.num_days)
    first = random.Random(seed).randint(1, m)
    starts = [(first - 1 + s) % m + 1 for s in range(m)]
    last_err = None
    for start in starts:
        order = improve_order_two_exchange(nearest_neighbor_order(inst, start), inst)
        try:
            placed = place_by_separation(order, inst)
        except PlacementOverflow as exc:
            last_err = exc
            log.info("start city %d overflows: %s", start, exc)
            continue
        return backward_swap(placed, inst, break_limit)
    raise PlacementOverflow(f"no start city yields a placement within {inst.num_days} days ({last_err})")
