"""Simulated annealing over tour vectors with restarts from the initial tour."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .constraints import DEFAULT_BREAK_LIMIT, Evaluation, evaluate
from .cost import relaxed_cost
from .model import Instance, Penalties, Tour, Weights, is_complete

log = logging.getLogger(__name__)

RNG_ALGORITHM = "numpy.random.PCG64"

# Logical moves granted per second of budget. Kept below the measured
# throughput at n=42 so the wall-clock cutoff is only a safety net.
NOMINAL_MOVES_PER_SECOND = 25_000


@dataclass(frozen=True)
class SAParams:
    t0: float = 5000.0
    temp_limit: float = 500.0
    iters_per_temp: int = 5000
    alpha: float = 0.95
    time_budget: float = 30.0  # seconds, converted to a move budget
    seed: int = 0
    restart_reset: bool = True
    max_moves: int | None = None  # explicit move budget, overrides time_budget
    wall_clock_factor: float | None = 3.0  # hard stop at factor * time_budget seconds

    def __post_init__(self):
        if not self.t0 > 0 or not self.temp_limit > 0:
            raise ValueError("temperatures must be positive")
        if not self.temp_limit < self.t0:
            raise ValueError("temp_limit must be below t0")
        if self.iters_per_temp < 1:
            raise ValueError("iters_per_temp must be >= 1")
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        if self.time_budget < 0:
            raise ValueError("time budget must be non-negative")
        if self.max_moves is not None and self.max_moves < 0:
            raise ValueError("max_moves must be non-negative")

    def move_budget(self) -> int:
        if self.max_moves is not None:
            return self.max_moves
        return int(round(self.time_budget * NOMINAL_MOVES_PER_SECOND))

    def wall_clock_limit(self) -> float:
        if self.wall_clock_factor is None:
            return math.inf
        return max(self.time_budget * self.wall_clock_factor, 1.0)

    @property
    def stages_per_restart(self) -> int:
        return cooling_stages(self.t0, self.temp_limit, self.alpha)


def cooling_stages(t0: float, temp_limit: float, alpha: float) -> int:
    """Number of temperature stages run before ``t`` drops to ``temp_limit``."""
    t, k = t0, 0
    while t > temp_limit:
        k += 1
        t *= alpha
    return k


class Move(NamedTuple):
    i: int
    j: int


def apply_move(tour: Sequence[int], move: Move) -> Tour:
    i, j = move
    v = list(tour)
    v[i], v[j] = v[j], v[i]
    return tuple(v)


class MoveSampler:
    """Seeded stream of day indices and uniforms, drawn from numpy in blocks."""

    algorithm = RNG_ALGORITHM

    def __init__(self, seed: int, n: int, block: int = 8192):
        self.n = n
        self._gen = np.random.Generator(np.random.PCG64(seed))
        self._block = block
        self._idx: list[int] = []
        self._ip = 0
        self._u: list[float] = []
        self._up = 0

    def index(self) -> int:
        if self._ip >= len(self._idx):
            self._idx = self._gen.integers(0, self.n, size=self._block).tolist()
            self._ip = 0
        x = self._idx[self._ip]
        self._ip += 1
        return x

    def uniform(self) -> float:
        if self._up >= len(self._u):
            self._u = self._gen.random(self._block).tolist()
            self._up = 0
        x = self._u[self._up]
        self._up += 1
        return x


def propose_move(tour: Sequence[int], rng: MoveSampler) -> Move:
    """Uniform pair of distinct days, not both rest days."""
    if not any(tour):
        raise ValueError("tour has no performance to move")
    if len(tour) < 2:
        raise ValueError("need at least two days to swap")
    while True:
        i, j = rng.index(), rng.index()
        if i != j and (tour[i] or tour[j]):
            return Move(i, j) if i < j else Move(j, i)


def sa_accept(delta: float, t: float, u: float) -> bool:
    if t <= 0:
        raise ValueError("temperature must be positive")
    if delta < 0:
        return True
    return u < math.exp(-delta / t)


def cost_of(tour: Sequence[int], inst: Instance, w: Weights, p: Penalties,
            break_limit: int = DEFAULT_BREAK_LIMIT) -> float:
    return relaxed_cost(evaluate(tour, inst, break_limit, record=False), w, p).total


def make_cost_function(inst: Instance, w: Weights, p: Penalties,
                       break_limit: int = DEFAULT_BREAK_LIMIT) -> Callable[[Sequence[int]], float]:
    """Single-pass equivalent of :func:`cost_of`, for the inner loop.

    Sums are formed in the same order as ``relaxed_cost`` so the results are
    bit-identical.
    """
    n = inst.num_days
    mile = [list(r) for r in inst.mile]
    day = [list(r) for r in inst.day]
    avail = [[int(c) for c in r] for r in inst.availability]
    start = int(inst.start_weekday)
    kind = [1 if (start + i) % 7 in (3, 4) else -1 if (start + i) % 7 in (0, 1) else 0 for i in range(n)]
    wm, wg, wb = w.w_mile, w.w_good, w.w_bad
    b1, b2, b3, b4, b5 = p.as_tuple()
    X = break_limit

    def cost(v: Sequence[int]) -> float:
        miles = good = bad = y1 = y2 = y3 = y4 = y5 = 0
        run = 0
        prev_i = -1
        prev_k = 0
        for i in range(n):
            k = v[i]
            if not k:
                run = 0
                continue
            run += 1
            if run > X:
                y3 += 1
            a = avail[i][k - 1]
            if a == 0:
                y1 += 1
            elif a < 0:
                y2 += 1
            g = kind[i]
            if g > 0:
                good += 1
            elif g < 0:
                bad += 1
            if prev_k:
                miles += mile[prev_k - 1][k - 1]
                deficit = day[prev_k - 1][k - 1] - (i - prev_i)
                if deficit == 1:
                    y4 += 1
                elif deficit > 1:
                    y5 += 1
            prev_i = i
            prev_k = k
        return float(wm * miles + wg * good + wb * bad) + float(b1 * y1 + b2 * y2 + b3 * y3 + b4 * y4 + b5 * y5)

    return cost


@dataclass(frozen=True)
class TraceEntry:
    iteration: int
    elapsed: float
    temperature: float
    current_cost: float
    best_cost: float
    restart: int
    evaluation: Evaluation | None = None  # set when the best tour improved


@dataclass
class RunTrace:
    rng_algorithm: str = RNG_ALGORITHM
    seed: int = 0
    entries: list[TraceEntry] = field(default_factory=list)
    stages_per_restart: list[int] = field(default_factory=list)
    moves: int = 0
    accepted: int = 0
    stopped_by_clock: bool = False
    best_cost: float = math.inf

    def best_costs(self) -> list[float]:
        return [e.best_cost for e in self.entries]

    def to_rows(self) -> list[dict]:
        rows = []
        for e in self.entries:
            row = dict(iteration=e.iteration, elapsed=round(e.elapsed, 6), temperature=e.temperature,
                       current_cost=e.current_cost, best_cost=e.best_cost, restart=e.restart)
            if e.evaluation is not None:
                o, y = e.evaluation.objectives, e.evaluation.violations
                row.update(miles=o.total_miles, good_days=o.good_days, bad_days=o.bad_days,
                           violations=list(y.counts))
            rows.append(row)
        return rows


def simulated_annealing(inst: Instance, initial: Sequence[int], w: Weights, p: Penalties,
                        params: SAParams = SAParams(), *, break_limit: int = DEFAULT_BREAK_LIMIT,
                        ) -> tuple[Tour, RunTrace]:
    """Anneal from ``initial`` and return the best tour seen with its trace.

    Each outer pass restarts from ``initial`` at ``t0`` (or continues from the
    current tour when ``params.restart_reset`` is off) and cools geometrically
    until the temperature limit, running ``iters_per_temp`` moves per stage.
    The run ends when the move budget is spent or the wall-clock cutoff hits.
    """
    initial = list(initial)
    if len(initial) != inst.num_days:
        raise ValueError("initial tour length does not match the instance")
    if not any(initial):
        raise ValueError("initial tour has no performance")
    if not is_complete(initial, inst):
        raise ValueError("initial tour is not complete")

    cost = make_cost_function(inst, w, p, break_limit)
    budget = params.move_budget()
    limit = params.wall_clock_limit()
    rng = MoveSampler(params.seed, inst.num_days)
    trace = RunTrace(seed=params.seed)

    clock0 = time.perf_counter()
    best = tuple(initial)
    best_cost = cost(initial)
    trace.entries.append(TraceEntry(0, 0.0, params.t0, best_cost, best_cost, 0,
                                    evaluate(best, inst, break_limit, record=False)))
    exp = math.exp
    n = inst.num_days
    moves = accepted = 0
    restart = 0
    cur: list[int] = []
    cur_cost = best_cost
    while moves < budget:
        if restart == 0 or params.restart_reset:
            cur = list(initial)
            cur_cost = cost(cur)
        t = params.t0
        stages = 0
        while t > params.temp_limit and moves < budget:
            stage_end = min(budget, moves + params.iters_per_temp)
            while moves < stage_end:
                # propose_move, inlined
                while True:
                    i, j = rng.index(), rng.index()
                    if i != j and (cur[i] or cur[j]):
                        break
                cur[i], cur[j] = cur[j], cur[i]
                c = cost(cur)
                d = c - cur_cost
                moves += 1
                if d < 0:
                    cur_cost = c
                    accepted += 1
                    if c < best_cost:
                        best, best_cost = tuple(cur), c
                        trace.entries.append(TraceEntry(
                            moves, time.perf_counter() - clock0, t, cur_cost, best_cost, restart,
                            evaluate(best, inst, break_limit, record=False)))
                elif rng.uniform() < exp(-d / t):
                    cur_cost = c
                    accepted += 1
                else:
                    cur[i], cur[j] = cur[j], cur[i]
            stages += 1
            trace.entries.append(TraceEntry(moves, time.perf_counter() - clock0, t, cur_cost, best_cost, restart))
            t *= params.alpha
            if time.perf_counter() - clock0 > limit:
                trace.stopped_by_clock = True
                log.warning("wall-clock cutoff after %d of %d moves", moves, budget)
                budget = moves
        trace.stages_per_restart.append(stages)
        restart += 1
    trace.moves, trace.accepted, trace.best_cost = moves, accepted, best_cost
    assert len(best) == n
    return best, trace
