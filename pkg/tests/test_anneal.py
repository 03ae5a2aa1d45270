import math
from collections import Counter

import pytest

from tourcast.anneal import (MoveSampler, SAParams, apply_move, cooling_stages, cost_of, make_cost_function,
                             propose_move, sa_accept, simulated_annealing)
from tourcast.construct import construct_initial
from tourcast.ingest import GeneratorParams, generate_random_instance
from tourcast.model import ZERO_PENALTIES, Penalties, Weights, is_complete

W = Weights(20, -200, 200)
P = Penalties()


def test_propose_unique_move():
    rng = MoveSampler(0, 2)
    assert {propose_move([1, 0], rng) for _ in range(50)} == {(0, 1)}


def test_propose_never_pairs_rest_days():
    rng = MoveSampler(1, 8)
    tour = [0, 0, 1, 0, 0, 2, 0, 0]
    for _ in range(2000):
        i, j = propose_move(tour, rng)
        assert i < j and (tour[i] or tour[j])


def test_propose_uniform():
    rng = MoveSampler(2, 3)
    counts = Counter(propose_move([1, 2, 0], rng) for _ in range(10_000))
    assert set(counts) == {(0, 1), (0, 2), (1, 2)}
    for c in counts.values():
        assert abs(c / 10_000 - 1 / 3) <= 0.05


def test_propose_on_empty_tour():
    with pytest.raises(ValueError):
        propose_move([0, 0, 0], MoveSampler(0, 3))


def test_apply_move():
    assert apply_move((1, 0, 2), (0, 1)) == (0, 1, 2)


def test_sa_accept():
    assert sa_accept(-1, 1e-9, 0.999)
    assert sa_accept(0.0, 10, 0.999999)
    assert not sa_accept(5, 10, 1.0)
    assert sa_accept(10, 10, math.exp(-1) - 1e-12)
    assert not sa_accept(10, 10, math.exp(-1))
    with pytest.raises(ValueError):
        sa_accept(1, 0, 0.5)


def test_accept_probability_at_delta_equal_t():
    rng = MoveSampler(7, 2)
    hits = sum(sa_accept(100.0, 100.0, rng.uniform()) for _ in range(20_000))
    assert abs(hits / 20_000 - math.exp(-1)) < 0.015


def test_cooling_stages():
    assert cooling_stages(5000, 500, 0.95) == 45
    assert 5000 * 0.95**44 > 500 >= 5000 * 0.95**45
    assert cooling_stages(2500, 500, 0.95) == 32
    assert cooling_stages(5000, 500, 0.8) == 11


def test_params_validation():
    with pytest.raises(ValueError):
        SAParams(t0=100, temp_limit=500)
    with pytest.raises(ValueError):
        SAParams(alpha=1.0)
    with pytest.raises(ValueError):
        SAParams(iters_per_temp=0)
    assert SAParams(time_budget=2).move_budget() > 0
    assert SAParams(time_budget=2, max_moves=7).move_budget() == 7


@pytest.fixture(scope="module")
def inst():
    return generate_random_instance(GeneratorParams(), 21)


def test_fast_cost_matches_evaluate(inst):
    f = make_cost_function(inst, W, P)
    rng = MoveSampler(3, inst.num_days)
    tour = list(construct_initial(inst, 1))
    for _ in range(3000):
        i, j = propose_move(tour, rng)
        tour[i], tour[j] = tour[j], tour[i]
        assert f(tour) == cost_of(tour, inst, W, P)


def test_zero_budget_returns_initial(inst):
    init = construct_initial(inst, 0)
    best, trace = simulated_annealing(inst, init, W, P, SAParams(time_budget=0))
    assert best == init and trace.moves == 0


def test_rejects_incomplete_initial(inst):
    with pytest.raises(ValueError):
        simulated_annealing(inst, [0] * inst.num_days, W, P, SAParams(max_moves=10))
    bad = list(construct_initial(inst, 0))
    bad[bad.index(1)] = 2
    with pytest.raises(ValueError):
        simulated_annealing(inst, bad, W, P, SAParams(max_moves=10))


def test_run_contracts(inst):
    init = construct_initial(inst, 0)
    params = SAParams(iters_per_temp=500, max_moves=60_000, seed=4)
    best, trace = simulated_annealing(inst, init, W, P, params)
    assert is_complete(best, inst)
    assert cost_of(best, inst, W, P) == trace.best_cost <= cost_of(init, inst, W, P)
    bests = trace.best_costs()
    assert all(b <= a for a, b in zip(bests, bests[1:]))
    assert trace.moves == 60_000
    assert trace.stages_per_restart[:2] == [45, 45]
    assert trace.rng_algorithm == "numpy.random.PCG64"


def test_deterministic(inst):
    init = construct_initial(inst, 0)
    params = SAParams(iters_per_temp=300, max_moves=20_000, seed=9)
    a = simulated_annealing(inst, init, W, P, params)[0]
    b = simulated_annealing(inst, init, W, P, params)[0]
    assert a == b


def test_no_restart_reset_differs_but_keeps_contracts(inst):
    init = construct_initial(inst, 0)
    params = SAParams(iters_per_temp=100, max_moves=13_500, seed=2, restart_reset=False)
    best, trace = simulated_annealing(inst, init, W, P, params)
    assert len(trace.stages_per_restart) == 3
    assert is_complete(best, inst)


def test_cold_run_is_a_hill_climb(inst):
    init = construct_initial(inst, 0)
    params = SAParams(t0=1e-9, temp_limit=1e-10, iters_per_temp=200, max_moves=5_000, seed=1)
    _, trace = simulated_annealing(inst, init, W, ZERO_PENALTIES, params)
    current = [e.current_cost for e in trace.entries]
    assert all(b <= a for a, b in zip(current, current[1:]))
