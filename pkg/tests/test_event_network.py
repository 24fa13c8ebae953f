import os

import numpy as np
import pytest

from pshopt.errors import NoFeasiblePath
from pshopt.events import (EventAction, EventState, SharedArcCosts, arc_costs, boundary_cost, build_grid_network,
                           enumerate_events, origin, precompute_arc_costs, solve_dp, transition)
from pshopt.events.arc_costs import evaluate_key
from pshopt.events.dp import arc_trajectory
from pshopt.instance import build_grid
from pshopt.modes import Mode
from pshopt.settings import Settings

from conftest import make_instance, toy_instance, zero_price_instance


def test_counter_blocks_early_start(baseline):
    s = EventState(5, Mode.O, 450, 0.0, 2)
    actions = enumerate_events(s, baseline)
    online = [a for a in actions if a.successor.online]
    assert online
    assert all(a.end >= 8 for a in online)


def test_event_length_cap(baseline):
    s = EventState(10, Mode.G, 450, 90, 0)
    actions = enumerate_events(s, baseline)
    assert max(a.end for a in actions) == 14


def test_offline_events_never_repeat(baseline):
    s = EventState(5, Mode.O, 450, 0.0, 0)
    assert all(a.successor is not Mode.O for a in enumerate_events(s, baseline))


def test_grid_ramp_targets(baseline):
    grid = build_grid(baseline)
    s = EventState(10, Mode.G, 450, 90, 0)
    actions = [a for a in enumerate_events(s, baseline, grid) if a.end == 11 and a.level == 400]
    assert sorted(a.ramp for a in actions if a.successor is Mode.G) == [0, 40, 90, 130]
    assert [a.ramp for a in actions if a.successor is Mode.P] == [0.0]


def test_origin_entries(baseline):
    s = origin(baseline)
    assert s.stage == 0 and s.counter == 1
    actions = enumerate_events(s, baseline)
    assert [(a.end, a.successor) for a in actions] == [(1, Mode.O)]
    assert transition(s, actions[0], baseline).counter == 0


def test_transition_counters():
    inst = make_instance(horizon=6, prices=[0.0] * 6, min_up=3, min_down=2)
    on = transition(EventState(2, Mode.O, 450, 0.0, 0), EventAction(4, Mode.G), inst)
    assert on.counter == 2
    off = transition(EventState(2, Mode.G, 450, 0.0, 0), EventAction(4, Mode.O), inst)
    assert off.counter == 1
    swap = transition(EventState(2, Mode.G, 450, 0.0, 2), EventAction(3, Mode.P), inst)
    assert swap.counter == 1
    assert swap.ramp == 0.0


def test_boundary_cost():
    inst = make_instance(horizon=6, prices=[0.0] * 6, startup=[0, 0, 0, 0, 100, 0], shutdown=50)
    assert boundary_cost(Mode.O, Mode.G, 5, inst) == 100
    assert boundary_cost(Mode.G, Mode.P, 3, inst) == 0
    assert boundary_cost(Mode.G, Mode.O, 3, inst) == 50
    assert boundary_cost(Mode.G, Mode.O, 7, inst) == 0
    assert boundary_cost(Mode.G, Mode.END, 7, inst) == 0


def test_single_stage_network():
    inst = make_instance(initial_counter=1)
    net = build_grid_network(inst, build_grid(inst))
    assert len(net.nodes) == 3
    assert len(net.arcs) == 2
    assert net.arcs[0].entry
    assert net.arcs[1].mode is Mode.O and net.arcs[1].target == net.sink


def test_network_size_bound(baseline):
    inst = baseline.with_horizon(6)
    net = build_grid_network(inst, build_grid(inst))
    assert len(net.nodes) <= 6 * 3 * 11 * 4 * (inst.tau_max + 1) + 2
    assert all(net.stage_of(a.source) < net.stage_of(a.target) for a in net.arcs)


def test_network_has_short_circuit_states(hsc_baseline):
    inst = hsc_baseline.with_horizon(4)
    net = build_grid_network(inst, build_grid(inst))
    modes = {key[1] for key in net.nodes[1:-1]}
    assert {Mode.G, Mode.P, Mode.SC, Mode.O} <= modes


def test_arc_costs_match_blocks(toy):
    net = build_grid_network(toy, build_grid(toy))
    costs = precompute_arc_costs(net, toy)
    assert len(costs) == len(net.arcs)
    for k, arc in enumerate(net.arcs):
        if not arc.has_block:
            assert costs[k] == arc.gamma
            continue
        result = arc_trajectory(arc, toy)
        if result.feasible:
            assert costs[k] == pytest.approx(result.cost + arc.gamma)
        else:
            assert np.isinf(costs[k])


def test_arc_costs_worker_pool(toy):
    net = build_grid_network(toy, build_grid(toy))
    serial = precompute_arc_costs(net, toy)
    pooled = precompute_arc_costs(net, toy, Settings(threads=2))
    assert np.array_equal(serial, pooled)


def test_arc_cost_cache(toy, tmp_path):
    net = build_grid_network(toy, build_grid(toy))
    settings = Settings(cache_dir=str(tmp_path))
    first = precompute_arc_costs(net, toy, settings)
    assert len(os.listdir(str(tmp_path))) == 1
    second = precompute_arc_costs(net, toy, settings)
    assert np.array_equal(first, second)


def test_shared_arc_costs(toy, monkeypatch):
    evaluated = []

    def evaluate(keys, inst, threads=1, lp_backend=None):
        evaluated.append(len(keys))
        return [evaluate_key(key, inst, lp_backend) for key in keys]

    monkeypatch.setattr(arc_costs, 'evaluate_keys', evaluate)
    settings = Settings(use_cache=False)
    coarse = build_grid_network(toy, build_grid(toy))
    fine = build_grid_network(toy, build_grid(toy, 2))
    with SharedArcCosts():
        first = precompute_arc_costs(coarse, toy, settings)
        assert np.array_equal(precompute_arc_costs(coarse, toy, settings), first)
        assert len(evaluated) == 1
        precompute_arc_costs(fine, toy, settings)
        assert SharedArcCosts.table(toy)
    assert SharedArcCosts.table(toy) is None
    precompute_arc_costs(coarse, toy, settings)
    assert evaluated[-1] == evaluated[0]


def test_dp_toy(toy):
    net = build_grid_network(toy, build_grid(toy))
    result = solve_dp(net, precompute_arc_costs(net, toy), toy)
    assert result.value == pytest.approx(-25000)
    assert result.schedule.modes == (Mode.G, Mode.G)
    assert result.schedule.cost == pytest.approx(-25000)


def test_dp_zero_prices():
    inst = zero_price_instance()
    net = build_grid_network(inst, build_grid(inst))
    result = solve_dp(net, precompute_arc_costs(net, inst), inst)
    assert result.value == pytest.approx(0.0, abs=1e-9)


def test_dp_unreachable_terminal():
    inst = toy_instance(reservoir={'capacity': 900, 'initial': 450, 'terminal': 900})
    net = build_grid_network(inst, build_grid(inst))
    with pytest.raises(NoFeasiblePath):
        solve_dp(net, precompute_arc_costs(net, inst), inst)


def test_dp_strict_never_better(toy):
    inst = toy_instance(terminal_offline=True)
    grid = build_grid(inst)
    default = build_grid_network(inst, grid)
    strict = build_grid_network(inst, grid, strict=True)
    value = solve_dp(default, precompute_arc_costs(default, inst), inst).value
    strict_value = solve_dp(strict, precompute_arc_costs(strict, inst), inst).value
    assert strict_value >= value - 1e-9
