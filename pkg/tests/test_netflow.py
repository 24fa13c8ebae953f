import pytest

from pshopt.errors import NoFeasiblePath
from pshopt.events import Arc, EventNetwork, RampRule, build_grid_network, precompute_arc_costs, solve_dp
from pshopt.instance import build_grid, random_instance
from pshopt.lp import LpSolution, Status, solve_lp
from pshopt.modes import Mode
from pshopt.netflow import NetworkLpIndex, build_network_lp, decompose, extract_path, solve_network_lp
from pshopt.settings import Settings

from conftest import make_instance, toy_instance, zero_price_instance


def _arc(source, target, start, end, gamma=0.0, successor=Mode.O):
    return Arc(source=source, target=target, start=start, end=end, mode=Mode.O, successor=successor,
               level_start=450.0, ramp_start=0.0, level_end=450.0 if successor is not Mode.END else None,
               ramp_end=0.0, rule=RampRule.FREE, gamma=gamma, order=(end, int(successor), -1, -1))


def two_path_network():
    """ Origin -> two offline stage-1 states -> sink, both paths free of cost. """
    inst = make_instance(horizon=2, prices=[0.0, 0.0])
    nodes = [(0, Mode.O, 0, 0, 0), (1, Mode.O, 0, 0, 0), (1, Mode.O, 0, 0, 1), (3, Mode.END, -1, -1, 0)]
    arcs = [_arc(0, 1, 0, 1), _arc(0, 2, 0, 1), _arc(1, 3, 1, 3, successor=Mode.END),
            _arc(2, 3, 1, 3, successor=Mode.END)]
    out_arcs = [[0, 1], [2], [3], []]
    in_arcs = [[], [0], [1], [2, 3]]
    return inst, EventNetwork(inst, build_grid(inst), False, nodes, arcs, out_arcs, in_arcs)


def test_toy(toy):
    net = build_grid_network(toy, build_grid(toy))
    objective, schedule = solve_network_lp(net, toy)
    assert objective == pytest.approx(-25000)
    assert schedule.cost == pytest.approx(-25000)


def test_zero_prices():
    inst = zero_price_instance()
    objective, schedule = solve_network_lp(build_grid_network(inst, build_grid(inst)), inst)
    assert objective == pytest.approx(0.0, abs=1e-7)
    assert schedule.cost == pytest.approx(0.0, abs=1e-7)


def test_forced_single_path():
    inst = make_instance(initial_counter=1)
    net = build_grid_network(inst, build_grid(inst))
    lp, index = build_network_lp(net)
    sol = solve_lp(lp)
    assert sol.objective == pytest.approx(0.0)
    assert [sol.value(k) for k in index.flow] == pytest.approx([1.0, 1.0])


def test_unreachable_terminal():
    inst = toy_instance(reservoir={'capacity': 900, 'initial': 450, 'terminal': 900})
    with pytest.raises(NoFeasiblePath):
        solve_network_lp(build_grid_network(inst, build_grid(inst)), inst)


@pytest.mark.parametrize('seed', range(5))
def test_matches_dp(seed):
    inst = random_instance(seed, horizon=3)
    net = build_grid_network(inst, build_grid(inst))
    try:
        value = solve_dp(net, precompute_arc_costs(net, inst), inst).value
    except NoFeasiblePath:
        with pytest.raises(NoFeasiblePath):
            solve_network_lp(net, inst)
        return
    objective, schedule = solve_network_lp(net, inst)
    assert objective == pytest.approx(value, rel=1e-6, abs=1e-6)
    assert schedule.cost == pytest.approx(objective, rel=1e-6, abs=1e-6)


def test_decompose_fractional_flow():
    _, net = two_path_network()
    assert decompose(net, [0.5, 0.5, 0.5, 0.5]) == [(0.5, [0, 2]), (0.5, [1, 3])]


def test_extract_fractional_flow():
    inst, net = two_path_network()
    index = NetworkLpIndex(flow=[0, 1, 2, 3], blocks=[None] * 4, rows=[])
    sol = LpSolution(Status.OPTIMAL, objective=0.0, x=[0.5, 0.5, 0.5, 0.5])
    schedule = extract_path(sol, index, net, inst)
    assert schedule.mode_string() == 'OO'
    assert schedule.cost == 0.0


def test_extract_requires_optimal_solution():
    inst, net = two_path_network()
    index = NetworkLpIndex(flow=[0, 1, 2, 3], blocks=[None] * 4, rows=[])
    with pytest.raises(ValueError):
        extract_path(LpSolution(Status.INFEASIBLE), index, net, inst)


@pytest.mark.slow
def test_baseline_matches_dp(baseline):
    net = build_grid_network(baseline, build_grid(baseline))
    costs = precompute_arc_costs(net, baseline, Settings(use_cache=False))
    value = solve_dp(net, costs, baseline).value
    objective, schedule = solve_network_lp(net, baseline)
    assert objective == pytest.approx(value, rel=1e-6)
    assert schedule.cost == pytest.approx(value, rel=1e-6)
