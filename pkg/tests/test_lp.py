import itertools

import numpy as np
import pytest

from pshopt.lp import LinearProgram, Sense, Status, lp_format, solve_binary_mip, solve_lp, write_lp_format
from pshopt.settings import FEAS_TOL

BACKENDS = ['highs', 'simplex']


@pytest.mark.parametrize('backend', BACKENDS)
def test_bound_active_minimum(backend):
    lp = LinearProgram()
    x = lp.add_variable('x', 1, 5, cost=1)
    sol = solve_lp(lp, backend=backend)
    assert sol.status is Status.OPTIMAL
    assert sol.value(x) == pytest.approx(1)
    assert sol.objective == pytest.approx(1)


@pytest.mark.parametrize('backend', BACKENDS)
def test_infeasible(backend):
    lp = LinearProgram()
    x = lp.add_variable('x', -10, 10)
    lp.add_constraint({x: 1}, Sense.LE, 0)
    lp.add_constraint({x: 1}, Sense.GE, 1)
    assert solve_lp(lp, backend=backend).status is Status.INFEASIBLE


@pytest.mark.parametrize('backend', BACKENDS)
def test_unbounded(backend):
    lp = LinearProgram()
    lp.add_variable('x', 0, np.inf, cost=-1)
    assert solve_lp(lp, backend=backend).status is Status.UNBOUNDED


@pytest.mark.parametrize('backend', BACKENDS)
def test_small_lp(backend):
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6
    lp = LinearProgram()
    x = lp.add_variable('x', cost=-1)
    y = lp.add_variable('y', cost=-1)
    lp.add_constraint({x: 1, y: 2}, '<=', 4)
    lp.add_constraint({x: 3, y: 1}, '<=', 6)
    sol = solve_lp(lp, backend=backend)
    assert sol.objective == pytest.approx(-2.8)
    assert sol.value(x) == pytest.approx(1.6)
    assert sol.value(y) == pytest.approx(1.2)


@pytest.mark.parametrize('backend', BACKENDS)
def test_optimal_solution_is_feasible(backend):
    rng = np.random.default_rng(11)
    for _ in range(5):
        lp = LinearProgram()
        xs = [lp.add_variable(f'x{i}', 0, 10, cost=c) for i, c in enumerate(rng.normal(size=4))]
        lp.add_constraint(dict(zip(xs, rng.uniform(0.5, 2.0, 4))), Sense.LE, 12)
        lp.add_constraint({xs[0]: 1, xs[1]: 1}, Sense.GE, 1)
        lp.add_constraint({xs[2]: 1, xs[3]: -1}, Sense.EQ, 0.5)
        sol = solve_lp(lp, backend=backend)
        assert sol.optimal
        assert lp.residual(sol.x) <= FEAS_TOL


def test_residual():
    lp = LinearProgram()
    x = lp.add_variable('x', 0, 4)
    y = lp.add_variable('y', 0, 4)
    lp.add_constraint({x: 1, y: 1}, Sense.EQ, 3)
    lp.add_constraint({x: 1}, Sense.GE, 1)
    assert lp.residual(np.array([1.0, 2.0])) == 0.0
    assert lp.residual(np.array([0.5, 2.0])) == pytest.approx(0.5)
    assert lp.residual(np.array([5.0, -2.0])) == pytest.approx(2.0)
    assert lp.residual(np.array([1.0, 2.0]), upper=np.array([0.0, 4.0])) == pytest.approx(1.0)


def test_rejects_empty_bounds():
    lp = LinearProgram()
    with pytest.raises(ValueError):
        lp.add_variable('x', 2, 1)


@pytest.mark.parametrize('backend', ['bnb', 'highs'])
def test_binary_choice(backend):
    lp = LinearProgram()
    y1 = lp.add_variable('y1', 0, 1, cost=-3, binary=True)
    y2 = lp.add_variable('y2', 0, 1, cost=-2, binary=True)
    lp.add_constraint({y1: 1, y2: 1}, Sense.LE, 1)
    sol = solve_binary_mip(lp, backend=backend)
    assert sol.objective == pytest.approx(-3)
    assert sol.value(y1) == pytest.approx(1)
    assert sol.value(y2) == pytest.approx(0)


def test_fixed_binaries_match_lp():
    lp = LinearProgram()
    y = lp.add_variable('y', 1, 1, cost=2, binary=True)
    x = lp.add_variable('x', 0, 10, cost=1)
    lp.add_constraint({x: 1, y: -3}, Sense.GE, 0)
    assert solve_binary_mip(lp).objective == pytest.approx(solve_lp(lp).objective)


def test_mip_matches_enumeration():
    rng = np.random.default_rng(3)
    for _ in range(5):
        values = rng.integers(1, 20, 5).astype(float)
        weights = rng.integers(1, 10, 5).astype(float)
        capacity = float(weights.sum() // 2)
        lp = LinearProgram('knapsack')
        ys = [lp.add_variable(f"y{k}", 0, 1, cost=-values[k], binary=True) for k in range(5)]
        lp.add_constraint(dict(zip(ys, weights)), Sense.LE, capacity)
        best = min(-float(np.dot(values, pick)) for pick in itertools.product((0, 1), repeat=5)
                   if np.dot(weights, pick) <= capacity)
        sol = solve_binary_mip(lp)
        assert sol.objective == pytest.approx(best)
        assert solve_lp(lp).objective <= sol.objective + 1e-9


def test_lp_format(tmp_path):
    lp = LinearProgram('demo')
    x = lp.add_variable('x', 0, 4, cost=1)
    y = lp.add_variable('y', 0, 1, cost=-2, binary=True)
    lp.add_constraint({x: 1, y: 1}, Sense.GE, 1, name='cover')
    text = lp_format(lp)
    for section in ('Minimize', 'Subject To', 'Bounds', 'Binaries', 'End'):
        assert section in text
    assert 'cover:' in text
    path = tmp_path / 'demo.lp'
    write_lp_format(lp, str(path))
    assert path.read_text().strip() == text.strip()
