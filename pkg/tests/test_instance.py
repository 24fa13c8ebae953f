import json

import pytest

from pshopt.errors import GridExcludesBoundary, MalformedDocument, MissingField, ValidationFailed
from pshopt.instance import (build_grid, dumps_instance, instance_from_dict, loads_instance, random_instance,
                             require_valid, validate)
from pshopt.modes import Mode

from conftest import document, make_instance


def test_baseline_prices(baseline):
    assert baseline.horizon == 24
    assert baseline.prices[0] == 130
    assert baseline.prices[16] == 260


def test_scalar_bounds_broadcast(baseline):
    assert len(baseline.gen_bounds) == 24
    assert all(b == (40.0, 130.0) for b in baseline.gen_bounds)


def test_missing_prices():
    doc = document()
    del doc['prices']
    with pytest.raises(MissingField) as e:
        instance_from_dict(doc)
    assert e.value.field == 'prices'


def test_malformed_json():
    with pytest.raises(MalformedDocument):
        loads_instance('{"horizon": ')


def test_wrong_vector_length():
    with pytest.raises(MalformedDocument):
        instance_from_dict(document(horizon=2, prices=[1.0, 2.0, 3.0]))


def test_validate_initial_above_capacity():
    inst = make_instance(reservoir={'capacity': 900, 'initial': 1000})
    assert "initial level exceeds capacity" in validate(inst)


def test_validate_baseline(baseline, hsc_baseline):
    assert validate(baseline) == []
    assert validate(hsc_baseline) == []


def test_validate_min_up():
    inst = make_instance(min_up=0)
    assert "min-up must be >= 1" in validate(inst)
    with pytest.raises(ValidationFailed):
        require_valid(inst)


def test_baseline_grid(baseline):
    grid = build_grid(baseline)
    assert grid.reservoir_points == (0, 100, 200, 300, 400, 450, 500, 600, 700, 800, 900)
    assert grid.ramp_points == (0, 40, 90, 130)


def test_refinement_inserts_midpoints(baseline):
    grid = build_grid(baseline, 2)
    assert 50 in grid.reservoir_points
    assert 425 in grid.reservoir_points
    assert set(build_grid(baseline).reservoir_points) <= set(grid.reservoir_points)


def test_refinement_nested_when_dividing(baseline):
    coarse = set(build_grid(baseline, 2).reservoir_points)
    fine = set(build_grid(baseline, 10).reservoir_points)
    assert coarse <= fine


@pytest.mark.parametrize('coarse, fine', [(1, 3), (2, 4), (3, 6), (2, 8), (4, 12)])
def test_refinement_nested_exactly(coarse, fine):
    inst = make_instance(reservoir={'capacity': 7.3, 'initial': 2.9})
    assert set(build_grid(inst, coarse).reservoir_points) <= set(build_grid(inst, fine).reservoir_points)


def test_grid_must_contain_initial_level():
    inst = make_instance(grids={'reservoir': [0, 400, 900]})
    with pytest.raises(GridExcludesBoundary):
        build_grid(inst)


def test_default_grid_contains_boundaries():
    inst = make_instance(reservoir={'capacity': 900, 'initial': 333, 'terminal': 333})
    grid = build_grid(inst)
    assert 333 in grid.reservoir_points
    assert grid.ramp_points[0] == 0


def test_dump_and_reload(baseline):
    again = loads_instance(dumps_instance(baseline))
    assert again == baseline


def test_modes():
    assert make_instance().modes == (Mode.G, Mode.P, Mode.O)
    assert make_instance(hsc=True).modes == (Mode.G, Mode.P, Mode.SC, Mode.O)


def test_with_horizon_tiles_prices(baseline):
    longer = baseline.with_horizon(48)
    assert longer.horizon == 48
    assert longer.prices[24:] == baseline.prices
    assert longer.terminal_level == baseline.terminal_level
    assert validate(longer) == []


def test_random_instance_is_valid_and_reproducible():
    a = random_instance(7, horizon=5)
    b = random_instance(7, horizon=5)
    assert a == b
    assert a.horizon == 5
    assert validate(a) == []
    assert json.loads(dumps_instance(a))['horizon'] == 5
