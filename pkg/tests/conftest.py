import os

import pytest

from pshopt.instance import instance_from_dict, load_instance

DATA = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'data')


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: solves the full 24-stage instances or long seed sweeps')


def document(**overrides):
    """ A single-stage unit document; keyword arguments replace keys. """
    doc = {
        'horizon': 1,
        'prices': [100.0],
        'gen_bounds': [40, 130],
        'pump_bounds': [0, 130],
        'ramp_limit': 50,
        'reservoir': {'capacity': 900, 'initial': 450},
        'min_up': 1,
        'min_down': 1,
        'j_max': 4,
    }
    doc.update(overrides)
    return doc


def make_instance(**overrides):
    return instance_from_dict(document(**overrides))


def toy_instance(**overrides):
    """ Two stages, prices 100 and 200: optimum -25000 with outputs 50 and 100. """
    doc = document(horizon=2, prices=[100.0, 200.0], j_max=2,
                   grids={'reservoir': [0, 100, 200, 300, 400, 450, 500, 600, 700, 800, 900],
                          'ramp': [0, 40, 50, 90, 100, 130]})
    doc.update(overrides)
    return instance_from_dict(doc)


def zero_price_instance(horizon=4):
    return make_instance(horizon=horizon, prices=[0.0] * horizon, min_up=2, min_down=2,
                         grids={'reservoir': [0, 450, 900], 'ramp': [0, 40, 130]})


@pytest.fixture
def toy():
    return toy_instance()


@pytest.fixture
def zero_price():
    return zero_price_instance()


@pytest.fixture(scope='module')
def baseline():
    return load_instance(os.path.join(DATA, 'baseline.json'))


@pytest.fixture(scope='module')
def hsc_baseline():
    return load_instance(os.path.join(DATA, 'hsc.json'))
