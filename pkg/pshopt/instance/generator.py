import logging

import numpy as np

from pshopt.instance.loader import instance_from_dict
from pshopt.instance.validate import validate

logger = logging.getLogger(__name__)

#: seed offset used when a draw has to be re-rolled
REROLL_OFFSET = 1000003


def random_document(seed, horizon=4, j_max=None, hsc=False):
    """
    Small random instance document. Bounds are drawn so that the
    all-offline schedule stays feasible (no inflow, terminal level equal
    to the initial one when set).
    """
    rng = np.random.default_rng(seed)
    T = int(horizon)
    ramp = float(rng.integers(30, 81))
    gen_lo = float(rng.integers(0, int(ramp) + 1))
    gen_hi = gen_lo + float(rng.integers(20, 101))
    pump_lo = float(rng.choice([0.0, float(rng.integers(0, 31))]))
    pump_hi = pump_lo + float(rng.integers(20, 101))
    capacity = float(rng.integers(3, 9) * 100)
    initial = capacity / 2
    pieces_g = [[float(rng.integers(0, 11)), float(rng.integers(0, 51))]]
    if rng.random() < 0.5:
        pieces_g.append([pieces_g[0][0] + float(rng.integers(1, 11)),
                         pieces_g[0][1] - float(rng.integers(0, 301))])
    pieces_p = [[float(rng.integers(0, 6)), float(rng.integers(0, 31))]]
    doc = {
        'name': f'random-{seed}',
        'horizon': T,
        'prices': rng.integers(0, 301, T).astype(float).tolist(),
        'gen_bounds': [gen_lo, gen_hi],
        'pump_bounds': [pump_lo, pump_hi],
        'ramp_limit': ramp,
        'efficiency_gen': 1.0,
        'efficiency_pump': round(float(rng.uniform(0.6, 0.95)), 2),
        'reservoir': {'capacity': capacity, 'initial': initial},
        'min_up': int(rng.integers(1, 3)),
        'min_down': int(rng.integers(1, 3)),
        'startup': float(rng.integers(0, 501)),
        'shutdown': float(rng.integers(0, 301)),
        'water_value': float(rng.integers(0, 41)),
        'gen_cost_pieces': pieces_g,
        'pump_cost_pieces': pieces_p,
        'j_max': int(j_max if j_max is not None else rng.integers(1, 4)),
        'hsc': bool(hsc),
        'terminal_offline': bool(rng.random() < 0.5),
        'grids': {
            'reservoir': np.linspace(0.0, capacity, 7).tolist() + [initial],
            'ramp': sorted({0.0, gen_lo, gen_hi, min(gen_hi, ramp)}),
        },
    }
    if rng.random() < 0.6:
        doc['reservoir']['terminal'] = initial
    return doc


def random_instance(seed, horizon=4, j_max=None, hsc=False, attempts=10):
    """ Draw a valid random instance; invalid draws are re-rolled. """
    for attempt in range(attempts):
        doc = random_document(seed + attempt * REROLL_OFFSET, horizon, j_max, hsc)
        inst = instance_from_dict(doc)
        if not validate(inst):
            return inst
        logger.debug("re-rolling random instance %d (attempt %d)", seed, attempt)
    raise RuntimeError(f"no valid random instance for seed {seed}")
