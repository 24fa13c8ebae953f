"""
Arc-cost precomputation: one exact block LP per distinct block key,
evaluated in a process pool and optionally persisted to a CSV sidecar.
"""

import hashlib
import json
import logging
import math
import multiprocessing
import os
import signal

import numpy as np
import pandas as pd

from pshopt.events.blocks import RampRule, solve_block_lp
from pshopt.instance.loader import instance_to_dict
from pshopt.lp import set_default_backend
from pshopt.modes import Mode
from pshopt.python.context_manager import DelayedInterrupt
from pshopt.python.decorators import timeit
from pshopt.settings import DEFAULT_SETTINGS

logger = logging.getLogger(__name__)

CACHE_COLUMNS = ['start', 'end', 'mode', 'level_start', 'ramp_start', 'level_end', 'ramp_end', 'rule', 'cost']

_worker_inst = None
_worker_backend = None

#: block tables shared by every precomputation inside `SharedArcCosts`
_shared = None


def _init_worker(inst, lp_backend):
    global _worker_inst, _worker_backend
    signal.signal(signal.SIGINT, signal.SIG_IGN)
    _worker_inst = inst
    _worker_backend = lp_backend
    set_default_backend(lp_backend)


def evaluate_key(key, inst, lp_backend=None):
    """ Block optimum for a block key, inf if the block is infeasible. """
    start, end, mode, level_start, ramp_start, level_end, ramp_end, rule = key
    result = solve_block_lp(inst, Mode(mode), start, end, level_start, ramp_start,
                            level_end, ramp_end, RampRule(rule), lp_backend)
    return result.cost if result.feasible else math.inf


def _evaluate(key):
    return evaluate_key(key, _worker_inst, _worker_backend)


def _digest(payload):
    text = json.dumps(payload, sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(text.encode('utf-8')).hexdigest()[:16]


def cache_path(cache_dir, inst, grid, strict):
    inst_hash = _digest(instance_to_dict(inst))
    grid_hash = _digest({'reservoir': list(grid.reservoir_points),
                         'ramp': list(grid.ramp_points), 'strict': bool(strict)})
    return os.path.join(cache_dir, f"{inst_hash}-{grid_hash}.csv")


def _none(value):
    return None if value is None or (isinstance(value, float) and math.isnan(value)) else float(value)


def load_cache(path):
    if not os.path.exists(path):
        return {}
    df = pd.read_csv(path, float_precision='round_trip')
    table = {}
    for row in df.itertuples(index=False):
        key = (int(row.start), int(row.end), int(row.mode), float(row.level_start),
               float(row.ramp_start), _none(row.level_end), _none(row.ramp_end), str(row.rule))
        table[key] = float(row.cost)
    logger.debug("arc-cost cache %s: %d entries", path, len(table))
    return table


def save_cache(path, table):
    rows = [list(key) + [cost] for key, cost in table.items()]
    df = pd.DataFrame(rows, columns=CACHE_COLUMNS)
    os.makedirs(os.path.dirname(path) or '.', exist_ok=True)
    with DelayedInterrupt(signal.SIGINT):
        df.to_csv(path + '.tmp', index=False)
        os.replace(path + '.tmp', path)


class SharedArcCosts():
    """
    Keep block-cost tables in memory while the block runs, so that
    methods solved one after another on the same instance evaluate each
    block LP once. Tables are keyed by the instance digest; blocks do
    not depend on the grid.
    """

    def __enter__(self):
        global _shared
        self.outer = _shared
        if _shared is None:
            _shared = {}
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        global _shared
        _shared = self.outer

    @staticmethod
    def table(inst):
        """ The shared table of `inst`, None outside the block. """
        if _shared is None:
            return None
        return _shared.setdefault(_digest(instance_to_dict(inst)), {})


def evaluate_keys(keys, inst, threads=1, lp_backend=None):
    """ Costs for keys in order; identical for any worker count. """
    if threads > 1 and len(keys) > 1:
        chunksize = max(1, len(keys) // (threads * 4))
        with multiprocessing.Pool(threads, initializer=_init_worker,
                                  initargs=(inst, lp_backend or DEFAULT_SETTINGS.lp_backend)) as pool:
            return pool.map(_evaluate, keys, chunksize)
    return [evaluate_key(key, inst, lp_backend) for key in keys]


@timeit
def precompute_arc_costs(net, inst, settings=DEFAULT_SETTINGS):
    """
    Cost of every arc: block optimum + boundary cost, inf for arcs
    whose block is infeasible. Offline and entry arcs were checked in
    closed form when the network was built and cost their boundary
    cost only.
    """
    keys = list(dict.fromkeys(arc.block_key() for arc in net.arcs if arc.has_block))
    path = None
    shared = SharedArcCosts.table(inst)
    table = shared if shared is not None else {}
    if settings.use_cache and settings.cache_dir:
        path = cache_path(settings.cache_dir, inst, net.grid, net.strict)
        table.update(load_cache(path))
    missing = [key for key in keys if key not in table]
    logger.info("arc costs: %d arcs, %d distinct blocks, %d cached", len(net.arcs), len(keys),
                len(keys) - len(missing))
    if missing:
        table.update(zip(missing, evaluate_keys(missing, inst, settings.threads, settings.lp_backend)))
        if path is not None:
            save_cache(path, table)
    costs = np.empty(len(net.arcs))
    for k, arc in enumerate(net.arcs):
        block = table[arc.block_key()] if arc.has_block else 0.0
        costs[k] = block + arc.gamma
    return costs
