"""
One entry point per solution method, so that the CLI and the
experiment runners treat all of them alike. Every returned objective is
recomputed from the returned schedule.
"""

import logging
import time

import attr

from pshopt.bnb import BnbConfig, TraceLog, solve_bnb
from pshopt.errors import (Infeasible, LimitsExceeded, NoFeasiblePath, NumericalFailure, PshoptError,
                           TimeBudgetExceeded)
from pshopt.events import build_grid_network, precompute_arc_costs, solve_dp
from pshopt.harness.oracle import OracleLimits, brute_force_oracle
from pshopt.instance import build_grid
from pshopt.netflow import solve_network_lp
from pshopt.python.decorators.timeit import timeit
from pshopt.settings import DEFAULT_SETTINGS
from pshopt.time_indexed import evaluate_schedule_cost, solve_time_indexed

logger = logging.getLogger(__name__)

METHODS = ('milp', 'dp', 'gridlp', 'bnb', 'bnb_grid', 'oracle')

LABELS = {
    'milp': 'MILP',
    'dp': 'DP',
    'gridlp': 'LP',
    'bnb': 'B&B-continuous',
    'bnb_grid': 'B&B-grid',
    'oracle': 'oracle',
}

#: methods restricted to the boundary grid
GRID_METHODS = ('dp', 'gridlp', 'bnb_grid')
#: methods honouring the strict terminal-H convention
EVENT_METHODS = ('dp', 'gridlp', 'bnb', 'bnb_grid')


@attr.s
class MethodResult():

    method = attr.ib(type=str)
    #: ok, infeasible, budget, limits, numerical or error
    status = attr.ib(type=str)
    objective = attr.ib(default=None)
    schedule = attr.ib(default=None)
    seconds = attr.ib(type=float, default=0.0)
    #: objective recomputed from the schedule
    audited = attr.ib(default=None)
    #: method specific numbers (network size, B&B statistics, ...)
    extra = attr.ib(factory=dict)

    @property
    def ok(self):
        return self.status == 'ok'

    def row(self):
        s = self.schedule
        return {
            'method': LABELS.get(self.method, self.method),
            'status': self.status,
            'objective': self.audited if self.audited is not None else self.objective,
            'cpu_s': self.seconds,
            'switches': s.switches if s is not None else None,
            'modes': s.mode_string() if s is not None else None,
        }


def _grid_network(inst, settings, refinement, extra):
    grid = build_grid(inst, refinement)
    net = build_grid_network(inst, grid, settings.strict_terminal_h)
    extra.update(nodes=len(net.nodes), arcs=len(net.arcs),
                 reservoir_points=len(grid.reservoir_points), ramp_points=len(grid.ramp_points))
    return net


def _milp(inst, settings, refinement, extra):
    sol, schedule = solve_time_indexed(inst, settings)
    extra['mip_nodes'] = sol.nodes
    return sol.objective, schedule


def _dp(inst, settings, refinement, extra):
    net = _grid_network(inst, settings, refinement, extra)
    costs = precompute_arc_costs(net, inst, settings)
    result = solve_dp(net, costs, inst, settings)
    return result.value, result.schedule


def _gridlp(inst, settings, refinement, extra):
    net = _grid_network(inst, settings, refinement, extra)
    return solve_network_lp(net, inst, settings)


def _bnb(inst, settings, refinement, extra, grid=None):
    trace = TraceLog() if settings.bnb_log else None
    config = BnbConfig.from_settings(settings, grid=grid, trace=trace)
    try:
        result = solve_bnb(inst, config)
    finally:
        if trace is not None:
            trace.to_csv(settings.bnb_log)
    extra.update(attr.asdict(result.stats))
    return result.value, result.schedule


def _bnb_grid(inst, settings, refinement, extra):
    return _bnb(inst, settings, refinement, extra, grid=build_grid(inst, refinement))


def _oracle(inst, settings, refinement, extra):
    result = brute_force_oracle(inst, OracleLimits(), lp_backend=settings.lp_backend)
    extra['sequences'] = result.sequences
    return result.value, result.schedule


RUNNERS = {
    'milp': _milp,
    'dp': _dp,
    'gridlp': _gridlp,
    'bnb': _bnb,
    'bnb_grid': _bnb_grid,
    'oracle': _oracle,
}


def run_method(method, inst, settings=DEFAULT_SETTINGS, refinement=1):
    """
    Run one method and audit its schedule. Solver failures are reported
    in `status` instead of being raised; input errors propagate.
    """
    if method not in RUNNERS:
        raise ValueError(f"unknown method {method!r}, expected one of {METHODS}")
    result = MethodResult(method, 'ok')
    timing = {}
    started = time.perf_counter()
    try:
        result.objective, result.schedule = timeit(RUNNERS[method])(
            inst, settings, refinement, result.extra, log_time=timing, log_name='cpu')
    except TimeBudgetExceeded as e:
        result.status = 'budget'
        result.extra['gap'] = e.gap
        if isinstance(e.incumbent, tuple):
            result.objective, result.schedule = e.incumbent
    except (Infeasible, NoFeasiblePath):
        result.status = 'infeasible'
    except LimitsExceeded as e:
        result.status = 'limits'
        result.extra['reason'] = str(e)
    except NumericalFailure as e:
        result.status = 'numerical'
        result.extra['reason'] = str(e)
    result.seconds = timing['cpu'] / 1000 if 'cpu' in timing else time.perf_counter() - started
    if result.schedule is not None:
        try:
            strict = settings.strict_terminal_h and method in EVENT_METHODS
            result.audited = evaluate_schedule_cost(result.schedule, inst, strict)
        except PshoptError as e:
            logger.warning("%s: schedule fails the audit: %s", method, e)
            result.status = 'error'
            result.extra['reason'] = str(e)
    logger.info("%s: %s objective=%s (%.3f s)", method, result.status, result.audited, result.seconds)
    return result
