import logging

import attr
import numpy as np

from pshopt.errors import NoFeasiblePath
from pshopt.events.blocks import BlockBoundary, solve_block_lp, solve_offline_block
from pshopt.events.stitch import stitch
from pshopt.settings import DEFAULT_SETTINGS

logger = logging.getLogger(__name__)

#: a later arc replaces the incumbent only when cheaper by more than this
TIE_TOL = 1e-9


@attr.s(frozen=True)
class DpResult():

    value = attr.ib(type=float)
    schedule = attr.ib()
    #: arc ids of the optimal path from the origin to the sink
    path = attr.ib(type=tuple)


def backward_values(net, costs):
    """ Value-to-go per node and the chosen arc per node (-1: none). """
    n = len(net.nodes)
    value = np.full(n, np.inf)
    choice = np.full(n, -1, dtype=int)
    value[net.sink] = 0.0
    for node in range(net.sink - 1, -1, -1):
        best = np.inf
        for k in net.out_arcs[node]:
            candidate = costs[k] + value[net.arcs[k].target]
            if candidate < best - TIE_TOL:
                best = candidate
                choice[node] = k
        value[node] = best
    return value, choice


def arc_trajectory(arc, inst, lp_backend=None):
    """ Exact trajectory of one arc's block. """
    if arc.mode.online:
        return solve_block_lp(inst, arc.mode, arc.start, arc.end, arc.level_start, arc.ramp_start,
                              arc.level_end, arc.ramp_end, arc.rule, lp_backend)
    return solve_offline_block(BlockBoundary(arc.start, arc.end, arc.mode, arc.level_start,
                                             level_end=arc.level_end), inst)


def path_schedule(net, path, inst, lp_backend=None, trajectories=None):
    """ Stitch the arcs of a path into a Schedule, re-solving blocks not given. """
    trajectories = trajectories or {}
    pieces = []
    for k in path:
        arc = net.arcs[k]
        if arc.entry:
            continue
        result = trajectories.get(k) or arc_trajectory(arc, inst, lp_backend)
        if not result.feasible:
            raise NoFeasiblePath()
        pieces.append((arc.mode, arc.start, arc.end, result))
    return stitch(inst, pieces, net.strict)


def optimal_path(net, choice):
    """ Arc ids of the chosen path from the origin to the sink. """
    path = []
    node = net.origin
    while node != net.sink:
        k = int(choice[node])
        path.append(k)
        node = net.arcs[k].target
    return tuple(path)


def solve_dp(net, costs, inst=None, settings=DEFAULT_SETTINGS):
    """ Backward Bellman pass; returns the optimal value and its schedule. """
    inst = inst or net.inst
    value, choice = backward_values(net, costs)
    if not np.isfinite(value[net.origin]):
        raise NoFeasiblePath()
    path = optimal_path(net, choice)
    schedule = path_schedule(net, path, inst, settings.lp_backend)
    logger.info("grid DP: value %.6f over %d events", value[net.origin], len(path))
    return DpResult(float(value[net.origin]), schedule, path)
