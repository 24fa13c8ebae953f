"""
Event states, admissible events, the counter update and boundary costs.

An event is a pair (j, x): keep the current mode up to stage j-1 and
enter mode x at stage j. The search starts from a pre-horizon offline
origin at stage 0 whose only events are zero-length entries at j=1.
"""

import logging

import attr
import numpy as np

from pshopt.modes import Mode, is_switch
from pshopt.settings import SNAP_TOL

logger = logging.getLogger(__name__)


@attr.s(frozen=True)
class EventState():

    #: stage t (0 for the origin)
    stage = attr.ib(type=int)
    mode = attr.ib(type=Mode)
    #: reservoir level M_t (None when left to an LP)
    level = attr.ib(default=None)
    #: ramping boundary H_t (None when left to an LP)
    ramp = attr.ib(default=0.0)
    #: remaining stages before an online/offline switch is admissible
    counter = attr.ib(type=int, default=0)

    @property
    def reduced(self):
        return (self.stage, self.mode, self.counter)


@attr.s(frozen=True)
class EventAction():

    #: first stage of the successor event, t < end <= T+1
    end = attr.ib(type=int)
    successor = attr.ib(type=Mode)
    #: successor reservoir level (None: free or symbolic)
    level = attr.ib(default=None)
    #: successor ramping boundary (None: free or symbolic)
    ramp = attr.ib(default=None)

    def order(self, grid=None):
        """ Deterministic tie-break key: j, mode, grid indices. """
        level_idx = ramp_idx = -1
        if grid is not None:
            if self.level is not None:
                level_idx = int(np.searchsorted(grid.reservoir_points, self.level - SNAP_TOL))
            if self.ramp is not None:
                ramp_idx = int(np.searchsorted(grid.ramp_points, self.ramp - SNAP_TOL))
        return (self.end, int(self.successor), level_idx, ramp_idx)


def origin(inst):
    return EventState(0, Mode.O, inst.initial_level, 0.0, inst.initial_counter)


def offline_trajectory(inst, start, end, level_start):
    """
    Levels M_start..M_end of an offline block, or None if an
    intermediate or final level leaves [0, capacity].
    """
    levels = [level_start]
    for i in range(start, end):
        levels.append(levels[-1] + inst.inflow[i - 1] - inst.spillage[i - 1])
    if min(levels) < -SNAP_TOL or max(levels) > inst.capacity + SNAP_TOL:
        return None
    return levels


def snap(points, value):
    """ Grid point within SNAP_TOL of value, or None. """
    k = int(np.searchsorted(points, value - SNAP_TOL))
    if k < len(points) and abs(points[k] - value) <= SNAP_TOL:
        return points[k]
    return None


def _targets(inst, s, end, successor, grid):
    """ Successor boundary values (level, ramp) in grid mode. """
    terminal = successor is Mode.END
    if s.mode is Mode.O:
        levels = offline_trajectory(inst, s.stage, end, s.level) if s.stage else [s.level]
        if levels is None:
            return []
        level = levels[-1]
        if terminal:
            if inst.terminal_level is not None and abs(level - inst.terminal_level) > SNAP_TOL:
                return []
            return [(inst.terminal_level if inst.terminal_level is not None else level, None)]
        level = snap(grid.reservoir_points, level)
        if level is None:
            return []
        level_choices = [level]
    elif terminal:
        return [(inst.terminal_level, None)]
    else:
        level_choices = list(grid.reservoir_points)
    if s.mode.turbine and successor.turbine:
        ramp_choices = list(grid.ramp_points)
    else:
        ramp_choices = [0.0]
    return [(m, h) for m in level_choices for h in ramp_choices]


def enumerate_events(s, inst, grid=None):
    """
    Admissible events from s in tie-break order. With `grid` the
    successor boundary values are drawn from the grid; without it
    they are left symbolic (None).
    """
    T = inst.horizon
    actions = []
    if s.stage == 0:
        ends = [1]
    else:
        last = T + 1
        if s.mode.online:
            last = min(last, s.stage + inst.j_max)
        ends = range(s.stage + 1, last + 1)
    for end in ends:
        if end == T + 1:
            successors = (Mode.END,)
        else:
            successors = inst.modes
        for successor in successors:
            if s.stage and s.mode is Mode.O and successor is Mode.O:
                continue
            if successor is not Mode.END and is_switch(s.mode, successor) and end < s.stage + s.counter + 1:
                continue
            if grid is None:
                actions.append(EventAction(end, successor))
                continue
            for level, ramp in _targets(inst, s, end, successor, grid):
                actions.append(EventAction(end, successor, level, ramp))
    return actions


def transition(s, action, inst):
    successor = action.successor
    j = action.end
    if successor is Mode.END:
        counter = 0
    elif not s.mode.online and successor.online:
        counter = inst.min_up - 1
    elif s.mode.online and not successor.online:
        counter = inst.min_down - 1
    else:
        counter = max(s.counter - (j - s.stage), 0)
    ramp = action.ramp
    if ramp is None and not successor.turbine:
        ramp = 0.0
    return EventState(j, successor, action.level, ramp, counter)


def boundary_cost(mode, successor, j, inst):
    """ Start-up / shut-down cost charged when `successor` begins at j. """
    if successor is Mode.END or j > inst.horizon:
        return 0.0
    if not mode.online and successor.online:
        return inst.startup[j - 1]
    if mode.online and not successor.online:
        return inst.shutdown[j - 1]
    return 0.0
