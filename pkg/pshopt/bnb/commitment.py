"""
Commitment bound: the continuous relaxation of the time-indexed model
with the commitment binaries of a mode prefix fixed. Every event
schedule extending the prefix is feasible for the fixed model, so its
optimum bounds all of them from below.
"""

import logging
import math

from pshopt.errors import NumericalFailure
from pshopt.events.state import origin, transition
from pshopt.lp import Status, solve_lp
from pshopt.modes import Mode
from pshopt.time_indexed.builder import build_time_indexed, layout

logger = logging.getLogger(__name__)


def skeleton_modes(inst, skeleton):
    """ Per-stage modes fixed by a skeleton, frontier stage included. """
    modes = []
    state = origin(inst)
    for action in skeleton:
        if state.stage >= 1:
            modes.extend([state.mode] * (action.end - state.stage))
        state = transition(state, action, inst)
    if state.mode is not Mode.END and 1 <= state.stage <= inst.horizon:
        modes.append(state.mode)
    return tuple(modes)


class CommitmentBound():
    """ Prefix bounds over one time-indexed model built up front. """

    def __init__(self, inst, lp_backend=None):
        self.inst = inst
        self.lp_backend = lp_backend
        self.model = build_time_indexed(inst)
        self.layout = layout(inst)
        self.lower, self.upper = self.model.matrices()[4:]
        self.solves = 0

    def _families(self):
        families = [('yG', Mode.G), ('yP', Mode.P)]
        if self.inst.hsc_enabled:
            families.append(('ySC', Mode.SC))
        return families

    def fixed_bounds(self, modes):
        """ (lower, upper) with the prefix pinned, or None if it breaks a bound. """
        lower, upper = self.lower.copy(), self.upper.copy()
        previous = 0
        for t, mode in enumerate(modes, 1):
            y = 1 if mode.online else 0
            values = [(family, 1.0 if mode is m else 0.0) for family, m in self._families()]
            values += [('y', y), ('u', max(0, y - previous)), ('d', max(0, previous - y))]
            for family, value in values:
                k = self.layout.at(family, t)
                if value < self.lower[k] or value > self.upper[k]:
                    return None
                lower[k] = upper[k] = value
            previous = y
        return lower, upper

    def __call__(self, modes):
        fixed = self.fixed_bounds(modes)
        if fixed is None:
            return math.inf
        self.solves += 1
        sol = solve_lp(self.model, backend=self.lp_backend, lower=fixed[0], upper=fixed[1])
        if sol.status is Status.INFEASIBLE:
            return math.inf
        if not sol.optimal:
            raise NumericalFailure(f"commitment bound LP is {sol.status.value}")
        return sol.objective
