"""
Exact evaluation of an event skeleton: one LP over all of its blocks
with the interior boundary values (level and ramping boundary at every
event change) optimized jointly.
"""

import logging

import attr
import numpy as np

from pshopt.errors import NumericalFailure
from pshopt.events.blocks import BlockResult, Ref, add_block_lp, levels_from_flows, ramp_end_rule, read_block
from pshopt.events.state import boundary_cost, origin, transition
from pshopt.events.stitch import stitch
from pshopt.lp import LinearProgram, Status, solve_lp
from pshopt.modes import Mode

logger = logging.getLogger(__name__)


@attr.s
class SkeletonLp():

    lp = attr.ib()
    #: origin followed by the state after every action
    states = attr.ib(type=list)
    level = attr.ib(type=list)
    ramp = attr.ib(type=list)
    #: (state position, BlockVars or None for offline blocks)
    blocks = attr.ib(type=list)
    gamma = attr.ib(type=float)


def skeleton_states(inst, actions):
    states = [origin(inst)]
    for action in actions:
        states.append(transition(states[-1], action, inst))
    return states


def build_skeleton_lp(inst, actions, strict=False, window=None):
    """
    `window` bounds the level of the last state when the skeleton does
    not reach the terminal stage.
    """
    states = skeleton_states(inst, actions)
    lp = LinearProgram("skeleton")
    lp.add_variable("anchor", 0.0, 0.0)
    level, ramp = [], []
    last = len(states) - 1
    for k, s in enumerate(states):
        if k <= 1:
            level.append(Ref.fixed(inst.initial_level))
            ramp.append(Ref.fixed(0.0))
            continue
        if s.mode is Mode.END:
            if inst.terminal_level is not None:
                level.append(Ref.fixed(inst.terminal_level))
            else:
                level.append(Ref.var(lp.add_variable(f"M_{k}", 0.0, inst.capacity)))
            ramp.append(Ref.fixed(0.0))
            continue
        lower, upper = 0.0, inst.capacity
        if k == last and window is not None:
            lower, upper = max(lower, window[0]), min(upper, window[1])
            if lower > upper:
                return None
        level.append(Ref.var(lp.add_variable(f"M_{k}", lower, upper)))
        if states[k - 1].mode.turbine and s.mode.turbine:
            ramp.append(Ref.var(lp.add_variable(f"H_{k}", 0.0, inst.gen_max)))
        else:
            ramp.append(Ref.fixed(0.0))

    blocks = []
    gamma = 0.0
    for k in range(len(states) - 1):
        s, nxt = states[k], states[k + 1]
        gamma += boundary_cost(s.mode, nxt.mode, nxt.stage, inst)
        if s.stage == 0:
            continue
        rule = ramp_end_rule(s.mode, nxt.mode, inst, strict)
        blk = add_block_lp(lp, inst, s.mode, s.stage, nxt.stage, level[k], ramp[k],
                           level[k + 1], ramp[k + 1], rule, tag=f"e{k}")
        blocks.append((k, blk if s.mode.online else None))
    return SkeletonLp(lp, states, level, ramp, blocks, gamma)


def _value(ref, x):
    return ref.value if ref.index is None else float(x[ref.index])


def solve_skeleton_lp(inst, actions, strict=False, window=None, lp_backend=None):
    """ (SkeletonLp, LpSolution) or None if infeasible. """
    model = build_skeleton_lp(inst, actions, strict, window)
    if model is None:
        return None
    sol = solve_lp(model.lp, backend=lp_backend)
    if sol.status is Status.INFEASIBLE:
        return None
    if not sol.optimal:
        raise NumericalFailure(f"skeleton LP is {sol.status.value}")
    return model, sol


def frontier_boundary(model, sol):
    """ Level and ramping boundary of the skeleton's last state. """
    return _value(model.level[-1], sol.x), _value(model.ramp[-1], sol.x)


def evaluate_skeleton(inst, actions, strict=False, lp_backend=None):
    """ Exact cost and Schedule of a complete skeleton, or None. """
    solved = solve_skeleton_lp(inst, actions, strict, lp_backend=lp_backend)
    if solved is None:
        return None
    model, sol = solved
    pieces = []
    for k, blk in model.blocks:
        s, nxt = model.states[k], model.states[k + 1]
        start_level = _value(model.level[k], sol.x)
        if blk is None:
            n = nxt.stage - s.stage
            h_out, h_in, phi = np.zeros(n), np.zeros(n), np.zeros(n)
        else:
            h_out, h_in, phi = read_block(blk, sol.x)
        levels = levels_from_flows(inst, s.stage, start_level, h_out, h_in)
        pieces.append((s.mode, s.stage, nxt.stage, BlockResult(True, float(np.sum(phi)), h_out, h_in, levels, phi)))
    value = sol.objective + model.gamma
    schedule = stitch(inst, pieces, strict)
    return value, schedule
