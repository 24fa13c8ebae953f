"""
Greedy completion of a partial skeleton: commit the frontier boundary
from the prefix LP, then repeatedly take the cheapest admissible event
by its exact block cost, and finally re-optimize the whole skeleton.
"""

import logging

import attr

from pshopt.events.blocks import RampRule, ramp_end_rule, solve_block_lp
from pshopt.events.state import boundary_cost, enumerate_events, offline_trajectory, origin, transition
from pshopt.bnb.skeleton import evaluate_skeleton, frontier_boundary, solve_skeleton_lp
from pshopt.modes import Mode
from pshopt.settings import FEAS_TOL

logger = logging.getLogger(__name__)


def recoverable_windows(inst):
    """
    Per stage j = 1..T+1, the levels from which the terminal level is
    still reachable, ignoring commitment rules. Index 0 is unused.
    """
    T = inst.horizon
    full = (0.0, inst.capacity)
    if inst.terminal_level is None:
        return [full] * (T + 2)
    windows = [full] * (T + 2)
    term = inst.terminal_level
    windows[T + 1] = (term, term)
    gain_lo = gain_hi = 0.0
    for j in range(T, 0, -1):
        s = j - 1
        mu, alpha = inst.efficiency_gen[s], inst.efficiency_pump[s]
        (g_lo, g_hi), (p_lo, p_hi) = inst.gen_bounds[s], inst.pump_bounds[s]
        highs = [0.0, alpha * p_hi, -mu * g_lo]
        lows = [0.0, alpha * p_lo, -mu * g_hi]
        if inst.hsc_enabled:
            highs.append(alpha * p_hi - mu * g_lo)
            lows.append(alpha * p_lo - mu * g_hi)
        drift = inst.inflow[s] - inst.spillage[s]
        gain_hi += drift + max(highs)
        gain_lo += drift + min(lows)
        windows[j] = (max(0.0, term - gain_hi), min(inst.capacity, term - gain_lo))
    return windows


def step(inst, state, action, windows, strict=False, lp_backend=None):
    """ (cost incl. boundary cost, successor state with values) or None. """
    T = inst.horizon
    j = action.end
    gamma = boundary_cost(state.mode, action.successor, j, inst)
    nxt = transition(state, action, inst)
    if state.stage == 0:
        return gamma, attr.evolve(nxt, level=state.level, ramp=0.0)
    terminal = inst.terminal_level if j == T + 1 else None
    if state.mode is Mode.O:
        levels = offline_trajectory(inst, state.stage, j, state.level)
        if levels is None:
            return None
        level = levels[-1]
        lo, hi = windows[j]
        if level < lo - FEAS_TOL or level > hi + FEAS_TOL:
            return None
        return gamma, attr.evolve(nxt, level=level, ramp=0.0)
    rule = ramp_end_rule(state.mode, action.successor, inst, strict)
    ramp_end = 0.0 if rule is RampRule.PIN and not action.successor.turbine else None
    result = solve_block_lp(inst, state.mode, state.stage, j, state.level, state.ramp,
                            terminal, ramp_end, rule, lp_backend, level_window=windows[j])
    if not result.feasible:
        return None
    ramp = 0.0
    if state.mode.turbine and action.successor.turbine:
        ramp = float(result.h_out[-1])
    return result.cost + gamma, attr.evolve(nxt, level=float(result.levels[-1]), ramp=ramp)


def _score(inst, state, action, windows, strict, lp_backend):
    taken = step(inst, state, action, windows, strict, lp_backend)
    if taken is None:
        return None
    cost, nxt = taken
    if not state.mode.online and nxt.mode.online:
        follow = [step(inst, nxt, a, windows, strict, lp_backend) for a in enumerate_events(nxt, inst)]
        follow = [c for c, _ in filter(None, follow)]
        if not follow:
            return None
        cost += min(follow)
    return cost, nxt


def greedy_completion(inst, actions, strict=False, lp_backend=None):
    """ Greedily completed skeleton (list of actions) or None. """
    windows = recoverable_windows(inst)
    actions = list(actions)
    if not actions:
        state = origin(inst)
    else:
        solved = solve_skeleton_lp(inst, actions, strict, lp_backend=lp_backend,
                                   window=windows[actions[-1].end] if actions[-1].end <= inst.horizon else None)
        if solved is None:
            return None
        model, sol = solved
        level, ramp = frontier_boundary(model, sol)
        state = attr.evolve(model.states[-1], level=level, ramp=ramp)
    while state.mode is not Mode.END:
        best = None
        for action in enumerate_events(state, inst):
            scored = _score(inst, state, action, windows, strict, lp_backend)
            if scored is not None and (best is None or scored[0] < best[0] - 1e-9):
                best = (scored[0], action, scored[1])
        if best is None:
            logger.debug("greedy completion dead-ends at stage %d (%s)", state.stage, state.mode.name)
            return None
        actions.append(best[1])
        state = best[2]
    return actions


def upper_bound_completion(node, inst, strict=False, lp_backend=None):
    """ (value, Schedule) of a greedy completion of the node, or None. """
    actions = greedy_completion(inst, node.skeleton, strict, lp_backend)
    if actions is None:
        return None
    return evaluate_skeleton(inst, actions, strict, lp_backend)
