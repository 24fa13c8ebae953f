"""
Brute-force reference: every per-stage mode sequence allowed by the
commitment rules, each priced by one LP with the modes fixed. Written
directly against the LP layer so it shares no formulation code with
the solvers it checks.
"""

import itertools
import logging

import attr
import numpy as np

from pshopt.errors import Infeasible, LimitsExceeded, NumericalFailure
from pshopt.lp import LinearProgram, Sense, Status, solve_lp
from pshopt.modes import Mode
from pshopt.time_indexed.schedule import commitment, make_schedule

logger = logging.getLogger(__name__)


@attr.s(frozen=True)
class OracleLimits():

    #: longest horizon the oracle accepts
    T_max = attr.ib(type=int, default=8)
    #: most mode sequences the oracle prices
    seq_max = attr.ib(type=int, default=20000)


@attr.s(frozen=True)
class OracleResult():

    value = attr.ib(type=float)
    schedule = attr.ib()
    #: number of admissible sequences priced
    sequences = attr.ib(type=int)


def admissible(inst, modes):
    y, u, d = commitment(modes)
    for t in range(1, inst.horizon + 1):
        if t <= inst.initial_counter and y[t - 1]:
            return False
        if u[max(0, t - inst.min_up):t].sum() > y[t - 1]:
            return False
        if d[max(0, t - inst.min_down):t].sum() > 1 - y[t - 1]:
            return False
    return True


def mode_sequences(inst, prefix=()):
    """ Admissible sequences starting with `prefix`, in lexicographic mode order. """
    free = inst.horizon - len(prefix)
    for tail in itertools.product(inst.modes, repeat=free):
        modes = tuple(prefix) + tail
        if admissible(inst, modes):
            yield modes


def price_sequence(inst, modes, lp_backend=None):
    """ (cost, h_out, h_in, levels) with the modes fixed, or None if infeasible. """
    T = inst.horizon
    V, nu = inst.ramp_limit, inst.water_value
    lp = LinearProgram("fixed modes")
    ho = [None] * T
    hi = [None] * T
    for t, mode in enumerate(modes):
        price = inst.prices[t]
        if mode.turbine:
            lo, up = inst.gen_bounds[t]
            ho[t] = lp.add_variable(f"HO_{t + 1}", lo, up, cost=nu * inst.efficiency_gen[t] - price)
        if mode.pump:
            lo, up = inst.pump_bounds[t]
            hi[t] = lp.add_variable(f"HI_{t + 1}", lo, up, cost=price - nu * inst.efficiency_pump[t])
    level = [lp.add_variable("M_1", inst.initial_level, inst.initial_level)]
    for t in range(2, T + 2):
        lower, upper = 0.0, inst.capacity
        if t == T + 1 and inst.terminal_level is not None:
            lower = upper = inst.terminal_level
        level.append(lp.add_variable(f"M_{t}", lower, upper))
    for t in range(T):
        balance = {level[t + 1]: 1.0, level[t]: -1.0}
        if ho[t] is not None:
            balance[ho[t]] = inst.efficiency_gen[t]
            phi = lp.add_variable(f"phiG_{t + 1}", -np.inf, np.inf, cost=1.0)
            for a, b in inst.gen_cost_pieces[t]:
                lp.add_constraint({phi: 1.0, ho[t]: -a}, Sense.GE, b)
            previous = ho[t - 1] if t > 0 else None
            if previous is None:
                lp.add_constraint({ho[t]: 1.0}, Sense.LE, V)
            else:
                lp.add_constraint({ho[t]: 1.0, previous: -1.0}, Sense.LE, V)
                lp.add_constraint({previous: 1.0, ho[t]: -1.0}, Sense.LE, V)
        elif t > 0 and ho[t - 1] is not None:
            lp.add_constraint({ho[t - 1]: 1.0}, Sense.LE, V)
        if hi[t] is not None:
            balance[hi[t]] = -inst.efficiency_pump[t]
            phi = lp.add_variable(f"phiP_{t + 1}", -np.inf, np.inf, cost=1.0)
            for a, b in inst.pump_cost_pieces[t]:
                lp.add_constraint({phi: 1.0, hi[t]: -a}, Sense.GE, b)
        lp.add_constraint(balance, Sense.EQ, inst.inflow[t] - inst.spillage[t])
    if inst.terminal_offline and ho[T - 1] is not None:
        lp.add_constraint({ho[T - 1]: 1.0}, Sense.LE, V)
    sol = solve_lp(lp, backend=lp_backend)
    if sol.status is Status.INFEASIBLE:
        return None
    if not sol.optimal:
        raise NumericalFailure(f"fixed-mode LP is {sol.status.value}")
    _, u, d = commitment(modes)
    cost = sol.objective + float(np.dot(inst.startup, u)) + float(np.dot(inst.shutdown, d))
    h_out = np.array([sol.x[k] if k is not None else 0.0 for k in ho])
    h_in = np.array([sol.x[k] if k is not None else 0.0 for k in hi])
    levels = np.array([sol.x[k] for k in level])
    return cost, h_out, h_in, levels


def brute_force_oracle(inst, limits=OracleLimits(), prefix=(), lp_backend=None):
    """ Optimum over all admissible mode sequences (optionally with fixed leading modes). """
    if inst.horizon > limits.T_max:
        raise LimitsExceeded('horizon', inst.horizon, limits.T_max)
    sequences = list(itertools.islice(mode_sequences(inst, prefix), limits.seq_max + 1))
    if len(sequences) > limits.seq_max:
        raise LimitsExceeded('mode sequences', f"> {limits.seq_max}", limits.seq_max)
    best = None
    for modes in sequences:
        priced = price_sequence(inst, modes, lp_backend)
        if priced is not None and (best is None or priced[0] < best[0] - 1e-9):
            best = (priced[0], modes) + priced[1:]
    if best is None:
        raise Infeasible('schedule')
    _, modes, h_out, h_in, levels = best
    schedule = make_schedule(inst, modes, h_out, h_in, levels)
    logger.info("oracle: %d sequences, optimum %.6f", len(sequences), schedule.cost)
    return OracleResult(schedule.cost, schedule, len(sequences))
