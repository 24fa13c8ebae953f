"""
The time-indexed mixed-integer model: commitment binaries per stage,
clipped min-up/down windows, gated generation/pumping bounds, ramping on
the turbine output, reservoir mass balance and epigraph cost pieces.
"""

import logging

import attr
import numpy as np

from pshopt.errors import FractionalBinaries
from pshopt.instance.validate import require_valid
from pshopt.lp import LinearProgram, Sense, solve_binary_mip, solve_lp, write_lp_format
from pshopt.modes import Mode
from pshopt.settings import DEFAULT_SETTINGS, INTEGRALITY_TOL
from pshopt.time_indexed.schedule import make_schedule

logger = logging.getLogger(__name__)


@attr.s(frozen=True)
class Layout():
    """ First variable index of every per-stage family. """

    horizon = attr.ib(type=int)
    yG = attr.ib(type=int)
    yP = attr.ib(type=int)
    ySC = attr.ib()
    y = attr.ib(type=int)
    u = attr.ib(type=int)
    d = attr.ib(type=int)
    HO = attr.ib(type=int)
    HI = attr.ib(type=int)
    #: T+1 reservoir levels
    M = attr.ib(type=int)
    phiG = attr.ib(type=int)
    phiP = attr.ib(type=int)

    def at(self, family, t):
        """ Index of `family` at stage t (1-based). """
        return getattr(self, family) + t - 1


def layout(inst):
    T = inst.horizon
    families = ['yG', 'yP'] + (['ySC'] if inst.hsc_enabled else []) + ['y', 'u', 'd', 'HO', 'HI', 'M', 'phiG', 'phiP']
    offsets, k = {}, 0
    for family in families:
        offsets[family] = k
        k += T + 1 if family == 'M' else T
    offsets.setdefault('ySC', None)
    return Layout(horizon=T, **offsets)


def build_time_indexed(inst):
    require_valid(inst)
    T = inst.horizon
    lay = layout(inst)
    lp = LinearProgram(f"time-indexed {inst.name}".strip())
    nu, V = inst.water_value, inst.ramp_limit
    families = ('yG', 'yP', 'ySC') if inst.hsc_enabled else ('yG', 'yP')
    for family in families + ('y', 'u', 'd'):
        for t in range(1, T + 1):
            upper = 0.0 if family in families + ('y',) and t <= inst.initial_counter else 1.0
            lp.add_variable(f"{family}_{t}", 0.0, upper, binary=True)
    for t in range(1, T + 1):
        lp.add_variable(f"HO_{t}", 0.0, inst.gen_bounds[t - 1][1],
                        cost=nu * inst.efficiency_gen[t - 1] - inst.prices[t - 1])
    for t in range(1, T + 1):
        lp.add_variable(f"HI_{t}", 0.0, inst.pump_bounds[t - 1][1],
                        cost=inst.prices[t - 1] - nu * inst.efficiency_pump[t - 1])
    for t in range(1, T + 2):
        lower, upper = 0.0, inst.capacity
        if t == 1:
            lower = upper = inst.initial_level
        elif t == T + 1 and inst.terminal_level is not None:
            lower = upper = inst.terminal_level
        lp.add_variable(f"M_{t}", lower, upper)
    for family in ('phiG', 'phiP'):
        for t in range(1, T + 1):
            lp.add_variable(f"{family}_{t}", -np.inf, np.inf, cost=1.0)
    for t in range(1, T + 1):
        lp.set_cost(lay.at('u', t), inst.startup[t - 1])
        lp.set_cost(lay.at('d', t), inst.shutdown[t - 1])

    def turbine(t):
        gate = {lay.at('yG', t): 1.0}
        if inst.hsc_enabled:
            gate[lay.at('ySC', t)] = 1.0
        return gate

    def pump(t):
        gate = {lay.at('yP', t): 1.0}
        if inst.hsc_enabled:
            gate[lay.at('ySC', t)] = 1.0
        return gate

    def scaled(gate, factor):
        return {k: factor * v for k, v in gate.items()}

    for t in range(1, T + 1):
        split = {lay.at(f, t): 1.0 for f in families}
        split[lay.at('y', t)] = -1.0
        lp.add_constraint(split, Sense.EQ, 0.0, f"commit_{t}")

        switch = {lay.at('y', t): 1.0, lay.at('u', t): -1.0, lay.at('d', t): 1.0}
        if t > 1:
            switch[lay.at('y', t - 1)] = -1.0
        lp.add_constraint(switch, Sense.EQ, 0.0, f"switch_{t}")

        up = {lay.at('u', k): 1.0 for k in range(max(1, t - inst.min_up + 1), t + 1)}
        up[lay.at('y', t)] = -1.0
        lp.add_constraint(up, Sense.LE, 0.0, f"min_up_{t}")
        down = {lay.at('d', k): 1.0 for k in range(max(1, t - inst.min_down + 1), t + 1)}
        down[lay.at('y', t)] = 1.0
        lp.add_constraint(down, Sense.LE, 1.0, f"min_down_{t}")

        g_lo, g_hi = inst.gen_bounds[t - 1]
        ho = lay.at('HO', t)
        lp.add_constraint({ho: 1.0, **scaled(turbine(t), -g_lo)}, Sense.GE, 0.0, f"gen_lo_{t}")
        lp.add_constraint({ho: 1.0, **scaled(turbine(t), -g_hi)}, Sense.LE, 0.0, f"gen_hi_{t}")
        p_lo, p_hi = inst.pump_bounds[t - 1]
        hi = lay.at('HI', t)
        lp.add_constraint({hi: 1.0, **scaled(pump(t), -p_lo)}, Sense.GE, 0.0, f"pump_lo_{t}")
        lp.add_constraint({hi: 1.0, **scaled(pump(t), -p_hi)}, Sense.LE, 0.0, f"pump_hi_{t}")

        ramp_up = {ho: 1.0, **scaled(turbine(t), -V)}
        if t > 1:
            ramp_up[lay.at('HO', t - 1)] = -1.0
        lp.add_constraint(ramp_up, Sense.LE, 0.0, f"ramp_up_{t}")
        if t > 1:
            ramp_down = {lay.at('HO', t - 1): 1.0, ho: -1.0, **scaled(turbine(t - 1), -V)}
            lp.add_constraint(ramp_down, Sense.LE, 0.0, f"ramp_down_{t}")

        balance = {lay.at('M', t + 1): 1.0, lay.at('M', t): -1.0,
                   ho: inst.efficiency_gen[t - 1], hi: -inst.efficiency_pump[t - 1]}
        lp.add_constraint(balance, Sense.EQ, inst.inflow[t - 1] - inst.spillage[t - 1], f"balance_{t}")

        for m, (a, b) in enumerate(inst.gen_cost_pieces[t - 1]):
            lp.add_constraint({lay.at('phiG', t): 1.0, ho: -a, **scaled(turbine(t), -b)},
                              Sense.GE, 0.0, f"gen_piece_{t}_{m}")
        for m, (a, b) in enumerate(inst.pump_cost_pieces[t - 1]):
            lp.add_constraint({lay.at('phiP', t): 1.0, hi: -a, **scaled(pump(t), -b)},
                              Sense.GE, 0.0, f"pump_piece_{t}_{m}")

    if inst.terminal_offline:
        lp.add_constraint({lay.at('HO', T): 1.0}, Sense.LE, V, "terminal_ramp")
    logger.debug("time-indexed model: %r", lp)
    return lp


def extract_schedule(sol, inst):
    lay = layout(inst)
    T = inst.horizon
    families = ('yG', 'yP', 'ySC') if inst.hsc_enabled else ('yG', 'yP')
    for family in families + ('y', 'u', 'd'):
        for t in range(1, T + 1):
            value = sol.value(lay.at(family, t))
            if abs(value - round(value)) > INTEGRALITY_TOL:
                raise FractionalBinaries(f"{family}_{t}", value)
    modes = []
    for t in range(1, T + 1):
        if round(sol.value(lay.at('yG', t))):
            modes.append(Mode.G)
        elif round(sol.value(lay.at('yP', t))):
            modes.append(Mode.P)
        elif inst.hsc_enabled and round(sol.value(lay.at('ySC', t))):
            modes.append(Mode.SC)
        else:
            modes.append(Mode.O)
    h_out = np.array([sol.value(lay.at('HO', t)) if modes[t - 1].turbine else 0.0 for t in range(1, T + 1)])
    h_in = np.array([sol.value(lay.at('HI', t)) if modes[t - 1].pump else 0.0 for t in range(1, T + 1)])
    levels = np.array([sol.value(lay.at('M', t)) for t in range(1, T + 2)])
    return make_schedule(inst, modes, h_out, h_in, levels)


def solve_time_indexed(inst, settings=DEFAULT_SETTINGS):
    """ Solve the MILP to optimality; returns (LpSolution, Schedule). """
    model = build_time_indexed(inst)
    if settings.dump_lp:
        write_lp_format(model, settings.dump_lp)
    sol = solve_binary_mip(model, time_budget=settings.time_budget,
                           backend=settings.mip_backend, lp_backend=settings.lp_backend)
    logger.info("time-indexed MILP: objective %.6f (%d nodes)", sol.objective, sol.nodes)
    return sol, extract_schedule(sol, inst)


def relaxation_bound(inst, settings=DEFAULT_SETTINGS):
    """ Objective of the continuous relaxation of the MILP. """
    sol = solve_lp(build_time_indexed(inst), backend=settings.lp_backend)
    return sol.objective if sol.optimal else None
