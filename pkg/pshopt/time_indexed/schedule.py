"""
Per-stage schedules and the solver-independent cost audit.
"""

import logging

import attr
import numpy as np
import pandas as pd

from pshopt.errors import InfeasibleSchedule
from pshopt.modes import Mode
from pshopt.settings import AUDIT_TOL

logger = logging.getLogger(__name__)

CSV_COLUMNS = ['t', 'mode', 'H_out_MW', 'H_in_MW', 'M_MWh', 'u', 'd', 'stage_cost']


@attr.s(frozen=True)
class CostBreakdown():

    #: pumping expenditure minus generation revenue
    energy_net = attr.ib(type=float)
    #: start-up costs
    startup = attr.ib(type=float)
    #: shut-down costs
    shutdown = attr.ib(type=float)
    #: piecewise-linear generation and pumping costs
    physical = attr.ib(type=float)
    #: value of released water minus value of pumped water
    water_value = attr.ib(type=float)

    @property
    def total(self):
        return self.energy_net + self.startup + self.shutdown + self.physical + self.water_value


@attr.s(frozen=True, eq=False)
class Schedule():

    #: operating mode per stage
    modes = attr.ib(type=tuple)
    #: generation output per stage in MW
    h_out = attr.ib()
    #: pumping power per stage in MW
    h_in = attr.ib()
    #: reservoir levels M_1..M_{T+1}
    levels = attr.ib()
    #: start-up indicators u_t
    startups = attr.ib()
    #: shut-down indicators d_t
    shutdowns = attr.ib()
    #: cost per stage
    stage_costs = attr.ib()
    breakdown = attr.ib(type=CostBreakdown)

    @property
    def horizon(self):
        return len(self.modes)

    @property
    def cost(self):
        return float(np.sum(self.stage_costs))

    @property
    def net_profit(self):
        return -self.cost

    @property
    def switches(self):
        """ Mode changes between consecutive stages. """
        return sum(1 for a, b in zip(self.modes[:-1], self.modes[1:]) if a is not b)

    def mode_string(self):
        return ''.join('S' if m is Mode.SC else m.name for m in self.modes)

    def to_frame(self):
        return pd.DataFrame({
            't': np.arange(1, self.horizon + 1),
            'mode': [m.name for m in self.modes],
            'H_out_MW': self.h_out,
            'H_in_MW': self.h_in,
            'M_MWh': self.levels[:-1],
            'u': self.startups,
            'd': self.shutdowns,
            'stage_cost': self.stage_costs,
        }, columns=CSV_COLUMNS)

    def to_csv(self, path):
        self.to_frame().to_csv(path, index=False, float_format='%.6f')


def commitment(modes):
    y = np.array([1 if m.online else 0 for m in modes], dtype=int)
    previous = np.concatenate([[0], y[:-1]])
    return y, np.maximum(y - previous, 0), np.maximum(previous - y, 0)


def _piece_cost(pieces, power):
    return max(a * power + b for a, b in pieces)


def _check(condition, constraint, stage=None, excess=None):
    if not condition:
        raise InfeasibleSchedule(constraint, stage, excess)


def audit(inst, modes, h_out, h_in, levels, strict=False):
    """
    Raise InfeasibleSchedule naming the first violated constraint.
    `strict` drops the shutdown ramp cap (strict terminal-H convention).
    """
    T = inst.horizon
    tol = AUDIT_TOL
    _check(len(modes) == T and len(h_out) == T and len(h_in) == T and len(levels) == T + 1,
           "schedule length")
    y, u, d = commitment(modes)
    V = inst.ramp_limit
    for t in range(1, T + 1):
        mode, ho, hi = modes[t - 1], h_out[t - 1], h_in[t - 1]
        if mode is Mode.SC:
            _check(inst.hsc_enabled, "short-circuit mode disabled", t)
        if mode.turbine:
            lo, up = inst.gen_bounds[t - 1]
            _check(ho >= lo - tol, "generation lower bound", t, lo - ho)
            _check(ho <= up + tol, "generation upper bound", t, ho - up)
        else:
            _check(abs(ho) <= tol, "generation while not generating", t, ho)
        if mode.pump:
            lo, up = inst.pump_bounds[t - 1]
            _check(hi >= lo - tol, "pumping lower bound", t, lo - hi)
            _check(hi <= up + tol, "pumping upper bound", t, hi - up)
        else:
            _check(abs(hi) <= tol, "pumping while not pumping", t, hi)
        before = h_out[t - 2] if t > 1 else 0.0
        gate_now = 1.0 if mode.turbine else 0.0
        gate_before = 1.0 if t > 1 and modes[t - 2].turbine else 0.0
        _check(ho - before <= V * gate_now + tol, "ramp-up", t, ho - before - V)
        if not strict or gate_now:
            _check(before - ho <= V * gate_before + tol, "ramp-down", t, before - ho - V)
        expected = (levels[t - 1] - inst.efficiency_gen[t - 1] * ho - inst.spillage[t - 1]
                    + inst.inflow[t - 1] + inst.efficiency_pump[t - 1] * hi)
        _check(abs(levels[t] - expected) <= tol, "mass balance", t, abs(levels[t] - expected))
        if t <= inst.initial_counter:
            _check(not mode.online, "initial offline requirement", t)
        window_up = u[max(0, t - inst.min_up):t].sum()
        _check(window_up <= y[t - 1], "min-up", t)
        window_down = d[max(0, t - inst.min_down):t].sum()
        _check(window_down <= 1 - y[t - 1], "min-down", t)
    for t, level in enumerate(levels, 1):
        _check(-tol <= level <= inst.capacity + tol, "storage bounds", t)
    _check(abs(levels[0] - inst.initial_level) <= tol, "initial level", 1)
    if inst.terminal_level is not None:
        _check(abs(levels[T] - inst.terminal_level) <= tol, "terminal level", T + 1)
    if inst.terminal_offline and modes[T - 1].turbine:
        cap = 0.0 if strict else V
        _check(h_out[T - 1] <= cap + tol, "terminal ramp", T, h_out[T - 1] - cap)
    return y, u, d


def make_schedule(inst, modes, h_out, h_in, levels, strict=False):
    """ Audit a trajectory and attach its cost. """
    modes = tuple(modes)
    h_out = np.asarray(h_out, dtype=float)
    h_in = np.asarray(h_in, dtype=float)
    levels = np.asarray(levels, dtype=float)
    y, u, d = audit(inst, modes, h_out, h_in, levels, strict)
    nu = inst.water_value
    energy = water = physical = 0.0
    stage_costs = np.zeros(inst.horizon)
    for t in range(inst.horizon):
        mode, ho, hi, price = modes[t], h_out[t], h_in[t], inst.prices[t]
        e = -price * ho + price * hi
        w = nu * (inst.efficiency_gen[t] * ho - inst.efficiency_pump[t] * hi)
        p = 0.0
        if mode.turbine:
            p += _piece_cost(inst.gen_cost_pieces[t], ho)
        if mode.pump:
            p += _piece_cost(inst.pump_cost_pieces[t], hi)
        energy += e
        water += w
        physical += p
        stage_costs[t] = e + w + p + inst.startup[t] * u[t] + inst.shutdown[t] * d[t]
    breakdown = CostBreakdown(
        energy_net=energy,
        startup=float(np.dot(inst.startup, u)),
        shutdown=float(np.dot(inst.shutdown, d)),
        physical=physical,
        water_value=water,
    )
    return Schedule(modes, h_out, h_in, levels, u, d, stage_costs, breakdown)


def evaluate_schedule_cost(s, inst, strict=False):
    """ Recompute the total cost of a schedule from scratch. """
    return make_schedule(inst, s.modes, s.h_out, s.h_in, s.levels, strict).breakdown.total


def offline_schedule(inst):
    T = inst.horizon
    levels = [inst.initial_level]
    for t in range(1, T + 1):
        levels.append(levels[-1] + inst.inflow[t - 1] - inst.spillage[t - 1])
    return make_schedule(inst, (Mode.O,) * T, np.zeros(T), np.zeros(T), levels)
