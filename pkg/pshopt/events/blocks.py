"""
Within-event operating models.

`add_block_lp` writes one event block (generating, pumping, hydraulic
short circuit or offline) into a LinearProgram. Boundary values are
`Ref`s: constants or variables of the surrounding model. With `scale`
set to a flow variable index the block is written in perspective form:
every bound, constant and piece intercept is multiplied by that
variable. The same writer serves single-block solves, the network LP,
the branch-and-bound relaxation and the skeleton LP.
"""

import enum
import logging

import attr
import numpy as np

from pshopt.errors import BoundaryContract, ModeDisabled, NumericalFailure
from pshopt.events.state import offline_trajectory
from pshopt.lp import LinearProgram, Sense, Status, solve_lp
from pshopt.modes import Mode
from pshopt.settings import FEAS_TOL

logger = logging.getLogger(__name__)


class RampRule(enum.Enum):
    #: last output equals the successor ramping boundary
    PIN = 'pin'
    #: last output at most the ramp limit (shut-down from generation)
    CAP = 'cap'
    #: no condition on the last output
    FREE = 'free'


def ramp_end_rule(mode, successor, inst, strict=False):
    """
    How a block of `mode` ends when followed by `successor` (None: an
    unspecified turbine successor, i.e. the boundary is pinned).
    """
    if not mode.turbine:
        return RampRule.FREE
    if successor is None or successor.turbine:
        return RampRule.PIN
    if successor is Mode.END:
        if not inst.terminal_offline:
            return RampRule.FREE
        return RampRule.PIN if strict else RampRule.CAP
    return RampRule.PIN if strict else RampRule.CAP


@attr.s(frozen=True)
class Ref():
    """ A boundary value: constant `value` or variable `index`. """

    value = attr.ib(default=0.0)
    index = attr.ib(default=None)

    @classmethod
    def fixed(cls, value):
        return cls(value=float(value))

    @classmethod
    def var(cls, index):
        return cls(index=index)


@attr.s
class BlockVars():
    """ Variable indices of one written block. """

    mode = attr.ib(type=Mode)
    start = attr.ib(type=int)
    end = attr.ib(type=int)
    scale = attr.ib(default=None)
    #: per-stage generation output (empty unless turbine)
    h_out = attr.ib(factory=list)
    #: per-stage pumping power (empty unless pump)
    h_in = attr.ib(factory=list)
    #: reservoir levels start..end (empty for offline blocks)
    levels = attr.ib(factory=list)
    #: per-stage epigraph cost
    phi = attr.ib(factory=list)
    #: free terminal level created by the block (None if the caller owns it)
    level_end = attr.ib(default=None)


def _row(lp, parts, sense, constant=0.0, scale=None, name=None):
    """ sum(coef * item) <sense> constant, constants scaled by `scale`. """
    terms = {}
    rhs = 0.0
    for coef, item in parts:
        if isinstance(item, Ref):
            if item.index is None:
                if scale is None:
                    rhs -= coef * item.value
                else:
                    terms[scale] = terms.get(scale, 0.0) + coef * item.value
                continue
            item = item.index
        terms[item] = terms.get(item, 0.0) + coef
    if scale is None:
        rhs += constant
    else:
        terms[scale] = terms.get(scale, 0.0) - constant
    return lp.add_constraint(terms, sense, rhs, name)


def _bounded(lp, name, lower, upper, scale, cost=0.0):
    """ Variable in [lower, upper], or in [lower*pi, upper*pi] when scaled. """
    if scale is None:
        return lp.add_variable(name, lower, upper, cost)
    k = lp.add_variable(name, 0.0, np.inf, cost)
    if lower > 0:
        lp.add_constraint({k: 1.0, scale: -lower}, Sense.GE, 0.0)
    lp.add_constraint({k: 1.0, scale: -upper}, Sense.LE, 0.0)
    return k


def add_block_lp(lp, inst, mode, start, end, level_start, ramp_start=None,
                 level_end=None, ramp_end=None, rule=RampRule.PIN, scale=None, tag='b'):
    """
    Write the block of `mode` covering stages start..end-1.

    level_end None creates a free terminal level in [0, capacity].
    ramp_end is used only with RampRule.PIN.
    """
    V = inst.ramp_limit
    nu = inst.water_value
    blk = BlockVars(mode, start, end, scale)
    if ramp_start is None:
        ramp_start = Ref.fixed(0.0)
    if level_end is None:
        blk.level_end = _bounded(lp, f"{tag}_Mend", 0.0, inst.capacity, scale)
        level_end = Ref.var(blk.level_end)

    if mode is Mode.O:
        drift = 0.0
        for i in range(start, end - 1):
            drift += inst.inflow[i - 1] - inst.spillage[i - 1]
            _row(lp, [(1.0, level_start)], Sense.GE, -drift, scale)
            _row(lp, [(1.0, level_start)], Sense.LE, inst.capacity - drift, scale)
        _row(lp, [(1.0, level_end), (-1.0, level_start)], Sense.EQ, inst.drift(start, end), scale,
             f"{tag}_drift")
        return blk

    levels = [level_start]
    for i in range(start + 1, end):
        k = _bounded(lp, f"{tag}_M{i}", 0.0, inst.capacity, scale)
        blk.levels.append(k)
        levels.append(Ref.var(k))
    levels.append(level_end)
    previous = ramp_start
    for i in range(start, end):
        s = i - 1
        ho = hi = cg = cp = None
        if mode.turbine:
            lo, up = inst.gen_bounds[s]
            ho = _bounded(lp, f"{tag}_HO{i}", lo, up, scale)
            blk.h_out.append(ho)
            _row(lp, [(1.0, ho), (-1.0, previous)], Sense.LE, V, scale, f"{tag}_up{i}")
            _row(lp, [(1.0, previous), (-1.0, ho)], Sense.LE, V, scale, f"{tag}_down{i}")
            previous = Ref.var(ho)
            cg = lp.add_variable(f"{tag}_cg{i}", -np.inf, np.inf)
            for a, b in inst.gen_cost_pieces[s]:
                _row(lp, [(1.0, cg), (-a, ho)], Sense.GE, b, scale)
        if mode.pump:
            lo, up = inst.pump_bounds[s]
            hi = _bounded(lp, f"{tag}_HI{i}", lo, up, scale)
            blk.h_in.append(hi)
            cp = lp.add_variable(f"{tag}_cp{i}", -np.inf, np.inf)
            for a, b in inst.pump_cost_pieces[s]:
                _row(lp, [(1.0, cp), (-a, hi)], Sense.GE, b, scale)
        balance = [(1.0, levels[i - start + 1]), (-1.0, levels[i - start])]
        epigraph = []
        if ho is not None:
            balance.append((inst.efficiency_gen[s], ho))
            epigraph += [(-1.0, cg), (-(nu * inst.efficiency_gen[s] - inst.prices[s]), ho)]
        if hi is not None:
            balance.append((-inst.efficiency_pump[s], hi))
            epigraph += [(-1.0, cp), (-(inst.prices[s] - nu * inst.efficiency_pump[s]), hi)]
        _row(lp, balance, Sense.EQ, inst.inflow[s] - inst.spillage[s], scale, f"{tag}_bal{i}")
        phi = lp.add_variable(f"{tag}_phi{i}", -np.inf, np.inf, cost=1.0)
        blk.phi.append(phi)
        _row(lp, [(1.0, phi)] + epigraph, Sense.GE, 0.0, None)

    if mode.turbine:
        last = Ref.var(blk.h_out[-1])
        if rule is RampRule.PIN:
            _row(lp, [(1.0, last), (-1.0, ramp_end if ramp_end is not None else Ref.fixed(0.0))],
                 Sense.EQ, 0.0, scale, f"{tag}_pin")
        elif rule is RampRule.CAP:
            _row(lp, [(1.0, last)], Sense.LE, V, scale, f"{tag}_cap")
    return blk


@attr.s(frozen=True)
class BlockBoundary():

    #: first stage t
    start = attr.ib(type=int)
    #: first stage after the block j (block covers t..j-1)
    end = attr.ib(type=int)
    mode = attr.ib(type=Mode)
    #: reservoir level M_t
    level_start = attr.ib(type=float)
    #: ramping boundary H_t
    ramp_start = attr.ib(type=float, default=0.0)
    #: reservoir level M_j (None: free)
    level_end = attr.ib(default=None)
    #: ramping boundary H_j
    ramp_end = attr.ib(default=0.0)
    #: mode entered at j (None: pin the ramping boundary)
    successor = attr.ib(default=None)


@attr.s(frozen=True)
class BlockResult():

    feasible = attr.ib(type=bool)
    #: optimal block cost (sum of the epigraph variables)
    cost = attr.ib(default=None)
    #: per-stage trajectory
    h_out = attr.ib(default=None)
    h_in = attr.ib(default=None)
    #: levels M_t..M_j
    levels = attr.ib(default=None)
    phi = attr.ib(default=None)


INFEASIBLE = BlockResult(False)


def read_block(blk, x, flow=None):
    """
    Trajectory of a written block from solution x; perspective blocks
    are unscaled by their flow value.
    """
    n = blk.end - blk.start
    divisor = 1.0 if flow is None else flow
    h_out = np.array([x[k] for k in blk.h_out]) / divisor if blk.h_out else np.zeros(n)
    h_in = np.array([x[k] for k in blk.h_in]) / divisor if blk.h_in else np.zeros(n)
    phi = np.array([x[k] for k in blk.phi]) / divisor if blk.phi else np.zeros(n)
    return h_out, h_in, phi


def levels_from_flows(inst, start, level_start, h_out, h_in):
    levels = [level_start]
    for k, i in enumerate(range(start, start + len(h_out))):
        s = i - 1
        levels.append(levels[-1] - inst.efficiency_gen[s] * h_out[k] + inst.efficiency_pump[s] * h_in[k]
                      + inst.inflow[s] - inst.spillage[s])
    return np.array(levels)


def solve_offline_block(b, inst):
    levels = offline_trajectory(inst, b.start, b.end, b.level_start)
    if levels is None:
        return INFEASIBLE
    if b.level_end is not None and abs(levels[-1] - b.level_end) > FEAS_TOL:
        return INFEASIBLE
    n = b.end - b.start
    return BlockResult(True, 0.0, np.zeros(n), np.zeros(n), np.array(levels), np.zeros(n))


def solve_block_lp(inst, mode, start, end, level_start, ramp_start=0.0, level_end=None,
                   ramp_end=None, rule=RampRule.PIN, lp_backend=None, level_window=None):
    """
    Exact single-block LP with constant boundary values. A free
    terminal level (level_end None) may be confined to level_window.
    """
    lp = LinearProgram(f"{mode.name} block {start}-{end}")
    if rule is RampRule.PIN and ramp_end is None:
        rule = RampRule.FREE
    blk = add_block_lp(lp, inst, mode, start, end, Ref.fixed(level_start), Ref.fixed(ramp_start),
                       None if level_end is None else Ref.fixed(level_end),
                       None if ramp_end is None else Ref.fixed(ramp_end), rule)
    if level_window is not None and blk.level_end is not None:
        lower, upper = max(0.0, level_window[0]), min(inst.capacity, level_window[1])
        if lower > upper:
            return INFEASIBLE
        lp.set_bounds(blk.level_end, lower, upper)
    sol = solve_lp(lp, backend=lp_backend)
    if sol.status is Status.INFEASIBLE:
        return INFEASIBLE
    if sol.status is not Status.OPTIMAL:
        raise NumericalFailure(f"{lp.name} is {sol.status.value}")
    h_out, h_in, phi = read_block(blk, sol.x)
    levels = levels_from_flows(inst, start, level_start, h_out, h_in)
    return BlockResult(True, float(np.sum(phi)), h_out, h_in, levels, phi)


def _solve(b, inst, strict, lp_backend):
    rule = ramp_end_rule(b.mode, b.successor, inst, strict)
    return solve_block_lp(inst, b.mode, b.start, b.end, b.level_start, b.ramp_start,
                          b.level_end, b.ramp_end, rule, lp_backend)


def solve_generating_block(b, inst, strict=False, lp_backend=None):
    return _solve(b, inst, strict, lp_backend)


def solve_pumping_block(b, inst, strict=False, lp_backend=None):
    if b.ramp_end not in (None, 0.0):
        raise BoundaryContract(b.mode.name, b.ramp_end)
    return _solve(b, inst, strict, lp_backend)


def solve_hsc_block(b, inst, strict=False, lp_backend=None):
    if not inst.hsc_enabled:
        raise ModeDisabled(Mode.SC.name)
    return _solve(b, inst, strict, lp_backend)


def solve_block(b, inst, strict=False, lp_backend=None):
    """ Dispatch on the block mode. """
    if b.mode is Mode.O:
        if b.ramp_end not in (None, 0.0):
            raise BoundaryContract(b.mode.name, b.ramp_end)
        return solve_offline_block(b, inst)
    if b.mode is Mode.P:
        return solve_pumping_block(b, inst, strict, lp_backend)
    if b.mode is Mode.SC:
        return solve_hsc_block(b, inst, strict, lp_backend)
    return solve_generating_block(b, inst, strict, lp_backend)
